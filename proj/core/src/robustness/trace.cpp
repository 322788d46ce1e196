#include "stlrl/robustness/trace.hpp"

#include <charconv>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "stlrl/stl/formula.hpp"

namespace stlrl {

Trace::Trace(SignalSchema schema) : schema_(std::move(schema)) {}

void Trace::push_back(double time, std::span<const double> state) {
  if (state.size() != width()) {
    throw std::invalid_argument("state has " + std::to_string(state.size()) +
                                " entries, schema has " + std::to_string(width()));
  }
  if (times_.empty() ? !(time >= 0.0) : !(time > times_.back())) {
    throw std::invalid_argument("trace timestamps must be non-negative and strictly increasing");
  }
  times_.push_back(time);
  values_.insert(values_.end(), state.begin(), state.end());
}

void Trace::pop_front(std::size_t count) {
  count = std::min(count, size());
  times_.erase(times_.begin(), times_.begin() + static_cast<std::ptrdiff_t>(count));
  values_.erase(values_.begin(), values_.begin() + static_cast<std::ptrdiff_t>(count * width()));
}

Trace Trace::slice(std::size_t begin, std::size_t end) const {
  Trace out(schema_);
  end = std::min(end, size());
  for (std::size_t i = begin; i < end; ++i) out.push_back(times_[i], state(i));
  return out;
}

bool operator==(const Trace& a, const Trace& b) {
  return a.schema_ == b.schema_ && a.times_ == b.times_ && a.values_ == b.values_;
}

namespace {

std::string exact(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw std::runtime_error("number formatting failed");
  return std::string(buf, end);
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    auto b = cell.find_first_not_of(" \t\r");
    auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

double parse_cell(const std::string& cell, std::size_t row) {
  if (cell == "inf") return kInfinity;
  if (cell == "-inf") return -kInfinity;
  double v = 0.0;
  auto [end, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
  if (ec != std::errc{} || end != cell.data() + cell.size()) {
    throw std::runtime_error("trace CSV row " + std::to_string(row) + ": bad number '" + cell +
                             "'");
  }
  return v;
}

}  // namespace

void write_trace_csv(std::ostream& out, const Trace& trace) {
  out << "time";
  for (const auto& s : trace.schema().signals()) out << ',' << s.name;
  out << '\n';
  for (std::size_t i = 0; i < trace.size(); ++i) {
    out << exact(trace.time(i));
    for (double v : trace.state(i)) out << ',' << exact(v);
    out << '\n';
  }
}

Trace read_trace_csv(std::istream& in, const SignalSchema& schema) {
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("trace CSV is empty");
  auto header = split_csv_line(line);
  if (header.empty() || header[0] != "time") {
    throw std::runtime_error("trace CSV header must start with 'time'");
  }
  std::vector<std::size_t> source(schema.size());
  for (std::size_t c = 0; c < schema.size(); ++c) {
    bool found = false;
    for (std::size_t h = 1; h < header.size(); ++h) {
      if (header[h] == schema[c].name) {
        source[c] = h;
        found = true;
        break;
      }
    }
    if (!found) throw std::runtime_error("trace CSV lacks column '" + schema[c].name + "'");
  }
  Trace trace(schema);
  std::vector<double> state(schema.size());
  std::size_t row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    auto cells = split_csv_line(line);
    if (cells.size() != header.size()) {
      throw std::runtime_error("trace CSV row " + std::to_string(row) + " has " +
                               std::to_string(cells.size()) + " cells, expected " +
                               std::to_string(header.size()));
    }
    for (std::size_t c = 0; c < schema.size(); ++c) state[c] = parse_cell(cells[source[c]], row);
    try {
      trace.push_back(parse_cell(cells[0], row), state);
    } catch (const std::invalid_argument& e) {
      throw std::runtime_error("trace CSV row " + std::to_string(row) + ": " + e.what());
    }
  }
  return trace;
}

Trace load_trace_csv(const std::string& path, const SignalSchema& schema) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open trace file '" + path + "'");
  return read_trace_csv(in, schema);
}

void write_robustness_csv(std::ostream& out, std::span<const double> times,
                          std::span<const double> rho) {
  out << "time,rho\n";
  for (std::size_t i = 0; i < times.size() && i < rho.size(); ++i) {
    out << exact(times[i]) << ',' << format_number(rho[i]) << '\n';
  }
}

}  // namespace stlrl
