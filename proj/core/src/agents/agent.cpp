#include "stlrl/agents/agent.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace stlrl {

nlohmann::json snapshot_header(std::string_view kind) {
  return {{"format", kSnapshotFormat}, {"version", kSnapshotVersion}, {"kind", std::string(kind)}};
}

void check_snapshot(const nlohmann::json& snapshot, std::string_view kind) {
  if (!snapshot.is_object() || snapshot.value("format", "") != kSnapshotFormat) {
    throw std::invalid_argument("not an agent snapshot");
  }
  if (snapshot.value("version", -1) != kSnapshotVersion) {
    throw std::invalid_argument("unsupported agent snapshot version " +
                                snapshot.value("version", nlohmann::json()).dump());
  }
  if (snapshot.value("kind", "") != kind) {
    throw std::invalid_argument("snapshot of agent kind '" + snapshot.value("kind", "") +
                                "' cannot be loaded into '" + std::string(kind) + "'");
  }
}

std::string save_rng(const std::mt19937_64& rng) {
  std::ostringstream out;
  out << rng;
  return out.str();
}

void load_rng(std::mt19937_64& rng, const std::string& text) {
  std::istringstream in(text);
  in >> rng;
  if (!in) throw std::invalid_argument("corrupt generator state in snapshot");
}

nlohmann::json number_to_json(double x) {
  if (x == std::numeric_limits<double>::infinity()) return "inf";
  if (x == -std::numeric_limits<double>::infinity()) return "-inf";
  return x;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    const auto& s = j.get_ref<const std::string&>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw std::invalid_argument("expected a number, got \"" + s + "\"");
  }
  return j.get<double>();
}

RandomAgent::RandomAgent(std::vector<InputBound> bounds, std::uint64_t seed)
    : bounds_(std::move(bounds)), rng_(seed) {}

std::vector<double> RandomAgent::step(std::span<const double>, double) {
  std::vector<double> u(bounds_.size());
  for (std::size_t c = 0; c < bounds_.size(); ++c) {
    std::uniform_real_distribution<double> d(bounds_[c].lo, bounds_[c].hi);
    u[c] = bounds_[c].clamp(d(rng_));
  }
  return u;
}

void RandomAgent::reset(std::span<const double>, double) {}

nlohmann::json RandomAgent::save() const {
  auto j = snapshot_header(kind());
  nlohmann::json b = nlohmann::json::array();
  for (const auto& x : bounds_) b.push_back({x.lo, x.hi});
  j["bounds"] = b;
  j["rng"] = save_rng(rng_);
  return j;
}

void RandomAgent::load(const nlohmann::json& snapshot) {
  check_snapshot(snapshot, kind());
  std::vector<InputBound> bounds;
  for (const auto& b : snapshot.at("bounds")) bounds.push_back({b.at(0), b.at(1)});
  bounds_ = std::move(bounds);
  load_rng(rng_, snapshot.at("rng").get<std::string>());
}

}  // namespace stlrl
