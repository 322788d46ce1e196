#include "stlrl/system/external_model.hpp"

#include <poll.h>
#include <signal.h>
#include <spawn.h>
#include <sys/socket.h>
#include <sys/wait.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstring>
#include <thread>

#include <nlohmann/json.hpp>

extern char** environ;

namespace stlrl {

ProtocolError::ProtocolError(const std::string& what, std::string offending_line)
    : ModelError(what), line_(std::move(offending_line)) {}

namespace {

using Clock = std::chrono::steady_clock;

std::string errno_text() { return std::strerror(errno); }

std::string describe_status(int status) {
  if (WIFEXITED(status)) return "exited with status " + std::to_string(WEXITSTATUS(status));
  if (WIFSIGNALED(status)) return "was killed by signal " + std::to_string(WTERMSIG(status));
  return "stopped";
}

std::string shorten(const std::string& s) {
  return s.size() > 200 ? s.substr(0, 200) + "..." : s;
}

}  // namespace

ExternalModel::ExternalModel(ExternalModelOptions options) : options_(std::move(options)) {
  if (options_.command.empty()) throw std::invalid_argument("external model needs a command");
  if (options_.bounds.size() != options_.inputs.size()) {
    throw std::invalid_argument("external model needs one bound per input channel");
  }
  if (!(options_.dt > 0.0)) throw std::invalid_argument("external model step must be positive");

  int sv[2];
  if (::socketpair(AF_UNIX, SOCK_STREAM | SOCK_CLOEXEC, 0, sv) != 0) {
    throw ModelError("socketpair failed: " + errno_text());
  }
  posix_spawn_file_actions_t actions;
  posix_spawn_file_actions_init(&actions);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDIN_FILENO);
  posix_spawn_file_actions_adddup2(&actions, sv[1], STDOUT_FILENO);
  // Own process group so a shell wrapper and its children die together.
  posix_spawnattr_t attr;
  posix_spawnattr_init(&attr);
  posix_spawnattr_setflags(&attr, POSIX_SPAWN_SETPGROUP);
  posix_spawnattr_setpgroup(&attr, 0);
  const char* argv[] = {"sh", "-c", options_.command.c_str(), nullptr};
  int rc = ::posix_spawn(&pid_, "/bin/sh", &actions, &attr, const_cast<char**>(argv), environ);
  posix_spawn_file_actions_destroy(&actions);
  posix_spawnattr_destroy(&attr);
  ::close(sv[1]);
  if (rc != 0) {
    ::close(sv[0]);
    pid_ = -1;
    throw ModelError("cannot start '" + options_.command + "': " + std::strerror(rc));
  }
  fd_ = sv[0];

  nlohmann::json init = {{"cmd", "init"},
                         {"dt", options_.dt},
                         {"schema_in", options_.inputs.names()},
                         {"schema_out", options_.outputs.names()}};
  try {
    request(init.dump(), "init");
  } catch (...) {
    shutdown(false);
    throw;
  }
}

ExternalModel::~ExternalModel() { shutdown(!broken_); }

std::vector<double> ExternalModel::reset() { return request(R"({"cmd":"reset"})", "reset"); }

std::vector<double> ExternalModel::step(std::span<const double> u, double dt) {
  if (u.size() != options_.inputs.size()) {
    throw ModelError("external model expects " + std::to_string(options_.inputs.size()) +
                     " inputs, got " + std::to_string(u.size()));
  }
  if (std::abs(dt - options_.dt) > 1e-9 * std::max(1.0, options_.dt)) {
    throw ModelError("external model was initialised with dt=" + std::to_string(options_.dt) +
                     ", step asked for dt=" + std::to_string(dt));
  }
  nlohmann::json msg = {{"cmd", "step"}, {"u", std::vector<double>(u.begin(), u.end())}};
  return request(msg.dump(), "step");
}

std::vector<double> ExternalModel::request(const std::string& line, const char* cmd) {
  if (!usable()) throw ModelError("external simulator is no longer usable");
  send_line(line);
  std::string reply = read_line(cmd);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(reply);
  } catch (const nlohmann::json::parse_error&) {
    broken_ = true;
    throw ProtocolError("malformed reply to '" + std::string(cmd) + "': " + shorten(reply), reply);
  }
  if (!j.is_object() || !j.contains("ok") || !j["ok"].is_boolean()) {
    broken_ = true;
    throw ProtocolError("reply to '" + std::string(cmd) + "' lacks a boolean 'ok': " +
                            shorten(reply),
                        reply);
  }
  if (!j["ok"].get<bool>()) {
    broken_ = true;
    std::string why = j.contains("error") && j["error"].is_string() ? j["error"].get<std::string>()
                                                                    : std::string("no detail");
    throw ModelError("simulator rejected '" + std::string(cmd) + "': " + why);
  }
  const auto& state = j.contains("state") ? j["state"] : nlohmann::json();
  if (!state.is_array() || state.size() != options_.outputs.size()) {
    broken_ = true;
    throw ProtocolError("reply to '" + std::string(cmd) + "' needs a 'state' array of " +
                            std::to_string(options_.outputs.size()) + " numbers: " + shorten(reply),
                        reply);
  }
  std::vector<double> out;
  out.reserve(state.size());
  for (const auto& v : state) {
    if (!v.is_number()) {
      broken_ = true;
      throw ProtocolError("non-numeric state entry in reply to '" + std::string(cmd) +
                              "': " + shorten(reply),
                          reply);
    }
    out.push_back(v.get<double>());
  }
  return out;
}

void ExternalModel::send_line(const std::string& line) {
  std::string data = line + '\n';
  std::size_t sent = 0;
  while (sent < data.size()) {
    ssize_t n = ::send(fd_, data.data() + sent, data.size() - sent, MSG_NOSIGNAL);
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      if (errno == EPIPE || errno == ECONNRESET) fail_child_exit("send");
      throw ModelError("writing to simulator failed: " + errno_text());
    }
    sent += static_cast<std::size_t>(n);
  }
}

std::string ExternalModel::read_line(const char* cmd) {
  const auto deadline = Clock::now() + options_.timeout;
  for (;;) {
    if (auto nl = buffer_.find('\n'); nl != std::string::npos) {
      std::string line = buffer_.substr(0, nl);
      buffer_.erase(0, nl + 1);
      if (!line.empty() && line.back() == '\r') line.pop_back();
      if (line.find_first_not_of(" \t") == std::string::npos) continue;
      return line;
    }
    auto left = std::chrono::duration_cast<std::chrono::milliseconds>(deadline - Clock::now());
    if (left.count() <= 0) {
      broken_ = true;
      shutdown(false);
      throw ModelError("simulator timed out after " + std::to_string(options_.timeout.count()) +
                       " ms waiting for the reply to '" + cmd + "'");
    }
    pollfd p{fd_, POLLIN, 0};
    int rc = ::poll(&p, 1, static_cast<int>(std::min<long long>(left.count(), 1 << 30)));
    if (rc < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      throw ModelError("poll failed: " + errno_text());
    }
    if (rc == 0) continue;
    char chunk[4096];
    ssize_t n = ::recv(fd_, chunk, sizeof chunk, 0);
    if (n < 0) {
      if (errno == EINTR) continue;
      broken_ = true;
      if (errno == ECONNRESET) fail_child_exit(cmd);
      throw ModelError("reading from simulator failed: " + errno_text());
    }
    if (n == 0) {
      broken_ = true;
      fail_child_exit(cmd);
    }
    buffer_.append(chunk, static_cast<std::size_t>(n));
  }
}

void ExternalModel::fail_child_exit(const char* cmd) {
  std::string status = "closed its output";
  if (pid_ > 0) {
    int st = 0;
    // Give the child a moment to be reaped after closing the pipe.
    for (int i = 0; i < 100; ++i) {
      pid_t r = ::waitpid(pid_, &st, WNOHANG);
      if (r == pid_) {
        status = describe_status(st);
        pid_ = -1;
        break;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
  }
  shutdown(false);
  throw ModelError("simulator " + status + " during '" + cmd + "'");
}

void ExternalModel::shutdown(bool graceful) {
  if (fd_ >= 0) {
    if (graceful) {
      std::string end = "{\"cmd\":\"end\"}\n";
      (void)::send(fd_, end.data(), end.size(), MSG_NOSIGNAL);
    }
    ::close(fd_);
    fd_ = -1;
  }
  if (pid_ > 0) {
    int st = 0;
    const int polls = graceful ? 200 : 0;
    for (int i = 0; i < polls; ++i) {
      if (::waitpid(pid_, &st, WNOHANG) == pid_) {
        pid_ = -1;
        return;
      }
      std::this_thread::sleep_for(std::chrono::milliseconds(5));
    }
    ::kill(-pid_, SIGKILL);
    ::waitpid(pid_, &st, 0);
    pid_ = -1;
  }
}

std::unique_ptr<SystemModel> external_model_connect(const std::string& command,
                                                    SignalSchema inputs,
                                                    std::vector<InputBound> bounds,
                                                    SignalSchema outputs, double dt,
                                                    std::chrono::milliseconds timeout) {
  ExternalModelOptions opts{command, std::move(inputs), std::move(bounds), std::move(outputs), dt,
                            timeout};
  return std::make_unique<ExternalModel>(std::move(opts));
}

}  // namespace stlrl
