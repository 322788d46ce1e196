#pragma once

#include <chrono>
#include <memory>
#include <string>
#include <sys/types.h>

#include "stlrl/system/system_model.hpp"

namespace stlrl {

/// The child broke the newline-delimited JSON protocol.
class ProtocolError : public ModelError {
 public:
  ProtocolError(const std::string& what, std::string offending_line);
  const std::string& offending_line() const { return line_; }

 private:
  std::string line_;
};

struct ExternalModelOptions {
  std::string command;  // run with /bin/sh -c
  SignalSchema inputs;
  std::vector<InputBound> bounds;
  SignalSchema outputs;
  double dt = 1.0;
  std::chrono::milliseconds timeout{30000};  // per message
};

/// A system under test living in a child process. Requests and replies are
/// single-line JSON objects on the child's stdin / stdout:
///
///   {"cmd":"init","dt":D,"schema_in":[...],"schema_out":[...]} -> {"ok":true,"state":[...]}
///   {"cmd":"reset"}                                              -> {"ok":true,"state":[...]}
///   {"cmd":"step","u":[...]}                                     -> {"ok":true,"state":[...]}
///   {"cmd":"end"}
///
/// Any protocol violation, child exit or timeout raises ModelError and
/// leaves the instance unusable. Not thread-safe.
class ExternalModel final : public SystemModel {
 public:
  explicit ExternalModel(ExternalModelOptions options);
  ~ExternalModel() override;

  ExternalModel(const ExternalModel&) = delete;
  ExternalModel& operator=(const ExternalModel&) = delete;

  const SignalSchema& input_schema() const override { return options_.inputs; }
  const SignalSchema& output_schema() const override { return options_.outputs; }
  const std::vector<InputBound>& input_bounds() const override { return options_.bounds; }

  std::vector<double> reset() override;
  std::vector<double> step(std::span<const double> u, double dt) override;

  pid_t pid() const { return pid_; }
  bool usable() const { return fd_ >= 0 && !broken_; }

 private:
  std::vector<double> request(const std::string& line, const char* cmd);
  void send_line(const std::string& line);
  std::string read_line(const char* cmd);
  [[noreturn]] void fail_child_exit(const char* cmd);
  void shutdown(bool graceful);

  ExternalModelOptions options_;
  pid_t pid_ = -1;
  int fd_ = -1;
  bool broken_ = false;
  std::string buffer_;
};

/// Spawns `command` and performs the init handshake.
std::unique_ptr<SystemModel> external_model_connect(const std::string& command,
                                                    SignalSchema inputs,
                                                    std::vector<InputBound> bounds,
                                                    SignalSchema outputs, double dt,
                                                    std::chrono::milliseconds timeout =
                                                        std::chrono::milliseconds{30000});

}  // namespace stlrl
