// Echo simulator speaking the external-model protocol: the output state is
// the last input. Fault flags make it misbehave after a number of replies.
#include <chrono>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

int main(int argc, char** argv) {
  CLI::App app{"Echo simulator for the external-model protocol"};
  long malformed_after = -1, exit_after = -1, hang_after = -1, error_after = -1;
  app.add_option("--malformed-after", malformed_after, "Reply garbage after N good replies");
  app.add_option("--exit-after", exit_after, "Exit after N good replies");
  app.add_option("--hang-after", hang_after, "Stop replying after N good replies");
  app.add_option("--error-after", error_after, "Reply ok=false after N good replies");
  CLI11_PARSE(app, argc, argv);

  std::size_t width = 0;
  std::vector<double> state;
  long replies = 0;
  std::string line;
  while (std::getline(std::cin, line)) {
    if (replies == exit_after) return 3;
    if (replies == hang_after) {
      for (;;) std::this_thread::sleep_for(std::chrono::seconds(1));
    }
    if (replies == malformed_after) {
      std::cout << "this is not json" << std::endl;
      ++replies;
      continue;
    }
    nlohmann::json reply;
    try {
      auto msg = nlohmann::json::parse(line);
      const std::string cmd = msg.at("cmd");
      if (cmd == "end") return 0;
      if (replies == error_after) {
        reply = {{"ok", false}, {"error", "injected failure"}};
      } else if (cmd == "init") {
        width = msg.at("schema_out").size();
        state.assign(width, 0.0);
        reply = {{"ok", true}, {"state", state}};
      } else if (cmd == "reset") {
        state.assign(width, 0.0);
        reply = {{"ok", true}, {"state", state}};
      } else if (cmd == "step") {
        auto u = msg.at("u").get<std::vector<double>>();
        if (u.size() != width) {
          reply = {{"ok", false}, {"error", "input width does not match output width"}};
        } else {
          state = u;
          reply = {{"ok", true}, {"state", state}};
        }
      } else {
        reply = {{"ok", false}, {"error", "unknown command " + cmd}};
      }
    } catch (const std::exception& e) {
      reply = {{"ok", false}, {"error", e.what()}};
    }
    std::cout << reply.dump() << std::endl;
    ++replies;
  }
  return 0;
}
