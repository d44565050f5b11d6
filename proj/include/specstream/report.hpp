#pragma once

// Machine-readable run reports. The "result" payload is a pure function of
// command + seed and reproduces bit-identically; wall-clock timing sits
// outside it.

#include <chrono>
#include <string>

#include "json.hpp"

namespace specstream {

class Stopwatch {
  public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double ms() const {
        auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

inline nlohmann::json make_report(const std::string& command, const nlohmann::json& config,
                                  std::uint64_t seed, const nlohmann::json& result,
                                  double wall_ms) {
    nlohmann::json j;
    j["command"] = command;
    j["config"] = config;
    j["seed"] = seed;
    j["result"] = result;
    j["timing"] = {{"wall_time_ms", wall_ms}};
    return j;
}

}  // namespace specstream
