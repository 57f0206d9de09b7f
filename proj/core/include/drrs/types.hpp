#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace drrs {

// Alternative/distribution indices are 1-based everywhere they cross an
// interface (CLI, CSV, errors), matching the usual R&S conventions.
struct ScenarioId {
    int alternative = 1;
    int distribution = 1;

    friend bool operator==(const ScenarioId&, const ScenarioId&) = default;
};

class HorizonExceeded : public std::runtime_error {
  public:
    explicit HorizonExceeded(const std::string& what) : std::runtime_error(what) {}
};

class ConfigError : public std::invalid_argument {
  public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

}  // namespace drrs
