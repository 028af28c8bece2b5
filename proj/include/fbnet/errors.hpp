#pragma once

#include <stdexcept>
#include <string>

namespace fbnet {

// Error taxonomy mirrored by the CLI exit codes: config errors exit 2,
// data errors exit 3, stage failures exit 4.
struct ConfigError : std::runtime_error {
    explicit ConfigError(const std::string& msg) : std::runtime_error(msg) {}
};

struct DataError : std::runtime_error {
    explicit DataError(const std::string& msg) : std::runtime_error(msg) {}
};

struct StageError : std::runtime_error {
    StageError(const std::string& stage, const std::string& cause)
        : std::runtime_error("stage '" + stage + "' failed: " + cause), stage_name(stage) {}
    std::string stage_name;
};

}  // namespace fbnet
