// Error types shared across the library.
#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace lifa {

// Base class for all library errors. `stage()` names the subsystem that
// raised the error so the CLI can report it and pick an exit code.
class Error : public std::runtime_error {
public:
    Error(std::string stage, const std::string& what)
        : std::runtime_error(what), stage_(std::move(stage)) {}

    const std::string& stage() const noexcept { return stage_; }

private:
    std::string stage_;
};

// Invalid or inconsistent configuration (bad parameter values, unknown keys).
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& what) : Error("config", what) {}
};

// Structural problems in a network spec (shape mismatch, bad topology).
class SpecError : public Error {
public:
    explicit SpecError(const std::string& what) : Error("network", what) {}
};

// Numerical integration failure; carries the offending element index
// (-1 when the operation is scalar and has no index).
class IntegrationError : public Error {
public:
    IntegrationError(const std::string& what, std::int64_t index = -1)
        : Error("dynamics", what + (index >= 0 ? " (index " + std::to_string(index) + ")" : "")),
          index_(index) {}

    std::int64_t index() const noexcept { return index_; }

private:
    std::int64_t index_;
};

// Precondition violation on an operation argument.
class ContractError : public Error {
public:
    explicit ContractError(const std::string& what) : Error("contract", what) {}
};

// File I/O and parse failures; carries the byte offset when known.
class IoError : public Error {
public:
    IoError(const std::string& what, std::int64_t byte_offset = -1)
        : Error("io", what + (byte_offset >= 0 ? " (byte offset " + std::to_string(byte_offset) + ")" : "")),
          byte_offset_(byte_offset) {}

    std::int64_t byte_offset() const noexcept { return byte_offset_; }

private:
    std::int64_t byte_offset_;
};

// Accuracy-oracle failure during a fault campaign; carries the trial index.
class OracleError : public Error {
public:
    OracleError(const std::string& what, int trial = -1)
        : Error("oracle", what + (trial >= 0 ? " (trial " + std::to_string(trial) + ")" : "")),
          trial_(trial) {}

    int trial() const noexcept { return trial_; }

private:
    int trial_;
};

} // namespace lifa
