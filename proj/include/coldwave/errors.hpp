#pragma once

#include <stdexcept>
#include <string>

namespace coldwave {

// Error taxonomy shared by the library and the CLI. The exit code is what
// the CLI returns when the error escapes to main: 1 usage/configuration,
// 2 data/format, 3 numeric failure.
class Error : public std::runtime_error {
public:
    Error(std::string msg, int exit_code)
        : std::runtime_error(std::move(msg)), exit_code_(exit_code) {}
    int exit_code() const noexcept { return exit_code_; }

private:
    int exit_code_;
};

// Invalid parameters, out-of-range indices, bad configuration.
class ConfigError : public Error {
public:
    explicit ConfigError(std::string msg) : Error(std::move(msg), 1) {}
};

// Malformed files, shape mismatches, degenerate input data.
class DataError : public Error {
public:
    explicit DataError(std::string msg) : Error(std::move(msg), 2) {}
};

// Non-finite values, overflow in numeric code.
class NumericError : public Error {
public:
    explicit NumericError(std::string msg) : Error(std::move(msg), 3) {}
};

}  // namespace coldwave
