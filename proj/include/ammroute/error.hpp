#pragma once

#include <stdexcept>
#include <string>

namespace ammroute {

/// Process exit codes used by the command-line tool.
enum class ExitCode : int {
    kSuccess = 0,
    kConfig = 2,
    kNoRoute = 3,
    kData = 4,
};

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::kData; }
};

/// Bad user configuration: unknown token, missing price, invalid policy.
class ConfigError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kConfig; }
};

/// Precondition on graph inputs violated (e.g. aggregator token embedding).
class ValidationError : public ConfigError {
public:
    using ConfigError::ConfigError;
};

/// Malformed input data or I/O failure.
class DataError : public Error {
public:
    using Error::Error;
};

class ParseError : public DataError {
public:
    ParseError(std::size_t line, std::string field, const std::string& what)
        : DataError("line " + std::to_string(line) + ": field '" + field + "': " + what),
          line_(line),
          field_(std::move(field)) {}

    std::size_t line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    std::size_t line_;
    std::string field_;
};

/// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kConfig; }
};

/// A swap would drain a pool.
class InsolvencyError : public Error {
public:
    using Error::Error;
};

class NoRouteError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::kNoRoute; }
};

/// Internal invariant broken; indicates a bug rather than bad input.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

}  // namespace ammroute
