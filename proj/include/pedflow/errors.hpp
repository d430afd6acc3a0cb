#pragma once

#include <stdexcept>
#include <string>

namespace pedflow {

/// Base for every domain error raised by the library. CLI maps these to exit 1.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Environment failure (unreadable input, unwritable output). CLI exit 2.
class IoError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(std::size_t line, const std::string& what)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class DuplicateObservationError : public Error {
public:
    using Error::Error;
};

class CadenceError : public Error {
public:
    using Error::Error;
};

class GapError : public Error {
public:
    using Error::Error;
};

class WindowError : public Error {
public:
    using Error::Error;
};

class InsufficientObservationsError : public Error {
public:
    using Error::Error;
};

class UndefinedMetricError : public Error {
public:
    using Error::Error;
};

class IncomparableReportsError : public Error {
public:
    using Error::Error;
};

class ConfigError : public Error {
public:
    ConfigError(std::string key, const std::string& what)
        : Error(key + ": " + what), key_(std::move(key)) {}
    const std::string& key() const noexcept { return key_; }

private:
    std::string key_;
};

}  // namespace pedflow
