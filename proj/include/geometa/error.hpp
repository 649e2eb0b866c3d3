#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace geometa {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Point has the wrong dimension for the space it is used with.
class InvalidPointError : public Error {
public:
    using Error::Error;
};

/// Argument outside the domain of an operation (point outside space, t outside [0,1], ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// Numeric parameter out of its admissible range (lambda, mu, epsilon, ...).
class ParameterError : public Error {
public:
    using Error::Error;
};

class PreconditionError : public Error {
public:
    using Error::Error;
};

/// Operation not available for the given map or space kind.
class KindError : public Error {
public:
    using Error::Error;
};

class InsufficientDataError : public Error {
public:
    InsufficientDataError(std::size_t available, std::size_t required)
        : Error("sequence of length " + std::to_string(available) +
                " is too short: required length " + std::to_string(required)),
          available_(available), required_(required) {}

    std::size_t available() const noexcept { return available_; }
    std::size_t required() const noexcept { return required_; }

private:
    std::size_t available_;
    std::size_t required_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& message, std::size_t line, std::size_t column, const std::string& origin = "")
        : Error((origin.empty() ? "" : origin + ":") + std::to_string(line) + ":" + std::to_string(column) + ": " +
                message),
          message_(message), line_(line), column_(column) {}

    const std::string& message() const noexcept { return message_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::string message_;
    std::size_t line_;
    std::size_t column_;
};

/// Evaluation failed: unbound variable or unknown symbol.
class EvaluationError : public Error {
public:
    using Error::Error;
};

/// Invalid experiment configuration; the message starts with the offending field path.
class ConfigError : public Error {
public:
    ConfigError(const std::string& path, const std::string& message)
        : Error(path + ": " + message), path_(path) {}

    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

}  // namespace geometa
