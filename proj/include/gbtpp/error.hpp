#pragma once

#include <stdexcept>
#include <string>

namespace gbtpp {

// Base of every error raised by the library. Callers that only care about
// "did the pipeline fail" catch this; the subclasses narrow the cause.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line)
        : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
    [[nodiscard]] std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

class ValidationError : public Error {
public:
    using Error::Error;
};

class NumericalError : public Error {
public:
    using Error::Error;
};

}  // namespace gbtpp
