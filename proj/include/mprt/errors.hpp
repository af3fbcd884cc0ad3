#pragma once

#include <stdexcept>
#include <string>

namespace mprt {

// Rejected input: dimension mismatches, violated preconditions, malformed files.
class InputError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Text input that failed to parse; carries a 1-based position.
class ParseError : public InputError {
public:
    ParseError(const std::string& message, int line, int column)
        : InputError(format(message, line, column)), line_(line), column_(column) {}

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string format(const std::string& message, int line, int column) {
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message;
    }
    int line_;
    int column_;
};

// A numerical procedure that did not reach its tolerance.
class NumericalError : public std::runtime_error {
public:
    NumericalError(const std::string& message, double achieved)
        : std::runtime_error(message), achieved_(achieved) {}

    double achieved() const noexcept { return achieved_; }

private:
    double achieved_;
};

}  // namespace mprt
