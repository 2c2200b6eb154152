#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace eof {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidPoint : public Error { public: using Error::Error; };
class InvalidLevel : public Error { public: using Error::Error; };
class InvalidIndex : public Error { public: using Error::Error; };
class DimError : public Error { public: using Error::Error; };
class InvalidM : public Error { public: using Error::Error; };
class InvalidData : public Error { public: using Error::Error; };
class DegenerateData : public Error { public: using Error::Error; };

class ConvergenceError : public Error {
public:
    ConvergenceError(const std::string& what, double grad_norm)
        : Error(what), grad_norm_(grad_norm) {}

    [[nodiscard]] double grad_norm() const noexcept { return grad_norm_; }

private:
    double grad_norm_;
};

class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t row, std::size_t col)
        : Error(what + " (row " + std::to_string(row) + ", col " + std::to_string(col) + ")"),
          row_(row), col_(col) {}

    [[nodiscard]] std::size_t row() const noexcept { return row_; }
    [[nodiscard]] std::size_t col() const noexcept { return col_; }

private:
    std::size_t row_;
    std::size_t col_;
};

}  // namespace eof
