#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace pigeonsim {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Qubit count, branch count or register width beyond what the simulator supports.
class CapacityError : public Error {
  public:
    using Error::Error;
};

class IndexError : public Error {
  public:
    using Error::Error;
};

class InvalidInstructionError : public Error {
  public:
    using Error::Error;
};

class ShapeError : public Error {
  public:
    using Error::Error;
};

/// Raised when asked to condition on a branch whose probability is (numerically) zero.
class ImpossiblePostselectionError : public Error {
  public:
    using Error::Error;
};

class ArgumentError : public Error {
  public:
    using Error::Error;
};

/// A circuit's measured statistics contradict the model it was built for
/// (e.g. a parity bit that is not a deterministic function of the post-selected label).
class ModelViolationError : public Error {
  public:
    using Error::Error;
};

enum class QasmErrorKind { Lexical, UnsupportedGate, Syntax, Semantic };

inline const char *to_string(QasmErrorKind k) {
    switch (k) {
    case QasmErrorKind::Lexical: return "lexical error";
    case QasmErrorKind::UnsupportedGate: return "unsupported gate";
    case QasmErrorKind::Syntax: return "syntax error";
    case QasmErrorKind::Semantic: return "semantic error";
    }
    return "error";
}

/// Parse failure with a 1-based source position.
class QasmError : public Error {
  public:
    QasmError(QasmErrorKind kind, std::size_t line, std::size_t column, const std::string &what)
        : Error(std::string(to_string(kind)) + " at " + std::to_string(line) + ":" +
                std::to_string(column) + ": " + what),
          kind_(kind), line_(line), column_(column), detail_(what) {}

    QasmErrorKind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }
    const std::string &detail() const noexcept { return detail_; }

  private:
    QasmErrorKind kind_;
    std::size_t line_;
    std::size_t column_;
    std::string detail_;
};

} // namespace pigeonsim
