#pragma once
#include <stdexcept>
#include <string>

namespace cmc4 {

enum class Errc {
  NotDivisible,
  RegistryMismatch,
  ZeroPolynomial,
  IoError,
  SyntaxError,
  DuplicateId,
  UnknownVariable,
  MissingRule,
  VariableAbsent,
  NotLinear,
  Inconsistent,
  NotSymmetric,
  CapExceeded,
};

class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
  Errc code() const { return code_; }

private:
  Errc code_;
};

// Syntax error with source location (1-based line and column).
class ParseError : public Error {
public:
  ParseError(const std::string& msg, int line, int col)
      : Error(Errc::SyntaxError,
              msg + " at line " + std::to_string(line) + ", col " + std::to_string(col)),
        line_(line), col_(col) {}
  int line() const { return line_; }
  int col() const { return col_; }

private:
  int line_, col_;
};

}  // namespace cmc4
