#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace entkit {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Mismatched or malformed subsystem structure.
class ShapeError : public Error {
 public:
  using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

class DimensionCapError : public Error {
 public:
  using Error::Error;
};

// Input that should be Hermitian but is not.
class SymmetryError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  using Error::Error;
};

// A value failed one or more type invariants; failed() names each one.
class InvariantError : public Error {
 public:
  explicit InvariantError(std::vector<std::string> failed)
      : Error(join(failed)), failed_(std::move(failed)) {}

  const std::vector<std::string>& failed() const { return failed_; }

 private:
  static std::string join(const std::vector<std::string>& items) {
    std::string out = "invariant violation:";
    for (const auto& s : items) out += " " + s + ";";
    return out;
  }

  std::vector<std::string> failed_;
};

}  // namespace entkit
