#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace csr {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t position)
      : Error(message + " at position " + std::to_string(position)), position_(position) {}
  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

/// Evaluation left the domain of a subexpression (log of a non-positive
/// number, division by zero, ...).
class DomainError : public Error {
 public:
  DomainError(const std::string& message, std::string subexpression)
      : Error(message + ": " + subexpression), subexpression_(std::move(subexpression)) {}
  const std::string& subexpression() const { return subexpression_; }

 private:
  std::string subexpression_;
};

class ArityError : public Error {
 public:
  using Error::Error;
};

class ParityError : public Error {
 public:
  using Error::Error;
};

class UnorientableGenerator : public Error {
 public:
  UnorientableGenerator(const std::string& message, std::vector<std::size_t> indices)
      : Error(message), indices_(std::move(indices)) {}
  const std::vector<std::size_t>& indices() const { return indices_; }

 private:
  std::vector<std::size_t> indices_;
};

class IllFormedMorphism : public Error {
 public:
  using Error::Error;
};

/// A session command that cannot be run: unknown command, malformed
/// arguments or an undefined name. Carries the 1-based script line.
class ScriptError : public Error {
 public:
  ScriptError(const std::string& message, int line)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + message : message), line_(line) {}
  int line() const { return line_; }

 private:
  int line_;
};

}  // namespace csr
