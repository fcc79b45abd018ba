#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace posetest {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// The generating pairs force x < x for some element.
class CycleError : public Error {
 public:
  explicit CycleError(std::size_t element)
      : Error("relation contains a cycle through element " + std::to_string(element)),
        element_(element) {}
  std::size_t element() const noexcept { return element_; }

 private:
  std::size_t element_;
};

class IndexError : public Error {
 public:
  IndexError(std::size_t index, std::size_t size)
      : Error("element index " + std::to_string(index) + " out of range for size " +
              std::to_string(size)) {}
};

/// Removing edges left x < y < z related but x, z unrelated.
class TransitivityError : public Error {
 public:
  TransitivityError(std::size_t x, std::size_t y, std::size_t z)
      : Error("relation is not transitive: " + std::to_string(x) + " < " + std::to_string(y) +
              " < " + std::to_string(z) + " but not " + std::to_string(x) + " < " +
              std::to_string(z)),
        x_(x), y_(y), z_(z) {}
  std::size_t x() const noexcept { return x_; }
  std::size_t y() const noexcept { return y_; }
  std::size_t z() const noexcept { return z_; }

 private:
  std::size_t x_, y_, z_;
};

class ParameterError : public Error {
 public:
  using Error::Error;
};

/// An exhaustive oracle was asked to run above its configured size cap.
class OracleLimitError : public Error {
 public:
  using Error::Error;
};

/// A search exceeded its node-expansion budget.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class EmptyPosetError : public Error {
 public:
  EmptyPosetError() : Error("host poset is empty") {}
};

class IterationOverflow : public Error {
 public:
  using Error::Error;
};

/// A graph operation needed the poset behind a comparability graph.
class PromiseError : public Error {
 public:
  using Error::Error;
};

/// Malformed input text. Carries the source name and 1-based line.
class ParseError : public Error {
 public:
  ParseError(std::string source, std::size_t line, const std::string& message)
      : Error(source + ":" + std::to_string(line) + ": " + message),
        source_(std::move(source)), line_(line) {}
  const std::string& source() const noexcept { return source_; }
  std::size_t line() const noexcept { return line_; }

 private:
  std::string source_;
  std::size_t line_;
};

class ConfigError : public ParseError {
 public:
  using ParseError::ParseError;
};

}  // namespace posetest
