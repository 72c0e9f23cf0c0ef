#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace bellconc {

/// Base of every error thrown by the library.
class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

/// Argument outside the admissible range of an operation.
class ParameterError : public Error {
public:
  using Error::Error;
};

/// Input text or file could not be parsed. Carries the 1-based line (0 if unknown).
class ParseError : public Error {
public:
  ParseError(const std::string& what, std::size_t line)
      : Error(line ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

private:
  std::size_t line_;
};

/// Required data (files, inequality sets, records) is absent.
class DataError : public Error {
public:
  using Error::Error;
};

/// Valid input that lies outside the domain an algorithm is defined on.
class DomainError : public Error {
public:
  using Error::Error;
};

/// Density matrix has entries outside the diagonal/anti-diagonal X pattern.
class NotXStateError : public DomainError {
public:
  NotXStateError(std::size_t row, std::size_t col, double magnitude)
      : DomainError("not an X-state: |rho(" + std::to_string(row) + "," + std::to_string(col) +
                    ")| = " + std::to_string(magnitude)),
        row_(row), col_(col) {}
  std::size_t row() const noexcept { return row_; }
  std::size_t col() const noexcept { return col_; }

private:
  std::size_t row_;
  std::size_t col_;
};

/// Least-squares or parameter estimation failed (rank deficiency, degenerate data).
class FitError : public DomainError {
public:
  using DomainError::DomainError;
};

}  // namespace bellconc
