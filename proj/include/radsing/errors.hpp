#pragma once

#include <stdexcept>
#include <string>

namespace radsing {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class DomainError : public Error {
 public:
  using Error::Error;
};

class RegimeError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class TableError : public DomainError {
 public:
  using DomainError::DomainError;
};

// Solver-side failures.
class SolverError : public Error {
 public:
  using Error::Error;
};

class CoverageError : public SolverError {
 public:
  using SolverError::SolverError;
};

class NoContraction : public SolverError {
 public:
  using SolverError::SolverError;
};

class WindowError : public SolverError {
 public:
  using SolverError::SolverError;
};

class PositivityError : public SolverError {
 public:
  using SolverError::SolverError;
};

class NotBracketed : public SolverError {
 public:
  using SolverError::SolverError;
};

class BudgetError : public Error {
 public:
  using Error::Error;
};

}  // namespace radsing
