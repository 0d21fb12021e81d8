#pragma once

#include <stdexcept>
#include <string>

namespace regen {

// Base class for every failure raised by the library. The CLI maps the
// subclasses onto process exit codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Input outside the region where a formula is defined.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Monotone search bracket never reaches the requested level.
class BracketError : public Error {
 public:
  using Error::Error;
};

class OverflowError : public Error {
 public:
  using Error::Error;
};

class NoRootError : public Error {
 public:
  using Error::Error;
};

class ConvergenceError : public Error {
 public:
  using Error::Error;
};

// Invalid model parameters (e.g. traffic intensity >= 1).
class ModelError : public Error {
 public:
  using Error::Error;
};

// A single regeneration cycle ran past the event cap.
class CycleOverflow : public Error {
 public:
  using Error::Error;
};

// Projected work of a simulation request exceeds the configured cap.
class BudgetError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

}  // namespace regen
