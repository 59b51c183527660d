#pragma once

#include <stdexcept>
#include <string>

namespace qmlab {

/// Base class for all qmlab exceptions.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A physical parameter violates its invariant; message names the field.
class InvalidParameter : public Error {
 public:
  using Error::Error;
};

/// An argument is outside the mathematical domain of an operation (e.g. k <= 0).
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A numerical routine could not reach the requested accuracy.
class AccuracyError : public Error {
 public:
  AccuracyError(const std::string& what, double achieved_residual)
      : Error(what), residual(achieved_residual) {}
  double residual;
};

/// Inconsistent or unusable run configuration.
class ConfigurationError : public Error {
 public:
  using Error::Error;
};

/// Malformed or insufficient user input (files, tables, grids).
class InputError : public Error {
 public:
  using Error::Error;
};

/// Evaluation hit a pole; carries the offending wavenumber.
class SingularityError : public Error {
 public:
  SingularityError(const std::string& what, double at_k) : Error(what), k(at_k) {}
  double k;
};

/// The field overflowed or became non-finite during time stepping.
class BlowupError : public Error {
 public:
  BlowupError(const std::string& what, double at_time) : Error(what), time(at_time) {}
  double time;
};

/// Hydrodynamic fields cannot be assembled into a wavefunction.
class InconsistentFieldsError : public Error {
 public:
  using Error::Error;
};

/// A state is degenerate (e.g. identically zero wavefunction).
class DegenerateStateError : public Error {
 public:
  using Error::Error;
};

/// The time series is too short for the requested fit.
class FitWindowError : public Error {
 public:
  using Error::Error;
};

/// Both fit models are poor; the mode is likely nonlinearly contaminated.
class ContaminationError : public Error {
 public:
  ContaminationError(const std::string& what, double fit_residual)
      : Error(what), residual(fit_residual) {}
  double residual;
};

}  // namespace qmlab
