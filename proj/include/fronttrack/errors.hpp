#pragma once

#include <stdexcept>
#include <string>

namespace fronttrack {

/// Base class for every error the library raises.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Inputs outside an operation's mathematical domain (rho <= floor, xi >= 1, ...).
struct DomainError : Error {
  using Error::Error;
};

/// A curve parameter or solve drove the density to (or below) the vacuum floor.
struct VacuumError : Error {
  using Error::Error;
};

/// A stationary path reached |v| -> c; the subsonic construction breaks down there.
struct SonicError : Error {
  using Error::Error;
};

/// Root finders / integrators failed to reach their tolerance.
struct SolverError : Error {
  using Error::Error;
};

/// API misuse: wrong wave family, shock-branch fan request, bad test-function support.
struct UsageError : Error {
  using Error::Error;
};

/// Scenario configuration rejected during validation.
struct ConfigError : Error {
  using Error::Error;
};

/// Subsonic regime broken: junction emitted waves with wrong-signed speeds.
struct RegimeError : Error {
  using Error::Error;
};

/// A monitored invariant (Upsilon decrease, trace condition) failed during a run.
struct InvariantViolation : Error {
  using Error::Error;
};

}  // namespace fronttrack
