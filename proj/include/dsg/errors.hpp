#pragma once

#include <stdexcept>
#include <string>

namespace dsg {

/// Base class for all library errors.
struct DsgError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A mixed strategy violated the simplex/support invariants.
struct InvalidStrategy : DsgError {
  using DsgError::DsgError;
};

/// A transition was requested from a last-layer state.
struct TerminalState : DsgError {
  using DsgError::DsgError;
};

/// All feature matrices coincide; follower behaviour carries no signal.
struct DegenerateFeatures : DsgError {
  using DsgError::DsgError;
};

/// The LP backend failed numerically (cycling guard, bad input, ...).
struct SolverError : DsgError {
  using DsgError::DsgError;
};

/// No parameter sample could be produced within the proposal budget.
struct SamplingExhausted : DsgError {
  using DsgError::DsgError;
};

/// A requested enumeration would exceed the hard size cap.
struct SizeLimit : DsgError {
  using DsgError::DsgError;
};

/// No follower action admits a margin-feasible strategy at some state.
struct EpsilonInfeasible : DsgError {
  using DsgError::DsgError;
};

/// Planner found no feasible follower action at tolerance; inputs are
/// numerically degenerate.
struct NumericalDegeneracy : DsgError {
  using DsgError::DsgError;
};

/// Malformed generator/experiment specification.
struct SpecError : DsgError {
  using DsgError::DsgError;
};

/// Malformed experiment configuration or I/O failure in the harness.
struct ConfigError : DsgError {
  using DsgError::DsgError;
};

}  // namespace dsg
