#pragma once

// Exception taxonomy shared by all sgdlab modules.

#include <cstdint>
#include <stdexcept>
#include <string>

namespace sgdlab {

// Unknown catalog entry name.
struct CatalogError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Parameter outside a family's admissible range.
struct InvalidParamError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// Point lies outside the region a local certificate covers.
struct OutOfScopeError : std::domain_error {
  using std::domain_error::domain_error;
};

// Argument outside an operation's domain (n=0, x>y, degenerate levels, ...).
struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

// A stated hypothesis of the computation fails (e.g. mu*gamma_star <= alpha).
struct HypothesisError : std::domain_error {
  using std::domain_error::domain_error;
};

// Iterate became non-finite during a run.
struct DivergenceError : std::runtime_error {
  DivergenceError(std::string msg, std::int64_t step, std::int64_t replicate)
      : std::runtime_error(std::move(msg)), step(step), replicate(replicate) {}
  std::int64_t step = -1;
  std::int64_t replicate = -1;
};

// Too few usable samples/points for an estimator or fit.
struct InsufficientDataError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Sample carries no signal (e.g. all gradients identical).
struct DegenerateSampleError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// (regime, quantity) pair has no budget formula.
struct UnsupportedRegimeError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config document is not well-formed.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config document is well-formed but semantically invalid.
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Config requests a run whose schedule fails the validator.
struct AssumptionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace sgdlab
