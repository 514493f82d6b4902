#ifndef NHP_ERRORS_HPP
#define NHP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace nhp {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Bad user input: measure/interval/index/scheme validation failures.
struct ConfigError : Error {
  using Error::Error;
};

// Evaluation requested too close to (or on) a singular point.
struct PoleProximityError : Error {
  using Error::Error;
};

// Finite-atom stand-ins are too coarse for the requested computation.
struct AtomBudgetError : Error {
  using Error::Error;
};

// Iteration/refinement budget ran out before a certified answer.
struct BudgetError : Error {
  using Error::Error;
};

// Linear-algebra structure not as the theory guarantees (rank, degrees);
// usually a sign that the discretization is degenerate.
struct DegeneracyError : Error {
  using Error::Error;
};

}  // namespace nhp

#endif  // NHP_ERRORS_HPP
