#ifndef GAD_ERRORS_HPP
#define GAD_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace gad {

// Base class for every failure the library reports by exception.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MixedRings : Error {
    using Error::Error;
};

struct MixedAlgebras : Error {
    using Error::Error;
};

struct DivisionByZero : Error {
    using Error::Error;
};

struct NotAField : Error {
    using Error::Error;
};

struct FieldRequired : Error {
    using Error::Error;
};

struct NotInvariant : Error {
    using Error::Error;
};

struct NotInvariantIdeal : Error {
    using Error::Error;
};

struct PreconditionFailed : Error {
    using Error::Error;
};

// An exhaustive enumeration would exceed the configured budget.
struct BudgetExceeded : Error {
    explicit BudgetExceeded(const std::string& what, unsigned long long required = 0)
        : Error(what), required_budget(required) {}
    unsigned long long required_budget;
};

// A theorem hypothesis does not hold for the given input.
struct HypothesisFailed : Error {
    using Error::Error;
};

// Automaton-based decision procedure ran out of its reachable-state budget.
struct UndecidableWithBudget : Error {
    using Error::Error;
};

struct ShapeMismatch : Error {
    using Error::Error;
};

struct ElaborationFailed : Error {
    using Error::Error;
};

}  // namespace gad

#endif
