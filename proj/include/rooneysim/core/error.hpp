#pragma once

#include <stdexcept>
#include <string>

namespace rooneysim {

// Every failure the library reports derives from Error so callers (the CLI,
// the HTTP layer) can map it to a diagnostic without knowing the detail type.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Invalid parameters in a ModelConfig or distribution description.
class ConfigError : public Error {
public:
    using Error::Error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Infeasible selection constraint (l > n_X, k > n, ...).
class ConstraintError : public Error {
public:
    using Error::Error;
};

// Round whose observed utility (or delta denominator) is zero.
class DegenerateRoundError : public Error {
public:
    using Error::Error;
};

// Update rule violates F(1)=1 / monotonicity at the evaluated point.
class RuleError : public Error {
public:
    using Error::Error;
};

// Operation requested outside the regime where it is defined
// (e.g. the no-constraint upper bound with l > 0).
class NotApplicableError : public Error {
public:
    using Error::Error;
};

// Statistic undefined for the data (zero variance, constant regressor).
class StatisticsError : public Error {
public:
    using Error::Error;
};

// Broken internal invariant; indicates a bug rather than bad input.
class InternalError : public Error {
public:
    using Error::Error;
};

}  // namespace rooneysim
