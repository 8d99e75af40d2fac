#pragma once

#include <stdexcept>
#include <string>

namespace nsmab {

// Invalid experiment or environment description (bad parameters, schema
// violations). Carries no location; the config parser reports line numbers
// separately.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// An operation that needs at least one observed pull was given none.
struct EmptyHistoryError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Caller broke a documented precondition (length mismatch, unpulled arm
// reaching an index rule, out-of-range arm).
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

// A matching-based weight scheme found no pull to put mass on.
struct NoSupportError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Non-finite value where a finite one is required.
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace nsmab
