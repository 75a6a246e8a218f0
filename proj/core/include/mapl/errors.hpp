#pragma once

#include <stdexcept>
#include <string>

namespace mapl {

/// A precondition on shapes or ranges was broken by the caller.
struct ContractViolation : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// The sample handed to a realizable-case learner is not consistent with any
/// member of the class.
struct NotRealizable : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// A combinatorial search ran out of its configured budget.
struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The compression search could not find a realizing selection.
struct CompressionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline void require(bool cond, const std::string& what) {
    if (!cond) throw ContractViolation(what);
}

} // namespace mapl
