#pragma once

#include <stdexcept>
#include <string>

namespace tdr {

/// Input data failed a structural or invariant check.
struct ValidationError : std::runtime_error {
    explicit ValidationError(const std::string& what) : std::runtime_error(what) {}
};

/// A guarded enumeration (cosets, words, ...) exceeded its budget.
struct BudgetExceeded : std::runtime_error {
    explicit BudgetExceeded(const std::string& what) : std::runtime_error(what) {}
};

/// An exact identity the engine relies on failed; this is a bug, not bad data.
struct InternalCheckFailure : std::logic_error {
    explicit InternalCheckFailure(const std::string& what) : std::logic_error(what) {}
};

} // namespace tdr
