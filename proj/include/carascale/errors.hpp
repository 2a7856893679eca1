#pragma once

#include <stdexcept>
#include <string>

namespace carascale {

/// A matrix that was required to have full column rank does not.
struct RankDeficientError : std::runtime_error {
    explicit RankDeficientError(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatchError : std::invalid_argument {
    explicit DimensionMismatchError(const std::string& what) : std::invalid_argument(what) {}
};

/// The active-basis state could not be repaired by refactorization, or a
/// procedure stalled; signals an ill-conditioned input.
struct NumericalBreakdownError : std::runtime_error {
    explicit NumericalBreakdownError(const std::string& what) : std::runtime_error(what) {}
};

/// Malformed input file.
struct ParseError : std::runtime_error {
    explicit ParseError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace carascale
