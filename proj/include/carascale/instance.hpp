#pragma once

#include <cstdint>
#include <string>

#include "carascale/dense.hpp"

namespace carascale {

enum class WitnessTag { None, PrimalInterior, DualInterior };

const char* witness_tag_name(WitnessTag tag);

/// A serialized problem: L is spanned by the columns of `basis` (not
/// necessarily orthonormal). The optional witness proves the feasibility
/// tag: a strictly positive vector in L (PrimalInterior) or in L-perp
/// (DualInterior).
struct Instance {
    std::size_t n = 0;
    std::size_t m = 0;
    DenseMatrix basis; // n x m
    DenseVector witness;
    WitnessTag witness_tag = WitnessTag::None;
    std::uint64_t seed = 0;
    std::string generator_id;
};

struct GenOptions {
    /// >= 1; divides the smallest witness entry to make tighter instances.
    double hardness = 1.0;
};

/// basis = [x* | G] with x* uniform in [0.1, 1]^n and G standard normal, so
/// x* itself is the strictly positive witness in L. Deterministic in seed;
/// uses only the scalar kernels so outputs are platform-independent.
Instance gen_primal_feasible(std::size_t n, std::size_t m, std::uint64_t seed, const GenOptions& opts = {});

/// L is built orthogonal to a strictly positive y*: y* is embedded in an
/// (n-m)-dimensional space and L is its orthogonal complement.
Instance gen_dual_feasible(std::size_t n, std::size_t m, std::uint64_t seed, const GenOptions& opts = {});

struct WitnessCheck {
    bool valid = false;
    double min_entry = 0.0;
    double residual = 0.0; // membership residual, relative threshold 1e-8*||w||
};

/// Validates the instance's witness claim against its own basis.
WitnessCheck check_witness(const Instance& inst);

} // namespace carascale
