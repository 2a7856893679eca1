#pragma once

#include <cstdint>
#include <vector>

#include "carascale/basic_procedures.hpp"
#include "carascale/instance.hpp"
#include "carascale/linalg.hpp"

// Full projection-and-rescaling driver. Each round runs the chosen basic
// procedure on the (rescaled) primal subspace and, failing a strict
// solution there, on the (independently rescaled) dual complement. A
// rescale certificate doubles the coordinate carrying the certificate's
// largest weight, deepening any interior point for the next round.

namespace carascale {

/// Accumulated diagonal scaling: every d_i is a power of two, >= 1.
struct ScalingState {
    DenseVector d;
    std::uint64_t rounds = 0; // rescalings applied

    explicit ScalingState(std::size_t n = 0) : d(n, 1.0) {}
};

/// Double the coordinate carrying ||x_hat||_inf (smallest index on ties),
/// re-orthonormalize, and record the factor in `s`. The new basis spans
/// D * span(q).
OrthonormalBasis rescale(const OrthonormalBasis& q, const SimplexPoint& x_hat, ScalingState& s);

/// One basic-procedure run inside a solve, for tracing.
struct RunSummary {
    bool dual_side = false;
    std::uint64_t round = 0;
    std::size_t subspace_dim = 0;
    BasicResult::Outcome outcome = BasicResult::Outcome::BudgetExhausted;
    Trace trace;
};

struct SolveOutcome {
    enum class Verdict { PrimalStrict, DualStrict, Undetermined };
    Verdict verdict = Verdict::Undetermined;
    DenseVector y; // strictly positive solution mapped back to original coordinates
    std::uint64_t rounds_used = 0;
    std::uint64_t primal_rescalings = 0;
    std::uint64_t dual_rescalings = 0;
    std::vector<RunSummary> runs;
};

const char* verdict_name(SolveOutcome::Verdict v);

struct SolveConfig {
    ProcedureKind procedure = ProcedureKind::LSVN;
    std::uint64_t max_rounds = 200;
    std::uint64_t per_round_budget = 0; // 0 = the 9(dim+1)^2 n halting bound per side
    bool record_history = false;
    bool validate = false;
};

/// Alternate primal/dual basic-procedure runs with rescaling until a strict
/// solution appears or max_rounds passes. Throws NumericalBreakdownError
/// (with round context) when a run cannot continue.
SolveOutcome solve(const Instance& instance, const SolveConfig& cfg);

struct VerificationReport {
    bool pass = false;
    bool positivity_ok = false;
    bool membership_ok = false;
    double min_entry = 0.0;
    double membership_residual = 0.0;
    double solution_norm = 0.0;
};

/// Independent check of a strict outcome against the ORIGINAL instance
/// basis: min_i y_i > 0 and subspace residual <= 1e-8 ||y||.
VerificationReport verify_certificate(const Instance& instance, const SolveOutcome& outcome);

/// Same check for a bare vector claiming membership on one side.
VerificationReport verify_vector(const Instance& instance, const DenseVector& y, bool dual_side);

} // namespace carascale
