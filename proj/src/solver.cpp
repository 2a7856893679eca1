#include "carascale/solver.hpp"

#include <cmath>
#include <string>

#include "carascale/errors.hpp"
#include "carascale/kernels.hpp"

namespace carascale {

namespace ks = kernels::scalar;

const char* verdict_name(SolveOutcome::Verdict v) {
    switch (v) {
        case SolveOutcome::Verdict::PrimalStrict: return "primal_strict";
        case SolveOutcome::Verdict::DualStrict: return "dual_strict";
        case SolveOutcome::Verdict::Undetermined: return "undetermined";
    }
    return "?";
}

OrthonormalBasis rescale(const OrthonormalBasis& q, const SimplexPoint& x_hat, ScalingState& s) {
    const std::size_t i_star = x_hat.max_weight_index();
    DenseMatrix scaled = q.q;
    ks::scal(2.0, scaled.row(i_star), scaled.cols); // row i = coordinate i of every basis vector
    OrthonormalBasis out = orthonormalize(scaled);
    s.d[i_star] *= 2.0;
    s.rounds += 1;
    return out;
}

namespace {

struct Side {
    OrthonormalBasis q;
    ScalingState scaling;
    bool dual;
};

// Strict solution in the rescaled space maps back by y_i = yhat_i / d_i;
// the d_i are powers of two so the division is exact.
DenseVector unscale(const DenseVector& y_hat, const ScalingState& s) {
    DenseVector y(y_hat.size());
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = y_hat[i] / s.d[i];
    return y;
}

} // namespace

SolveOutcome solve(const Instance& instance, const SolveConfig& cfg) {
    if (instance.n < 2 || instance.m < 1 || instance.m >= instance.n)
        throw DimensionMismatchError("solve: need 1 <= m < n");

    const OrthonormalBasis q0 = orthonormalize(instance.basis);
    Side primal{q0, ScalingState(instance.n), false};
    Side dual{complement_basis(q0), ScalingState(instance.n), true};

    SolveOutcome outcome;
    const bool ls = is_limited_support(cfg.procedure);

    for (std::uint64_t round = 1; round <= cfg.max_rounds; ++round) {
        outcome.rounds_used = round;
        for (Side* side : {&primal, &dual}) {
            RunConfig rc;
            rc.kind = cfg.procedure;
            rc.budget = cfg.per_round_budget;
            rc.record_history = cfg.record_history;
            rc.validate = cfg.validate;

            BasicResult res;
            try {
                res = ls ? run_basic(side->q, rc) : run_baseline(side->q, rc);
            } catch (const NumericalBreakdownError& e) {
                throw NumericalBreakdownError("round " + std::to_string(round) +
                                              (side->dual ? " dual: " : " primal: ") + e.what());
            }

            RunSummary summary;
            summary.dual_side = side->dual;
            summary.round = round;
            summary.subspace_dim = side->q.m;
            summary.outcome = res.outcome;
            summary.trace = std::move(res.trace);
            outcome.runs.push_back(std::move(summary));

            if (res.outcome == BasicResult::Outcome::StrictSolution) {
                outcome.verdict = side->dual ? SolveOutcome::Verdict::DualStrict
                                             : SolveOutcome::Verdict::PrimalStrict;
                outcome.y = unscale(res.y, side->scaling);
                outcome.primal_rescalings = primal.scaling.rounds;
                outcome.dual_rescalings = dual.scaling.rounds;
                return outcome;
            }
            if (res.outcome == BasicResult::Outcome::RescaleCertificate)
                side->q = rescale(side->q, res.x, side->scaling);
            // BudgetExhausted: no certificate to rescale with; try the other
            // side and the next round
        }
    }

    outcome.verdict = SolveOutcome::Verdict::Undetermined;
    outcome.primal_rescalings = primal.scaling.rounds;
    outcome.dual_rescalings = dual.scaling.rounds;
    return outcome;
}

VerificationReport verify_vector(const Instance& instance, const DenseVector& y, bool dual_side) {
    if (y.size() != instance.n) throw DimensionMismatchError("verify: vector length != n");
    VerificationReport rep;
    rep.min_entry = ks::min_value(y.data(), y.size());
    rep.positivity_ok = rep.min_entry > 0.0;
    rep.solution_norm = std::sqrt(ks::dot(y.data(), y.data(), y.size()));

    const OrthonormalBasis q = orthonormalize(instance.basis);
    const DenseVector proj = project(q, y);
    double resid_sq = 0.0;
    if (dual_side) {
        resid_sq = ks::dot(proj.data(), proj.data(), proj.size());
    } else {
        for (std::size_t i = 0; i < y.size(); ++i) {
            const double d = y[i] - proj[i];
            resid_sq += d * d;
        }
    }
    rep.membership_residual = std::sqrt(resid_sq);
    rep.membership_ok = rep.membership_residual <= 1e-8 * rep.solution_norm;
    rep.pass = rep.positivity_ok && rep.membership_ok;
    return rep;
}

VerificationReport verify_certificate(const Instance& instance, const SolveOutcome& outcome) {
    if (outcome.verdict == SolveOutcome::Verdict::Undetermined)
        throw std::invalid_argument("verify_certificate: outcome carries no solution");
    return verify_vector(instance, outcome.y, outcome.verdict == SolveOutcome::Verdict::DualStrict);
}

} // namespace carascale
