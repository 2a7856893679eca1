#include "carascale/basic_procedures.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "carascale/errors.hpp"
#include "carascale/kernels.hpp"

namespace carascale {

bool is_limited_support(ProcedureKind kind) {
    return kind == ProcedureKind::LSP || kind == ProcedureKind::LSVN || kind == ProcedureKind::LSVNA;
}

const char* procedure_name(ProcedureKind kind) {
    switch (kind) {
        case ProcedureKind::LSP: return "lsp";
        case ProcedureKind::LSVN: return "lsvn";
        case ProcedureKind::LSVNA: return "lsvna";
        case ProcedureKind::BaselinePerceptron: return "baseline_p";
        case ProcedureKind::BaselineVonNeumann: return "baseline_vn";
        case ProcedureKind::BaselineVNAway: return "baseline_vna";
    }
    return "?";
}

std::optional<ProcedureKind> procedure_from_name(std::string_view name) {
    for (ProcedureKind k : {ProcedureKind::LSP, ProcedureKind::LSVN, ProcedureKind::LSVNA,
                            ProcedureKind::BaselinePerceptron, ProcedureKind::BaselineVonNeumann,
                            ProcedureKind::BaselineVNAway})
        if (name == procedure_name(k)) return k;
    return std::nullopt;
}

std::uint64_t iteration_bound(std::size_t n, std::size_t m) {
    return 9ull * (m + 1) * (m + 1) * n;
}

StoppingPolicy StoppingPolicy::for_dim(std::size_t n) {
    StoppingPolicy p;
    p.eps = 1.0 / (3.0 * std::sqrt(static_cast<double>(n)));
    return p;
}

StateEval evaluate_state(const OrthonormalBasis& q, const SimplexPoint& x, const DenseVector& z,
                         const StoppingPolicy& policy) {
    const std::size_t n = q.n;
    const std::size_t m = q.m;
    if (z.size() != m) throw DimensionMismatchError("evaluate_state: z length != m");

    StateEval ev;
    ev.y.resize(n);
    kernels::gemv_rows(q.q.data.data(), n, m, z.data(), ev.y.data());
    ev.min_entry = kernels::min_value(ev.y.data(), n);
    ev.pos_norm = std::sqrt(kernels::positive_sq_norm(ev.y.data(), n));
    ev.x_inf = x.max_weight();

    if (ev.min_entry > policy.strict_tol) {
        ev.verdict = StateVerdict::Strict;
    } else if (ev.pos_norm <= policy.eps * ev.x_inf + policy.certificate_slack) {
        ev.verdict = StateVerdict::Certificate;
    } else {
        ev.verdict = StateVerdict::Continue;
        ev.j_min = kernels::argmin_first(ev.y.data(), n);
    }
    return ev;
}

double step_perceptron(std::uint64_t t) { return 1.0 / static_cast<double>(t + 1); }

double step_linesearch(const DenseVector& z, const double* q_j, std::size_t m) {
    const double zz = kernels::nrm2_sq(z.data(), m);
    const double zq = kernels::dot(z.data(), q_j, m);
    const double qq = kernels::nrm2_sq(q_j, m);
    const double denom = zz - 2.0 * zq + qq; // ||z - q_j||^2
    if (denom <= 1e-24) return 0.0;
    const double theta = (zz - zq) / denom;
    return std::clamp(theta, 0.0, 1.0);
}

StepChoice choose_direction_away(const OrthonormalBasis& q, const SimplexPoint& x, const DenseVector& z,
                                 double z_sq, const StateEval& eval) {
    const std::size_t m = q.m;
    StepChoice choice;
    choice.j = eval.j_min;

    // away vertex: largest <q_i, z> over the support, smallest index on ties
    double best = -std::numeric_limits<double>::infinity();
    for (std::size_t i : x.support())
        if (eval.y[i] > best) {
            best = eval.y[i];
            choice.k = i;
        }

    const double regular_gap = z_sq - eval.y[choice.j];
    const double away_gap = best - z_sq;
    choice.kind = regular_gap > away_gap ? StepChoice::Kind::Regular : StepChoice::Kind::Away;

    // exact line search along a: theta* = -<z, Q^T a> / ||Q^T a||^2
    const double* vertex = q.point_row(choice.kind == StepChoice::Kind::Regular ? choice.j : choice.k);
    const double zz = z_sq;
    const double zq = kernels::dot(z.data(), vertex, m);
    const double qq = kernels::nrm2_sq(vertex, m);
    const double dir_sq = zz - 2.0 * zq + qq; // ||q_v - z||^2 = ||Q^T a||^2 either way
    if (dir_sq <= 1e-24) {
        choice.theta = 0.0;
        choice.theta_max = choice.kind == StepChoice::Kind::Regular ? 1.0 : 0.0;
        return choice;
    }
    if (choice.kind == StepChoice::Kind::Regular) {
        choice.theta_max = 1.0;
        choice.theta = std::clamp((zz - zq) / dir_sq, 0.0, choice.theta_max);
    } else {
        const double xk = x.weight(choice.k);
        choice.theta_max = xk / (1.0 - xk);
        choice.theta = std::clamp((zq - zz) / dir_sq, 0.0, choice.theta_max);
    }
    return choice;
}

namespace {

BasicResult run_procedure(const OrthonormalBasis& q, const RunConfig& cfg) {
    const std::size_t n = q.n;
    const std::size_t m = q.m;
    const bool ls = is_limited_support(cfg.kind);
    const bool away = cfg.kind == ProcedureKind::LSVNA || cfg.kind == ProcedureKind::BaselineVNAway;
    const bool perceptron = cfg.kind == ProcedureKind::LSP || cfg.kind == ProcedureKind::BaselinePerceptron;

    StoppingPolicy policy = cfg.policy;
    if (policy.eps == 0.0) policy = StoppingPolicy::for_dim(n);
    const std::uint64_t budget = cfg.budget ? cfg.budget : iteration_bound(n, m);

    // x0 = e_1, z0 = q_1, B0 = {1}
    SimplexPoint x(n);
    caratheodory::ActiveBasis ab;
    if (ls) {
        auto init = caratheodory::init_active(q.q, 0, cfg.refactor);
        x = std::move(init.first);
        ab = std::move(init.second);
    } else {
        x = SimplexPoint::unit(n, 0);
    }
    DenseVector z(q.point_row(0), q.point_row(0) + m);
    DenseVector zref; // validation scratch

    BasicResult result;
    Trace& trace = result.trace;
    std::uint64_t t = 0;
    std::uint64_t zero_steps = 0;

    for (;;) {
        const double z_sq = kernels::nrm2_sq(z.data(), m);
        if (cfg.record_history) trace.z_sq_history.push_back(z_sq);
        if (t >= 1) trace.decay_max = std::max(trace.decay_max, static_cast<double>(t) * z_sq);
        trace.max_support = std::max(trace.max_support, x.support().size());

        if (cfg.validate) {
            zref.assign(m, 0.0);
            for (std::size_t i : x.support()) kernels::scalar::axpy(x.weight(i), q.point_row(i), zref.data(), m);
            double drift = 0.0;
            for (std::size_t c = 0; c < m; ++c) drift += (zref[c] - z[c]) * (zref[c] - z[c]);
            trace.max_z_residual = std::max(trace.max_z_residual, std::sqrt(drift));
        }

        StateEval ev = evaluate_state(q, x, z, policy);
        if (ev.verdict != StateVerdict::Continue || t >= budget) {
            result.outcome = ev.verdict == StateVerdict::Strict ? BasicResult::Outcome::StrictSolution
                             : ev.verdict == StateVerdict::Certificate
                                 ? BasicResult::Outcome::RescaleCertificate
                                 : BasicResult::Outcome::BudgetExhausted;
            result.x = std::move(x);
            result.y = std::move(ev.y);
            trace.iterations = t;
            trace.final_z_sq = z_sq;
            break;
        }

        // choose the step
        StepChoice choice;
        if (away) {
            choice = choose_direction_away(q, x, z, z_sq, ev);
        } else {
            choice.kind = StepChoice::Kind::Regular;
            choice.j = ev.j_min;
            choice.theta = perceptron ? step_perceptron(t) : step_linesearch(z, q.point_row(ev.j_min), m);
        }

        // apply to x and z
        if (choice.kind == StepChoice::Kind::Regular) {
            const double theta = choice.theta;
            x.scale_all(1.0 - theta);
            if (theta > 0.0) x.add_weight(choice.j, theta);
            kernels::scal(1.0 - theta, z.data(), m);
            kernels::axpy(theta, q.point_row(choice.j), z.data(), m);
        } else {
            const double theta = choice.theta;
            x.scale_all(1.0 + theta);
            if (theta == choice.theta_max)
                x.set_zero(choice.k);
            else
                x.add_weight(choice.k, -theta);
            kernels::scal(1.0 + theta, z.data(), m);
            kernels::axpy(-theta, q.point_row(choice.k), z.data(), m);
            ++trace.away_steps;
        }

        if (choice.theta == 0.0) {
            if (++zero_steps > n)
                throw NumericalBreakdownError("basic procedure stalled: zero step length on " +
                                              std::to_string(zero_steps) + " consecutive iterations");
        } else {
            zero_steps = 0;
        }

        // limited-support maintenance: absorb j on regular steps that enter a
        // new index (away steps never enlarge the support)
        if (ls && choice.kind == StepChoice::Kind::Regular) {
            const bool in_basis = std::find(ab.basis.begin(), ab.basis.end(), choice.j) != ab.basis.end();
            if (!in_basis) {
                caratheodory::MirrOutcome mo = caratheodory::mirr(ab, q.q, x, choice.j);
                if (!mo.extended && trace.first_reduce_iteration == Trace::kNone)
                    trace.first_reduce_iteration = t;
            }
        }

        // pin the simplex sum, applying the same factor to z to keep z = Q^T x
        const double s = x.sum();
        if (std::fabs(s - 1.0) > 1e-15 && s > 0.0) {
            const double f = x.renormalize();
            kernels::scal(f, z.data(), m);
        }

        ++t;
    }

    if (ls) {
        trace.mirr_calls = ab.stats.calls;
        trace.counted_ops = ab.stats.multiply_adds;
        trace.max_call_ops = ab.stats.max_call_multiply_adds;
        trace.extend_events = ab.stats.extend_events;
        trace.reduce_events = ab.stats.reduce_events;
        trace.refactorizations = ab.stats.refactorizations;
    }
    return result;
}

} // namespace

BasicResult run_basic(const OrthonormalBasis& q, const RunConfig& cfg) {
    if (!is_limited_support(cfg.kind))
        throw std::invalid_argument("run_basic: expected a limited-support procedure kind");
    return run_procedure(q, cfg);
}

BasicResult run_baseline(const OrthonormalBasis& q, const RunConfig& cfg) {
    if (is_limited_support(cfg.kind))
        throw std::invalid_argument("run_baseline: expected a baseline procedure kind");
    return run_procedure(q, cfg);
}

} // namespace carascale
