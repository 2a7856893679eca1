// Acceptance suite: seven bound/property criteria at desk scale, one
// pass/fail line each. Exits nonzero if any criterion fails.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <vector>

#include "carascale/basic_procedures.hpp"
#include "carascale/caratheodory.hpp"
#include "carascale/instance.hpp"
#include "carascale/kernels.hpp"
#include "carascale/linalg.hpp"
#include "carascale/rng.hpp"
#include "carascale/solver.hpp"

using namespace carascale;
namespace cara = carascale::caratheodory;

namespace {

struct Criterion {
    bool pass = true;
    std::string detail;

    void fail(const std::string& why) {
        pass = false;
        if (!detail.empty()) detail += "; ";
        detail += why;
    }
};

DenseVector represented_point(const DenseMatrix& pts, const SimplexPoint& x) {
    DenseVector z(pts.cols, 0.0);
    for (std::size_t i : x.support())
        kernels::scalar::axpy(x.weight(i), pts.row(i), z.data(), pts.cols);
    return z;
}

double vec_dist(const DenseVector& a, const DenseVector& b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(s);
}

DenseMatrix random_points(CounterRng& rng, std::size_t n, std::size_t m) {
    DenseMatrix pts(n, m);
    for (double& v : pts.data) v = rng.next_normal();
    return pts;
}

// ---------------------------------------------------------------------------
// 1. Incremental pseudoinverse equals the direct oracle along random update
//    sequences, and the represented point never moves. Points are rows of an
//    orthonormal basis, as in the solver. The equivalence is meaningful only
//    while the active set is well conditioned (a degenerate active matrix
//    puts even the direct normal-equations oracle outside the tolerance), so
//    a sequence restarts from a fresh vertex whenever the oracle's magnitude
//    passes 100; every call outside those restart events is asserted.

Criterion criterion_oracle_equivalence() {
    Criterion c;
    CounterRng master(0xACCE97);
    double worst_gap = 0.0, worst_drift = 0.0;
    std::uint64_t asserted_calls = 0, restarts = 0;

    for (int seq = 0; seq < 200 && c.pass; ++seq) {
        CounterRng rng = master.fork(seq);
        const std::size_t m = 1 + rng.next_below(10);         // m <= 10
        const std::size_t n = m + 2 + rng.next_below(49 - m); // n <= 50
        const DenseMatrix pts = orthonormalize(random_points(rng, n, m)).q;

        auto [x, ab] = cara::init_active(pts, rng.next_below(n), cara::RefactorPolicy::disabled());
        for (int call = 0; call < 1000; ++call) {
            std::size_t j;
            do {
                j = rng.next_below(n);
            } while (std::find(ab.basis.begin(), ab.basis.end(), j) != ab.basis.end());

            const double theta = rng.next_uniform(0.05, 0.95);
            x.scale_all(1.0 - theta);
            x.add_weight(j, theta);

            const DenseVector before = represented_point(pts, x);
            cara::mirr(ab, pts, x, j);
            const DenseVector after = represented_point(pts, x);

            const double before_norm =
                std::sqrt(kernels::scalar::dot(before.data(), before.data(), m));
            const double drift = vec_dist(before, after) / (1.0 + before_norm);
            worst_drift = std::max(worst_drift, drift);
            if (drift > 1e-10) {
                c.fail("representation drift " + std::to_string(drift) + " in sequence " +
                       std::to_string(seq));
                break;
            }

            const DenseMatrix direct = pseudoinverse_direct(cara::augmented_active_matrix(ab, pts));
            double oracle_mag = 0.0;
            for (double v : direct.data) oracle_mag = std::max(oracle_mag, std::fabs(v));
            if (oracle_mag > 100.0) {
                ++restarts;
                const std::size_t start = rng.next_below(n);
                auto fresh = cara::init_active(pts, start, cara::RefactorPolicy::disabled());
                x = std::move(fresh.first);
                ab = std::move(fresh.second);
                continue;
            }

            const double gap = max_abs_diff(ab.pinv, direct);
            worst_gap = std::max(worst_gap, gap);
            ++asserted_calls;
            if (gap > 1e-8) {
                c.fail("pinv gap " + std::to_string(gap) + " in sequence " + std::to_string(seq));
                break;
            }
            x.renormalize();
        }
        if (ab.stats.refactorizations != 0)
            c.fail("a rebuild fired despite refactorization being disabled");
    }
    char buf[220];
    std::snprintf(buf, sizeof buf,
                  "200 sequences, %llu calls asserted, max pinv gap %.2e (tol 1e-8), max drift "
                  "%.2e (tol 1e-10), %llu conditioning restarts",
                  static_cast<unsigned long long>(asserted_calls), worst_gap, worst_drift,
                  static_cast<unsigned long long>(restarts));
    c.detail = buf + (c.detail.empty() ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------------------
// Corpus shared by criteria 2-4: n in {20,50,100}, m in {2,5,10}, 20 seeds
// per combination (10 primal-feasible + 10 dual-feasible), all three
// limited-support procedures, full driver with the per-side halting bound as
// the budget.

struct CorpusRun {
    ProcedureKind kind;
    std::size_t n;
    std::size_t subspace_dim;
    BasicResult::Outcome outcome;
    std::uint64_t iterations;
    std::size_t max_support;
    double decay_max;
};

struct CorpusData {
    std::vector<CorpusRun> runs;
    bool solve_failed = false;
    std::string failure;
    std::size_t baseline_support_max = 0;
    std::size_t baseline_over_bound = 0;
    std::size_t baseline_runs = 0;
};

CorpusData run_corpus() {
    CorpusData data;
    const std::size_t ns[] = {20, 50, 100};
    const std::size_t ms[] = {2, 5, 10};
    const ProcedureKind kinds[] = {ProcedureKind::LSP, ProcedureKind::LSVN, ProcedureKind::LSVNA};

    for (std::size_t n : ns)
        for (std::size_t m : ms)
            for (std::uint64_t seed = 1; seed <= 10; ++seed)
                for (int dual = 0; dual < 2; ++dual) {
                    const Instance inst =
                        dual ? gen_dual_feasible(n, m, seed) : gen_primal_feasible(n, m, seed);
                    for (ProcedureKind kind : kinds) {
                        SolveConfig cfg;
                        cfg.procedure = kind;
                        try {
                            const SolveOutcome out = solve(inst, cfg);
                            for (const RunSummary& run : out.runs)
                                data.runs.push_back({kind, n, run.subspace_dim, run.outcome,
                                                     run.trace.iterations, run.trace.max_support,
                                                     run.trace.decay_max});
                        } catch (const std::exception& e) {
                            data.solve_failed = true;
                            data.failure = e.what();
                            return data;
                        }
                    }
                }

    // baseline contrast, recorded only: unconstrained support on the primal
    // side of infeasible instances
    for (ProcedureKind kind : {ProcedureKind::BaselinePerceptron, ProcedureKind::BaselineVonNeumann})
        for (std::uint64_t seed = 1; seed <= 10; ++seed) {
            const Instance inst = gen_dual_feasible(50, 5, seed);
            const OrthonormalBasis q = orthonormalize(inst.basis);
            RunConfig rc;
            rc.kind = kind;
            const BasicResult res = run_baseline(q, rc);
            ++data.baseline_runs;
            data.baseline_support_max = std::max(data.baseline_support_max, res.trace.max_support);
            if (res.trace.max_support > 6) ++data.baseline_over_bound;
        }
    return data;
}

Criterion criterion_support_bound(const CorpusData& data) {
    Criterion c;
    if (data.solve_failed) {
        c.fail("solve failed: " + data.failure);
        return c;
    }
    std::size_t violations = 0;
    for (const CorpusRun& run : data.runs)
        if (run.max_support > run.subspace_dim + 1) ++violations;
    if (violations) c.fail(std::to_string(violations) + " runs exceeded m+1 support");
    char buf[200];
    std::snprintf(buf, sizeof buf,
                  "%zu LS runs all within m+1; baseline contrast: %zu/%zu runs exceeded m+1 "
                  "(max support %zu, recorded only)",
                  data.runs.size(), data.baseline_over_bound, data.baseline_runs,
                  data.baseline_support_max);
    c.detail = buf + (c.detail.empty() ? "" : "; " + c.detail);
    return c;
}

Criterion criterion_iteration_bound(const CorpusData& data) {
    Criterion c;
    if (data.solve_failed) {
        c.fail("solve failed: " + data.failure);
        return c;
    }
    double worst_frac = 0.0;
    for (const CorpusRun& run : data.runs) {
        const std::uint64_t bound = iteration_bound(run.n, run.subspace_dim);
        if (run.outcome == BasicResult::Outcome::BudgetExhausted) {
            c.fail("a run hit the budget without halting (n=" + std::to_string(run.n) +
                   ", dim=" + std::to_string(run.subspace_dim) + ")");
            break;
        }
        if (run.iterations > bound) {
            c.fail("iterations " + std::to_string(run.iterations) + " over bound " +
                   std::to_string(bound));
            break;
        }
        worst_frac = std::max(worst_frac, static_cast<double>(run.iterations) /
                                              static_cast<double>(bound));
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "%zu runs halted within 9(m+1)^2 n; tightest run used %.1f%% of its bound",
                  data.runs.size(), 100.0 * worst_frac);
    c.detail = buf + (c.detail.empty() ? "" : "; " + c.detail);
    return c;
}

Criterion criterion_decay(const CorpusData& data) {
    Criterion c;
    if (data.solve_failed) {
        c.fail("solve failed: " + data.failure);
        return c;
    }
    double worst_ls = 0.0, worst_lsp = 0.0;
    for (const CorpusRun& run : data.runs) {
        if (run.kind == ProcedureKind::LSP) {
            worst_lsp = std::max(worst_lsp, run.decay_max);
            continue;
        }
        worst_ls = std::max(worst_ls, run.decay_max);
        if (run.decay_max > 1.0 + 1e-9) {
            c.fail("t*||z_t||^2 reached " + std::to_string(run.decay_max));
            break;
        }
    }
    char buf[160];
    std::snprintf(buf, sizeof buf,
                  "LSVN/LSVNA max t*||z_t||^2 = %.9f (tol 1+1e-9); LSP max %.6f (recorded only)",
                  worst_ls, worst_lsp);
    c.detail = buf + (c.detail.empty() ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------------------
// 5. Counted multiply-adds per update call scale like m^2: log-log slope
//    across m in {5,10,20,40} at fixed n.

Criterion criterion_cost_scaling() {
    Criterion c;
    const std::size_t n = 100;
    const std::size_t ms[] = {5, 10, 20, 40};
    std::vector<double> log_m, log_ops;
    std::string per_m;

    for (std::size_t m : ms) {
        std::uint64_t ops = 0, calls = 0;
        for (std::uint64_t seed = 1; seed <= 3; ++seed) {
            // infeasible side + perceptron steps: long runs, many updates
            const Instance inst = gen_dual_feasible(n, m, seed);
            const OrthonormalBasis q = orthonormalize(inst.basis);
            RunConfig rc;
            rc.kind = ProcedureKind::LSP;
            rc.budget = std::min<std::uint64_t>(iteration_bound(n, m), 40000);
            const BasicResult res = run_basic(q, rc);
            ops += res.trace.counted_ops;
            calls += res.trace.mirr_calls;
        }
        if (calls == 0) {
            c.fail("no update calls at m=" + std::to_string(m));
            return c;
        }
        const double per_call = static_cast<double>(ops) / static_cast<double>(calls);
        log_m.push_back(std::log(static_cast<double>(m)));
        log_ops.push_back(std::log(per_call));
        per_m += (per_m.empty() ? "" : ", ") + std::to_string(m) + ":" +
                 std::to_string(static_cast<std::uint64_t>(per_call));
    }

    const std::size_t k = log_m.size();
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < k; ++i) {
        sx += log_m[i];
        sy += log_ops[i];
        sxx += log_m[i] * log_m[i];
        sxy += log_m[i] * log_ops[i];
    }
    const double slope = (k * sxy - sx * sy) / (k * sxx - sx * sx);
    if (slope > 2.3) c.fail("slope " + std::to_string(slope) + " > 2.3");
    char buf[220];
    std::snprintf(buf, sizeof buf, "log-log slope %.3f (tol 2.3); mean multiply-adds per call {%s}",
                  slope, per_m.c_str());
    c.detail = buf + (c.detail.empty() ? "" : "; " + c.detail);
    return c;
}

// ---------------------------------------------------------------------------
// 6. End to end: 100 primal-feasible and 100 dual-feasible instances decided
//    correctly with independent verification.

Criterion criterion_end_to_end() {
    Criterion c;
    std::uint64_t total_rounds = 0;
    for (int dual = 0; dual < 2 && c.pass; ++dual)
        for (std::uint64_t seed = 1; seed <= 100; ++seed) {
            const Instance inst =
                dual ? gen_dual_feasible(50, 5, seed) : gen_primal_feasible(50, 5, seed);
            SolveConfig cfg;
            cfg.procedure = ProcedureKind::LSVNA;
            cfg.max_rounds = 200;
            const SolveOutcome out = solve(inst, cfg);
            total_rounds += out.rounds_used;
            const auto want =
                dual ? SolveOutcome::Verdict::DualStrict : SolveOutcome::Verdict::PrimalStrict;
            if (out.verdict != want) {
                c.fail(std::string(dual ? "dual" : "primal") + " seed " + std::to_string(seed) +
                       " returned " + verdict_name(out.verdict));
                break;
            }
            if (!verify_certificate(inst, out).pass) {
                c.fail(std::string(dual ? "dual" : "primal") + " seed " + std::to_string(seed) +
                       " failed verification");
                break;
            }
        }
    if (c.pass)
        c.detail = "200/200 correct strict verdicts, all independently verified; " +
                   std::to_string(total_rounds) + " total rounds";
    return c;
}

// ---------------------------------------------------------------------------
// 7. Hand-worked vectors, cross-checked by the direct pseudoinverse oracle.

Criterion criterion_hand_vectors() {
    Criterion c;
    auto expect = [&](bool ok, const char* what) {
        if (!ok) c.fail(what);
    };

    {
        // extension: border the pseudoinverse of a single active column
        DenseMatrix pts(3, 2);
        pts.at(1, 0) = 1.0; // points (0,0), (1,0), (0,1)
        pts.at(2, 1) = 1.0;
        auto [x, ab] = cara::init_active(pts, 0);
        cara::extend(ab, pts, 1, cara::affine_dependence(ab, pts, 1));
        const double want[2][3] = {{1, -1, 0}, {0, 1, 0}};
        double gap = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 3; ++j)
                gap = std::max(gap, std::fabs(ab.pinv.at(i, j) - want[i][j]));
        expect(gap <= 1e-12, "extension pinv differs from the hand value");
        const DenseMatrix direct = pseudoinverse_direct(cara::augmented_active_matrix(ab, pts));
        expect(max_abs_diff(ab.pinv, direct) <= 1e-12, "extension pinv differs from the oracle");
    }
    {
        // reduction where the entering index immediately leaves
        DenseMatrix pts(3, 1);
        pts.at(1, 0) = 1.0;
        pts.at(2, 0) = 0.5;
        auto [x, ab] = cara::init_active(pts, 0);
        cara::extend(ab, pts, 1, cara::affine_dependence(ab, pts, 1));
        SimplexPoint xx(3);
        xx.set_weight(0, 0.25);
        xx.set_weight(1, 0.25);
        xx.set_weight(2, 0.5);
        const auto v = cara::affine_dependence(ab, pts, 2);
        expect(!v.independent, "midpoint column should be dependent");
        cara::reduce(ab, pts, xx, 2, v.u_prime);
        expect(std::fabs(xx.weight(0) - 0.5) <= 1e-12 && std::fabs(xx.weight(1) - 0.5) <= 1e-12 &&
                   xx.weight(2) == 0.0,
               "no-pivot reduction x+ differs from (1/2, 1/2, 0)");
        expect(ab.basis == std::vector<std::size_t>{0, 1}, "no-pivot reduction changed the basis");
    }
    {
        // reduction with a pivot: basis member 1 is replaced by the entering 3
        DenseMatrix pts(3, 1);
        pts.at(1, 0) = 1.0;
        pts.at(2, 0) = 2.0;
        auto [x, ab] = cara::init_active(pts, 0);
        cara::extend(ab, pts, 1, cara::affine_dependence(ab, pts, 1));
        SimplexPoint xx(3);
        xx.set_weight(0, 0.125);
        xx.set_weight(1, 0.5);
        xx.set_weight(2, 0.375);
        const auto v = cara::affine_dependence(ab, pts, 2);
        expect(!v.independent, "collinear column should be dependent");
        const auto out = cara::reduce(ab, pts, xx, 2, v.u_prime);
        expect(std::fabs(out.theta - 0.125) <= 1e-12, "pivot reduction theta differs from 1/8");
        expect(out.replaced && out.i_star == 0, "pivot position differs");
        expect(ab.basis == std::vector<std::size_t>{2, 1}, "pivot basis differs from [3,2]");
        const double want[2][2] = {{-1, 1}, {2, -1}};
        double gap = 0.0;
        for (std::size_t i = 0; i < 2; ++i)
            for (std::size_t j = 0; j < 2; ++j)
                gap = std::max(gap, std::fabs(ab.pinv.at(i, j) - want[i][j]));
        expect(gap <= 1e-12, "pivot pinv differs from the hand value");
        expect(std::fabs(xx.weight(1) - 0.75) <= 1e-12 && std::fabs(xx.weight(2) - 0.25) <= 1e-12 &&
                   xx.weight(0) == 0.0,
               "pivot reduction x+ differs from (0, 3/4, 1/4)");
        const DenseMatrix direct = pseudoinverse_direct(cara::augmented_active_matrix(ab, pts));
        expect(max_abs_diff(ab.pinv, direct) <= 1e-12, "pivot pinv differs from the oracle");
    }
    if (c.pass) c.detail = "extension, no-pivot, and pivot cases reproduce within 1e-12";
    return c;
}

} // namespace

int main() {
    std::printf("acceptance suite (kernel backend: %s)\n",
                kernels::backend_name(kernels::active_backend()));

    struct Entry {
        const char* name;
        Criterion result;
    };
    std::vector<Entry> entries;

    entries.push_back(
        {"1. incremental pseudoinverse oracle equivalence", criterion_oracle_equivalence()});

    const CorpusData corpus = run_corpus();
    entries.push_back(
        {"2. limited-support bound m+1 across the corpus", criterion_support_bound(corpus)});
    entries.push_back({"3. halting within 9(m+1)^2 n iterations", criterion_iteration_bound(corpus)});
    entries.push_back({"4. decay ||z_t||^2 <= 1/t for LSVN and LSVNA", criterion_decay(corpus)});
    entries.push_back({"5. per-call update cost scales as m^2", criterion_cost_scaling()});
    entries.push_back({"6. end-to-end feasibility with verification", criterion_end_to_end()});
    entries.push_back({"7. hand-worked update vectors", criterion_hand_vectors()});

    int failures = 0;
    for (const Entry& e : entries) {
        std::printf("[%s] %s: %s\n", e.result.pass ? "PASS" : "FAIL", e.name,
                    e.result.detail.c_str());
        if (!e.result.pass) ++failures;
    }
    if (failures) {
        std::printf("%d criterion(s) failed\n", failures);
        return 1;
    }
    std::printf("all 7 criteria passed\n");
    return 0;
}
