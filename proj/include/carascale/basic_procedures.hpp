#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "carascale/caratheodory.hpp"
#include "carascale/dense.hpp"
#include "carascale/linalg.hpp"
#include "carascale/simplex_point.hpp"

// Basic procedures: simplex-constrained schemes that drive ||Q^T x|| down
// until either Q Q^T x > 0 (strict solution) or the positive part is small
// enough to certify that a rescaling is warranted. The limited-support
// variants keep the iterate's representation affinely independent through
// the incremental reduction in caratheodory, bounding the support by m+1;
// the baseline variants run the same steps with an unconstrained support.

namespace carascale {

enum class ProcedureKind {
    LSP,  // limited support, perceptron step 1/(t+1)
    LSVN, // limited support, exact line search
    LSVNA, // limited support, exact line search with away steps
    BaselinePerceptron,
    BaselineVonNeumann,
    BaselineVNAway,
};

bool is_limited_support(ProcedureKind kind);
const char* procedure_name(ProcedureKind kind);
std::optional<ProcedureKind> procedure_from_name(std::string_view name);

/// 9 (m+1)^2 n, the guaranteed halting horizon for the limited-support runs.
std::uint64_t iteration_bound(std::size_t n, std::size_t m);

struct StoppingPolicy {
    double eps = 0.0;                // 1/(3 sqrt(n)); 0 means derive from n
    double strict_tol = 0.0;         // strict means every entry > strict_tol
    double certificate_slack = 1e-15; // absolute slack on the certificate comparison

    static StoppingPolicy for_dim(std::size_t n);
};

enum class StateVerdict { Strict, Certificate, Continue };

struct StateEval {
    DenseVector y;     // y_i = <q_i, z> = (P x)_i; length n
    StateVerdict verdict = StateVerdict::Continue;
    std::size_t j_min = 0; // smallest index attaining min_i y_i
    double min_entry = 0.0;
    double pos_norm = 0.0; // ||y^+||
    double x_inf = 0.0;    // ||x||_inf
};

/// Classify the current iterate: Strict when min_i (P x)_i > strict_tol,
/// Certificate when ||(P x)^+|| <= eps ||x||_inf, Continue otherwise.
StateEval evaluate_state(const OrthonormalBasis& q, const SimplexPoint& x, const DenseVector& z,
                         const StoppingPolicy& policy);

/// Perceptron step length 1/(t+1).
double step_perceptron(std::uint64_t t);

/// Exact line search for min_theta ||z + theta (q_j - z)||^2 over [0,1]:
/// theta = clamp(<z, z - q_j> / ||z - q_j||^2, 0, 1); 0 when the direction
/// is degenerate (||q_j - z||^2 <= 1e-24).
double step_linesearch(const DenseVector& z, const double* q_j, std::size_t m);

struct StepChoice {
    enum class Kind { Regular, Away };
    Kind kind = Kind::Regular;
    std::size_t j = 0;      // toward vertex, argmin over all of <q_i, z>
    std::size_t k = 0;      // away vertex, argmax over support(x) of <q_i, z>
    double theta = 0.0;     // in [0, theta_max]
    double theta_max = 1.0; // 1 for regular, x_k/(1 - x_k) for away
};

/// Away-step selection: regular when ||z||^2 - <q_j,z> > <q_k,z> - ||z||^2,
/// else away; theta by clamped exact line search along the chosen direction.
StepChoice choose_direction_away(const OrthonormalBasis& q, const SimplexPoint& x, const DenseVector& z,
                                 double z_sq, const StateEval& eval);

struct Trace {
    static constexpr std::uint64_t kNone = ~std::uint64_t{0};

    std::uint64_t iterations = 0; // t at halt
    std::size_t max_support = 0;
    std::uint64_t mirr_calls = 0;
    std::uint64_t counted_ops = 0; // mirr multiply-adds, tallied from loop sizes
    std::uint64_t max_call_ops = 0;
    std::uint64_t extend_events = 0;
    std::uint64_t reduce_events = 0;
    std::uint64_t refactorizations = 0;
    std::uint64_t away_steps = 0;
    std::uint64_t first_reduce_iteration = kNone;
    double final_z_sq = 0.0;
    double decay_max = 0.0;      // max over t >= 1 of t * ||z_t||^2
    double max_z_residual = 0.0; // filled when RunConfig::validate
    std::vector<double> z_sq_history; // ||z_t||^2 per t, when RunConfig::record_history
};

struct RunConfig {
    ProcedureKind kind = ProcedureKind::LSVN;
    StoppingPolicy policy;  // eps = 0 derives 1/(3 sqrt(n))
    std::uint64_t budget = 0; // 0 derives iteration_bound(n, m)
    bool record_history = false;
    bool validate = false; // recompute Q^T x each iteration and track drift (tests)
    caratheodory::RefactorPolicy refactor;
};

struct BasicResult {
    enum class Outcome { StrictSolution, RescaleCertificate, BudgetExhausted };
    Outcome outcome = Outcome::BudgetExhausted;
    SimplexPoint x;
    DenseVector y; // P x at the final iterate
    Trace trace;

    BasicResult() : x(0) {}
};

/// Limited-support kinds (LSP, LSVN, LSVNA). Throws NumericalBreakdownError
/// when the active set cannot be repaired or the run stalls.
BasicResult run_basic(const OrthonormalBasis& q, const RunConfig& cfg);

/// Baseline kinds; same loop without any active-set maintenance.
BasicResult run_baseline(const OrthonormalBasis& q, const RunConfig& cfg);

} // namespace carascale
