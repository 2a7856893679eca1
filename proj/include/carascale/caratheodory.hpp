#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "carascale/dense.hpp"
#include "carascale/simplex_point.hpp"

// Incremental maintenance of an affinely independent convex representation.
//
// The generator points a_1..a_n live in R^m and are stored one per ROW of an
// n x m matrix (for the solver this is literally Q, whose row i is the i-th
// column of Q^T). The augmented point is ã_i = (1, a_i) in R^{m+1}; the
// active basis B keeps the pseudoinverse of the augmented active matrix
// Ã_B = [ã_{B(1)} ... ã_{B(k)}] cached, so that absorbing one new index into
// the representation costs O(m^2) instead of a fresh O(m^3) factorization.

namespace carascale::caratheodory {

/// Residual threshold, relative to ||ã_j||^2, below which a candidate column
/// counts as affinely dependent on the active set.
constexpr double kDependenceTol = 1e-12;

struct RefactorPolicy {
    bool enabled = true;
    std::uint64_t period = 0;  // full rebuild every `period` updates; 0 = pick 10*n at init
    double drift_tol = 1e-6;   // per-call probe threshold triggering a rebuild

    static RefactorPolicy disabled() { return {false, 0, 1e-6}; }
};

/// Multiply-add counts are tallied from loop trip counts, independent of the
/// kernel backend, so cost assertions are exact and reproducible.
struct MirrStats {
    std::uint64_t calls = 0;
    std::uint64_t multiply_adds = 0;
    std::uint64_t max_call_multiply_adds = 0;
    std::uint64_t extend_events = 0;
    std::uint64_t reduce_events = 0;
    std::uint64_t refactorizations = 0;
};

struct DependenceVerdict {
    bool independent = false;
    DenseVector u_prime;  // Ã_B^† ã_j, length k
    DenseVector residual; // ã_j - Ã_B u', length m+1 (meaningful when independent)
    double residual_sq = 0.0;
    double aug_norm_sq = 0.0; // ||ã_j||^2
};

struct ActiveBasis {
    std::vector<std::size_t> basis; // B, ordered
    DenseMatrix pinv;               // k x (m+1), the cached Ã_B^†
    std::size_t point_dim = 0;      // m
    RefactorPolicy policy;
    MirrStats stats;

    std::size_t size() const { return basis.size(); }

    // internal bookkeeping
    std::uint64_t updates_since_refactor = 0;
    std::size_t probe_cursor = 0;
    // scratch reused across calls; owned by the single run using this state
    DenseVector scratch_aug, scratch_u, scratch_w;
    DependenceVerdict scratch_verdict;
};

struct ReductionOutcome {
    double theta = 0.0;
    std::size_t i_star = 0; // position in B' = [B, j]
    bool replaced = false;  // true when a member of B left (B(i_star) := j)
};

struct MirrOutcome {
    bool extended = false;
    ReductionOutcome reduction; // valid when !extended
};

/// x = e_i, B = [i], pinv = ã_i^T / ||ã_i||^2.
std::pair<SimplexPoint, ActiveBasis> init_active(const DenseMatrix& pts, std::size_t i,
                                                 RefactorPolicy policy = {});

/// Classify ã_j against range(Ã_B) via u' = pinv ã_j and the residual
/// r = ã_j - Ã_B u'. O(m^2).
DependenceVerdict affine_dependence(const ActiveBasis& ab, const DenseMatrix& pts, std::size_t j);

/// Append j to B and border the pseudoinverse:
/// pinv⁺ = [pinv; 0] - [u'; -1] r^T / ||r||^2. Requires an Independent
/// verdict for (ab, j) and |B| <= m.
void extend(ActiveBasis& ab, const DenseMatrix& pts, std::size_t j, const DependenceVerdict& verdict);

/// Carathéodory step for a dependent ã_j: with u = (u', -1) over B' = [B, j],
/// move x by theta = min_{u_i<0} (-x_{B'(i)}/u_i) along u, zeroing position
/// i_star exactly. When a basis member departs, B(i_star) := j and pinv is
/// repaired by one Gauss-Jordan pivot on [pinv | u'].
ReductionOutcome reduce(ActiveBasis& ab, const DenseMatrix& pts, SimplexPoint& x, std::size_t j,
                        const DenseVector& u_prime);

/// One representation-reduction update: dispatches to extend or reduce and
/// runs the drift guard. Requires j not in B and support(x) within B + {j}.
/// Throws NumericalBreakdownError when the active matrix cannot be repaired.
MirrOutcome mirr(ActiveBasis& ab, const DenseMatrix& pts, SimplexPoint& x, std::size_t j);

struct ConsistencyReport {
    double pinv_identity_err = 0.0;  // ||pinv Ã_B - I||_max
    double reconstruction_err = 0.0; // ||Ã_B (pinv (1,z)) - (1,z)||
    double simplex_defect = 0.0;     // |sum x - 1|
    bool support_in_basis = true;
    bool size_ok = true;

    double worst_residual() const { return std::max(pinv_identity_err, reconstruction_err); }
    bool within(double tol) const {
        return worst_residual() <= tol && simplex_defect <= tol && support_in_basis && size_ok;
    }
};

ConsistencyReport check_consistency(const ActiveBasis& ab, const DenseMatrix& pts, const SimplexPoint& x,
                                    const DenseVector& z);

/// Direct O(m^3) rebuild of pinv from the augmented active matrix. Throws
/// RankDeficientError if the active columns lost independence.
void refactorize(ActiveBasis& ab, const DenseMatrix& pts);

/// Ã_B as an explicit (m+1) x k matrix, for oracle comparisons.
DenseMatrix augmented_active_matrix(const ActiveBasis& ab, const DenseMatrix& pts);

} // namespace carascale::caratheodory
