#include "carascale/caratheodory.hpp"

#include <cmath>
#include <limits>

#include "carascale/errors.hpp"
#include "carascale/kernels.hpp"
#include "carascale/linalg.hpp"

namespace carascale::caratheodory {

namespace {

// ã_j = (1, a_j) written into buf (length m+1).
void load_augmented(const DenseMatrix& pts, std::size_t j, DenseVector& buf) {
    const std::size_t m = pts.cols;
    buf.resize(m + 1);
    buf[0] = 1.0;
    const double* row = pts.row(j);
    for (std::size_t c = 0; c < m; ++c) buf[c + 1] = row[c];
}

// out += Ã_B * coeffs, accumulating k augmented columns.
void accumulate_active(const ActiveBasis& ab, const DenseMatrix& pts, const double* coeffs, DenseVector& out) {
    const std::size_t m = pts.cols;
    for (std::size_t p = 0; p < ab.basis.size(); ++p) {
        const double c = coeffs[p];
        out[0] += c;
        kernels::axpy(c, pts.row(ab.basis[p]), out.data() + 1, m);
    }
}

void dependence_into(const ActiveBasis& ab, const DenseMatrix& pts, std::size_t j, DependenceVerdict& v,
                     DenseVector& aug, DenseVector& correction, std::uint64_t* madds) {
    const std::size_t m = pts.cols;
    const std::size_t k = ab.basis.size();
    load_augmented(pts, j, aug);
    v.aug_norm_sq = kernels::nrm2_sq(aug.data(), m + 1);

    v.u_prime.resize(k);
    kernels::gemv_rows(ab.pinv.data.data(), k, m + 1, aug.data(), v.u_prime.data());

    v.residual = aug;
    for (std::size_t p = 0; p < k; ++p) {
        const double c = -v.u_prime[p];
        v.residual[0] += c;
        kernels::axpy(c, pts.row(ab.basis[p]), v.residual.data() + 1, m);
    }
    // one refinement pass: fold the residual's remaining range(Ã_B) component
    // back into u'. Keeps the bordered update accurate over long
    // refactorization-free runs; still O(m^2).
    correction.resize(k);
    kernels::gemv_rows(ab.pinv.data.data(), k, m + 1, v.residual.data(), correction.data());
    for (std::size_t p = 0; p < k; ++p) {
        const double c = correction[p];
        v.u_prime[p] += c;
        v.residual[0] -= c;
        kernels::axpy(-c, pts.row(ab.basis[p]), v.residual.data() + 1, m);
    }
    v.residual_sq = kernels::nrm2_sq(v.residual.data(), m + 1);
    v.independent = v.residual_sq > kDependenceTol * v.aug_norm_sq;
    if (madds) *madds += (m + 1) + 4 * k * (m + 1) + (m + 1);
}

void extend_impl(ActiveBasis& ab, std::size_t j, const DependenceVerdict& v, std::uint64_t* madds) {
    const std::size_t w_len = ab.point_dim + 1;
    const std::size_t k = ab.basis.size();
    ab.scratch_w.resize(w_len);
    const double inv_rr = 1.0 / v.residual_sq;
    for (std::size_t c = 0; c < w_len; ++c) ab.scratch_w[c] = v.residual[c] * inv_rr;
    // pinv⁺ = [pinv; 0] - [u'; -1] w^T
    for (std::size_t p = 0; p < k; ++p) kernels::axpy(-v.u_prime[p], ab.scratch_w.data(), ab.pinv.row(p), w_len);
    ab.pinv.data.insert(ab.pinv.data.end(), ab.scratch_w.begin(), ab.scratch_w.end());
    ab.pinv.rows += 1;
    ab.basis.push_back(j);
    if (madds) *madds += w_len + k * w_len;
}

ReductionOutcome reduce_impl(ActiveBasis& ab, SimplexPoint& x, std::size_t j, const DenseVector& u_prime,
                             std::uint64_t* madds) {
    const std::size_t k = ab.basis.size();
    const std::size_t w_len = ab.point_dim + 1;

    // theta = min over {i : u_i < 0} of -x_{B'(i)} / u_i, smallest position on ties.
    // u = (u', -1), so position k (the entering j) always contributes x_j.
    double theta = std::numeric_limits<double>::infinity();
    std::size_t i_star = k;
    for (std::size_t p = 0; p <= k; ++p) {
        const double u_p = p < k ? u_prime[p] : -1.0;
        if (u_p < 0.0) {
            const std::size_t idx = p < k ? ab.basis[p] : j;
            const double cand = -x.weight(idx) / u_p;
            if (cand < theta) {
                theta = cand;
                i_star = p;
            }
        }
    }

    for (std::size_t p = 0; p <= k; ++p) {
        const std::size_t idx = p < k ? ab.basis[p] : j;
        if (p == i_star) {
            x.set_zero(idx);
            continue;
        }
        const double u_p = p < k ? u_prime[p] : -1.0;
        const double w = x.weight(idx) + theta * u_p;
        x.set_weight(idx, w > 0.0 ? w : 0.0);
    }
    if (madds) *madds += 2 * (k + 1);

    ReductionOutcome out;
    out.theta = theta;
    out.i_star = i_star;
    out.replaced = i_star != k;
    if (out.replaced) {
        // Gauss-Jordan pivot on [pinv | u'] turning column u' into e_{i_star};
        // the pivot u'_{i_star} is negative, hence nonzero.
        const double pivot = u_prime[i_star];
        double* prow = ab.pinv.row(i_star);
        kernels::scal(1.0 / pivot, prow, w_len);
        for (std::size_t p = 0; p < k; ++p) {
            if (p == i_star) continue;
            kernels::axpy(-u_prime[p], prow, ab.pinv.row(p), w_len);
        }
        ab.basis[i_star] = j;
        if (madds) *madds += k * (w_len + 1);
    }
    return out;
}

} // namespace

std::pair<SimplexPoint, ActiveBasis> init_active(const DenseMatrix& pts, std::size_t i, RefactorPolicy policy) {
    const std::size_t n = pts.rows;
    const std::size_t m = pts.cols;
    if (i >= n) throw DimensionMismatchError("init_active: index out of range");
    if (policy.period == 0) policy.period = 10 * n;

    ActiveBasis ab;
    ab.point_dim = m;
    ab.policy = policy;
    ab.basis = {i};
    ab.pinv = DenseMatrix(1, m + 1);
    ab.pinv.data.reserve((m + 1) * (m + 1));

    load_augmented(pts, i, ab.scratch_aug);
    const double norm_sq = kernels::nrm2_sq(ab.scratch_aug.data(), m + 1);
    for (std::size_t c = 0; c <= m; ++c) ab.pinv.at(0, c) = ab.scratch_aug[c] / norm_sq;
    ab.stats.multiply_adds += 2 * (m + 1);

    return {SimplexPoint::unit(n, i), std::move(ab)};
}

DependenceVerdict affine_dependence(const ActiveBasis& ab, const DenseMatrix& pts, std::size_t j) {
    DependenceVerdict v;
    DenseVector aug, correction;
    dependence_into(ab, pts, j, v, aug, correction, nullptr);
    return v;
}

void extend(ActiveBasis& ab, const DenseMatrix& pts, std::size_t j, const DependenceVerdict& verdict) {
    (void)pts;
    extend_impl(ab, j, verdict, nullptr);
}

ReductionOutcome reduce(ActiveBasis& ab, const DenseMatrix& pts, SimplexPoint& x, std::size_t j,
                        const DenseVector& u_prime) {
    (void)pts;
    return reduce_impl(ab, x, j, u_prime, nullptr);
}

DenseMatrix augmented_active_matrix(const ActiveBasis& ab, const DenseMatrix& pts) {
    const std::size_t m = pts.cols;
    const std::size_t k = ab.basis.size();
    DenseMatrix aug(m + 1, k);
    for (std::size_t p = 0; p < k; ++p) {
        aug.at(0, p) = 1.0;
        const double* row = pts.row(ab.basis[p]);
        for (std::size_t c = 0; c < m; ++c) aug.at(c + 1, p) = row[c];
    }
    return aug;
}

void refactorize(ActiveBasis& ab, const DenseMatrix& pts) {
    ab.pinv = pseudoinverse_direct(augmented_active_matrix(ab, pts));
    ab.pinv.data.reserve((ab.point_dim + 1) * (ab.point_dim + 1));
    ab.updates_since_refactor = 0;
    ab.stats.refactorizations += 1;
}

MirrOutcome mirr(ActiveBasis& ab, const DenseMatrix& pts, SimplexPoint& x, std::size_t j) {
    const std::size_t m = ab.point_dim;
    std::uint64_t call_madds = 0;
    for (std::size_t b : ab.basis)
        if (b == j) throw std::invalid_argument("mirr: entering index already in the basis");

    try {
        if (ab.policy.enabled && ab.updates_since_refactor >= ab.policy.period) refactorize(ab, pts);

        DependenceVerdict& v = ab.scratch_verdict;
        dependence_into(ab, pts, j, v, ab.scratch_aug, ab.scratch_u, &call_madds);

        if (v.independent && ab.basis.size() == m + 1) {
            // m+2 augmented vectors in R^{m+1} cannot be independent; the
            // cached pinv has drifted. Rebuild and re-classify.
            refactorize(ab, pts);
            dependence_into(ab, pts, j, v, ab.scratch_aug, ab.scratch_u, &call_madds);
            if (v.independent)
                throw NumericalBreakdownError("mirr: full active set classified independent after rebuild");
        }

        MirrOutcome out;
        if (v.independent) {
            extend_impl(ab, j, v, &call_madds);
            out.extended = true;
            ab.stats.extend_events += 1;
        } else {
            out.reduction = reduce_impl(ab, x, j, v.u_prime, &call_madds);
            ab.stats.reduce_events += 1;
        }

        ab.updates_since_refactor += 1;
        if (ab.policy.enabled) {
            // Rotating one-column probe: verify pinv ã_{B(c)} = e_c for one
            // basis column per call, keeping the guard at O(m^2).
            const std::size_t k = ab.basis.size();
            const std::size_t c = ab.probe_cursor++ % k;
            load_augmented(pts, ab.basis[c], ab.scratch_aug);
            ab.scratch_u.resize(k);
            kernels::gemv_rows(ab.pinv.data.data(), k, m + 1, ab.scratch_aug.data(), ab.scratch_u.data());
            call_madds += k * (m + 1);
            double err = 0.0;
            for (std::size_t p = 0; p < k; ++p)
                err = std::max(err, std::fabs(ab.scratch_u[p] - (p == c ? 1.0 : 0.0)));
            if (err > ab.policy.drift_tol) refactorize(ab, pts);
        }

        ab.stats.calls += 1;
        ab.stats.multiply_adds += call_madds;
        ab.stats.max_call_multiply_adds = std::max(ab.stats.max_call_multiply_adds, call_madds);
        return out;
    } catch (const RankDeficientError& e) {
        throw NumericalBreakdownError(std::string("mirr: refactorization failed: ") + e.what());
    }
}

ConsistencyReport check_consistency(const ActiveBasis& ab, const DenseMatrix& pts, const SimplexPoint& x,
                                    const DenseVector& z) {
    const std::size_t m = ab.point_dim;
    const std::size_t k = ab.basis.size();
    ConsistencyReport rep;

    DenseVector aug(m + 1), y(k);
    for (std::size_t c = 0; c < k; ++c) {
        load_augmented(pts, ab.basis[c], aug);
        kernels::scalar::gemv_rows(ab.pinv.data.data(), k, m + 1, aug.data(), y.data());
        for (std::size_t p = 0; p < k; ++p)
            rep.pinv_identity_err = std::max(rep.pinv_identity_err, std::fabs(y[p] - (p == c ? 1.0 : 0.0)));
    }

    if (z.size() == m) {
        DenseVector target(m + 1);
        target[0] = 1.0;
        for (std::size_t c = 0; c < m; ++c) target[c + 1] = z[c];
        DenseVector coeffs(k);
        kernels::scalar::gemv_rows(ab.pinv.data.data(), k, m + 1, target.data(), coeffs.data());
        DenseVector rebuilt(m + 1, 0.0);
        accumulate_active(ab, pts, coeffs.data(), rebuilt);
        double s = 0.0;
        for (std::size_t c = 0; c <= m; ++c) {
            const double d = rebuilt[c] - target[c];
            s += d * d;
        }
        rep.reconstruction_err = std::sqrt(s);
    }

    rep.simplex_defect = std::fabs(x.sum() - 1.0);
    for (std::size_t idx : x.support()) {
        bool found = false;
        for (std::size_t b : ab.basis)
            if (b == idx) {
                found = true;
                break;
            }
        if (!found) rep.support_in_basis = false;
    }
    rep.size_ok = k <= m + 1;
    return rep;
}

} // namespace carascale::caratheodory
