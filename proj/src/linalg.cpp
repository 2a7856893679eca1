#include "carascale/linalg.hpp"

#include <algorithm>
#include <cmath>

#include "carascale/kernels.hpp"

namespace carascale {

namespace ks = kernels::scalar;

double OrthonormalBasis::orthonormality_defect() const {
    double worst = 0.0;
    std::vector<double> col_i(n), col_j(n);
    for (std::size_t i = 0; i < m; ++i) {
        for (std::size_t r = 0; r < n; ++r) col_i[r] = q.at(r, i);
        for (std::size_t j = i; j < m; ++j) {
            for (std::size_t r = 0; r < n; ++r) col_j[r] = q.at(r, j);
            const double g = ks::dot(col_i.data(), col_j.data(), n);
            worst = std::max(worst, std::fabs(g - (i == j ? 1.0 : 0.0)));
        }
    }
    return worst;
}

namespace {

// One MGS sweep of column data `v` (length n) against the accepted columns
// stored contiguously in `qcols` (k columns of length n).
void project_out(std::vector<double>& v, const std::vector<double>& qcols, std::size_t k, std::size_t n) {
    for (std::size_t c = 0; c < k; ++c) {
        const double* qc = qcols.data() + c * n;
        const double coef = ks::dot(qc, v.data(), n);
        ks::axpy(-coef, qc, v.data(), n);
    }
}

DenseMatrix columns_to_matrix(const std::vector<double>& qcols, std::size_t k, std::size_t n) {
    DenseMatrix q(n, k);
    for (std::size_t c = 0; c < k; ++c)
        for (std::size_t r = 0; r < n; ++r) q.at(r, c) = qcols[c * n + r];
    return q;
}

} // namespace

OrthonormalBasis orthonormalize(const DenseMatrix& raw_basis, double tol) {
    const std::size_t n = raw_basis.rows;
    const std::size_t k = raw_basis.cols;
    if (k == 0 || n == 0 || k > n) throw DimensionMismatchError("orthonormalize: need 1 <= cols <= rows");
    if (!raw_basis.all_finite()) throw DimensionMismatchError("orthonormalize: non-finite entries");

    std::vector<double> qcols; // accepted orthonormal columns, contiguous
    qcols.reserve(k * n);
    std::vector<double> v(n);
    for (std::size_t c = 0; c < k; ++c) {
        for (std::size_t r = 0; r < n; ++r) v[r] = raw_basis.at(r, c);
        const double orig_norm = std::sqrt(ks::dot(v.data(), v.data(), n));
        project_out(v, qcols, c, n);
        project_out(v, qcols, c, n); // reorthogonalization pass
        const double res_norm = std::sqrt(ks::dot(v.data(), v.data(), n));
        if (!(res_norm > tol * orig_norm))
            throw RankDeficientError("orthonormalize: column " + std::to_string(c) + " is dependent");
        ks::scal(1.0 / res_norm, v.data(), n);
        qcols.insert(qcols.end(), v.begin(), v.end());
    }

    OrthonormalBasis out;
    out.n = n;
    out.m = k;
    out.q = columns_to_matrix(qcols, k, n);
    return out;
}

DenseMatrix pseudoinverse_direct(const DenseMatrix& m) {
    const std::size_t p = m.rows;
    const std::size_t q = m.cols;
    if (q == 0 || p < q) throw DimensionMismatchError("pseudoinverse_direct: need full column rank, cols <= rows");

    // G = M^T M, then solve G X = M^T by Gauss elimination with partial pivoting.
    DenseMatrix g(q, q);
    for (std::size_t i = 0; i < q; ++i)
        for (std::size_t j = 0; j < q; ++j) {
            double s = 0.0;
            for (std::size_t r = 0; r < p; ++r) s += m.at(r, i) * m.at(r, j);
            g.at(i, j) = s;
        }
    DenseMatrix rhs = m.transposed(); // q x p

    double gmax = 0.0;
    for (double v : g.data) gmax = std::max(gmax, std::fabs(v));
    const double pivot_floor = 1e-13 * std::max(gmax, 1e-300);

    for (std::size_t col = 0; col < q; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < q; ++r)
            if (std::fabs(g.at(r, col)) > std::fabs(g.at(piv, col))) piv = r;
        if (std::fabs(g.at(piv, col)) <= pivot_floor)
            throw RankDeficientError("pseudoinverse_direct: M^T M singular to working precision");
        if (piv != col) {
            for (std::size_t j = 0; j < q; ++j) std::swap(g.at(piv, j), g.at(col, j));
            for (std::size_t j = 0; j < p; ++j) std::swap(rhs.at(piv, j), rhs.at(col, j));
        }
        const double inv_pivot = 1.0 / g.at(col, col);
        for (std::size_t r = 0; r < q; ++r) {
            if (r == col) continue;
            const double f = g.at(r, col) * inv_pivot;
            if (f == 0.0) continue;
            for (std::size_t j = col; j < q; ++j) g.at(r, j) -= f * g.at(col, j);
            for (std::size_t j = 0; j < p; ++j) rhs.at(r, j) -= f * rhs.at(col, j);
        }
        for (std::size_t j = col; j < q; ++j) g.at(col, j) *= inv_pivot;
        for (std::size_t j = 0; j < p; ++j) rhs.at(col, j) *= inv_pivot;
    }
    return rhs;
}

DenseVector positive_part(const DenseVector& v) {
    DenseVector out(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) out[i] = v[i] > 0.0 ? v[i] : 0.0;
    return out;
}

DenseVector project(const OrthonormalBasis& q, const DenseVector& x) {
    if (x.size() != q.n) throw DimensionMismatchError("project: vector length != ambient dimension");
    // z = Q^T x accumulated over rows, then y = Q z.
    DenseVector z(q.m, 0.0);
    for (std::size_t i = 0; i < q.n; ++i) ks::axpy(x[i], q.q.row(i), z.data(), q.m);
    DenseVector y(q.n);
    ks::gemv_rows(q.q.data.data(), q.n, q.m, z.data(), y.data());
    return y;
}

OrthonormalBasis complement_basis(const OrthonormalBasis& q) {
    const std::size_t n = q.n;
    const std::size_t m = q.m;
    if (m >= n) throw DimensionMismatchError("complement_basis: requires m < n");

    // Columns of I - Q Q^T span the complement; pick n-m of them greedily by
    // largest residual (column-pivoted MGS), then reorthogonalize.
    std::vector<std::vector<double>> cand(n, std::vector<double>(n));
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<double>& c = cand[j];
        for (std::size_t i = 0; i < n; ++i) c[i] = 0.0;
        c[j] = 1.0;
        // subtract Q (Q^T e_j); (Q Q^T)_{ij} = <q_i, q_j> over the rows of Q
        const double* qrow = q.q.row(j);
        for (std::size_t i = 0; i < n; ++i) c[i] -= ks::dot(q.q.row(i), qrow, m);
    }

    std::vector<double> norms_sq(n);
    for (std::size_t j = 0; j < n; ++j) norms_sq[j] = ks::dot(cand[j].data(), cand[j].data(), n);

    const std::size_t want = n - m;
    std::vector<double> qcols;
    qcols.reserve(want * n);
    std::vector<char> used(n, 0);
    for (std::size_t step = 0; step < want; ++step) {
        std::size_t best = n;
        double best_norm = -1.0;
        for (std::size_t j = 0; j < n; ++j)
            if (!used[j] && norms_sq[j] > best_norm) {
                best_norm = norms_sq[j];
                best = j;
            }
        std::vector<double>& v = cand[best];
        used[best] = 1;
        // full reorthogonalization of the winner against accepted columns
        project_out(v, qcols, step, n);
        const double nv = std::sqrt(ks::dot(v.data(), v.data(), n));
        ks::scal(1.0 / nv, v.data(), n);
        qcols.insert(qcols.end(), v.begin(), v.end());
        // downdate remaining candidates against the accepted column
        const double* qc = qcols.data() + step * n;
        for (std::size_t j = 0; j < n; ++j) {
            if (used[j]) continue;
            const double coef = ks::dot(qc, cand[j].data(), n);
            ks::axpy(-coef, qc, cand[j].data(), n);
            norms_sq[j] = ks::dot(cand[j].data(), cand[j].data(), n);
        }
    }

    OrthonormalBasis out;
    out.n = n;
    out.m = want;
    out.q = columns_to_matrix(qcols, want, n);
    return out;
}

} // namespace carascale
