#pragma once

#include "carascale/dense.hpp"

// Orthonormal bases, projections, and the direct pseudoinverse used as the
// verification oracle. Everything here runs on the scalar reference kernels:
// these routines are the yardstick the fast incremental paths are tested
// against, and the instance generator relies on them being reproducible
// across machines.

namespace carascale {

/// n x m matrix Q with orthonormal columns spanning a subspace L of R^n;
/// the orthogonal projector onto L is Q Q^T. Constructed by orthonormalize()
/// or complement_basis(), which guarantee ||Q^T Q - I||_max <= 1e-10.
struct OrthonormalBasis {
    std::size_t n = 0; // ambient dimension
    std::size_t m = 0; // subspace dimension
    DenseMatrix q;     // n x m, row-major; row i holds the i-th coordinate of every basis vector

    const double* point_row(std::size_t i) const { return q.row(i); } // q_i, the i-th column of Q^T

    /// ||Q^T Q - I||_max, for tests.
    double orthonormality_defect() const;
};

/// Modified Gram-Schmidt with one reorthogonalization pass. Columns of the
/// result span the same subspace as the input columns.
/// Throws RankDeficientError if a column's residual after projection falls
/// below tol times its original norm.
OrthonormalBasis orthonormalize(const DenseMatrix& raw_basis, double tol = 1e-10);

/// (M^T M)^{-1} M^T for full-column-rank M, via Gaussian elimination with
/// partial pivoting on M^T M. Throws RankDeficientError when M^T M is
/// singular to working precision.
DenseMatrix pseudoinverse_direct(const DenseMatrix& m);

/// Componentwise max(v, 0).
DenseVector positive_part(const DenseVector& v);

/// Q Q^T x, the orthogonal projection of x onto span(Q). O(nm).
DenseVector project(const OrthonormalBasis& q, const DenseVector& x);

/// Orthonormal basis of the orthogonal complement: n-m columns with
/// Q^T Qperp = 0. Requires m < n.
OrthonormalBasis complement_basis(const OrthonormalBasis& q);

} // namespace carascale
