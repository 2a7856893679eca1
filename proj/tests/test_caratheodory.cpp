#include "carascale/caratheodory.hpp"

#include <cmath>

#include "carascale/errors.hpp"
#include "carascale/kernels.hpp"
#include "carascale/linalg.hpp"
#include "carascale/rng.hpp"
#include "doctest.h"
#include "test_util.hpp"

using namespace carascale;
using namespace carascale::caratheodory;
using test_util::from_rows;

namespace {

// A x = sum over the support of x_i a_i; cheap because supports stay small.
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

// Incremental pinv against the direct oracle, entrywise.
double oracle_gap(const ActiveBasis& ab, const DenseMatrix& pts) {
    const DenseMatrix direct = pseudoinverse_direct(augmented_active_matrix(ab, pts));
    return max_abs_diff(ab.pinv, direct);
}

} // namespace

TEST_CASE("init_active: single-column pseudoinverse") {
    const DenseMatrix pts = from_rows({{0.0}, {1.0}, {0.5}});
    auto [x, ab] = init_active(pts, 0);
    CHECK(ab.basis == std::vector<std::size_t>{0});
    CHECK(ab.pinv.rows == 1);
    CHECK(ab.pinv.at(0, 0) == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(ab.pinv.at(0, 1) == 0.0);
    CHECK(x.weight(0) == 1.0);
    CHECK(x.support().size() == 1);

    // pinv * ã_i = 1 and the consistency report is clean for any start index
    for (std::size_t i = 0; i < 3; ++i) {
        auto [xi, abi] = init_active(pts, i);
        const DenseVector z = represented_point(pts, xi);
        const ConsistencyReport rep = check_consistency(abi, pts, xi, z);
        CHECK(rep.pinv_identity_err <= 1e-12);
        CHECK(rep.reconstruction_err <= 1e-12);
        CHECK(rep.simplex_defect == 0.0);
        CHECK(rep.support_in_basis);
        CHECK(rep.size_ok);
    }
}

TEST_CASE("affine_dependence: independent and dependent hand cases") {
    SUBCASE("orthogonal-ish points are independent") {
        const DenseMatrix pts = from_rows({{0, 0}, {1, 0}, {0, 1}});
        auto [x, ab] = init_active(pts, 0);
        const DependenceVerdict v = affine_dependence(ab, pts, 1);
        REQUIRE(v.independent);
        CHECK(v.residual_sq == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(v.residual[0] == doctest::Approx(0.0));
        CHECK(v.residual[1] == doctest::Approx(1.0));
        CHECK(v.residual[2] == doctest::Approx(0.0));
        // residual is orthogonal to the active columns
        CHECK(std::fabs(v.residual[0] * 1.0 + v.residual[1] * 0.0 + v.residual[2] * 0.0) <= 1e-14);
    }
    SUBCASE("midpoint of two active points is dependent with u' = (1/2, 1/2)") {
        const DenseMatrix pts = from_rows({{0.0}, {1.0}, {0.5}});
        auto [x, ab] = init_active(pts, 0);
        extend(ab, pts, 1, affine_dependence(ab, pts, 1));
        const DependenceVerdict v = affine_dependence(ab, pts, 2);
        REQUIRE(!v.independent);
        CHECK(v.u_prime[0] == doctest::Approx(0.5).epsilon(1e-12));
        CHECK(v.u_prime[1] == doctest::Approx(0.5).epsilon(1e-12));
    }
    SUBCASE("duplicate of an active point gives a unit u'") {
        const DenseMatrix pts = from_rows({{0.25, 1.0}, {0.75, -1.0}, {0.75, -1.0}});
        auto [x, ab] = init_active(pts, 0);
        extend(ab, pts, 1, affine_dependence(ab, pts, 1));
        const DependenceVerdict v = affine_dependence(ab, pts, 2);
        REQUIRE(!v.independent);
        CHECK(v.u_prime[0] == doctest::Approx(0.0).epsilon(1e-12));
        CHECK(v.u_prime[1] == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("extend: bordered pseudoinverse matches the hand value and the oracle") {
    const DenseMatrix pts = from_rows({{0, 0}, {1, 0}, {0, 1}});
    auto [x, ab] = init_active(pts, 0);

    extend(ab, pts, 1, affine_dependence(ab, pts, 1));
    REQUIRE(ab.basis == std::vector<std::size_t>{0, 1});
    const double want[2][3] = {{1, -1, 0}, {0, 1, 0}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 3; ++j)
            CHECK(std::fabs(ab.pinv.at(i, j) - want[i][j]) <= 1e-12);
    CHECK(oracle_gap(ab, pts) <= 1e-12);

    extend(ab, pts, 2, affine_dependence(ab, pts, 2));
    REQUIRE(ab.basis.size() == 3);
    const DenseMatrix prod = matmul(ab.pinv, augmented_active_matrix(ab, pts));
    CHECK(max_abs_diff(prod, DenseMatrix::identity(3)) <= 1e-12);
    CHECK(oracle_gap(ab, pts) <= 1e-8);
}

TEST_CASE("reduce: entering index leaves again (no pivot)") {
    const DenseMatrix pts = from_rows({{0.0}, {1.0}, {0.5}});
    auto [x, ab] = init_active(pts, 0);
    extend(ab, pts, 1, affine_dependence(ab, pts, 1));

    SimplexPoint xx(3);
    xx.set_weight(0, 0.25);
    xx.set_weight(1, 0.25);
    xx.set_weight(2, 0.5);
    const DenseVector before = represented_point(pts, xx);
    CHECK(before[0] == doctest::Approx(0.5));

    const DependenceVerdict v = affine_dependence(ab, pts, 2);
    REQUIRE(!v.independent);
    const ReductionOutcome out = reduce(ab, pts, xx, 2, v.u_prime);

    CHECK(out.theta == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(out.i_star == 2); // position of j in [B, j]
    CHECK(!out.replaced);
    CHECK(ab.basis == std::vector<std::size_t>{0, 1});
    CHECK(std::fabs(xx.weight(0) - 0.5) <= 1e-12);
    CHECK(std::fabs(xx.weight(1) - 0.5) <= 1e-12);
    CHECK(xx.weight(2) == 0.0); // zeroed exactly
    CHECK(vec_dist(represented_point(pts, xx), before) <= 1e-12);
}

TEST_CASE("reduce: pivot replaces a basis member and repairs the pseudoinverse") {
    const DenseMatrix pts = from_rows({{0.0}, {1.0}, {2.0}});
    auto [x, ab] = init_active(pts, 0);
    extend(ab, pts, 1, affine_dependence(ab, pts, 1));

    SimplexPoint xx(3);
    xx.set_weight(0, 0.125);
    xx.set_weight(1, 0.5);
    xx.set_weight(2, 0.375);
    const DenseVector before = represented_point(pts, xx);
    CHECK(before[0] == doctest::Approx(1.25));

    const DependenceVerdict v = affine_dependence(ab, pts, 2);
    REQUIRE(!v.independent);
    CHECK(v.u_prime[0] == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(v.u_prime[1] == doctest::Approx(2.0).epsilon(1e-12));

    const ReductionOutcome out = reduce(ab, pts, xx, 2, v.u_prime);
    CHECK(out.theta == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(out.i_star == 0);
    CHECK(out.replaced);
    CHECK(ab.basis == std::vector<std::size_t>{2, 1});

    const double want[2][2] = {{-1, 1}, {2, -1}};
    for (std::size_t i = 0; i < 2; ++i)
        for (std::size_t j = 0; j < 2; ++j)
            CHECK(std::fabs(ab.pinv.at(i, j) - want[i][j]) <= 1e-12);

    CHECK(xx.weight(0) == 0.0);
    CHECK(std::fabs(xx.weight(1) - 0.75) <= 1e-12);
    CHECK(std::fabs(xx.weight(2) - 0.25) <= 1e-12);
    CHECK(vec_dist(represented_point(pts, xx), before) <= 1e-12);
    CHECK(oracle_gap(ab, pts) <= 1e-12);
}

TEST_CASE("reduce: entering index carrying zero weight is a fixed point") {
    const DenseMatrix pts = from_rows({{0.0}, {1.0}, {0.5}});
    auto [x, ab] = init_active(pts, 0);
    extend(ab, pts, 1, affine_dependence(ab, pts, 1));

    SimplexPoint xx(3);
    xx.set_weight(0, 0.5);
    xx.set_weight(1, 0.5);
    const DependenceVerdict v = affine_dependence(ab, pts, 2);
    const ReductionOutcome out = reduce(ab, pts, xx, 2, v.u_prime);
    CHECK(out.theta == 0.0);
    CHECK(out.i_star == 2);
    CHECK(xx.weight(0) == doctest::Approx(0.5));
    CHECK(xx.weight(1) == doctest::Approx(0.5));
    CHECK(ab.basis == std::vector<std::size_t>{0, 1});
}

TEST_CASE("mirr: dispatches to both paths and keeps the support bounded") {
    const DenseMatrix pts = from_rows({{0, 0}, {1, 0}, {0, 1}, {0.5, 0.5}, {0.25, 0.25}});
    auto [x, ab] = init_active(pts, 0);

    // independent path
    auto mo = mirr(ab, pts, x, 1);
    CHECK(mo.extended);
    mo = mirr(ab, pts, x, 2);
    CHECK(mo.extended);
    CHECK(ab.basis.size() == 3); // = m+1: full

    // any further index must take the dependent path (dimension count)
    SimplexPoint& xr = x;
    xr.set_weight(0, 0.5);
    xr.set_weight(1, 0.25);
    xr.set_weight(2, 0.25);
    mo = mirr(ab, pts, xr, 3);
    CHECK(!mo.extended);
    CHECK(ab.basis.size() <= 3);
    mo = mirr(ab, pts, xr, 4);
    CHECK(!mo.extended);
    CHECK(ab.basis.size() <= 3);
}

TEST_CASE("check_consistency flags a corrupted pseudoinverse") {
    const DenseMatrix pts = from_rows({{0, 0}, {1, 0}, {0, 1}});
    auto [x, ab] = init_active(pts, 0);
    extend(ab, pts, 1, affine_dependence(ab, pts, 1));

    const DenseVector z = represented_point(pts, x);
    CHECK(check_consistency(ab, pts, x, z).within(1e-8));

    ab.pinv.at(0, 1) += 1e-3;
    CHECK(!check_consistency(ab, pts, x, z).within(1e-6));
}

TEST_CASE("mirr: drift probe triggers refactorization") {
    CounterRng rng(5);
    const DenseMatrix pts = test_util::random_matrix(rng, 8, 3);
    auto [x, ab] = init_active(pts, 0);
    for (std::size_t j : {1u, 2u, 3u}) mirr(ab, pts, x, j);
    REQUIRE(ab.stats.refactorizations == 0);

    ab.pinv.at(0, 0) += 1e-2; // corrupt
    // a zero-weight entering index is legal input; the probe fires afterwards
    mirr(ab, pts, x, 5);
    CHECK(ab.stats.refactorizations >= 1);
    const DenseVector z = represented_point(pts, x);
    CHECK(check_consistency(ab, pts, x, z).within(1e-8));
}

TEST_CASE("mirr: singular active matrix surfaces as NumericalBreakdown") {
    // two identical points forced into the basis, pinv zeroed: the probe
    // fails, refactorization hits a rank-deficient matrix
    const DenseMatrix pts = from_rows({{1, 0}, {1, 0}, {0, 1}, {0.5, 0.5}});
    auto [x, ab] = init_active(pts, 0);
    ab.basis = {0, 1};
    ab.pinv = DenseMatrix(2, 3, 0.0);
    SimplexPoint xx(4);
    xx.set_weight(0, 0.5);
    xx.set_weight(1, 0.5);
    CHECK_THROWS_AS(mirr(ab, pts, xx, 2), NumericalBreakdownError);
}

TEST_CASE("mirr: random walk preserves every invariant against the oracle") {
    CounterRng rng(99);
    for (int seq = 0; seq < 5; ++seq) {
        const std::size_t m = 2 + rng.next_below(7);
        const std::size_t n = m + 3 + rng.next_below(30);
        const DenseMatrix pts = test_util::random_matrix(rng, n, m);

        auto [x, ab] = init_active(pts, rng.next_below(n));
        for (int step = 0; step < 400; ++step) {
            std::size_t j;
            do {
                j = rng.next_below(n);
            } while (std::find(ab.basis.begin(), ab.basis.end(), j) != ab.basis.end());

            // simplex step toward e_j keeps support within B + {j}
            const double theta = rng.next_uniform(0.05, 0.95);
            x.scale_all(1.0 - theta);
            x.add_weight(j, theta);

            const DenseVector before = represented_point(pts, x);
            mirr(ab, pts, x, j);
            const DenseVector after = represented_point(pts, x);

            const double before_norm = std::sqrt(kernels::scalar::dot(before.data(), before.data(), m));
            CHECK(vec_dist(before, after) <= 1e-10 * (1.0 + before_norm));
            CHECK(ab.basis.size() <= m + 1);
            CHECK(std::fabs(x.sum() - 1.0) <= 1e-10);
            for (std::size_t idx : x.support())
                CHECK(std::find(ab.basis.begin(), ab.basis.end(), idx) != ab.basis.end());
            x.renormalize();
        }
        CHECK(oracle_gap(ab, pts) <= 1e-8);
    }
}

TEST_CASE("mirr: counted cost stays within C*(m+1)^2 with C measured at m=5") {
    CounterRng rng(123);
    auto max_call_cost = [&](std::size_t m) {
        const std::size_t n = 4 * m;
        const DenseMatrix pts = test_util::random_matrix(rng, n, m);
        auto [x, ab] = init_active(pts, 0, RefactorPolicy::disabled());
        for (int step = 0; step < 600; ++step) {
            std::size_t j;
            do {
                j = rng.next_below(n);
            } while (std::find(ab.basis.begin(), ab.basis.end(), j) != ab.basis.end());
            const double theta = rng.next_uniform(0.05, 0.95);
            x.scale_all(1.0 - theta);
            x.add_weight(j, theta);
            mirr(ab, pts, x, j);
            x.renormalize();
        }
        return ab.stats.max_call_multiply_adds;
    };

    const double c = static_cast<double>(max_call_cost(5)) / 36.0;
    for (std::size_t m : {10u, 20u}) {
        const double bound = c * static_cast<double>((m + 1) * (m + 1));
        CHECK(static_cast<double>(max_call_cost(m)) <= bound * 1.05);
    }
}
