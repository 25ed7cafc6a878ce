#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <Eigen/Dense>

#include "cellia/errors.hpp"
#include "cellia/numerics.hpp"
#include "cellia/random.hpp"

using namespace cellia;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;

namespace {
Mat random_matrix(Eigen::Index r, Eigen::Index c, std::uint64_t seed) {
    return GaussianStream(seed).matrix(r, c);
}
}  // namespace

TEST_CASE("tolerance policy bounds") {
    CHECK_THROWS(TolerancePolicy(0.0, 1e-8));
    CHECK_THROWS(TolerancePolicy(1e-8, 0.5));
    CHECK_NOTHROW(TolerancePolicy(1e-9, 1e-7));
}

TEST_CASE("numerical rank basics") {
    CHECK(numerical_rank(random_matrix(4, 3, 1)) == 3);
    CHECK(numerical_rank(Mat::Zero(5, 5)) == 0);

    // [H1 | -H2] with generic 4x3 blocks has full row rank 4.
    Mat h1 = random_matrix(4, 3, 2), h2 = random_matrix(4, 3, 3);
    Mat stacked(4, 6);
    stacked << h1, -h2;
    CHECK(numerical_rank(stacked) == 4);
}

TEST_CASE("rank is scale invariant") {
    const Mat a = random_matrix(6, 4, 5) * random_matrix(4, 7, 6);  // rank 4
    for (double c : {1e-3, 1e-1, 1.0, 1e2, 1e3}) {
        CHECK(numerical_rank(c * a) == 4);
        CHECK(numerical_rank(std::complex<double>(0.0, c) * a) == 4);
    }
}

TEST_CASE("nullspace basis") {
    const Mat a = random_matrix(4, 6, 7);
    const Mat z = nullspace_basis(a);
    REQUIRE(z.cols() == 2);
    CHECK((z.adjoint() * z - Mat::Identity(2, 2)).norm() < 1e-12);
    for (Eigen::Index c = 0; c < z.cols(); ++c)
        CHECK((a * z.col(c)).norm() / z.col(c).norm() <= 1e-8);

    CHECK(nullspace_basis(random_matrix(2, 3, 8)).cols() == 1);  // ZF case M=3, N=2
    CHECK(nullspace_basis(random_matrix(5, 5, 9)).cols() == 0);
}

TEST_CASE("rank-nullity over random shapes including rank-deficient ones") {
    GaussianStream shapes(42);
    for (std::uint64_t s = 0; s < 12; ++s) {
        const Eigen::Index m = 2 + static_cast<Eigen::Index>(shapes.uniform() * 7);
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(shapes.uniform() * 7);
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(shapes.uniform() * std::min(m, n));
        const Mat a = random_matrix(m, k, 100 + s) * random_matrix(k, n, 200 + s);
        const int r = numerical_rank(a);
        CHECK(r == std::min<Eigen::Index>(k, std::min(m, n)));
        CHECK(r + nullspace_basis(a).cols() == n);
    }
}

TEST_CASE("solve_homogeneous_random on wide and tall systems") {
    const Mat wide = random_matrix(12, 18, 11);
    const Vec v = solve_homogeneous_random(wide, 5);
    CHECK(v.norm() == doctest::Approx(1.0));
    CHECK((wide * v).norm() / v.norm() <= 1e-8);

    CHECK_THROWS_AS(solve_homogeneous_random(random_matrix(24, 18, 12), 5), NullspaceEmpty);
}

TEST_CASE("zero matrix returns the normalized seeded vector") {
    const Mat zero = Mat::Zero(6, 9);
    const Vec v = solve_homogeneous_random(zero, 77);
    const Vec r = GaussianStream(77).vector(9).normalized();
    CHECK((v - r).norm() < 1e-15);
}

TEST_CASE("projection is idempotent") {
    const Mat a = random_matrix(10, 16, 13);
    const Vec v = solve_homogeneous_random(a, 21);
    const Mat z = nullspace_basis(a);
    const Vec again = z * (z.adjoint() * v);
    CHECK((again - v).norm() / v.norm() <= 1e-10);
}

TEST_CASE("orthogonal complement") {
    Mat e(5, 2);
    e.setZero();
    e(0, 0) = 1.0;
    e(1, 1) = 1.0;
    const Mat q = orth_complement(e);
    REQUIRE(q.cols() == 3);
    CHECK((e.adjoint() * q).norm() <= 1e-10);
    Mat full(5, 5);
    full << e, q;
    CHECK(numerical_rank(full) == 5);

    const Mat v = random_matrix(6, 2, 31);
    const Mat qc = orth_complement(v);
    REQUIRE(qc.cols() == 4);
    CHECK((v.adjoint() * qc).norm() <= 1e-10 * v.norm());
    CHECK((qc.adjoint() * qc - Mat::Identity(4, 4)).norm() < 1e-12);

    // Square full-rank input leaves nothing to span.
    CHECK(orth_complement(random_matrix(4, 4, 32)).cols() == 0);

    Mat deficient(5, 2);
    deficient.col(0) = random_matrix(5, 1, 33);
    deficient.col(1) = 2.0 * deficient.col(0);
    CHECK_THROWS_AS(orth_complement(deficient), RankDeficientInput);
}

TEST_CASE("range basis spans the image") {
    const Mat a = random_matrix(6, 3, 41) * random_matrix(3, 5, 42);  // rank 3
    const Mat b = range_basis(a);
    REQUIRE(b.cols() == 3);
    // Every column of A lies in span(B).
    const Mat resid = a - b * (b.adjoint() * a);
    CHECK(resid.norm() <= 1e-10 * a.norm());
}

TEST_CASE("dense dimension cap") {
    CHECK_THROWS_AS(numerical_rank(Mat::Zero(kMaxDim + 1, 2)), std::invalid_argument);
    CHECK_THROWS_AS(numerical_rank(Mat::Zero(2, 0)), std::invalid_argument);
}
