#include "semilab/linalg.hpp"

#include "semilab/util.hpp"

#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

using namespace semilab;

namespace {

ComplexMatrix random_matrix(Eigen::Index n, std::uint64_t seed) {
    auto rng = make_rng(seed, 1001);
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) m(i, j) = Complex(normal(rng), normal(rng));
    }
    return m;
}

}  // namespace

TEST_CASE("matrix exponential matches the high-precision references") {
    ComplexMatrix a(2, 2);
    a << 1.0, 2.0, 3.0, 4.0;
    ComplexMatrix expected(2, 2);
    expected << 51.968956198705003658, 74.73656456700321255,
        112.10484685050481882, 164.07380304920982248;
    CHECK(operator_norm(matrix_exponential(a) - expected) <= 1e-12 * operator_norm(expected));

    ComplexMatrix b(2, 2);
    b << Complex(0.0, 1.0), Complex(1.0, 0.0), Complex(0.0, 0.0), Complex(-1.0, 2.0);
    ComplexMatrix expected_b(2, 2);
    expected_b << Complex(0.5403023058681397174, 0.84147098480789650665),
        Complex(0.093217507986865875214, 0.60017666355550013344), Complex(0.0, 0.0),
        Complex(-0.15309186567422629126, 0.33451182923926224842);
    CHECK(operator_norm(matrix_exponential(b) - expected_b) <= 1e-12 * operator_norm(expected_b));
}

TEST_CASE("matrix exponential closed forms") {
    ComplexMatrix nilpotent(2, 2);
    nilpotent << 0.0, 1.0, 0.0, 0.0;
    for (double t : {0.25, 1.0, 7.5}) {
        ComplexMatrix expected(2, 2);
        expected << 1.0, t, 0.0, 1.0;
        CHECK(operator_norm(matrix_exponential(nilpotent, t) - expected) <= 1e-14 * (1.0 + t));
    }

    ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
    diag(0, 0) = Complex(-0.5, 0.0);
    diag(1, 1) = Complex(0.0, 2.0);
    diag(2, 2) = Complex(1.5, -1.0);
    ComplexMatrix value = matrix_exponential(diag, 0.8);
    for (Eigen::Index i = 0; i < 3; ++i) {
        CHECK(std::abs(value(i, i) - std::exp(0.8 * diag(i, i))) <= 1e-14 * std::abs(value(i, i)));
    }

    CHECK(matrix_exponential(random_matrix(4, 2), 0.0).isApprox(ComplexMatrix::Identity(4, 4), 1e-15));
}

TEST_CASE("matrix exponential satisfies the semigroup law") {
    for (std::uint64_t seed : {3u, 4u, 5u}) {
        ComplexMatrix a = random_matrix(5, seed);
        ComplexMatrix lhs = matrix_exponential(a, 0.7 + 0.9);
        ComplexMatrix rhs = matrix_exponential(a, 0.7) * matrix_exponential(a, 0.9);
        CHECK(operator_norm(lhs - rhs) <= 1e-10 * (1.0 + operator_norm(lhs)));
    }
}

TEST_CASE("matrix exponential overflow is detected") {
    ComplexMatrix a = 1000.0 * ComplexMatrix::Identity(2, 2);
    CHECK_THROWS_AS(matrix_exponential(a, 1000.0), std::overflow_error);
}

TEST_CASE("resolvent inverts lambda - a") {
    ComplexMatrix a = random_matrix(4, 6);
    Complex lambda(3.0, 1.0);
    ComplexMatrix r = resolvent(a, lambda);
    ComplexMatrix residual = (lambda * ComplexMatrix::Identity(4, 4) - a) * r -
                             ComplexMatrix::Identity(4, 4);
    CHECK(operator_norm(residual) <= 1e-12);

    ComplexMatrix scalar(1, 1);
    scalar << Complex(-0.7, 0.3);
    CHECK(std::abs(resolvent(scalar, Complex(2.0, 0.0))(0, 0) - 1.0 / (Complex(2.0, 0.0) - scalar(0, 0))) <=
          1e-15);
}

TEST_CASE("resolvent agrees with the Neumann series for large lambda") {
    ComplexMatrix a = random_matrix(3, 7);
    Complex lambda(50.0, 0.0);
    ComplexMatrix series = ComplexMatrix::Zero(3, 3);
    ComplexMatrix power = ComplexMatrix::Identity(3, 3);
    for (int k = 0; k < 60; ++k) {
        series += power / std::pow(lambda, k + 1);
        power = power * a;
    }
    CHECK(operator_norm(resolvent(a, lambda) - series) <= 1e-12);
}

TEST_CASE("resolvent rejects spectrum points") {
    ComplexMatrix diag = ComplexMatrix::Zero(2, 2);
    diag(0, 0) = Complex(1.0, 0.0);
    diag(1, 1) = Complex(-2.0, 0.0);
    CHECK_THROWS_AS(resolvent(diag, Complex(1.0, 0.0)), std::domain_error);
}

TEST_CASE("positive semidefiniteness verdicts") {
    CHECK(is_positive_semidefinite(ComplexMatrix::Identity(3, 3)).is_psd);
    CHECK(is_positive_semidefinite(ComplexMatrix::Identity(3, 3)).min_eigenvalue ==
          doctest::Approx(1.0));

    ComplexMatrix indefinite = ComplexMatrix::Zero(2, 2);
    indefinite(0, 0) = 1.0;
    indefinite(1, 1) = -1.0;
    PsdVerdict verdict = is_positive_semidefinite(indefinite);
    CHECK_FALSE(verdict.is_psd);
    CHECK(verdict.min_eigenvalue == doctest::Approx(-1.0));

    // 2 - X - X* is PSD for every unitary X.
    for (std::uint64_t seed : {11u, 12u}) {
        ComplexMatrix g = random_matrix(4, seed);
        Eigen::HouseholderQR<ComplexMatrix> qr(g);
        ComplexMatrix u = qr.householderQ() * ComplexMatrix::Identity(4, 4);
        CHECK(is_positive_semidefinite(2.0 * ComplexMatrix::Identity(4, 4) - u - u.adjoint()).is_psd);
    }
}

TEST_CASE("psd verdict agrees with quadratic forms on random Hermitian matrices") {
    auto rng = make_rng(99, 1002);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        ComplexMatrix g = random_matrix(4, 2000 + static_cast<std::uint64_t>(trial));
        ComplexMatrix h = 0.5 * (g + g.adjoint());
        PsdVerdict verdict = is_positive_semidefinite(h);
        double min_quadratic = 0.0;
        for (int probe = 0; probe < 20; ++probe) {
            ComplexVector v(4);
            for (int i = 0; i < 4; ++i) v(i) = Complex(normal(rng), normal(rng));
            v.normalize();
            min_quadratic = std::min(min_quadratic, (v.adjoint() * h * v)(0, 0).real());
        }
        // Sampled quadratic forms can never undercut the true minimum.
        CHECK(min_quadratic >= verdict.min_eigenvalue - 1e-12);
        if (min_quadratic < -1e-6) CHECK_FALSE(verdict.is_psd);
    }
}

TEST_CASE("psd test rejects essentially non-Hermitian input") {
    ComplexMatrix skew(2, 2);
    skew << 0.0, 1.0, -1.0, 0.0;
    CHECK_THROWS_AS(is_positive_semidefinite(skew), std::domain_error);
}

TEST_CASE("operator norm") {
    ComplexMatrix diag = ComplexMatrix::Zero(3, 3);
    diag(0, 0) = 3.0;
    diag(1, 1) = -4.0;
    diag(2, 2) = Complex(0.0, 2.0);
    CHECK(operator_norm(diag) == doctest::Approx(4.0));
    CHECK(operator_norm(ComplexMatrix::Zero(2, 2)) == 0.0);

    // C*-identity: |m|^2 = |m* m|.
    ComplexMatrix m = random_matrix(5, 21);
    CHECK(operator_norm(m) * operator_norm(m) ==
          doctest::Approx(operator_norm(m.adjoint() * m)).epsilon(1e-10));

    CHECK(hermitian_adjoint(m).isApprox(m.adjoint()));
}
