#include "semilab/polynomial.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

using namespace semilab;

TEST_CASE("term arithmetic merges and drops zeros") {
    LaurentPolynomial p(2);
    p.add_term({1, 0}, Complex(2.0, 0.0));
    p.add_term({1, 0}, Complex(-2.0, 0.0));
    CHECK(p.is_zero());
    CHECK(p.absolute_degree() == 0);

    p.add_term({1, -2}, Complex(0.5, 1.0));
    CHECK(p.absolute_degree() == 2);
    CHECK(p.coeff_abs_sum() == doctest::Approx(std::hypot(0.5, 1.0)));

    LaurentPolynomial q = LaurentPolynomial::monomial(2, {1, -2}, Complex(0.5, 1.0));
    CHECK(p == q);
    CHECK((q * Complex(2.0, 0.0)).coeff_abs_sum() == doctest::Approx(2.0 * std::hypot(0.5, 1.0)));
}

TEST_CASE("evaluation and products") {
    // (1 + X_0)(1 - X_1) at (2, 3i).
    LaurentPolynomial left(2), right(2);
    left.add_term({0, 0}, 1.0);
    left.add_term({1, 0}, 1.0);
    right.add_term({0, 0}, 1.0);
    right.add_term({0, 1}, -1.0);
    Complex z0(2.0, 0.0), z1(0.0, 3.0);
    Complex expected = (1.0 + z0) * (1.0 - z1);
    CHECK(std::abs((left * right).eval({z0, z1}) - expected) <= 1e-15);

    LaurentPolynomial inv = LaurentPolynomial::monomial(1, {-1}, 1.0);
    CHECK(std::abs(inv.eval({Complex(2.0, 0.0)}) - 0.5) <= 1e-15);
}

TEST_CASE("partition sum equals the product form") {
    for (std::size_t d : {1u, 2u, 3u, 4u}) {
        std::vector<std::size_t> K;
        for (std::size_t i = 0; i < d; ++i) K.push_back(i);
        CHECK(p_k_polynomial(d, K) == p_k_product_form(d, K));
    }
    // Sparse index set inside a larger variable space.
    std::vector<std::size_t> K = {1, 3};
    CHECK(p_k_polynomial(5, K) == p_k_product_form(5, K));
    // Empty K gives the constant 1.
    CHECK(p_k_polynomial(3, {}) == LaurentPolynomial::constant(3, 1.0));
}

TEST_CASE("regular evaluation splits adjoints") {
    ComplexMatrix s0(2, 2), s1(2, 2);
    s0 << Complex(0.1, 0.2), Complex(0.3, 0.0), Complex(0.0, -0.4), Complex(0.5, 0.1);
    s1 << Complex(-0.2, 0.1), Complex(0.0, 0.6), Complex(0.2, 0.0), Complex(0.1, -0.3);

    CHECK(regular_poly_eval(LaurentPolynomial::monomial(2, {1, 0}, 1.0), {s0, s1}).isApprox(s0));
    CHECK(regular_poly_eval(LaurentPolynomial::monomial(2, {-1, 0}, 1.0), {s0, s1})
              .isApprox(s0.adjoint()));
    CHECK(regular_poly_eval(LaurentPolynomial::monomial(2, {2, 1}, 1.0), {s0, s1})
              .isApprox(s0 * s0 * s1));
    // Mixed sign monomial: adjoint block times forward block, ascending order.
    CHECK(regular_poly_eval(LaurentPolynomial::monomial(2, {-2, 1}, 1.0), {s0, s1})
              .isApprox((s0 * s0).adjoint() * s1));
    CHECK(regular_poly_eval(LaurentPolynomial::monomial(2, {-1, -1}, 1.0), {s0, s1})
              .isApprox((s0 * s1).adjoint()));

    // Linearity against the constant.
    LaurentPolynomial p(2);
    p.add_term({0, 0}, 2.0);
    p.add_term({1, 0}, Complex(0.0, -1.0));
    ComplexMatrix expected = 2.0 * ComplexMatrix::Identity(2, 2) + Complex(0.0, -1.0) * s0;
    CHECK(regular_poly_eval(p, {s0, s1}).isApprox(expected));

    CHECK_THROWS_AS(regular_poly_eval(p, {s0}), std::invalid_argument);
}

TEST_CASE("p_K regular evaluation expands into the partition sum") {
    ComplexMatrix s(2, 2), t(2, 2);
    s << Complex(0.3, 0.1), Complex(0.2, 0.0), Complex(0.0, 0.1), Complex(-0.4, 0.2);
    t << Complex(-0.1, 0.3), Complex(0.0, -0.2), Complex(0.4, 0.0), Complex(0.2, 0.2);
    ComplexMatrix one = ComplexMatrix::Identity(2, 2);

    CHECK(regular_poly_eval(p_k_polynomial(1, {0}), {s})
              .isApprox(2.0 * one - s - s.adjoint(), 1e-14));

    // Ordered partition pairs of {0, 1}, each mapped by the adjoint-splitting
    // rule with ascending factors; the matrices do not commute, so this pins
    // the ordering convention.
    ComplexMatrix both_left = one - s.adjoint() - t.adjoint() + t.adjoint() * s.adjoint();
    ComplexMatrix zero_one = one - t - s.adjoint() + s.adjoint() * t;
    ComplexMatrix one_zero = one - s - t.adjoint() + t.adjoint() * s;
    ComplexMatrix both_right = (one - s) * (one - t);
    CHECK(regular_poly_eval(p_k_polynomial(2, {0, 1}), {s, t})
              .isApprox(both_left + zero_one + one_zero + both_right, 1e-13));
}

TEST_CASE("torus supremum") {
    CHECK(torus_sup(LaurentPolynomial::constant(1, Complex(0.0, -3.0)), 16).sup_estimate ==
          doctest::Approx(3.0));
    CHECK(torus_sup(LaurentPolynomial::monomial(1, {1}, 1.0), 16).sup_estimate ==
          doctest::Approx(1.0));

    // 2 - X - X^{-1} has sup 4 at angle pi.
    LaurentPolynomial p(1);
    p.add_term({0}, 2.0);
    p.add_term({1}, -1.0);
    p.add_term({-1}, -1.0);
    TorusSup sup = torus_sup(p, 64, 2);
    CHECK(sup.sup_estimate == doctest::Approx(4.0));
    CHECK(sup.upper_bound >= 4.0);
    CHECK(std::abs(sup.argmax[0] - std::numbers::pi) <= 2.0 * std::numbers::pi / 64.0 + 1e-12);

    for (std::size_t d : {1u, 2u, 3u}) {
        std::vector<std::size_t> K;
        for (std::size_t i = 0; i < d; ++i) K.push_back(i);
        TorusSup pk = torus_sup(p_k_polynomial(d, K), 32, 2);
        CHECK(std::abs(pk.sup_estimate - std::pow(4.0, static_cast<double>(d))) <=
              1e-6 * std::pow(4.0, static_cast<double>(d)));
    }

    CHECK_THROWS_AS(torus_sup(p, 4), std::invalid_argument);
    CHECK_THROWS_AS(torus_sup(p_k_polynomial(5, {0, 1, 2, 3, 4}), 64), std::invalid_argument);
}
