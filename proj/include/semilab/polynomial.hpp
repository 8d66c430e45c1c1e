#pragma once

#include "semilab/linalg.hpp"

#include <map>
#include <vector>

namespace semilab {

/// Laurent polynomial in several commuting variables with complex
/// coefficients; zero coefficients are never stored.
class LaurentPolynomial {
public:
    using ExponentVector = std::vector<int>;
    using TermMap = std::map<ExponentVector, Complex>;

    explicit LaurentPolynomial(std::size_t vars = 0) : vars_(vars) {}

    static LaurentPolynomial constant(std::size_t vars, Complex c);
    static LaurentPolynomial monomial(std::size_t vars, const ExponentVector& exponents, Complex c);

    std::size_t vars() const { return vars_; }
    const TermMap& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const ExponentVector& exponents, Complex c);

    /// Max over terms of max_i |n_i|; zero polynomial has degree 0.
    int absolute_degree() const;
    double coeff_abs_sum() const;

    Complex eval(const std::vector<Complex>& z) const;

    LaurentPolynomial& operator+=(const LaurentPolynomial& other);
    LaurentPolynomial& operator-=(const LaurentPolynomial& other);
    LaurentPolynomial operator*(const LaurentPolynomial& other) const;
    LaurentPolynomial operator*(Complex c) const;

    bool operator==(const LaurentPolynomial& other) const;

private:
    std::size_t vars_;
    TermMap terms_;
};

/// Dissipation polynomial p_K as the sum over ordered set partitions of K
/// into two possibly empty blocks.
LaurentPolynomial p_k_polynomial(std::size_t vars, const std::vector<std::size_t>& K);

/// The same polynomial in factored form, expanded term by term.
LaurentPolynomial p_k_product_form(std::size_t vars, const std::vector<std::size_t>& K);

/// Regular evaluation: each monomial z^{-m} z^{+p} with m, p >= 0 disjointly
/// supported maps to (prod S_i^{m_i})^* (prod S_j^{p_j}), factors in
/// ascending variable order.
ComplexMatrix regular_poly_eval(const LaurentPolynomial& p, const std::vector<ComplexMatrix>& ops);

struct TorusSup {
    double sup_estimate = 0.0;   // max of |p| over all sampled points
    double upper_bound = 0.0;    // base grid max plus the Lipschitz slack
    std::vector<double> argmax;  // angles of the best sampled point
};

/// Grid estimate of sup |p| over the torus with a certified upper bound;
/// refinement rounds zoom the sample grid around the running argmax.
TorusSup torus_sup(const LaurentPolynomial& p, std::size_t resolution, std::size_t refinement_rounds = 1);

}
