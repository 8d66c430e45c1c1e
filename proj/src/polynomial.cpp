#include "semilab/polynomial.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace semilab {

namespace {

void require_vars(const LaurentPolynomial& p, std::size_t vars, const char* who) {
    if (p.vars() != vars) {
        throw std::invalid_argument(std::string(who) + ": variable count mismatch");
    }
}

void check_indices(std::size_t vars, const std::vector<std::size_t>& K) {
    std::vector<bool> seen(vars, false);
    for (std::size_t i : K) {
        if (i >= vars) throw std::invalid_argument("p_k_polynomial: index out of range");
        if (seen[i]) throw std::invalid_argument("p_k_polynomial: repeated index");
        seen[i] = true;
    }
}

ComplexMatrix ordered_power_product(const std::vector<ComplexMatrix>& ops,
                                    const std::vector<int>& exponents, bool negative_part) {
    const Eigen::Index n = ops.front().rows();
    ComplexMatrix result = ComplexMatrix::Identity(n, n);
    for (std::size_t i = 0; i < exponents.size(); ++i) {
        int e = exponents[i];
        int reps = negative_part ? (e < 0 ? -e : 0) : (e > 0 ? e : 0);
        for (int k = 0; k < reps; ++k) result = result * ops[i];
    }
    return result;
}

}  // namespace

LaurentPolynomial LaurentPolynomial::constant(std::size_t vars, Complex c) {
    LaurentPolynomial p(vars);
    p.add_term(ExponentVector(vars, 0), c);
    return p;
}

LaurentPolynomial LaurentPolynomial::monomial(std::size_t vars, const ExponentVector& exponents, Complex c) {
    LaurentPolynomial p(vars);
    p.add_term(exponents, c);
    return p;
}

void LaurentPolynomial::add_term(const ExponentVector& exponents, Complex c) {
    if (exponents.size() != vars_) {
        throw std::invalid_argument("LaurentPolynomial: exponent arity mismatch");
    }
    auto it = terms_.find(exponents);
    if (it == terms_.end()) {
        if (c != Complex(0.0, 0.0)) terms_.emplace(exponents, c);
        return;
    }
    it->second += c;
    if (it->second == Complex(0.0, 0.0)) terms_.erase(it);
}

int LaurentPolynomial::absolute_degree() const {
    int degree = 0;
    for (const auto& [exps, c] : terms_) {
        for (int e : exps) degree = std::max(degree, std::abs(e));
    }
    return degree;
}

double LaurentPolynomial::coeff_abs_sum() const {
    double sum = 0.0;
    for (const auto& [exps, c] : terms_) sum += std::abs(c);
    return sum;
}

Complex LaurentPolynomial::eval(const std::vector<Complex>& z) const {
    if (z.size() != vars_) throw std::invalid_argument("LaurentPolynomial: point arity mismatch");
    Complex sum(0.0, 0.0);
    for (const auto& [exps, c] : terms_) {
        Complex term = c;
        for (std::size_t i = 0; i < vars_; ++i) {
            if (exps[i] == 0) continue;
            term *= std::pow(z[i], exps[i]);
        }
        sum += term;
    }
    return sum;
}

LaurentPolynomial& LaurentPolynomial::operator+=(const LaurentPolynomial& other) {
    require_vars(other, vars_, "LaurentPolynomial::operator+=");
    for (const auto& [exps, c] : other.terms_) add_term(exps, c);
    return *this;
}

LaurentPolynomial& LaurentPolynomial::operator-=(const LaurentPolynomial& other) {
    require_vars(other, vars_, "LaurentPolynomial::operator-=");
    for (const auto& [exps, c] : other.terms_) add_term(exps, -c);
    return *this;
}

LaurentPolynomial LaurentPolynomial::operator*(const LaurentPolynomial& other) const {
    require_vars(other, vars_, "LaurentPolynomial::operator*");
    LaurentPolynomial result(vars_);
    for (const auto& [ea, ca] : terms_) {
        for (const auto& [eb, cb] : other.terms_) {
            ExponentVector sum(vars_);
            for (std::size_t i = 0; i < vars_; ++i) sum[i] = ea[i] + eb[i];
            result.add_term(sum, ca * cb);
        }
    }
    return result;
}

LaurentPolynomial LaurentPolynomial::operator*(Complex c) const {
    LaurentPolynomial result(vars_);
    for (const auto& [exps, coeff] : terms_) result.add_term(exps, coeff * c);
    return result;
}

bool LaurentPolynomial::operator==(const LaurentPolynomial& other) const {
    return vars_ == other.vars_ && terms_ == other.terms_;
}

LaurentPolynomial p_k_polynomial(std::size_t vars, const std::vector<std::size_t>& K) {
    check_indices(vars, K);
    LaurentPolynomial sum(vars);
    const std::size_t k = K.size();
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        LaurentPolynomial term = LaurentPolynomial::constant(vars, 1.0);
        for (std::size_t pos = 0; pos < k; ++pos) {
            LaurentPolynomial factor = LaurentPolynomial::constant(vars, 1.0);
            LaurentPolynomial::ExponentVector exps(vars, 0);
            exps[K[pos]] = (mask >> pos) & 1 ? -1 : 1;
            factor.add_term(exps, -1.0);
            term = term * factor;
        }
        sum += term;
    }
    return sum;
}

LaurentPolynomial p_k_product_form(std::size_t vars, const std::vector<std::size_t>& K) {
    check_indices(vars, K);
    LaurentPolynomial prod = LaurentPolynomial::constant(vars, 1.0);
    for (std::size_t i : K) {
        LaurentPolynomial factor = LaurentPolynomial::constant(vars, 2.0);
        LaurentPolynomial::ExponentVector up(vars, 0), down(vars, 0);
        up[i] = 1;
        down[i] = -1;
        factor.add_term(up, -1.0);
        factor.add_term(down, -1.0);
        prod = prod * factor;
    }
    return prod;
}

ComplexMatrix regular_poly_eval(const LaurentPolynomial& p, const std::vector<ComplexMatrix>& ops) {
    if (ops.size() != p.vars()) {
        throw std::invalid_argument("regular_poly_eval: one operator per variable required");
    }
    if (ops.empty()) throw std::invalid_argument("regular_poly_eval: at least one variable required");
    const Eigen::Index n = ops.front().rows();
    for (const auto& op : ops) {
        if (op.rows() != n || op.cols() != n) {
            throw std::invalid_argument("regular_poly_eval: operators must share one square space");
        }
    }
    ComplexMatrix result = ComplexMatrix::Zero(n, n);
    for (const auto& [exps, c] : p.terms()) {
        ComplexMatrix neg = ordered_power_product(ops, exps, true);
        ComplexMatrix pos = ordered_power_product(ops, exps, false);
        result += c * (neg.adjoint() * pos);
    }
    return result;
}

TorusSup torus_sup(const LaurentPolynomial& p, std::size_t resolution, std::size_t refinement_rounds) {
    if (resolution < 8) throw std::invalid_argument("torus_sup: resolution of at least 8 required");
    const std::size_t d = p.vars();
    if (d == 0) throw std::invalid_argument("torus_sup: at least one variable required");
    double points = std::pow(static_cast<double>(resolution), static_cast<double>(d));
    if (points > static_cast<double>(1 << 26)) {
        throw std::invalid_argument("torus_sup: grid budget exceeded");
    }

    const double lipschitz = p.coeff_abs_sum() * p.absolute_degree() * static_cast<double>(d);
    const double two_pi = 2.0 * std::numbers::pi;

    std::vector<double> center(d, std::numbers::pi);
    double half_width = std::numbers::pi;  // grid covers [center - hw, center + hw) per axis
    TorusSup out;
    out.argmax.assign(d, 0.0);

    const int degree = std::max(1, p.absolute_degree());
    std::vector<std::size_t> idx(d);
    for (std::size_t round = 0; round <= refinement_rounds; ++round) {
        const double step = 2.0 * half_width / static_cast<double>(resolution);
        // Per-axis power tables: powers[i][j * span + (e + degree)] holds the
        // j-th grid angle on axis i raised to exponent e.
        const std::size_t span = 2 * static_cast<std::size_t>(degree) + 1;
        std::vector<std::vector<Complex>> powers(d, std::vector<Complex>(resolution * span));
        std::vector<std::vector<double>> angles(d, std::vector<double>(resolution));
        for (std::size_t i = 0; i < d; ++i) {
            for (std::size_t j = 0; j < resolution; ++j) {
                double angle = center[i] - half_width + step * static_cast<double>(j);
                angles[i][j] = angle;
                for (int e = -degree; e <= degree; ++e) {
                    powers[i][j * span + static_cast<std::size_t>(e + degree)] =
                        std::polar(1.0, angle * static_cast<double>(e));
                }
            }
        }
        std::fill(idx.begin(), idx.end(), 0);
        std::vector<double> best_angles(d, 0.0);
        double best = -1.0;
        bool done = false;
        while (!done) {
            Complex value(0.0, 0.0);
            for (const auto& [exps, c] : p.terms()) {
                Complex term = c;
                for (std::size_t i = 0; i < d; ++i) {
                    term *= powers[i][idx[i] * span + static_cast<std::size_t>(exps[i] + degree)];
                }
                value += term;
            }
            double magnitude = std::abs(value);
            if (magnitude > best) {
                best = magnitude;
                for (std::size_t i = 0; i < d; ++i) best_angles[i] = angles[i][idx[i]];
            }
            std::size_t axis = 0;
            while (axis < d && ++idx[axis] == resolution) {
                idx[axis] = 0;
                ++axis;
            }
            done = axis == d;
        }
        if (round == 0) {
            // Any torus point lies within step/2 of the base grid per axis.
            out.upper_bound = best + lipschitz * step;
        }
        if (best > out.sup_estimate) {
            out.sup_estimate = best;
            for (std::size_t i = 0; i < d; ++i) {
                out.argmax[i] = std::fmod(best_angles[i] + two_pi, two_pi);
            }
        }
        center = best_angles;
        half_width = step;
    }
    return out;
}

}
