#pragma once

#include "semilab/monoid.hpp"
#include "semilab/semigroup.hpp"

#include <functional>
#include <vector>

namespace semilab {

/// Finitely supported complex function on a positivity structure's group;
/// support points are deduplicated and zero coefficients dropped.
struct FiniteFunction {
    std::vector<Eigen::VectorXd> support;
    std::vector<Complex> coeff;
};

FiniteFunction make_finite_function(const PositivityStructure& ps,
                                    std::vector<Eigen::VectorXd> points,
                                    std::vector<Complex> values,
                                    double merge_tol = 1e-9);

FiniteFunction point_mass(const PositivityStructure& ps, const Eigen::VectorXd& x,
                          Complex value = Complex(1.0, 0.0));

/// (f * g)(x) = sum over y of f(y) g(y^{-1} x).
FiniteFunction convolution(const PositivityStructure& ps, const FiniteFunction& f,
                           const FiniteFunction& g, double merge_tol = 1e-9);

/// f^*(x) = conj(f(x^{-1})); the group is unimodular so no density enters.
FiniteFunction involution(const PositivityStructure& ps, const FiniteFunction& f);

/// Monoid representation as a matrix-valued map on coordinates.
using MonoidRep = std::function<ComplexMatrix(const Eigen::VectorXd&)>;

/// Representation x -> prod exp(x_i A_i) of the Euclidean submonoid.
MonoidRep family_rep(const CommutingFamily& fam);

/// Representation of the correlated Heisenberg submonoid attached to a
/// finite-grid Weyl family; spatial coordinates must be integral.
MonoidRep ccr_rep(const CcrFamily& fam);

/// Phi(f) = sum f(x) rep(x-)^* rep(x+).
ComplexMatrix discrete_calculus_eval(const PositivityStructure& ps, const MonoidRep& rep,
                                     const FiniteFunction& f);

/// Norm of Phi(f * g) - Phi(f) Phi(g); reported, not asserted, because the
/// calculus is multiplicative only on compatible supports.
double multiplicativity_residual(const PositivityStructure& ps, const MonoidRep& rep,
                                 const FiniteFunction& f, const FiniteFunction& g);

struct GramVerdict {
    PsdVerdict verdict;
    std::size_t points = 0;
    std::vector<Eigen::VectorXd> witness;  // the point set when not PSD
};

/// Positivity of the kernel [rep((x_i^{-1} x_j)-)^* rep((x_i^{-1} x_j)+)];
/// a PASS is dilation evidence, a FAIL a concrete certificate.
GramVerdict gram_kernel_test(const PositivityStructure& ps, const MonoidRep& rep,
                             const std::vector<Eigen::VectorXd>& points, double tol = 1e-9);

/// {0, h, 2h}^d lattice in the Euclidean structure.
std::vector<Eigen::VectorXd> euclidean_lattice(int d, double h);

/// Density with box support inside the positive orthant.
struct BoxDensity {
    std::vector<double> lo, hi;
    std::function<double(const std::vector<double>&)> density;
};

struct QuadratureValue {
    ComplexMatrix value;
    double error_estimate = 0.0;  // Richardson estimate from the mesh pair
    std::size_t cells = 0;        // fine-mesh cell count
};

/// c I + integral of f(x) T(x) dx by midpoint tensor quadrature with one
/// Richardson refinement.
QuadratureValue phillips_lemerdy_eval(const CommutingFamily& fam, Complex c,
                                      const BoxDensity& f, std::size_t resolution);

/// Errors e_k = max over probes of |Phi(f_k) xi - xi| for the normalized
/// indicator densities of the boxes [0, 2^-k]^d.
std::vector<double> approximate_unit_errors(const CommutingFamily& fam, int k_max,
                                            const std::vector<ComplexVector>& probes,
                                            std::size_t resolution);

}
