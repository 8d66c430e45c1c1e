#pragma once

#include "semilab/linalg.hpp"

#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <vector>

namespace semilab {

enum class GroupVariant { euclidean, heisenberg, correlated_heisenberg, product };

/// Group with a distinguished submonoid and a compatible positive-part map.
/// Elements are flat real coordinate vectors in the structure's layout:
/// Euclidean (x), Heisenberg (x, p, E), correlated Heisenberg (x, E),
/// products concatenate the component layouts.
class PositivityStructure {
public:
    static PositivityStructure euclidean(int d);
    static PositivityStructure heisenberg(int d);
    static PositivityStructure correlated_heisenberg(const Eigen::MatrixXd& c);
    static PositivityStructure product(PositivityStructure left, PositivityStructure right);

    GroupVariant variant() const { return variant_; }
    int coord_dim() const { return coord_dim_; }
    int spatial_dim() const { return spatial_dim_; }
    const Eigen::MatrixXd& correlation() const;
    const PositivityStructure& left_factor() const;
    const PositivityStructure& right_factor() const;

    Eigen::VectorXd identity() const;
    Eigen::VectorXd multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const;
    Eigen::VectorXd inverse(const Eigen::VectorXd& a) const;
    Eigen::VectorXd positive_part(const Eigen::VectorXd& a) const;
    Eigen::VectorXd negative_part(const Eigen::VectorXd& a) const;
    bool in_submonoid(const Eigen::VectorXd& a, double tol = 1e-12) const;
    Eigen::VectorXd random_element(std::mt19937_64& rng) const;

private:
    PositivityStructure() = default;

    GroupVariant variant_ = GroupVariant::euclidean;
    int coord_dim_ = 0;
    int spatial_dim_ = 0;
    Eigen::MatrixXd correlation_;
    std::shared_ptr<const PositivityStructure> left_, right_;
};

/// Open box of joint units around the identity together with its volume.
struct WitnessBox {
    std::vector<std::pair<double, double>> intervals;
    double measure = 0.0;
};

/// Box of elements u with e <= u in both orders; its positive measure
/// witnesses that the identity is a joint unit.
WitnessBox e_joint_witness(const PositivityStructure& ps, double epsilon);

using PositivePartFn = std::function<Eigen::VectorXd(const Eigen::VectorXd&)>;

struct AxiomsReport {
    std::size_t samples = 0;
    bool identity_ok = true;        // e+ = e
    bool idempotent_ok = true;      // (x+)+ = x+
    bool factorization_ok = true;   // (x-)^{-1} x+ = x
    bool annihilation_ok = true;    // (x+)- = e
    bool membership_ok = true;      // x+ lands in the submonoid
    double max_factorization_residual = 0.0;
    bool all_ok = false;
    bool has_failure = false;
    Eigen::VectorXd first_failure;
};

/// Samples random elements and tests the positive-part axioms; an override
/// map substitutes for the structure's own positive part (used to show the
/// checker catches broken maps).
AxiomsReport axioms_check(const PositivityStructure& ps, std::size_t samples, std::uint64_t seed,
                          double tol = 1e-12, const PositivePartFn& override_map = nullptr);

/// Finite-grid Weyl system: shift steps with exponential weights on a cube
/// of side `points` in Z^m, truncated outside the grid.
struct CcrFamily {
    int m = 0;       // grid rank
    int points = 0;  // grid side length
    Complex rate;    // lambda
    std::vector<Eigen::VectorXi> shifts;
    std::vector<Eigen::VectorXd> weights;
    Eigen::MatrixXd correlation;       // C_ij = (<a_i, u_j> - <a_j, u_i>) / 2
    std::vector<ComplexMatrix> steps;  // T_i(1)

    std::size_t members() const { return steps.size(); }
    Eigen::Index dim() const { return steps.empty() ? 0 : steps.front().rows(); }
    ComplexMatrix power(std::size_t i, long k) const;
    Complex scalar_unitary(double e) const;  // U(E) multiplier exp(lambda E)
    /// T(x, E) = U(E + <D x, x>) prod_i T_i(x_i) with D the strict upper
    /// triangle of C.
    ComplexMatrix represent(const Eigen::VectorXi& x, double e) const;
};

/// Builds the family; requires Re(rate) <= 0, componentwise nonnegative
/// weights and shifts, and validates the contraction property.
CcrFamily build_ccr_family(int m, int points, Complex rate,
                           const std::vector<Eigen::VectorXi>& shifts,
                           const std::vector<Eigen::VectorXd>& weights);

/// Residual of T_j(t) T_i(s) = exp(2 s t lambda C_ij) T_i(s) T_j(t).
double ccr_relation_check(const CcrFamily& fam, long s, long t, std::size_t i, std::size_t j);

/// Max relation residual over integer steps up to max_step.
double ccr_relation_max_residual(const CcrFamily& fam, long max_step);

/// Residual of T(g1) T(g2) = T(g1 g2) in the correlated Heisenberg group.
double heisenberg_homomorphism_residual(const CcrFamily& fam, const Eigen::VectorXi& x1, double e1,
                                        const Eigen::VectorXi& x2, double e2);

/// The correlated Heisenberg structure attached to the family.
PositivityStructure ccr_structure(const CcrFamily& fam);

}
