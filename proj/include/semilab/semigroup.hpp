#pragma once

#include "semilab/linalg.hpp"

#include <cstddef>
#include <vector>

namespace semilab {

/// Generator A of the uniformly continuous semigroup t -> exp(t A).
struct BoundedGenerator {
    ComplexMatrix a;

    explicit BoundedGenerator(ComplexMatrix m);
    Eigen::Index dim() const { return a.rows(); }
};

/// T(t) = exp(t a) for t >= 0.
ComplexMatrix evaluate(const BoundedGenerator& g, double t);

/// Spectral abscissa of the generator.
double growth_bound(const BoundedGenerator& g);

/// PSD verdict of -(A + A*)/2.
PsdVerdict is_dissipative(const BoundedGenerator& g, double tol = 1e-9);

/// M(t) = (1/t) * integral of T(s) over [0, t], evaluated by a scaled and
/// doubled power series; t = 0 returns the identity.
ComplexMatrix time_average(const BoundedGenerator& g, double t);

/// Tuple of commuting bounded generators sharing one space.  Construction
/// measures the worst pairwise commutator and rejects families whose defect
/// exceeds the tolerance unless allow_loose is set.
class CommutingFamily {
public:
    explicit CommutingFamily(std::vector<ComplexMatrix> generators,
                             double tol_commuting = -1.0,
                             bool allow_loose = false);

    std::size_t size() const { return members_.size(); }
    Eigen::Index dim() const { return members_.front().dim(); }
    const BoundedGenerator& generator(std::size_t i) const { return members_.at(i); }
    double commutator_bound() const { return commutator_bound_; }
    double declared_tolerance() const { return tolerance_; }
    double generator_scale() const { return scale_; }

    ComplexMatrix evaluate_member(std::size_t i, double t) const;
    CommutingFamily subfamily(const std::vector<std::size_t>& indices) const;

private:
    std::vector<BoundedGenerator> members_;
    double commutator_bound_ = 0.0;
    double tolerance_ = 0.0;
    double scale_ = 0.0;
};

/// Product of exp(t_i A_i) in ascending member order.
ComplexMatrix family_product(const CommutingFamily& fam, const std::vector<double>& t);

/// Residual of the multi-parameter averaged identity on the index set K
/// (zero-based members): difference increments on K, time averages off K,
/// compared with the K-fold generator product applied to all averages.
double multi_time_average_check(const CommutingFamily& fam,
                                const std::vector<double>& t,
                                const std::vector<std::size_t>& K);

}
