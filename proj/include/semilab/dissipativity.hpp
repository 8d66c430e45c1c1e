#pragma once

#include "semilab/approximants.hpp"
#include "semilab/polynomial.hpp"
#include "semilab/semigroup.hpp"

#include <cstdint>
#include <vector>

namespace semilab {

/// Ordered pair of disjoint blocks covering an index set; both may be empty.
struct PartitionPair {
    std::vector<std::size_t> left;
    std::vector<std::size_t> right;
};

/// All 2^|K| ordered two-block partitions of K, in mask order.
std::vector<PartitionPair> partition_pairs(const std::vector<std::size_t>& K);

/// Dissipation operator of order K: (-1/2)^|K| times the sum over partition
/// pairs of (prod over left block of A_i)^* (prod over right block of A_j).
ComplexMatrix dissipation_operator(const CommutingFamily& fam, const std::vector<std::size_t>& K);

struct SubsetVerdict {
    std::vector<std::size_t> K;
    PsdVerdict verdict;
};

struct DissipativityReport {
    bool completely_dissipative = false;
    std::vector<SubsetVerdict> per_subset;  // all subsets, ordered by (size, lexicographic)
    double worst_min_eigenvalue = 0.0;
    std::vector<std::size_t> worst_K;
};

/// PSD verdicts of every dissipation operator, including the empty order.
/// Families with more than 20 members are rejected.
DissipativityReport complete_dissipativity_report(const CommutingFamily& fam, double tol = 1e-9);

struct BoundCheckResult {
    bool ok = false;
    double lhs = 0.0;          // operator norm of the regular evaluation
    double sup_estimate = 0.0;
    double upper_bound = 0.0;  // certified bound used by the comparison
};

/// von Neumann type inequality check at one time point: the operator norm of
/// the regular evaluation at (T_i(t_i)) against the torus sup bound.  A known
/// exact sup may replace the grid certificate.
BoundCheckResult regular_polynomial_bound_check(const CommutingFamily& fam,
                                                const std::vector<double>& t,
                                                const LaurentPolynomial& p,
                                                double tol = 1e-9,
                                                std::size_t torus_resolution = 128,
                                                const double* exact_sup = nullptr);

struct PkScanEntry {
    std::vector<std::size_t> K;
    std::vector<double> t;  // one time per member of K
    double min_eigenvalue = 0.0;
    bool psd = true;
};

struct PkScanReport {
    bool all_psd = true;
    std::size_t points_checked = 0;
    PkScanEntry worst;
    std::vector<PkScanEntry> failures;  // capped at 64 entries
};

/// Evaluates p_K at (T_i(t_i)) for every nonempty subset K over the product
/// of the axis grid with itself and tests positivity.
PkScanReport pk_positivity_scan(const CommutingFamily& fam, const std::vector<double>& axis_grid,
                                double tol = 1e-9, int threads = 1);

/// {0} followed by the dyadic points 2^-10, ..., 2^4.
std::vector<double> default_t_axis_grid(int min_exp = -10, int max_exp = 4);

struct TransferReport {
    bool premise_psd = true;      // p(T(t)) PSD on the whole grid
    bool psd_transferred = true;  // p of the approximant semigroups PSD
    double worst_min_eigenvalue = 0.0;
    std::vector<double> worst_t;
    bool mc_ok = true;
    double mc_deviation = 0.0;
    double mc_error = 0.0;
};

/// Degree at most one transfer principle: a regular polynomial PSD along the
/// original family stays PSD along the bounded approximants, checked
/// deterministically on the grid and by Monte Carlo at selected points.
TransferReport transfer_check(const CommutingFamily& fam,
                              const std::vector<ApproximantKind>& kinds,
                              const LaurentPolynomial& p,
                              const std::vector<std::vector<double>>& t_points,
                              std::size_t n, std::uint64_t seed, double tol = 1e-8,
                              int threads = 1);

}
