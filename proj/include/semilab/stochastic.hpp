#pragma once

#include "semilab/semigroup.hpp"
#include "semilab/util.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace semilab {

enum class LawKind { dirac, scaled_poisson, auxiliary_poisson, gaussian };

/// Convolution semigroup of laws on the line, indexed by time.
struct DistributionSemigroup {
    LawKind law = LawKind::dirac;
    double rate = 1.0;       // jump rate of the Poisson variants
    double drift = 1.0;      // Gaussian drift per unit time
    double diffusion = 0.0;  // Gaussian variance per unit time

    static DistributionSemigroup dirac();
    static DistributionSemigroup scaled_poisson(double rate);
    static DistributionSemigroup auxiliary_poisson(double rate);
    static DistributionSemigroup gaussian(double drift, double diffusion);

    std::string name() const;
};

/// Reproducible batch of draws from one law at one time.
struct SampleBatch {
    std::vector<double> values;
    std::uint64_t seed = 0;
    DistributionSemigroup law;
    double t = 0.0;
};

struct LawMoments {
    double mean = 0.0;
    double variance = 0.0;
};

struct Estimate {
    double value = 0.0;
    double std_error = 0.0;
};

struct ComplexEstimate {
    Complex value;
    double std_error = 0.0;
};

/// Monte Carlo average of a matrix-valued statistic.
struct McMatrix {
    ComplexMatrix mean;
    double std_error = 0.0;  // Frobenius aggregate of entrywise errors
    std::size_t n = 0;
};

SampleBatch sample(const DistributionSemigroup& ds, double t, std::size_t n, std::uint64_t seed);

LawMoments moments(const DistributionSemigroup& ds, double t);

Complex characteristic_fn(const DistributionSemigroup& ds, double t, double omega);

Estimate empirical_mean(const SampleBatch& batch);
Estimate empirical_variance(const SampleBatch& batch);
ComplexEstimate empirical_char_fn(const SampleBatch& batch, double omega);

/// Max over the omega grid of the distance between the empirical
/// characteristic function of independent s- and t-draws summed pairwise and
/// the closed form at time s + t.
double semigroup_law_check(const DistributionSemigroup& ds, double s, double t,
                           std::size_t n, const std::vector<double>& omegas,
                           std::uint64_t seed);

/// (1/n) sum of T(time_scale * theta_k) with theta_k drawn from the law at
/// time t.  Requires a dissipative generator and a law supported on the
/// nonnegative half line.
McMatrix expectation_of_semigroup(const BoundedGenerator& g, const DistributionSemigroup& ds,
                                  double t, std::size_t n, std::uint64_t seed,
                                  double time_scale = 1.0, int threads = 1);

/// Same with independent member laws: averages the product of T_i(theta_i).
McMatrix expectation_of_family_product(const CommutingFamily& fam,
                                       const std::vector<DistributionSemigroup>& laws,
                                       const std::vector<double>& t, std::size_t n,
                                       std::uint64_t seed, int threads = 1);

/// Precomputed spectral factorization used to evaluate exp(theta A) per draw.
class SemigroupSampler {
public:
    explicit SemigroupSampler(const BoundedGenerator& g);
    ComplexMatrix at(double theta) const;
    Eigen::Index dim() const { return a_.rows(); }

private:
    ComplexMatrix a_;
    bool diagonal_path_ = false;
    ComplexVector eigenvalues_;
    ComplexMatrix vectors_;
    ComplexMatrix vectors_inv_;
};

/// Values of the law at (t, seed) for draw indices [begin, end); matches
/// sample() bit for bit.
void law_values(const DistributionSemigroup& ds, double t, std::uint64_t seed,
                std::size_t begin, std::size_t end, double* out);

}
