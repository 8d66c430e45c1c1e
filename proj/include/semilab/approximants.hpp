#pragma once

#include "semilab/semigroup.hpp"
#include "semilab/stochastic.hpp"

#include <vector>

namespace semilab {

enum class ApproximantVariant { hille, yosida };

/// Bounded approximant selector: variant plus rate parameter.
struct ApproximantKind {
    ApproximantVariant variant = ApproximantVariant::hille;
    double rate = 1.0;

    static ApproximantKind hille(double rate) { return {ApproximantVariant::hille, rate}; }
    static ApproximantKind yosida(double rate) { return {ApproximantVariant::yosida, rate}; }
};

/// lambda (T(1/lambda) - I); defined for every lambda > 0.
BoundedGenerator hille_generator(const BoundedGenerator& g, double lambda);

/// lambda^2 R(lambda, A) - lambda I; requires lambda beyond the growth bound.
BoundedGenerator yosida_generator(const BoundedGenerator& g, double lambda);

BoundedGenerator approximant_generator(const BoundedGenerator& g, const ApproximantKind& kind);

/// exp(t * approximant generator).
ComplexMatrix approximant_evaluate(const BoundedGenerator& g, const ApproximantKind& kind, double t);

/// Poisson-weighted power series for the Hille approximant semigroup,
/// truncated once the remaining Poisson mass drops below 1e-15.
ComplexMatrix hille_series(const BoundedGenerator& g, double lambda, double t);

/// Law whose expectation reproduces the approximant semigroup.
DistributionSemigroup matching_law(const ApproximantKind& kind);

struct DeviationReport {
    double deviation = 0.0;
    double mc_error = 0.0;
};

/// Distance between exp(t * approximant) and the Monte Carlo average of
/// T(theta) under the matching law.
DeviationReport expectation_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                           double t, std::size_t n, std::uint64_t seed,
                                           int threads = 1);

/// Same identity for the adjoint semigroup.
DeviationReport adjoint_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                       double t, std::size_t n, std::uint64_t seed,
                                       int threads = 1);

/// Distance between exp(r t * approximant) and the average of T(r theta)
/// with theta drawn at the accelerated rate r * lambda.
DeviationReport scaled_time_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                           double r, double t, std::size_t n, std::uint64_t seed,
                                           int threads = 1);

struct ConvergenceRow {
    double lambda = 0.0;
    double sup_error = 0.0;  // max over grid and probes of the vector error
    double max_norm = 0.0;   // max operator norm of the approximant semigroup
};

std::vector<ConvergenceRow> convergence_profile(const BoundedGenerator& g, ApproximantVariant variant,
                                                const std::vector<double>& lambdas,
                                                const std::vector<double>& t_grid,
                                                const std::vector<ComplexVector>& probes);

/// Dyadic rate grid {1, 2, ..., 1024} scaled by max(1, norm of A).
std::vector<double> default_lambda_grid(const BoundedGenerator& g);

}
