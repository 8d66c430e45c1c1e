#include "semilab/approximants.hpp"

#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

void require_rate(double lambda) {
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw std::invalid_argument("approximant: positive finite rate required");
    }
}

DeviationReport compare(const ComplexMatrix& closed, const McMatrix& mc) {
    return {operator_norm(closed - mc.mean), mc.std_error};
}

}  // namespace

BoundedGenerator hille_generator(const BoundedGenerator& g, double lambda) {
    require_rate(lambda);
    const Eigen::Index n = g.dim();
    ComplexMatrix step = matrix_exponential(g.a, 1.0 / lambda);
    return BoundedGenerator(lambda * (step - ComplexMatrix::Identity(n, n)));
}

BoundedGenerator yosida_generator(const BoundedGenerator& g, double lambda) {
    require_rate(lambda);
    double bound = std::max(0.0, growth_bound(g));
    if (!(lambda > bound + 1e-6)) {
        throw std::invalid_argument("yosida_generator: rate must exceed the growth bound");
    }
    const Eigen::Index n = g.dim();
    ComplexMatrix res = resolvent(g.a, Complex(lambda, 0.0));
    return BoundedGenerator(lambda * lambda * res - lambda * ComplexMatrix::Identity(n, n));
}

BoundedGenerator approximant_generator(const BoundedGenerator& g, const ApproximantKind& kind) {
    return kind.variant == ApproximantVariant::hille ? hille_generator(g, kind.rate)
                                                     : yosida_generator(g, kind.rate);
}

ComplexMatrix approximant_evaluate(const BoundedGenerator& g, const ApproximantKind& kind, double t) {
    return evaluate(approximant_generator(g, kind), t);
}

ComplexMatrix hille_series(const BoundedGenerator& g, double lambda, double t) {
    require_rate(lambda);
    if (!(t >= 0.0)) throw std::invalid_argument("hille_series: nonnegative time required");
    const Eigen::Index n = g.dim();
    const ComplexMatrix step = matrix_exponential(g.a, 1.0 / lambda);
    ComplexMatrix power = ComplexMatrix::Identity(n, n);
    double weight = std::exp(-lambda * t);
    double mass = weight;
    ComplexMatrix sum = weight * power;
    const int cap = 64 + static_cast<int>(lambda * t + 60.0 * std::sqrt(lambda * t));
    for (int k = 1; k <= cap && 1.0 - mass > 1e-15; ++k) {
        power = power * step;
        weight *= lambda * t / static_cast<double>(k);
        mass += weight;
        sum += weight * power;
    }
    return sum;
}

DistributionSemigroup matching_law(const ApproximantKind& kind) {
    require_rate(kind.rate);
    return kind.variant == ApproximantVariant::hille
               ? DistributionSemigroup::scaled_poisson(kind.rate)
               : DistributionSemigroup::auxiliary_poisson(kind.rate);
}

DeviationReport expectation_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                           double t, std::size_t n, std::uint64_t seed,
                                           int threads) {
    ComplexMatrix closed = approximant_evaluate(g, kind, t);
    McMatrix mc = expectation_of_semigroup(g, matching_law(kind), t, n, seed, 1.0, threads);
    return compare(closed, mc);
}

DeviationReport adjoint_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                       double t, std::size_t n, std::uint64_t seed,
                                       int threads) {
    BoundedGenerator adj(hermitian_adjoint(g.a));
    ComplexMatrix closed = approximant_evaluate(adj, kind, t);
    McMatrix mc = expectation_of_semigroup(g, matching_law(kind), t, n, seed, 1.0, threads);
    return {operator_norm(closed - hermitian_adjoint(mc.mean)), mc.std_error};
}

DeviationReport scaled_time_identity_check(const BoundedGenerator& g, const ApproximantKind& kind,
                                           double r, double t, std::size_t n, std::uint64_t seed,
                                           int threads) {
    if (!(r > 0.0)) throw std::invalid_argument("scaled_time_identity_check: positive scale required");
    ComplexMatrix closed = evaluate(approximant_generator(g, kind), r * t);
    ApproximantKind accelerated{kind.variant, r * kind.rate};
    McMatrix mc = expectation_of_semigroup(g, matching_law(accelerated), t, n, seed, r, threads);
    return compare(closed, mc);
}

std::vector<ConvergenceRow> convergence_profile(const BoundedGenerator& g, ApproximantVariant variant,
                                                const std::vector<double>& lambdas,
                                                const std::vector<double>& t_grid,
                                                const std::vector<ComplexVector>& probes) {
    std::vector<ConvergenceRow> rows;
    rows.reserve(lambdas.size());
    std::vector<ComplexMatrix> targets;
    targets.reserve(t_grid.size());
    for (double t : t_grid) targets.push_back(evaluate(g, t));
    for (double lambda : lambdas) {
        BoundedGenerator approx = approximant_generator(g, {variant, lambda});
        ConvergenceRow row;
        row.lambda = lambda;
        for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
            ComplexMatrix at = evaluate(approx, t_grid[ti]);
            row.max_norm = std::max(row.max_norm, operator_norm(at));
            if (probes.empty()) {
                row.sup_error = std::max(row.sup_error, operator_norm(at - targets[ti]));
            } else {
                for (const auto& probe : probes) {
                    row.sup_error = std::max(row.sup_error, ((at - targets[ti]) * probe).norm());
                }
            }
        }
        rows.push_back(row);
    }
    return rows;
}

std::vector<double> default_lambda_grid(const BoundedGenerator& g) {
    double scale = std::max(1.0, operator_norm(g.a));
    std::vector<double> grid;
    for (int k = 0; k <= 10; ++k) grid.push_back(scale * std::pow(2.0, k));
    return grid;
}

}
