#include "semilab/stochastic.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <future>
#include <stdexcept>

namespace semilab {

namespace {

constexpr std::uint64_t stream_counting = 1;
constexpr std::uint64_t stream_duration = 2;
constexpr std::uint64_t stream_gaussian = 3;

void require_time(double t, const char* who) {
    if (!(t >= 0.0) || !std::isfinite(t)) {
        throw std::invalid_argument(std::string(who) + ": nonnegative finite time required");
    }
}

void validate(const DistributionSemigroup& ds) {
    switch (ds.law) {
        case LawKind::dirac:
            break;
        case LawKind::scaled_poisson:
        case LawKind::auxiliary_poisson:
            if (!(ds.rate > 0.0)) throw std::invalid_argument("DistributionSemigroup: positive rate required");
            break;
        case LawKind::gaussian:
            if (!(ds.diffusion >= 0.0)) throw std::invalid_argument("DistributionSemigroup: nonnegative diffusion required");
            break;
    }
}

std::uint64_t member_seed(std::uint64_t seed, std::size_t member) {
    return member == 0 ? seed : mix64(seed ^ (0x5851f42d4c957f2dull * static_cast<std::uint64_t>(member)));
}

struct ChunkMoments {
    ComplexMatrix sum;
    Eigen::ArrayXXd sumsq;
};

ChunkMoments reduce_pairwise(std::vector<ChunkMoments>& parts) {
    // Fixed-shape pairwise tree so the reduction order does not depend on
    // the worker count.
    std::size_t count = parts.size();
    while (count > 1) {
        std::size_t half = (count + 1) / 2;
        for (std::size_t i = 0; i + half < count; ++i) {
            parts[i].sum += parts[i + half].sum;
            parts[i].sumsq += parts[i + half].sumsq;
        }
        count = half;
    }
    return std::move(parts.front());
}

McMatrix mc_average(Eigen::Index dim, std::size_t n, int threads,
                    const std::function<void(std::size_t, std::size_t, ChunkMoments&)>& chunk_fn) {
    if (n == 0) throw std::invalid_argument("monte carlo: at least one sample required");
    const std::size_t chunks = (n + rng_chunk - 1) / rng_chunk;
    std::vector<ChunkMoments> parts(chunks);
    parallel_for(chunks, threads, [&](std::size_t c) {
        ChunkMoments local;
        local.sum = ComplexMatrix::Zero(dim, dim);
        local.sumsq = Eigen::ArrayXXd::Zero(dim, dim);
        chunk_fn(c * rng_chunk, std::min(n, (c + 1) * rng_chunk), local);
        parts[c] = std::move(local);
    });
    ChunkMoments total = reduce_pairwise(parts);
    McMatrix out;
    out.n = n;
    out.mean = total.sum / static_cast<double>(n);
    Eigen::ArrayXXd var = total.sumsq / static_cast<double>(n) - out.mean.cwiseAbs2().array();
    out.std_error = std::sqrt(var.max(0.0).sum() / static_cast<double>(n));
    return out;
}

}  // namespace

DistributionSemigroup DistributionSemigroup::dirac() {
    return DistributionSemigroup{LawKind::dirac, 1.0, 1.0, 0.0};
}

DistributionSemigroup DistributionSemigroup::scaled_poisson(double rate) {
    DistributionSemigroup ds{LawKind::scaled_poisson, rate, 1.0, 0.0};
    validate(ds);
    return ds;
}

DistributionSemigroup DistributionSemigroup::auxiliary_poisson(double rate) {
    DistributionSemigroup ds{LawKind::auxiliary_poisson, rate, 1.0, 0.0};
    validate(ds);
    return ds;
}

DistributionSemigroup DistributionSemigroup::gaussian(double drift, double diffusion) {
    DistributionSemigroup ds{LawKind::gaussian, 1.0, drift, diffusion};
    validate(ds);
    return ds;
}

std::string DistributionSemigroup::name() const {
    switch (law) {
        case LawKind::dirac: return "dirac";
        case LawKind::scaled_poisson: return "scaled-poisson";
        case LawKind::auxiliary_poisson: return "aux-poisson";
        case LawKind::gaussian: return "gaussian";
    }
    return "unknown";
}

void law_values(const DistributionSemigroup& ds, double t, std::uint64_t seed,
                std::size_t begin, std::size_t end, double* out) {
    validate(ds);
    require_time(t, "law_values");
    if (begin >= end) return;
    std::size_t first_chunk = begin / rng_chunk;
    std::size_t last_chunk = (end - 1) / rng_chunk;
    for (std::size_t chunk = first_chunk; chunk <= last_chunk; ++chunk) {
        const std::size_t lo = chunk * rng_chunk;
        const std::size_t hi = lo + rng_chunk;
        auto counting = make_rng(seed, stream_counting, chunk);
        auto duration = make_rng(seed, stream_duration, chunk);
        auto gauss = make_rng(seed, stream_gaussian, chunk);
        std::poisson_distribution<long long> poisson(ds.rate * t > 0.0 ? ds.rate * t : 1.0);
        std::exponential_distribution<double> expo(ds.rate);
        std::normal_distribution<double> normal(0.0, 1.0);
        for (std::size_t i = lo; i < hi && i < end; ++i) {
            double value = 0.0;
            switch (ds.law) {
                case LawKind::dirac:
                    value = t;
                    break;
                case LawKind::scaled_poisson: {
                    long long jumps = t == 0.0 ? 0 : poisson(counting);
                    value = static_cast<double>(jumps) / ds.rate;
                    break;
                }
                case LawKind::auxiliary_poisson: {
                    long long jumps = t == 0.0 ? 0 : poisson(counting);
                    for (long long k = 0; k < jumps; ++k) value += expo(duration);
                    break;
                }
                case LawKind::gaussian:
                    value = ds.drift * t + std::sqrt(ds.diffusion * t) * (t == 0.0 ? 0.0 : normal(gauss));
                    break;
            }
            if (i >= begin) out[i - begin] = value;
        }
    }
}

SampleBatch sample(const DistributionSemigroup& ds, double t, std::size_t n, std::uint64_t seed) {
    SampleBatch batch;
    batch.seed = seed;
    batch.law = ds;
    batch.t = t;
    batch.values.resize(n);
    law_values(ds, t, seed, 0, n, batch.values.data());
    return batch;
}

LawMoments moments(const DistributionSemigroup& ds, double t) {
    validate(ds);
    require_time(t, "moments");
    switch (ds.law) {
        case LawKind::dirac: return {t, 0.0};
        case LawKind::scaled_poisson: return {t, t / ds.rate};
        case LawKind::auxiliary_poisson: return {t, 2.0 * t / ds.rate};
        case LawKind::gaussian: return {ds.drift * t, ds.diffusion * t};
    }
    return {0.0, 0.0};
}

Complex characteristic_fn(const DistributionSemigroup& ds, double t, double omega) {
    validate(ds);
    require_time(t, "characteristic_fn");
    const Complex i(0.0, 1.0);
    switch (ds.law) {
        case LawKind::dirac:
            return std::exp(i * omega * t);
        case LawKind::scaled_poisson:
            return std::exp(ds.rate * t * (std::exp(i * omega / ds.rate) - 1.0));
        case LawKind::auxiliary_poisson:
            return std::exp(ds.rate * t * (i * omega) / (ds.rate - i * omega));
        case LawKind::gaussian:
            return std::exp(i * omega * ds.drift * t - 0.5 * ds.diffusion * t * omega * omega);
    }
    return Complex(0.0, 0.0);
}

Estimate empirical_mean(const SampleBatch& batch) {
    const std::size_t n = batch.values.size();
    if (n == 0) throw std::invalid_argument("empirical_mean: empty batch");
    double mean = 0.0;
    for (double v : batch.values) mean += v;
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (double v : batch.values) var += (v - mean) * (v - mean);
    var /= static_cast<double>(n);
    return {mean, std::sqrt(var / static_cast<double>(n))};
}

Estimate empirical_variance(const SampleBatch& batch) {
    const std::size_t n = batch.values.size();
    if (n < 2) throw std::invalid_argument("empirical_variance: at least two samples required");
    double mean = 0.0;
    for (double v : batch.values) mean += v;
    mean /= static_cast<double>(n);
    double m2 = 0.0, m4 = 0.0;
    for (double v : batch.values) {
        double d = (v - mean) * (v - mean);
        m2 += d;
        m4 += d * d;
    }
    m2 /= static_cast<double>(n);
    m4 /= static_cast<double>(n);
    return {m2, std::sqrt(std::max(0.0, m4 - m2 * m2) / static_cast<double>(n))};
}

ComplexEstimate empirical_char_fn(const SampleBatch& batch, double omega) {
    const std::size_t n = batch.values.size();
    if (n == 0) throw std::invalid_argument("empirical_char_fn: empty batch");
    Complex sum(0.0, 0.0);
    for (double v : batch.values) sum += std::exp(Complex(0.0, omega * v));
    Complex phi = sum / static_cast<double>(n);
    double var = std::max(0.0, 1.0 - std::norm(phi));
    return {phi, std::sqrt(var / static_cast<double>(n))};
}

double semigroup_law_check(const DistributionSemigroup& ds, double s, double t,
                           std::size_t n, const std::vector<double>& omegas,
                           std::uint64_t seed) {
    SampleBatch left = sample(ds, s, n, mix64(seed ^ 0xa5a5a5a5a5a5a5a5ull));
    SampleBatch right = sample(ds, t, n, mix64(seed ^ 0x3c3c3c3c3c3c3c3cull));
    SampleBatch joint;
    joint.seed = seed;
    joint.law = ds;
    joint.t = s + t;
    joint.values.resize(n);
    for (std::size_t i = 0; i < n; ++i) joint.values[i] = left.values[i] + right.values[i];
    double worst = 0.0;
    for (double omega : omegas) {
        Complex expected = characteristic_fn(ds, s + t, omega);
        worst = std::max(worst, std::abs(empirical_char_fn(joint, omega).value - expected));
    }
    return worst;
}

SemigroupSampler::SemigroupSampler(const BoundedGenerator& g) : a_(g.a) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(a_);
    if (solver.info() == Eigen::Success) {
        ComplexMatrix v = solver.eigenvectors();
        Eigen::JacobiSVD<ComplexMatrix> svd(v);
        double smin = svd.singularValues().minCoeff();
        double smax = svd.singularValues().maxCoeff();
        if (smin > 0.0 && smax / smin < 1e8) {
            ComplexMatrix vinv = v.partialPivLu().solve(ComplexMatrix::Identity(a_.rows(), a_.cols()));
            ComplexMatrix check = v * solver.eigenvalues().asDiagonal() * vinv;
            if ((check - a_).norm() <= 1e-12 * (1.0 + a_.norm())) {
                diagonal_path_ = true;
                eigenvalues_ = solver.eigenvalues();
                vectors_ = std::move(v);
                vectors_inv_ = std::move(vinv);
            }
        }
    }
}

ComplexMatrix SemigroupSampler::at(double theta) const {
    if (diagonal_path_) {
        ComplexVector d = (theta * eigenvalues_.array()).exp();
        return vectors_ * d.asDiagonal() * vectors_inv_;
    }
    return matrix_exponential(a_, theta);
}

McMatrix expectation_of_semigroup(const BoundedGenerator& g, const DistributionSemigroup& ds,
                                  double t, std::size_t n, std::uint64_t seed,
                                  double time_scale, int threads) {
    validate(ds);
    require_time(t, "expectation_of_semigroup");
    if (ds.law == LawKind::gaussian) {
        throw std::invalid_argument("expectation_of_semigroup: law must be supported on [0, inf)");
    }
    if (!is_dissipative(g).is_psd) {
        throw std::invalid_argument("expectation_of_semigroup: dissipative generator required");
    }
    if (!(time_scale >= 0.0)) {
        throw std::invalid_argument("expectation_of_semigroup: nonnegative time scale required");
    }
    SemigroupSampler sampler(g);
    return mc_average(g.dim(), n, threads, [&](std::size_t lo, std::size_t hi, ChunkMoments& acc) {
        std::vector<double> thetas(hi - lo);
        law_values(ds, t, seed, lo, hi, thetas.data());
        for (double theta : thetas) {
            ComplexMatrix m = sampler.at(time_scale * theta);
            acc.sum += m;
            acc.sumsq += m.cwiseAbs2().array();
        }
    });
}

McMatrix expectation_of_family_product(const CommutingFamily& fam,
                                       const std::vector<DistributionSemigroup>& laws,
                                       const std::vector<double>& t, std::size_t n,
                                       std::uint64_t seed, int threads) {
    if (laws.size() != fam.size() || t.size() != fam.size()) {
        throw std::invalid_argument("expectation_of_family_product: one law and one time per member required");
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
        validate(laws[i]);
        require_time(t[i], "expectation_of_family_product");
        if (laws[i].law == LawKind::gaussian) {
            throw std::invalid_argument("expectation_of_family_product: laws must be supported on [0, inf)");
        }
        if (!is_dissipative(fam.generator(i)).is_psd) {
            throw std::invalid_argument("expectation_of_family_product: dissipative generators required");
        }
    }
    std::vector<SemigroupSampler> samplers;
    samplers.reserve(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) samplers.emplace_back(fam.generator(i));
    return mc_average(fam.dim(), n, threads, [&](std::size_t lo, std::size_t hi, ChunkMoments& acc) {
        const std::size_t len = hi - lo;
        std::vector<std::vector<double>> thetas(fam.size(), std::vector<double>(len));
        for (std::size_t i = 0; i < fam.size(); ++i) {
            law_values(laws[i], t[i], member_seed(seed, i), lo, hi, thetas[i].data());
        }
        for (std::size_t k = 0; k < len; ++k) {
            ComplexMatrix m = samplers[0].at(thetas[0][k]);
            for (std::size_t i = 1; i < fam.size(); ++i) {
                m = m * samplers[i].at(thetas[i][k]);
            }
            acc.sum += m;
            acc.sumsq += m.cwiseAbs2().array();
        }
    });
}

}
