#include "semilab/dissipativity.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

std::vector<std::size_t> mask_to_indices(const std::vector<std::size_t>& K, std::size_t mask) {
    std::vector<std::size_t> out;
    for (std::size_t pos = 0; pos < K.size(); ++pos) {
        if ((mask >> pos) & 1) out.push_back(K[pos]);
    }
    return out;
}

// Ascending-order products of the selected matrices for every submask.
std::vector<ComplexMatrix> submask_products(const std::vector<ComplexMatrix>& mats) {
    const std::size_t k = mats.size();
    const Eigen::Index n = k == 0 ? 1 : mats.front().rows();
    std::vector<ComplexMatrix> sub(std::size_t{1} << k);
    sub[0] = ComplexMatrix::Identity(n, n);
    for (std::size_t mask = 1; mask < sub.size(); ++mask) {
        std::size_t low = 0;
        while (!((mask >> low) & 1)) ++low;
        sub[mask] = mats[low] * sub[mask ^ (std::size_t{1} << low)];
    }
    return sub;
}

void check_subset(const CommutingFamily& fam, const std::vector<std::size_t>& K, const char* who) {
    std::vector<bool> seen(fam.size(), false);
    for (std::size_t i : K) {
        if (i >= fam.size()) throw std::invalid_argument(std::string(who) + ": index out of range");
        if (seen[i]) throw std::invalid_argument(std::string(who) + ": repeated index");
        seen[i] = true;
    }
}

}  // namespace

std::vector<PartitionPair> partition_pairs(const std::vector<std::size_t>& K) {
    const std::size_t k = K.size();
    if (k > 20) throw std::invalid_argument("partition_pairs: order too large");
    std::vector<PartitionPair> pairs;
    pairs.reserve(std::size_t{1} << k);
    for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
        PartitionPair pair;
        pair.left = mask_to_indices(K, mask);
        pair.right = mask_to_indices(K, ~mask & ((std::size_t{1} << k) - 1));
        pairs.push_back(std::move(pair));
    }
    return pairs;
}

ComplexMatrix dissipation_operator(const CommutingFamily& fam, const std::vector<std::size_t>& K) {
    check_subset(fam, K, "dissipation_operator");
    if (K.size() > 20) throw std::invalid_argument("dissipation_operator: order too large");
    const Eigen::Index n = fam.dim();
    if (K.empty()) return ComplexMatrix::Identity(n, n);
    std::vector<ComplexMatrix> mats;
    mats.reserve(K.size());
    for (std::size_t i : K) mats.push_back(fam.generator(i).a);
    std::vector<ComplexMatrix> sub = submask_products(mats);
    const std::size_t full = sub.size() - 1;
    ComplexMatrix sum = ComplexMatrix::Zero(n, n);
    for (std::size_t mask = 0; mask <= full; ++mask) {
        sum += sub[mask].adjoint() * sub[full ^ mask];
    }
    return std::pow(-0.5, static_cast<double>(K.size())) * sum;
}

DissipativityReport complete_dissipativity_report(const CommutingFamily& fam, double tol) {
    if (fam.size() > 20) {
        throw std::invalid_argument("complete_dissipativity_report: family too large");
    }
    std::vector<std::vector<std::size_t>> subsets;
    for (std::size_t mask = 0; mask < (std::size_t{1} << fam.size()); ++mask) {
        std::vector<std::size_t> K;
        for (std::size_t i = 0; i < fam.size(); ++i) {
            if ((mask >> i) & 1) K.push_back(i);
        }
        subsets.push_back(std::move(K));
    }
    std::sort(subsets.begin(), subsets.end(), [](const auto& a, const auto& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });

    DissipativityReport report;
    report.completely_dissipative = true;
    bool first = true;
    for (auto& K : subsets) {
        SubsetVerdict row;
        row.verdict = is_positive_semidefinite(dissipation_operator(fam, K), tol);
        row.K = K;
        report.completely_dissipative = report.completely_dissipative && row.verdict.is_psd;
        if (first || row.verdict.min_eigenvalue < report.worst_min_eigenvalue) {
            report.worst_min_eigenvalue = row.verdict.min_eigenvalue;
            report.worst_K = K;
            first = false;
        }
        report.per_subset.push_back(std::move(row));
    }
    return report;
}

BoundCheckResult regular_polynomial_bound_check(const CommutingFamily& fam,
                                                const std::vector<double>& t,
                                                const LaurentPolynomial& p,
                                                double tol,
                                                std::size_t torus_resolution,
                                                const double* exact_sup) {
    if (t.size() != fam.size()) {
        throw std::invalid_argument("regular_polynomial_bound_check: one time per member required");
    }
    if (p.vars() != fam.size()) {
        throw std::invalid_argument("regular_polynomial_bound_check: polynomial arity mismatch");
    }
    std::vector<ComplexMatrix> mats;
    mats.reserve(fam.size());
    for (std::size_t i = 0; i < fam.size(); ++i) mats.push_back(fam.evaluate_member(i, t[i]));
    BoundCheckResult result;
    result.lhs = operator_norm(regular_poly_eval(p, mats));
    if (exact_sup != nullptr) {
        result.sup_estimate = *exact_sup;
        result.upper_bound = *exact_sup;
    } else {
        TorusSup sup = torus_sup(p, torus_resolution, 2);
        result.sup_estimate = sup.sup_estimate;
        result.upper_bound = sup.upper_bound;
    }
    result.ok = result.lhs <= result.upper_bound + tol;
    return result;
}

std::vector<double> default_t_axis_grid(int min_exp, int max_exp) {
    std::vector<double> grid{0.0};
    for (int e = min_exp; e <= max_exp; ++e) grid.push_back(std::pow(2.0, e));
    return grid;
}

PkScanReport pk_positivity_scan(const CommutingFamily& fam, const std::vector<double>& axis_grid,
                                double tol, int threads) {
    if (axis_grid.empty()) throw std::invalid_argument("pk_positivity_scan: empty grid");
    const std::size_t d = fam.size();
    if (d > 20) throw std::invalid_argument("pk_positivity_scan: family too large");

    // Member evaluations are shared across subsets and grid points.
    std::vector<std::vector<ComplexMatrix>> cache(d);
    for (std::size_t i = 0; i < d; ++i) {
        cache[i].reserve(axis_grid.size());
        for (double t : axis_grid) cache[i].push_back(fam.evaluate_member(i, t));
    }

    PkScanReport report;
    bool have_worst = false;
    for (std::size_t mask = 1; mask < (std::size_t{1} << d); ++mask) {
        std::vector<std::size_t> K;
        for (std::size_t i = 0; i < d; ++i) {
            if ((mask >> i) & 1) K.push_back(i);
        }
        const std::size_t k = K.size();
        std::vector<std::size_t> all_of_k(k);
        for (std::size_t j = 0; j < k; ++j) all_of_k[j] = j;
        LaurentPolynomial pk = p_k_polynomial(k, all_of_k);
        std::size_t points = 1;
        for (std::size_t j = 0; j < k; ++j) points *= axis_grid.size();
        std::vector<double> min_eigs(points, 0.0);
        parallel_for(points, threads, [&](std::size_t flat) {
            std::vector<ComplexMatrix> mats(k);
            std::size_t rem = flat;
            for (std::size_t j = 0; j < k; ++j) {
                mats[j] = cache[K[j]][rem % axis_grid.size()];
                rem /= axis_grid.size();
            }
            ComplexMatrix value = regular_poly_eval(pk, mats);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (value + value.adjoint()),
                                                                Eigen::EigenvaluesOnly);
            min_eigs[flat] = solver.eigenvalues().minCoeff();
        });
        for (std::size_t flat = 0; flat < points; ++flat) {
            PkScanEntry entry;
            entry.K = K;
            entry.t.resize(k);
            std::size_t rem = flat;
            for (std::size_t j = 0; j < k; ++j) {
                entry.t[j] = axis_grid[rem % axis_grid.size()];
                rem /= axis_grid.size();
            }
            entry.min_eigenvalue = min_eigs[flat];
            entry.psd = entry.min_eigenvalue >= -tol;
            report.points_checked += 1;
            report.all_psd = report.all_psd && entry.psd;
            if (!have_worst || entry.min_eigenvalue < report.worst.min_eigenvalue) {
                report.worst = entry;
                have_worst = true;
            }
            if (!entry.psd && report.failures.size() < 64) {
                report.failures.push_back(entry);
            }
        }
    }
    return report;
}

TransferReport transfer_check(const CommutingFamily& fam,
                              const std::vector<ApproximantKind>& kinds,
                              const LaurentPolynomial& p,
                              const std::vector<std::vector<double>>& t_points,
                              std::size_t n, std::uint64_t seed, double tol,
                              int threads) {
    const std::size_t d = fam.size();
    if (kinds.size() != d) throw std::invalid_argument("transfer_check: one kind per member required");
    if (p.vars() != d) throw std::invalid_argument("transfer_check: polynomial arity mismatch");
    if (p.absolute_degree() > 1) {
        throw std::invalid_argument("transfer_check: degree at most one required");
    }
    if (t_points.empty()) throw std::invalid_argument("transfer_check: empty grid");

    std::vector<BoundedGenerator> approx;
    approx.reserve(d);
    for (std::size_t i = 0; i < d; ++i) {
        approx.push_back(approximant_generator(fam.generator(i), kinds[i]));
    }

    TransferReport report;
    bool first = true;
    for (const auto& t : t_points) {
        if (t.size() != d) throw std::invalid_argument("transfer_check: time arity mismatch");
        std::vector<ComplexMatrix> base(d), lifted(d);
        for (std::size_t i = 0; i < d; ++i) {
            base[i] = fam.evaluate_member(i, t[i]);
            lifted[i] = evaluate(approx[i], t[i]);
        }
        PsdVerdict premise = is_positive_semidefinite(regular_poly_eval(p, base), tol);
        report.premise_psd = report.premise_psd && premise.is_psd;
        PsdVerdict conclusion = is_positive_semidefinite(regular_poly_eval(p, lifted), tol);
        report.psd_transferred = report.psd_transferred && conclusion.is_psd;
        if (first || conclusion.min_eigenvalue < report.worst_min_eigenvalue) {
            report.worst_min_eigenvalue = conclusion.min_eigenvalue;
            report.worst_t = t;
            first = false;
        }
    }

    if (n > 0) {
        // Monte Carlo identity at up to four spread-out grid points.
        std::vector<std::size_t> picks;
        if (t_points.size() <= 4) {
            for (std::size_t i = 0; i < t_points.size(); ++i) picks.push_back(i);
        } else {
            picks = {0, t_points.size() / 3, (2 * t_points.size()) / 3, t_points.size() - 1};
        }
        std::vector<SemigroupSampler> samplers;
        samplers.reserve(d);
        for (std::size_t i = 0; i < d; ++i) samplers.emplace_back(fam.generator(i));
        for (std::size_t pi : picks) {
            const auto& t = t_points[pi];
            std::vector<ComplexMatrix> lifted(d);
            for (std::size_t i = 0; i < d; ++i) lifted[i] = evaluate(approx[i], t[i]);
            ComplexMatrix closed = regular_poly_eval(p, lifted);

            const std::size_t chunks = (n + rng_chunk - 1) / rng_chunk;
            std::vector<ComplexMatrix> sums(chunks);
            std::vector<Eigen::ArrayXXd> sqs(chunks);
            parallel_for(chunks, threads, [&](std::size_t c) {
                const std::size_t lo = c * rng_chunk;
                const std::size_t hi = std::min(n, lo + rng_chunk);
                std::vector<std::vector<double>> thetas(d, std::vector<double>(hi - lo));
                for (std::size_t i = 0; i < d; ++i) {
                    std::uint64_t ms = i == 0 ? seed : mix64(seed ^ (0x5851f42d4c957f2dull * i));
                    law_values(matching_law(kinds[i]), t[i], ms, lo, hi, thetas[i].data());
                }
                ComplexMatrix sum = ComplexMatrix::Zero(fam.dim(), fam.dim());
                Eigen::ArrayXXd sq = Eigen::ArrayXXd::Zero(fam.dim(), fam.dim());
                std::vector<ComplexMatrix> mats(d);
                for (std::size_t s = 0; s < hi - lo; ++s) {
                    for (std::size_t i = 0; i < d; ++i) mats[i] = samplers[i].at(thetas[i][s]);
                    ComplexMatrix value = regular_poly_eval(p, mats);
                    sum += value;
                    sq += value.cwiseAbs2().array();
                }
                sums[c] = std::move(sum);
                sqs[c] = std::move(sq);
            });
            ComplexMatrix total = ComplexMatrix::Zero(fam.dim(), fam.dim());
            Eigen::ArrayXXd total_sq = Eigen::ArrayXXd::Zero(fam.dim(), fam.dim());
            for (std::size_t c = 0; c < chunks; ++c) {
                total += sums[c];
                total_sq += sqs[c];
            }
            ComplexMatrix mean = total / static_cast<double>(n);
            Eigen::ArrayXXd var = total_sq / static_cast<double>(n) - mean.cwiseAbs2().array();
            double se = std::sqrt(var.max(0.0).sum() / static_cast<double>(n));
            double deviation = (closed - mean).norm();
            if (deviation > report.mc_deviation) {
                report.mc_deviation = deviation;
                report.mc_error = se;
            }
            report.mc_ok = report.mc_ok && deviation <= 5.0 * se + 1e-12;
        }
    }
    return report;
}

}
