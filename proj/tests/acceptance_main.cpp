// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Budgets (sample sizes, grids, tolerances) are pinned here.
#include "semilab/analysis.hpp"
#include "semilab/approximants.hpp"
#include "semilab/calculus.hpp"
#include "semilab/dissipativity.hpp"
#include "semilab/linalg.hpp"
#include "semilab/monoid.hpp"
#include "semilab/polynomial.hpp"
#include "semilab/semigroup.hpp"
#include "semilab/stochastic.hpp"
#include "semilab/util.hpp"

#include <Eigen/Dense>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

using namespace semilab;

namespace {

ComplexMatrix random_complex_matrix(Eigen::Index dim, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    ComplexMatrix m(dim, dim);
    for (Eigen::Index r = 0; r < dim; ++r) {
        for (Eigen::Index c = 0; c < dim; ++c) m(r, c) = Complex(gauss(rng), gauss(rng));
    }
    return m;
}

ComplexMatrix random_unitary(Eigen::Index dim, std::mt19937_64& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_complex_matrix(dim, rng));
    return qr.householderQ();
}

BoundedGenerator seeded_dissipative(Eigen::Index dim, std::uint64_t seed) {
    auto rng = make_rng(seed, 7001);
    ComplexMatrix g = random_complex_matrix(dim, rng);
    g *= 0.5 / std::max(1.0, operator_norm(g));
    ComplexMatrix herm = 0.5 * (g + g.adjoint());
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
    const double shift = 0.1 + std::max(0.0, es.eigenvalues().maxCoeff());
    return BoundedGenerator(g - shift * ComplexMatrix::Identity(dim, dim));
}

std::vector<ComplexVector> seeded_probes(Eigen::Index dim, int count, std::uint64_t seed) {
    auto rng = make_rng(seed, 7002);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<ComplexVector> probes;
    probes.reserve(static_cast<std::size_t>(count));
    for (int i = 0; i < count; ++i) {
        ComplexVector v(dim);
        for (Eigen::Index r = 0; r < dim; ++r) v(r) = Complex(gauss(rng), gauss(rng));
        probes.push_back(v / v.norm());
    }
    return probes;
}

struct Outcome {
    bool pass = true;
    std::string note;

    void fail(const std::string& why) {
        pass = false;
        if (note.empty()) note = why;
    }
    void require(bool ok, const std::string& why) {
        if (!ok) fail(why);
    }
};

// 01: auxiliary Poisson moments and characteristic function at scale.
Outcome criterion_auxiliary_poisson_law() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    const std::size_t n = 1000000;
    const double root_n = std::sqrt(static_cast<double>(n));
    int combo = 0;
    for (double lambda : {1.0, 5.0, 20.0}) {
        for (double t : {0.5, 2.0, 10.0}) {
            DistributionSemigroup law = DistributionSemigroup::auxiliary_poisson(lambda);
            SampleBatch batch = sample(law, t, n, 101000 + combo);
            ++combo;
            const std::string tag =
                " at lambda=" + format_double(lambda) + " t=" + format_double(t);
            Estimate mean = empirical_mean(batch);
            out.require(std::abs(mean.value - t) <= 5.0 * std::sqrt(2.0 * t / lambda) / root_n,
                        "mean off" + tag);
            Estimate variance = empirical_variance(batch);
            out.require(std::abs(variance.value - 2.0 * t / lambda) <= 5.0 * variance.std_error,
                        "variance off" + tag);
            for (double omega : {0.5, 1.0, 2.0, -0.5, -1.0, -2.0}) {
                ComplexEstimate cf = empirical_char_fn(batch, omega);
                out.require(std::abs(cf.value - characteristic_fn(law, t, omega)) <= 5.0 / root_n,
                            "characteristic function off" + tag);
            }
        }
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(elapsed <= 30.0, "exceeded the 30 s budget");
    return out;
}

// 02: pairwise sums of independent draws follow the law at the summed time.
Outcome criterion_law_semigroup_property() {
    Outcome out;
    const std::size_t n = 1000000;
    const std::vector<double> omegas = {0.5, 1.0, 2.0};
    int run = 0;
    for (const DistributionSemigroup& law : {DistributionSemigroup::scaled_poisson(2.0),
                                             DistributionSemigroup::auxiliary_poisson(2.0)}) {
        for (auto [s, t] : std::vector<std::pair<double, double>>{{1.0, 1.0}, {0.5, 2.0}}) {
            double dist = semigroup_law_check(law, s, t, n, omegas, 102000 + run);
            ++run;
            out.require(dist <= 5.0 / std::sqrt(static_cast<double>(n)),
                        law.name() + " law fails at (s,t)=(" + format_double(s) + "," +
                            format_double(t) + ")");
        }
    }
    return out;
}

// 03: approximant semigroups as sampled expectations, plus the series oracle.
Outcome criterion_expectation_identities() {
    Outcome out;
    const std::size_t n = 100000;
    std::uint64_t mc_seed = 103500;
    for (int i = 0; i < 10; ++i) {
        const Eigen::Index dim = 2 + (i % 5);
        BoundedGenerator g = seeded_dissipative(dim, 103000 + i);
        for (double lambda : {2.0, 8.0, 32.0}) {
            for (double t : {0.5, 2.0}) {
                for (ApproximantKind kind :
                     {ApproximantKind::hille(lambda), ApproximantKind::yosida(lambda)}) {
                    DeviationReport rep = expectation_identity_check(g, kind, t, n, mc_seed++);
                    out.require(rep.deviation <= 5.0 * rep.mc_error + 1e-12,
                                "sampled expectation off at matrix " + std::to_string(i));
                }
                ComplexMatrix series = hille_series(g, lambda, t);
                ComplexMatrix closed = approximant_evaluate(g, ApproximantKind::hille(lambda), t);
                out.require(operator_norm(series - closed) <= 1e-12,
                            "series oracle off at matrix " + std::to_string(i));
            }
        }
    }
    return out;
}

// 04: convergence profile of both approximant variants on unit-norm matrices.
Outcome criterion_approximant_convergence() {
    Outcome out;
    std::vector<BoundedGenerator> corpus;
    ComplexMatrix d1 = ComplexMatrix::Zero(2, 2);
    d1(0, 0) = -0.6;
    d1(1, 1) = -0.75;
    corpus.emplace_back(d1);
    ComplexMatrix d2 = ComplexMatrix::Zero(3, 3);
    d2(0, 0) = Complex(-0.5, 0.3);
    d2(1, 1) = Complex(-0.8, -0.2);
    d2(2, 2) = -0.55;
    corpus.emplace_back(d2);
    ComplexMatrix tri(2, 2);
    tri << -0.6, 0.3, 0.0, -0.7;
    corpus.emplace_back(tri);
    for (int i = 0; i < 3; ++i) {
        const Eigen::Index dim = 3 + i;
        auto rng = make_rng(104000 + i, 7003);
        std::uniform_real_distribution<double> re(-0.85, -0.5);
        std::uniform_real_distribution<double> im(-0.35, 0.35);
        ComplexMatrix diag = ComplexMatrix::Zero(dim, dim);
        for (Eigen::Index r = 0; r < dim; ++r) diag(r, r) = Complex(re(rng), im(rng));
        ComplexMatrix q = random_unitary(dim, rng);
        corpus.emplace_back(q * diag * q.adjoint());
    }

    const std::vector<double> lambdas = {1.0, 4.0, 16.0, 64.0, 256.0};
    const std::vector<double> t_grid = {0.0, 0.1, 0.25, 0.5, 1.0, 2.0, 3.0, 5.0, 7.5, 10.0};
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        const BoundedGenerator& g = corpus[i];
        out.require(operator_norm(g.a) <= 1.0 + 1e-12, "corpus matrix exceeds unit norm");
        std::vector<ComplexVector> probes = seeded_probes(g.a.rows(), 4, 104900 + i);
        for (ApproximantVariant variant : {ApproximantVariant::hille, ApproximantVariant::yosida}) {
            std::vector<ConvergenceRow> rows = convergence_profile(g, variant, lambdas, t_grid, probes);
            for (std::size_t r = 0; r + 1 < rows.size(); ++r) {
                out.require(rows[r + 1].sup_error < rows[r].sup_error,
                            "errors not strictly decreasing at matrix " + std::to_string(i));
            }
            out.require(rows.back().sup_error < 1e-2,
                        "error above 1e-2 at the final rate for matrix " + std::to_string(i));
            for (const ConvergenceRow& row : rows) {
                out.require(row.max_norm <= 1.0 + 1e-9,
                            "approximant not contractive at matrix " + std::to_string(i));
            }
        }
    }
    return out;
}

// 05: partition-sum vs product form, and the torus sup of each order.
Outcome criterion_pk_identities() {
    Outcome out;
    for (unsigned mask = 0; mask < 16; ++mask) {
        std::vector<std::size_t> K;
        for (std::size_t b = 0; b < 4; ++b) {
            if (mask & (1u << b)) K.push_back(b);
        }
        out.require(p_k_polynomial(4, K) == p_k_product_form(4, K),
                    "partition and product forms differ");
    }
    for (std::size_t k = 1; k <= 4; ++k) {
        std::vector<std::size_t> K(k);
        for (std::size_t b = 0; b < k; ++b) K[b] = b;
        LaurentPolynomial p = p_k_polynomial(k, K);
        const double target = std::pow(4.0, static_cast<double>(k));
        TorusSup sup = k <= 3 ? torus_sup(p, 32, 2) : torus_sup(p, 16, 3);
        const double rel = k <= 3 ? 1e-6 : 1e-3;
        out.require(std::abs(sup.sup_estimate - target) <= rel * target,
                    "torus max misses 4^k at order " + std::to_string(k));
        out.require(sup.upper_bound >= sup.sup_estimate,
                    "bound below the estimate at order " + std::to_string(k));
        out.require(std::abs(p.coeff_abs_sum() - target) <= 1e-9,
                    "coefficient mass is not 4^k at order " + std::to_string(k));
        for (double angle : sup.argmax) {
            double folded = std::fmod(std::abs(angle), 2.0 * std::acos(-1.0));
            out.require(std::abs(folded - std::acos(-1.0)) <= 0.2,
                        "torus max not attained near the corner point");
        }
    }
    return out;
}

// 06: verdict columns agree across a seeded corpus plus the critical families.
Outcome criterion_equivalence_battery() {
    Outcome out;
    const auto start = std::chrono::steady_clock::now();
    struct Row {
        FamilySpec spec;
        bool expect_pass = true;
    };
    std::vector<Row> rows;
    auto push = [&rows](FamilySpec spec, bool expect_pass) {
        spec.t_axis_grid = default_t_axis_grid();
        rows.push_back({std::move(spec), expect_pass});
    };
    for (int i = 0; i < 15; ++i) {
        FamilySpec spec;
        spec.source = FamilySource::tensor;
        spec.d = 2;
        spec.block_dims = {2, 2};
        spec.family_seed = 100 + i;
        push(spec, true);
    }
    for (int i = 0; i < 10; ++i) {
        FamilySpec spec;
        spec.source = FamilySource::tensor;
        spec.d = 2;
        spec.block_dims = {2, 3};
        spec.family_seed = 200 + i;
        push(spec, true);
    }
    for (int i = 0; i < 5; ++i) {
        FamilySpec spec;
        spec.source = FamilySource::tensor;
        spec.d = 3;
        spec.block_dims = {2, 2, 2};
        spec.family_seed = 300 + i;
        push(spec, true);
    }
    for (int i = 0; i < 10; ++i) {
        FamilySpec spec;
        spec.source = FamilySource::diagonalizable;
        spec.d = 2;
        spec.dim = 5;
        spec.family_seed = 400 + i;
        push(spec, true);
    }
    for (int i = 0; i < 10; ++i) {
        FamilySpec spec;
        spec.source = FamilySource::diagonalizable;
        spec.d = 3;
        spec.dim = 6;
        spec.family_seed = 500 + i;
        push(spec, true);
    }
    {
        FamilySpec spec;
        spec.source = FamilySource::counterexample;
        spec.counterexample = {2, 4, 2, 0.8, 1};
        push(spec, false);
    }
    {
        FamilySpec spec;
        spec.source = FamilySource::counterexample;
        spec.counterexample = {3, 4, 2, 0.65, 2};
        push(spec, false);
    }

    for (std::size_t i = 0; i < rows.size(); ++i) {
        CommutingFamily fam = build_family(rows[i].spec);
        nlohmann::json battery = run_equivalence_battery(fam, rows[i].spec);
        const std::string tag = " at corpus row " + std::to_string(i);
        out.require(battery["agreement"] == true, "verdict columns disagree" + tag);
        if (rows[i].expect_pass) {
            out.require(battery["overall"] == "PASS", "expected PASS" + tag);
            out.require(battery["adjuncts"]["regular_polynomial_bounds"]["pass"] == true,
                        "polynomial bound corpus fails on a PASS row" + tag);
            out.require(battery["adjuncts"]["dilation_evidence_gram"]["pass"] == true,
                        "Gram schedule fails on a PASS row" + tag);
        } else {
            out.require(battery["overall"] == "FAIL", "expected FAIL" + tag);
            out.require(battery["witnesses"].contains("dilation_evidence_gram"),
                        "missing Gram witness on a FAIL row" + tag);
        }
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    out.require(elapsed <= 300.0, "exceeded the 5 min budget");
    return out;
}

// 07: the critical families are sharp at exactly the full order.
Outcome criterion_counterexample_sharpness() {
    Outcome out;
    for (const CounterexampleParams& params :
         {CounterexampleParams{2, 4, 2, 0.8, 1}, CounterexampleParams{3, 4, 2, 0.65, 2}}) {
        CommutingFamily fam = build_counterexample(params);
        DissipativityReport report = complete_dissipativity_report(fam);
        const std::string tag = " at d=" + std::to_string(params.d);
        for (const SubsetVerdict& row : report.per_subset) {
            if (row.K.size() == static_cast<std::size_t>(params.d)) {
                out.require(row.verdict.min_eigenvalue < -1e-6, "full order not negative" + tag);
            } else {
                out.require(row.verdict.min_eigenvalue >= -1e-9, "proper order not positive" + tag);
            }
        }
        for (std::size_t i = 0; i < fam.size(); ++i) {
            Eigen::ComplexEigenSolver<ComplexMatrix> es(fam.generator(i).a);
            for (Eigen::Index r = 0; r < es.eigenvalues().size(); ++r) {
                out.require(std::abs(es.eigenvalues()(r) - Complex(-1.0, 0.0)) <= 1e-9,
                            "generator spectrum is not {-1}" + tag);
            }
        }
    }
    return out;
}

// 08: grid positivity of the degree-one corpus transfers to the approximants.
Outcome criterion_positivity_transfer() {
    Outcome out;
    std::vector<CommutingFamily> families;
    families.push_back(random_tensor_family(2, {2, 2}, 100));
    families.push_back(random_tensor_family(2, {2, 3}, 200));
    families.push_back(random_diagonalizable_family(2, 5, 400));
    const std::vector<std::vector<double>> t_points = {{0.5, 0.5}, {0.25, 1.0}, {2.0, 0.5}};
    std::uint64_t seed = 108000;
    for (std::size_t f = 0; f < families.size(); ++f) {
        for (const std::vector<std::size_t>& K :
             {std::vector<std::size_t>{0}, std::vector<std::size_t>{1},
              std::vector<std::size_t>{0, 1}}) {
            LaurentPolynomial p = p_k_polynomial(2, K);
            for (ApproximantVariant variant :
                 {ApproximantVariant::hille, ApproximantVariant::yosida}) {
                std::vector<ApproximantKind> kinds(2, ApproximantKind{variant, 8.0});
                TransferReport rep = transfer_check(families[f], kinds, p, t_points, 100000, seed++);
                const std::string tag = " at family " + std::to_string(f);
                out.require(rep.premise_psd, "corpus polynomial not PSD on the grid" + tag);
                out.require(rep.psd_transferred, "transfer fails" + tag);
                out.require(rep.mc_ok, "sampled identity off" + tag);
            }
        }
    }
    return out;
}

// 09: positive-part axioms across the structure zoo, and mutation detection.
Outcome criterion_positivity_structures() {
    Outcome out;
    std::vector<PositivityStructure> zoo;
    for (int d = 1; d <= 4; ++d) zoo.push_back(PositivityStructure::euclidean(d));
    for (int d = 1; d <= 3; ++d) zoo.push_back(PositivityStructure::heisenberg(d));
    auto rng = make_rng(109000, 7004);
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::MatrixXd d0(3, 3);
    for (int r = 0; r < 3; ++r) {
        for (int c = 0; c < 3; ++c) d0(r, c) = gauss(rng);
    }
    zoo.push_back(PositivityStructure::correlated_heisenberg(0.5 * (d0 - d0.transpose())));
    zoo.push_back(PositivityStructure::product(PositivityStructure::euclidean(2),
                                               PositivityStructure::heisenberg(1)));
    for (std::size_t i = 0; i < zoo.size(); ++i) {
        AxiomsReport report = axioms_check(zoo[i], 1000, 109100 + i);
        out.require(report.all_ok, "axioms fail on structure " + std::to_string(i));
    }

    PositivePartFn clamp = [](const Eigen::VectorXd& x) {
        return Eigen::VectorXd(x.cwiseMax(0.0));
    };
    AxiomsReport broken = axioms_check(PositivityStructure::heisenberg(2), 1000, 109200, 1e-12, clamp);
    out.require(!broken.all_ok, "mutated positive part goes undetected");
    PositivePartFn identity_map = [](const Eigen::VectorXd& x) { return x; };
    AxiomsReport broken2 =
        axioms_check(PositivityStructure::euclidean(2), 1000, 109201, 1e-12, identity_map);
    out.require(!broken2.all_ok, "identity positive part goes undetected");
    return out;
}

// 10: the weighted-shift model satisfies the twisted relations and induces
// the expected homomorphism.
Outcome criterion_ccr_weyl_model() {
    Outcome out;
    auto rng = make_rng(110000, 7005);
    std::uniform_real_distribution<double> weight(0.1, 1.2);
    std::vector<Eigen::VectorXi> shifts(2, Eigen::VectorXi::Zero(2));
    shifts[0](0) = 1;
    shifts[1](1) = 1;
    std::vector<Eigen::VectorXd> weights(2, Eigen::VectorXd::Zero(2));
    for (int i = 0; i < 2; ++i) {
        for (int c = 0; c < 2; ++c) weights[static_cast<std::size_t>(i)](c) = weight(rng);
    }
    CcrFamily fam = build_ccr_family(2, 6, Complex(-0.35, 0.15), shifts, weights);
    out.require(ccr_relation_max_residual(fam, 4) <= 1e-12, "twisted relation residual too large");

    std::uniform_int_distribution<int> coord(0, 3);
    std::normal_distribution<double> energy(0.0, 1.0);
    double worst = 0.0;
    for (int trial = 0; trial < 100; ++trial) {
        Eigen::VectorXi x1(2), x2(2);
        x1 << coord(rng), coord(rng);
        x2 << coord(rng), coord(rng);
        worst = std::max(worst,
                         heisenberg_homomorphism_residual(fam, x1, energy(rng), x2, energy(rng)));
    }
    out.require(worst <= 1e-10, "homomorphism residual " + format_double(worst));
    return out;
}

// 11: quadrature calculus against resolvent products, and approximate units.
Outcome criterion_integral_calculus() {
    Outcome out;
    BoundedGenerator single = seeded_dissipative(4, 111001);
    CommutingFamily fam1({single.a});
    BoxDensity exp1;
    exp1.lo = {0.0};
    exp1.hi = {8.0};
    exp1.density = [](const std::vector<double>& x) { return 2.0 * std::exp(-2.0 * x[0]); };
    QuadratureValue q1 = phillips_lemerdy_eval(fam1, Complex(0.0, 0.0), exp1, 256);
    ComplexMatrix target1 = 2.0 * resolvent(single.a, Complex(2.0, 0.0));
    out.require(operator_norm(q1.value - target1) <=
                    std::exp(-16.0) + 4.0 * q1.error_estimate + 1e-12,
                "single-variable quadrature misses the resolvent");

    CommutingFamily fam2 = random_tensor_family(2, {2, 2}, 111002);
    BoxDensity exp2;
    exp2.lo = {0.0, 0.0};
    exp2.hi = {8.0, 6.0};
    exp2.density = [](const std::vector<double>& x) {
        return 6.0 * std::exp(-2.0 * x[0] - 3.0 * x[1]);
    };
    QuadratureValue q2 = phillips_lemerdy_eval(fam2, Complex(0.0, 0.0), exp2, 96);
    ComplexMatrix target2 = (2.0 * resolvent(fam2.generator(0).a, Complex(2.0, 0.0))) *
                            (3.0 * resolvent(fam2.generator(1).a, Complex(3.0, 0.0)));
    out.require(operator_norm(q2.value - target2) <=
                    std::exp(-16.0) + std::exp(-18.0) + 4.0 * q2.error_estimate + 1e-12,
                "two-variable quadrature misses the resolvent product");

    std::vector<double> errs1 = approximate_unit_errors(fam1, 8, seeded_probes(4, 3, 111100), 64);
    for (std::size_t k = 0; k + 1 < errs1.size(); ++k) {
        out.require(errs1[k + 1] < errs1[k], "single-variable unit errors not decreasing");
    }
    std::vector<double> errs2 = approximate_unit_errors(fam2, 8, seeded_probes(4, 3, 111101), 32);
    for (std::size_t k = 0; k + 1 < errs2.size(); ++k) {
        out.require(errs2[k + 1] < errs2[k], "two-variable unit errors not decreasing");
    }
    return out;
}

// 12: averaged identities, single and multi parameter.
Outcome criterion_averaged_identities() {
    Outcome out;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index dim = 2 + (i % 5);
        BoundedGenerator g = seeded_dissipative(dim, 112000 + i);
        for (double t : {0.1, 1.0, 10.0}) {
            ComplexMatrix lhs = g.a * time_average(g, t);
            ComplexMatrix rhs =
                (evaluate(g, t) - ComplexMatrix::Identity(dim, dim)) / t;
            out.require(operator_norm(lhs - rhs) <= 1e-10,
                        "averaged identity off at matrix " + std::to_string(i));
        }
    }
    for (int i = 0; i < 3; ++i) {
        CommutingFamily fam = random_tensor_family(2, {2, 2}, 112501 + i);
        for (const std::vector<double>& t :
             {std::vector<double>{0.8, 1.2}, std::vector<double>{0.1, 2.0}}) {
            for (const std::vector<std::size_t>& K :
                 {std::vector<std::size_t>{}, std::vector<std::size_t>{0},
                  std::vector<std::size_t>{1}, std::vector<std::size_t>{0, 1}}) {
                out.require(multi_time_average_check(fam, t, K) <= 1e-9,
                            "multi-parameter identity off at family " + std::to_string(i));
            }
        }
    }
    return out;
}

// 13: block unitaries compress to the powers of seeded contractions.
Outcome criterion_power_dilation() {
    Outcome out;
    for (int i = 0; i < 20; ++i) {
        const Eigen::Index dim = 2 + (i % 4);
        auto rng = make_rng(113000 + i, 7006);
        ComplexMatrix s;
        if (i % 5 == 0) {
            s = random_unitary(dim, rng);
        } else if (i % 5 == 1) {
            s = ComplexMatrix::Zero(dim, dim);
            std::uniform_real_distribution<double> entry(-0.9, 0.9);
            for (Eigen::Index r = 0; r < dim; ++r) s(r, r) = entry(rng);
            s(0, 0) = 1.0;
        } else {
            ComplexMatrix g = random_complex_matrix(dim, rng);
            s = g / (operator_norm(g) + 0.05);
        }
        PowerDilationResult res = finite_power_dilation(s, 16);
        const std::string tag = " at contraction " + std::to_string(i);
        out.require(res.ok, "dilation construction fails" + tag);
        out.require(res.unitarity_defect <= 1e-10, "dilation not unitary" + tag);
        out.require(res.max_residual <= 1e-8, "compression residual too large" + tag);
    }
    return out;
}

}

int main() {
    struct Criterion {
        const char* label;
        std::function<Outcome()> body;
    };
    const std::vector<Criterion> criteria = {
        {"auxiliary-poisson-law", criterion_auxiliary_poisson_law},
        {"law-semigroup-property", criterion_law_semigroup_property},
        {"expectation-identities", criterion_expectation_identities},
        {"approximant-convergence", criterion_approximant_convergence},
        {"pk-identities", criterion_pk_identities},
        {"equivalence-battery", criterion_equivalence_battery},
        {"counterexample-sharpness", criterion_counterexample_sharpness},
        {"positivity-transfer", criterion_positivity_transfer},
        {"positivity-structures", criterion_positivity_structures},
        {"ccr-weyl-model", criterion_ccr_weyl_model},
        {"integral-calculus", criterion_integral_calculus},
        {"averaged-identities", criterion_averaged_identities},
        {"power-dilation", criterion_power_dilation},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        const auto start = std::chrono::steady_clock::now();
        Outcome out;
        try {
            out = criteria[i].body();
        } catch (const std::exception& e) {
            out.pass = false;
            out.note = std::string("exception: ") + e.what();
        }
        const double elapsed =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        std::printf("criterion %02zu %s %s (%.1f s)\n", i + 1, out.pass ? "PASS" : "FAIL",
                    criteria[i].label, elapsed);
        std::fflush(stdout);
        if (!out.pass) {
            std::printf("  note: %s\n", out.note.c_str());
            ++failures;
        }
    }
    std::printf("acceptance: %zu/%zu criteria passed\n", criteria.size() - failures,
                criteria.size());
    return failures == 0 ? 0 : 1;
}
