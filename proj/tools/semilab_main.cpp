#include "semilab/analysis.hpp"
#include "semilab/approximants.hpp"
#include "semilab/calculus.hpp"
#include "semilab/dissipativity.hpp"
#include "semilab/monoid.hpp"
#include "semilab/stochastic.hpp"
#include "semilab/util.hpp"
#include "semilab/version.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

namespace {

using nlohmann::json;
using namespace semilab;

constexpr int exit_clean = 0;
constexpr int exit_defect = 1;
constexpr int exit_usage = 2;

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open spec file: " + path);
    return json::parse(in);
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::invalid_argument("cannot open output file: " + path);
    out << text;
}

struct AnalyzeArgs {
    std::string spec_path;
    std::string out_path;
    std::optional<double> tol_psd;
    std::optional<int> grid_max;
    std::optional<int> threads;
    std::optional<std::size_t> mc_n;
    std::optional<std::uint64_t> seed;
};

/// Monoid-side battery for Weyl recipes: relations, homomorphism, axioms,
/// Gram evidence.
json ccr_report(const FamilySpec& spec) {
    CcrFamily fam = build_ccr_family(spec.ccr.m, spec.ccr.points, spec.ccr.rate, spec.ccr.shifts,
                                     spec.ccr.weights);
    json report;
    report["schema"] = 1;
    report["tool_version"] = tool_version;
    report["spec_digest"] = spec_digest(spec);
    report["family"] = json{{"members", fam.members()}, {"dim", fam.dim()}};

    json columns;
    json witnesses = json::object();
    const long max_step = std::min<long>(3, fam.points - 1);
    const double relation_residual = ccr_relation_max_residual(fam, max_step);
    const bool relations_ok = relation_residual <= 1e-12;
    columns["weyl_relations"] = json{{"pass", relations_ok}, {"max_residual", relation_residual}};
    if (!relations_ok) witnesses["weyl_relations"] = relation_residual;

    double hom_residual = 0.0;
    auto rng = make_rng(spec.mc_seed, 401);
    std::uniform_int_distribution<int> coord(0, std::max(1, fam.points / 2 - 1));
    std::normal_distribution<double> energy(0.0, 1.0);
    for (int rep = 0; rep < 32; ++rep) {
        Eigen::VectorXi x1(fam.m), x2(fam.m);
        for (int i = 0; i < fam.m; ++i) {
            x1(i) = coord(rng);
            x2(i) = coord(rng);
        }
        hom_residual = std::max(
            hom_residual, heisenberg_homomorphism_residual(fam, x1, energy(rng), x2, energy(rng)));
    }
    const bool hom_ok = hom_residual <= 1e-10;
    columns["homomorphism"] = json{{"pass", hom_ok}, {"max_residual", hom_residual}};
    if (!hom_ok) witnesses["homomorphism"] = hom_residual;

    PositivityStructure structure = ccr_structure(fam);
    AxiomsReport axioms = axioms_check(structure, 512, spec.mc_seed);
    columns["positivity_axioms"] =
        json{{"pass", axioms.all_ok}, {"max_residual", axioms.max_factorization_residual}};

    // Gram evidence on the truncated grid is reported, not asserted: the
    // cutoff bleeds mass out of the shifts, so only the infinite model is
    // expected to dilate exactly.
    MonoidRep rep = ccr_rep(fam);
    std::vector<Eigen::VectorXd> lattice;
    for (std::size_t mask = 0; mask < (std::size_t{1} << fam.m); ++mask) {
        Eigen::VectorXd pt = Eigen::VectorXd::Zero(fam.m + 1);
        for (int i = 0; i < fam.m; ++i) pt(i) = (mask >> i) & 1;
        lattice.push_back(std::move(pt));
    }
    GramVerdict gram = gram_kernel_test(structure, rep, lattice, spec.tol_psd);
    json adjuncts;
    adjuncts["dilation_evidence_gram"] = json{{"is_psd", gram.verdict.is_psd},
                                              {"min_eigenvalue", gram.verdict.min_eigenvalue},
                                              {"reported_only", true}};

    const bool overall = relations_ok && hom_ok && axioms.all_ok;
    report["verdicts"] =
        json{{"columns", columns}, {"adjuncts", adjuncts}, {"overall", overall ? "PASS" : "FAIL"}};
    report["witnesses"] = witnesses;
    return report;
}

int run_analyze(const AnalyzeArgs& args) {
    FamilySpec spec = parse_family_spec(read_json_file(args.spec_path));
    if (args.tol_psd) spec.tol_psd = *args.tol_psd;
    if (args.grid_max) spec.t_axis_grid = default_t_axis_grid(-10, *args.grid_max);
    if (args.threads) spec.threads = *args.threads;
    if (args.mc_n) spec.mc_n = *args.mc_n;
    if (args.seed) spec.mc_seed = *args.seed;

    json report = spec.source == FamilySource::ccr ? ccr_report(spec) : analysis_report(spec);
    const std::string overall = report["verdicts"]["overall"].get<std::string>();

    std::cout << "digest " << report["spec_digest"].get<std::string>() << "\n";
    for (const auto& [name, column] : report["verdicts"]["columns"].items()) {
        std::cout << "  " << name << ": " << (column["pass"].get<bool>() ? "PASS" : "FAIL") << "\n";
    }
    if (report["verdicts"].contains("adjuncts")) {
        for (const auto& [name, column] : report["verdicts"]["adjuncts"].items()) {
            std::cout << "  " << name << ": "
                      << (!column.contains("pass") ? "reported"
                                                   : column["pass"].get<bool>() ? "PASS" : "FAIL")
                      << "\n";
        }
    }
    if (!report["witnesses"].empty()) {
        std::cout << "witnesses: " << report["witnesses"].dump() << "\n";
    }
    std::cout << "overall " << overall << "\n";
    if (!args.out_path.empty()) write_text_file(args.out_path, report.dump(2) + "\n");
    return overall == "PASS" ? exit_clean : exit_defect;
}

int run_approximants(int dim, std::uint64_t seed, const std::string& variant_name,
                     const std::string& csv_path) {
    CommutingFamily fam = random_diagonalizable_family(1, dim, seed);
    const BoundedGenerator& g = fam.generator(0);
    std::vector<double> lambdas = default_lambda_grid(g);
    std::vector<double> t_grid = {0.25, 0.5, 1.0, 2.0};

    std::vector<ApproximantVariant> variants;
    if (variant_name == "hille" || variant_name == "both") variants.push_back(ApproximantVariant::hille);
    if (variant_name == "yosida" || variant_name == "both") variants.push_back(ApproximantVariant::yosida);
    if (variants.empty()) throw std::invalid_argument("unknown variant: " + variant_name);

    std::string csv = "variant,lambda,sup_error,max_norm\n";
    bool improved = true;
    for (ApproximantVariant variant : variants) {
        const char* name = variant == ApproximantVariant::hille ? "hille" : "yosida";
        std::vector<ConvergenceRow> rows = convergence_profile(g, variant, lambdas, t_grid, {});
        std::cout << name << " approximants, dim " << dim << "\n";
        for (const auto& row : rows) {
            std::printf("  lambda %10.1f  sup_error %.6e  max_norm %.6f\n", row.lambda,
                        row.sup_error, row.max_norm);
            csv += std::string(name) + "," + format_double(row.lambda) + "," +
                   format_double(row.sup_error) + "," + format_double(row.max_norm) + "\n";
        }
        improved = improved && rows.back().sup_error < rows.front().sup_error;
    }
    if (!csv_path.empty()) write_text_file(csv_path, csv);
    if (!improved) {
        std::cout << "defect: approximation error failed to improve along the rate grid\n";
        return exit_defect;
    }
    return exit_clean;
}

int run_stochastic(const std::string& law_name, double lambda, double t, std::size_t n,
                   std::uint64_t seed, const std::string& csv_path) {
    DistributionSemigroup ds;
    if (law_name == "dirac") {
        ds = DistributionSemigroup::dirac();
    } else if (law_name == "scaled-poisson") {
        ds = DistributionSemigroup::scaled_poisson(lambda);
    } else if (law_name == "aux-poisson") {
        ds = DistributionSemigroup::auxiliary_poisson(lambda);
    } else if (law_name == "gaussian") {
        ds = DistributionSemigroup::gaussian(1.0, lambda);
    } else {
        throw std::invalid_argument("unknown law: " + law_name);
    }
    if (n == 0) throw std::invalid_argument("sample count must be positive");

    SampleBatch batch = sample(ds, t, n, seed);
    LawMoments closed = moments(ds, t);
    Estimate mean = empirical_mean(batch);
    Estimate variance = empirical_variance(batch);

    std::string csv = "metric,value,reference,tolerance\n";
    bool ok = true;
    auto check = [&](const char* metric, double value, double reference, double tol) {
        bool pass = std::abs(value - reference) <= tol;
        ok = ok && pass;
        std::printf("  %-18s %+.8f  vs  %+.8f  (tol %.2e) %s\n", metric, value, reference, tol,
                    pass ? "ok" : "DEFECT");
        csv += std::string(metric) + "," + format_double(value) + "," + format_double(reference) +
               "," + format_double(tol) + "\n";
    };

    std::cout << ds.name() << " law, t " << t << ", n " << n << "\n";
    check("mean", mean.value, closed.mean, 6.0 * mean.std_error + 1e-12);
    check("variance", variance.value, closed.variance, 6.0 * variance.std_error + 1e-12);
    for (double omega : {0.5, 1.0, 2.0}) {
        ComplexEstimate phi = empirical_char_fn(batch, omega);
        Complex reference = characteristic_fn(ds, t, omega);
        char metric[32];
        std::snprintf(metric, sizeof(metric), "char_fn(%g)", omega);
        check(metric, std::abs(phi.value - reference), 0.0, 6.0 * phi.std_error + 1e-12);
    }
    const std::size_t n_law = std::min<std::size_t>(n, 200000);
    const double law_dev = semigroup_law_check(ds, t / 2.0, t, n_law, {0.5, 1.0, 2.0}, seed + 1);
    check("semigroup_law", law_dev, 0.0, 8.0 / std::sqrt(static_cast<double>(n_law)));

    if (!csv_path.empty()) write_text_file(csv_path, csv);
    return ok ? exit_clean : exit_defect;
}

int run_counterexample(const CounterexampleParams& params, const std::string& out_path) {
    CommutingFamily fam = build_counterexample(params);
    DissipativityReport report = complete_dissipativity_report(fam);

    bool proper_ok = true;
    double full_min = 0.0;
    json rows = json::array();
    for (const auto& row : report.per_subset) {
        json entry{{"K", row.K}, {"min_eigenvalue", row.verdict.min_eigenvalue}, {"psd", row.verdict.is_psd}};
        rows.push_back(entry);
        if (row.K.size() == fam.size()) {
            full_min = row.verdict.min_eigenvalue;
        } else {
            proper_ok = proper_ok && row.verdict.is_psd;
        }
        std::printf("  |K| %zu  K %-12s  min_eig %+.6e  %s\n", row.K.size(),
                    json(row.K).dump().c_str(), row.verdict.min_eigenvalue,
                    row.verdict.is_psd ? "psd" : "NOT PSD");
    }
    const bool shaped = proper_ok && full_min < -1e-6;
    std::cout << (shaped ? "profile as designed: proper orders dissipative, full order fails\n"
                         : "defect: unexpected dissipativity profile\n");
    if (!out_path.empty()) {
        write_text_file(out_path, json{{"alpha", params.alpha},
                                       {"d", params.d},
                                       {"subsets", rows},
                                       {"full_order_min_eigenvalue", full_min},
                                       {"profile_ok", shaped}}
                                          .dump(2) +
                                      "\n");
    }
    return shaped ? exit_clean : exit_defect;
}

int run_monoid(const std::string& variant, int d, std::size_t samples, std::uint64_t seed,
               double tol) {
    PositivityStructure ps = [&] {
        if (variant == "euclidean") return PositivityStructure::euclidean(d);
        if (variant == "heisenberg") return PositivityStructure::heisenberg(d);
        if (variant == "heisenberg-c") {
            auto rng = make_rng(seed, 501);
            std::normal_distribution<double> normal(0.0, 1.0);
            Eigen::MatrixXd raw(d, d);
            for (int i = 0; i < d; ++i) {
                for (int j = 0; j < d; ++j) raw(i, j) = normal(rng);
            }
            Eigen::MatrixXd c = raw - raw.transpose();
            return PositivityStructure::correlated_heisenberg(0.5 * c);
        }
        if (variant == "product") {
            return PositivityStructure::product(PositivityStructure::euclidean(d),
                                                PositivityStructure::heisenberg(d));
        }
        throw std::invalid_argument("unknown variant: " + variant);
    }();

    AxiomsReport report = axioms_check(ps, samples, seed, tol);
    WitnessBox box = e_joint_witness(ps, 0.5);
    std::cout << variant << " structure, coord dim " << ps.coord_dim() << ", " << report.samples
              << " samples\n";
    std::printf("  identity %s  idempotent %s  factorization %s  annihilation %s  membership %s\n",
                report.identity_ok ? "ok" : "DEFECT", report.idempotent_ok ? "ok" : "DEFECT",
                report.factorization_ok ? "ok" : "DEFECT", report.annihilation_ok ? "ok" : "DEFECT",
                report.membership_ok ? "ok" : "DEFECT");
    std::printf("  max factorization residual %.3e\n", report.max_factorization_residual);
    std::printf("  joint unit box measure %.6e\n", box.measure);
    if (report.has_failure) {
        std::cout << "  first failure at";
        for (Eigen::Index i = 0; i < report.first_failure.size(); ++i) {
            std::cout << " " << report.first_failure(i);
        }
        std::cout << "\n";
    }
    return report.all_ok && box.measure > 0.0 ? exit_clean : exit_defect;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"semilab: a numerical laboratory for commuting operator semigroups"};
    app.set_version_flag("--version", std::string(tool_version));
    app.require_subcommand(1);

    AnalyzeArgs analyze_args;
    double tol_psd_opt = 1e-9;
    int grid_max_opt = 4;
    int threads_opt = 1;
    std::size_t mc_n_opt = 0;
    std::uint64_t seed_opt = 42;

    CLI::App* analyze = app.add_subcommand("analyze", "run the equivalence battery on a family spec");
    analyze->add_option("--spec", analyze_args.spec_path, "family spec JSON")->required();
    analyze->add_option("--out", analyze_args.out_path, "write the full JSON report here");
    auto* tol_flag = analyze->add_option("--tol-psd", tol_psd_opt, "PSD tolerance override")
                         ->envname("SEMILAB_TOL_PSD");
    auto* grid_flag = analyze->add_option("--grid-max", grid_max_opt, "max dyadic exponent of the time grid")
                          ->envname("SEMILAB_GRID_MAX");
    auto* threads_flag = analyze->add_option("--threads", threads_opt, "worker threads")
                             ->envname("SEMILAB_THREADS");
    auto* mc_flag = analyze->add_option("--mc-n", mc_n_opt, "Monte Carlo sample count override")
                        ->envname("SEMILAB_MC_N");
    auto* seed_flag = analyze->add_option("--seed", seed_opt, "Monte Carlo seed override")
                          ->envname("SEMILAB_SEED");

    int ap_dim = 4;
    std::uint64_t ap_seed = 7;
    std::string ap_variant = "both";
    std::string ap_csv;
    CLI::App* approximants = app.add_subcommand("approximants", "convergence profile of the bounded approximants");
    approximants->add_option("--dim", ap_dim, "generator dimension");
    approximants->add_option("--seed", ap_seed, "generator seed")->envname("SEMILAB_SEED");
    approximants->add_option("--variant", ap_variant, "hille | yosida | both");
    approximants->add_option("--csv", ap_csv, "write rows as CSV here");

    std::string st_law = "aux-poisson";
    double st_lambda = 1.0;
    double st_t = 1.0;
    std::size_t st_n = 100000;
    std::uint64_t st_seed = 42;
    std::string st_csv;
    CLI::App* stochastic = app.add_subcommand("stochastic", "law sampling against the closed forms");
    stochastic->add_option("--law", st_law, "dirac | scaled-poisson | aux-poisson | gaussian");
    stochastic->add_option("--lambda", st_lambda, "rate (Poisson) or variance (Gaussian)");
    stochastic->add_option("--t", st_t, "time parameter");
    stochastic->add_option("--n", st_n, "sample count")->envname("SEMILAB_MC_N");
    stochastic->add_option("--seed", st_seed, "sampling seed")->envname("SEMILAB_SEED");
    stochastic->add_option("--csv", st_csv, "write summary rows as CSV here");

    CounterexampleParams ce;
    std::string ce_out;
    CLI::App* counterexample = app.add_subcommand("counterexample", "dissipativity profile of the critical family");
    counterexample->add_option("--d", ce.d, "number of members");
    counterexample->add_option("--alpha", ce.alpha, "perturbation strength");
    counterexample->add_option("--dim1", ce.dim1, "first block dimension");
    counterexample->add_option("--dim2", ce.dim2, "second block dimension");
    counterexample->add_option("--seed", ce.seed, "isometry seed")->envname("SEMILAB_SEED");
    counterexample->add_option("--out", ce_out, "write the JSON profile here");

    std::string mo_variant = "heisenberg";
    int mo_d = 2;
    std::size_t mo_samples = 1000;
    std::uint64_t mo_seed = 7;
    double mo_tol = 1e-12;
    CLI::App* monoid = app.add_subcommand("monoid", "positive-part axioms of a group structure");
    monoid->add_option("--variant", mo_variant, "euclidean | heisenberg | heisenberg-c | product");
    monoid->add_option("--d", mo_d, "spatial dimension");
    monoid->add_option("--samples", mo_samples, "random samples");
    monoid->add_option("--seed", mo_seed, "sampling seed")->envname("SEMILAB_SEED");
    monoid->add_option("--tol", mo_tol, "factorization tolerance");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? exit_clean : exit_usage;
    }

    try {
        if (analyze->parsed()) {
            if (*tol_flag) analyze_args.tol_psd = tol_psd_opt;
            if (*grid_flag) analyze_args.grid_max = grid_max_opt;
            if (*threads_flag) analyze_args.threads = threads_opt;
            if (*mc_flag) analyze_args.mc_n = mc_n_opt;
            if (*seed_flag) analyze_args.seed = seed_opt;
            return run_analyze(analyze_args);
        }
        if (approximants->parsed()) return run_approximants(ap_dim, ap_seed, ap_variant, ap_csv);
        if (stochastic->parsed()) return run_stochastic(st_law, st_lambda, st_t, st_n, st_seed, st_csv);
        if (counterexample->parsed()) return run_counterexample(ce, ce_out);
        if (monoid->parsed()) return run_monoid(mo_variant, mo_d, mo_samples, mo_seed, mo_tol);
    } catch (const nlohmann::json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return exit_usage;
    }
    return exit_usage;
}
