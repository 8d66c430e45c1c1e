#include "semilab/analysis.hpp"

#include "semilab/calculus.hpp"
#include "semilab/util.hpp"
#include "semilab/version.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

using nlohmann::json;

double now_ms() {
    return std::chrono::duration<double, std::milli>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

json complex_to_json(Complex z) {
    return json::array({z.real(), z.imag()});
}

Complex complex_from_json(const json& doc) {
    if (!doc.is_array() || doc.size() != 2) {
        throw std::invalid_argument("spec: complex values are [re, im] pairs");
    }
    return Complex(doc[0].get<double>(), doc[1].get<double>());
}

ComplexMatrix random_gaussian_matrix(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    std::normal_distribution<double> normal(0.0, 1.0);
    ComplexMatrix m(rows, cols);
    for (Eigen::Index i = 0; i < rows; ++i) {
        for (Eigen::Index j = 0; j < cols; ++j) {
            m(i, j) = Complex(normal(rng), normal(rng));
        }
    }
    return m;
}

ComplexMatrix random_unitary(Eigen::Index n, std::mt19937_64& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian_matrix(n, n, rng));
    return qr.householderQ() * ComplexMatrix::Identity(n, n);
}

ComplexMatrix random_isometry(Eigen::Index rows, Eigen::Index cols, std::mt19937_64& rng) {
    Eigen::HouseholderQR<ComplexMatrix> qr(random_gaussian_matrix(rows, cols, rng));
    return qr.householderQ() * ComplexMatrix::Identity(rows, cols);
}

ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
    ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        for (Eigen::Index j = 0; j < a.cols(); ++j) {
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
        }
    }
    return out;
}

json subset_to_json(const std::vector<std::size_t>& K) {
    json arr = json::array();
    for (std::size_t i : K) arr.push_back(i);
    return arr;
}

json vector_to_json(const std::vector<double>& v) {
    json arr = json::array();
    for (double x : v) arr.push_back(x);
    return arr;
}

json point_to_json(const Eigen::VectorXd& v) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < v.size(); ++i) arr.push_back(v(i));
    return arr;
}

}  // namespace

json matrix_to_json(const ComplexMatrix& m) {
    json entries = json::array();
    for (Eigen::Index i = 0; i < m.rows(); ++i) {
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            entries.push_back(complex_to_json(m(i, j)));
        }
    }
    return json{{"dim", m.rows()}, {"entries", entries}};
}

ComplexMatrix matrix_from_json(const json& doc) {
    if (!doc.contains("dim") || !doc.contains("entries")) {
        throw std::invalid_argument("spec: matrix requires dim and entries");
    }
    const Eigen::Index n = doc["dim"].get<Eigen::Index>();
    const auto& entries = doc["entries"];
    if (n < 1 || !entries.is_array() || entries.size() != static_cast<std::size_t>(n * n)) {
        throw std::invalid_argument("spec: matrix entry count must equal dim^2");
    }
    ComplexMatrix m(n, n);
    std::size_t at = 0;
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < n; ++j) {
            m(i, j) = complex_from_json(entries[at++]);
        }
    }
    return m;
}

json polynomial_to_json(const LaurentPolynomial& p) {
    json terms = json::array();
    for (const auto& [exps, c] : p.terms()) {
        json term;
        json exponents = json::array();
        for (int e : exps) exponents.push_back(e);
        term["exponents"] = exponents;
        term["coeff"] = complex_to_json(c);
        terms.push_back(term);
    }
    return json{{"vars", p.vars()}, {"terms", terms}};
}

LaurentPolynomial polynomial_from_json(const json& doc) {
    if (!doc.contains("vars") || !doc.contains("terms")) {
        throw std::invalid_argument("spec: polynomial requires vars and terms");
    }
    LaurentPolynomial p(doc["vars"].get<std::size_t>());
    for (const auto& term : doc["terms"]) {
        std::vector<int> exps;
        for (const auto& e : term.at("exponents")) exps.push_back(e.get<int>());
        p.add_term(exps, complex_from_json(term.at("coeff")));
    }
    return p;
}

FamilySpec parse_family_spec(const json& doc) {
    FamilySpec spec;
    if (!doc.is_object()) throw std::invalid_argument("spec: object required");
    spec.schema = doc.value("schema", 1);
    if (spec.schema != 1) throw std::invalid_argument("spec: unsupported schema");

    const json family = doc.value("family", json{{"kind", "tensor"}});
    const std::string kind = family.value("kind", "tensor");
    if (kind == "explicit") {
        spec.source = FamilySource::explicit_list;
        if (!family.contains("generators") || !family["generators"].is_array() ||
            family["generators"].empty()) {
            throw std::invalid_argument("spec: explicit family requires generators");
        }
        for (const auto& g : family["generators"]) {
            spec.generators.push_back(matrix_from_json(g));
        }
    } else if (kind == "tensor") {
        spec.source = FamilySource::tensor;
        spec.d = family.value("d", 2);
        spec.block_dims.clear();
        if (family.contains("block_dims")) {
            for (const auto& b : family["block_dims"]) spec.block_dims.push_back(b.get<int>());
        } else {
            spec.block_dims.assign(static_cast<std::size_t>(spec.d), 2);
        }
        spec.family_seed = family.value("seed", std::uint64_t{7});
    } else if (kind == "diagonalizable") {
        spec.source = FamilySource::diagonalizable;
        spec.d = family.value("d", 2);
        spec.dim = family.value("dim", 4);
        spec.family_seed = family.value("seed", std::uint64_t{7});
    } else if (kind == "counterexample") {
        spec.source = FamilySource::counterexample;
        spec.counterexample.d = family.value("d", 2);
        spec.counterexample.dim1 = family.value("dim1", 4);
        spec.counterexample.dim2 = family.value("dim2", 2);
        spec.counterexample.alpha = family.value("alpha", 0.8);
        spec.counterexample.seed = family.value("seed", std::uint64_t{1});
    } else if (kind == "ccr") {
        spec.source = FamilySource::ccr;
        spec.ccr.m = family.value("m", 2);
        spec.ccr.points = family.value("points", 6);
        if (family.contains("rate")) spec.ccr.rate = complex_from_json(family["rate"]);
        spec.ccr.shifts.clear();
        spec.ccr.weights.clear();
        if (family.contains("shifts")) {
            for (const auto& s : family["shifts"]) {
                Eigen::VectorXi u(static_cast<Eigen::Index>(s.size()));
                for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = s[static_cast<std::size_t>(i)].get<int>();
                spec.ccr.shifts.push_back(std::move(u));
            }
        }
        if (family.contains("weights")) {
            for (const auto& w : family["weights"]) {
                Eigen::VectorXd a(static_cast<Eigen::Index>(w.size()));
                for (Eigen::Index i = 0; i < a.size(); ++i) a(i) = w[static_cast<std::size_t>(i)].get<double>();
                spec.ccr.weights.push_back(std::move(a));
            }
        }
    } else {
        throw std::invalid_argument("spec: unknown family kind");
    }

    const json battery = doc.value("battery", json::object());
    spec.run_dissipativity = battery.value("dissipativity", true);
    spec.run_pk_scan = battery.value("pk_scan", true);
    spec.run_approximants = battery.value("approximants", true);
    spec.run_poly_bounds = battery.value("poly_bounds", true);
    spec.run_gram = battery.value("gram", true);

    const json grids = doc.value("grids", json::object());
    if (grids.contains("t_axis")) {
        spec.t_axis_grid.clear();
        for (const auto& t : grids["t_axis"]) spec.t_axis_grid.push_back(t.get<double>());
        if (spec.t_axis_grid.empty()) throw std::invalid_argument("spec: empty t_axis grid");
    } else {
        spec.t_axis_grid = default_t_axis_grid(grids.value("t_min_exp", -10), grids.value("t_max_exp", 4));
    }
    if (grids.contains("lambdas")) {
        spec.lambdas.clear();
        for (const auto& l : grids["lambdas"]) spec.lambdas.push_back(l.get<double>());
        if (spec.lambdas.empty()) throw std::invalid_argument("spec: empty lambda grid");
    }
    if (grids.contains("gram_h_exponents")) {
        spec.gram_h_exponents.clear();
        for (const auto& e : grids["gram_h_exponents"]) spec.gram_h_exponents.push_back(e.get<int>());
    }
    spec.torus_resolution = grids.value("torus_resolution", std::size_t{128});

    const json tolerances = doc.value("tolerances", json::object());
    spec.tol_psd = tolerances.value("psd", 1e-9);
    if (tolerances.contains("commutator") && !tolerances["commutator"].is_null()) {
        spec.tol_commuting = tolerances["commutator"].get<double>();
    }

    const json mc = doc.value("mc", json::object());
    spec.mc_n = mc.value("n", std::size_t{0});
    spec.mc_seed = mc.value("seed", std::uint64_t{42});
    spec.threads = doc.value("threads", 1);
    return spec;
}

json family_spec_to_json(const FamilySpec& spec) {
    json family;
    switch (spec.source) {
        case FamilySource::explicit_list: {
            family["kind"] = "explicit";
            json gens = json::array();
            for (const auto& g : spec.generators) gens.push_back(matrix_to_json(g));
            family["generators"] = gens;
            break;
        }
        case FamilySource::tensor: {
            family["kind"] = "tensor";
            family["d"] = spec.d;
            json dims = json::array();
            for (int b : spec.block_dims) dims.push_back(b);
            family["block_dims"] = dims;
            family["seed"] = spec.family_seed;
            break;
        }
        case FamilySource::diagonalizable:
            family["kind"] = "diagonalizable";
            family["d"] = spec.d;
            family["dim"] = spec.dim;
            family["seed"] = spec.family_seed;
            break;
        case FamilySource::counterexample:
            family["kind"] = "counterexample";
            family["d"] = spec.counterexample.d;
            family["dim1"] = spec.counterexample.dim1;
            family["dim2"] = spec.counterexample.dim2;
            family["alpha"] = spec.counterexample.alpha;
            family["seed"] = spec.counterexample.seed;
            break;
        case FamilySource::ccr: {
            family["kind"] = "ccr";
            family["m"] = spec.ccr.m;
            family["points"] = spec.ccr.points;
            family["rate"] = complex_to_json(spec.ccr.rate);
            json shifts = json::array();
            for (const auto& u : spec.ccr.shifts) {
                json row = json::array();
                for (Eigen::Index i = 0; i < u.size(); ++i) row.push_back(u(i));
                shifts.push_back(row);
            }
            family["shifts"] = shifts;
            json weights = json::array();
            for (const auto& a : spec.ccr.weights) {
                json row = json::array();
                for (Eigen::Index i = 0; i < a.size(); ++i) row.push_back(a(i));
                weights.push_back(row);
            }
            family["weights"] = weights;
            break;
        }
    }

    json grids;
    grids["t_axis"] = vector_to_json(spec.t_axis_grid);
    grids["lambdas"] = vector_to_json(spec.lambdas);
    json exps = json::array();
    for (int e : spec.gram_h_exponents) exps.push_back(e);
    grids["gram_h_exponents"] = exps;
    grids["torus_resolution"] = spec.torus_resolution;

    json tolerances;
    tolerances["psd"] = spec.tol_psd;
    tolerances["commutator"] = spec.tol_commuting ? json(*spec.tol_commuting) : json(nullptr);

    return json{
        {"schema", spec.schema},
        {"family", family},
        {"battery",
         {{"dissipativity", spec.run_dissipativity},
          {"pk_scan", spec.run_pk_scan},
          {"approximants", spec.run_approximants},
          {"poly_bounds", spec.run_poly_bounds},
          {"gram", spec.run_gram}}},
        {"grids", grids},
        {"tolerances", tolerances},
        {"mc", {{"n", spec.mc_n}, {"seed", spec.mc_seed}}},
        {"threads", spec.threads},
    };
}

std::string spec_digest(const FamilySpec& spec) {
    return fnv1a64_hex(family_spec_to_json(spec).dump());
}

CommutingFamily random_tensor_family(int d, const std::vector<int>& block_dims, std::uint64_t seed) {
    if (d < 1 || block_dims.size() != static_cast<std::size_t>(d)) {
        throw std::invalid_argument("random_tensor_family: one block dimension per member required");
    }
    std::vector<ComplexMatrix> blocks;
    for (int i = 0; i < d; ++i) {
        if (block_dims[static_cast<std::size_t>(i)] < 1) {
            throw std::invalid_argument("random_tensor_family: positive block dimensions required");
        }
        auto rng = make_rng(seed, 11 + static_cast<std::uint64_t>(i));
        const Eigen::Index b = block_dims[static_cast<std::size_t>(i)];
        ComplexMatrix g = random_gaussian_matrix(b, b, rng);
        g *= 0.5 / std::max(1.0, operator_norm(g));
        Eigen::SelfAdjointEigenSolver<ComplexMatrix> herm(0.5 * (g + g.adjoint()));
        double shift = 0.1 + std::max(0.0, herm.eigenvalues().maxCoeff());
        blocks.push_back(g - shift * ComplexMatrix::Identity(b, b));
    }
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < d; ++i) {
        ComplexMatrix lifted = ComplexMatrix::Identity(1, 1);
        for (int j = 0; j < d; ++j) {
            const Eigen::Index b = block_dims[static_cast<std::size_t>(j)];
            lifted = kron(lifted, j == i ? blocks[static_cast<std::size_t>(j)]
                                         : ComplexMatrix::Identity(b, b));
        }
        gens.push_back(std::move(lifted));
    }
    return CommutingFamily(std::move(gens));
}

CommutingFamily random_diagonalizable_family(int d, int dim, std::uint64_t seed) {
    if (d < 1 || dim < 1) {
        throw std::invalid_argument("random_diagonalizable_family: positive sizes required");
    }
    auto rng = make_rng(seed, 31);
    ComplexMatrix q = random_unitary(dim, rng);
    std::uniform_real_distribution<double> real_part(-1.2, -0.05);
    std::uniform_real_distribution<double> imag_part(-1.0, 1.0);
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < d; ++i) {
        ComplexVector diag(dim);
        for (int k = 0; k < dim; ++k) diag(k) = Complex(real_part(rng), imag_part(rng));
        gens.push_back(q * diag.asDiagonal() * q.adjoint());
    }
    return CommutingFamily(std::move(gens));
}

CommutingFamily build_counterexample(const CounterexampleParams& params) {
    if (params.d < 2) throw std::invalid_argument("build_counterexample: at least two members required");
    if (params.dim2 < 1 || params.dim1 < params.dim2) {
        throw std::invalid_argument("build_counterexample: dim1 >= dim2 >= 1 required");
    }
    const double lo = 1.0 / std::sqrt(static_cast<double>(params.d));
    const double hi = 1.0 / std::sqrt(static_cast<double>(params.d) - 1.0);
    if (!(params.alpha > lo && params.alpha < hi)) {
        throw std::invalid_argument("build_counterexample: alpha outside the admissible open interval");
    }
    const Eigen::Index n = params.dim1 + params.dim2;
    std::vector<ComplexMatrix> gens;
    for (int i = 0; i < params.d; ++i) {
        auto rng = make_rng(params.seed, 21 + static_cast<std::uint64_t>(i));
        ComplexMatrix v = random_isometry(params.dim1, params.dim2, rng);
        ComplexMatrix a = -ComplexMatrix::Identity(n, n);
        a.block(0, params.dim1, params.dim1, params.dim2) = 2.0 * params.alpha * v;
        gens.push_back(std::move(a));
    }
    CommutingFamily fam(std::move(gens));

    // Construction gates: exact commutation, uniform dissipativity margin,
    // spectra at -1, isometric legs.
    if (fam.commutator_bound() > 1e-12 * std::max(1.0, fam.generator_scale() * fam.generator_scale())) {
        throw std::logic_error("build_counterexample: legs fail to commute");
    }
    for (std::size_t i = 0; i < fam.size(); ++i) {
        if (!is_dissipative(fam.generator(i)).is_psd) {
            throw std::logic_error("build_counterexample: leg is not dissipative");
        }
        Eigen::ComplexEigenSolver<ComplexMatrix> solver(fam.generator(i).a, false);
        for (Eigen::Index k = 0; k < n; ++k) {
            if (std::abs(solver.eigenvalues()(k) - Complex(-1.0, 0.0)) > 1e-9) {
                throw std::logic_error("build_counterexample: spectrum moved away from -1");
            }
        }
    }
    return fam;
}

CommutingFamily build_family(const FamilySpec& spec) {
    switch (spec.source) {
        case FamilySource::explicit_list: {
            std::vector<ComplexMatrix> gens = spec.generators;
            return spec.tol_commuting ? CommutingFamily(std::move(gens), *spec.tol_commuting)
                                      : CommutingFamily(std::move(gens));
        }
        case FamilySource::tensor:
            return random_tensor_family(spec.d, spec.block_dims, spec.family_seed);
        case FamilySource::diagonalizable:
            return random_diagonalizable_family(spec.d, spec.dim, spec.family_seed);
        case FamilySource::counterexample:
            return build_counterexample(spec.counterexample);
        case FamilySource::ccr:
            throw std::invalid_argument(
                "build_family: ccr recipes describe a discrete monoid family; use the monoid tools");
    }
    throw std::logic_error("build_family: unknown source");
}

namespace {

json psd_to_json(const PsdVerdict& v) {
    return json{{"is_psd", v.is_psd}, {"min_eigenvalue", v.min_eigenvalue}, {"scale", v.scale}};
}

// Shared scan structure: every nonempty subset K crossed with the axis grid
// restricted to K.
struct SubsetGridWalk {
    std::vector<std::size_t> K;
    std::vector<double> t_full;   // time vector padded with zeros off K
    std::vector<double> t_on_k;   // times on the K axes
};

void walk_subset_grids(std::size_t d, const std::vector<double>& axis_grid,
                       const std::function<void(const SubsetGridWalk&)>& visit) {
    for (std::size_t mask = 1; mask < (std::size_t{1} << d); ++mask) {
        SubsetGridWalk walk;
        for (std::size_t i = 0; i < d; ++i) {
            if ((mask >> i) & 1) walk.K.push_back(i);
        }
        const std::size_t k = walk.K.size();
        std::size_t points = 1;
        for (std::size_t j = 0; j < k; ++j) points *= axis_grid.size();
        for (std::size_t flat = 0; flat < points; ++flat) {
            walk.t_full.assign(d, 0.0);
            walk.t_on_k.assign(k, 0.0);
            std::size_t rem = flat;
            for (std::size_t j = 0; j < k; ++j) {
                double t = axis_grid[rem % axis_grid.size()];
                rem /= axis_grid.size();
                walk.t_on_k[j] = t;
                walk.t_full[walk.K[j]] = t;
            }
            visit(walk);
        }
    }
}

}  // namespace

json run_equivalence_battery(const CommutingFamily& fam, const FamilySpec& spec) {
    json columns = json::object();
    json adjuncts = json::object();
    json witnesses = json::object();
    std::vector<std::string> column_names;
    std::vector<bool> column_passes;

    if (spec.run_dissipativity) {
        DissipativityReport report = complete_dissipativity_report(fam, spec.tol_psd);
        json col;
        col["pass"] = report.completely_dissipative;
        col["worst_min_eigenvalue"] = report.worst_min_eigenvalue;
        col["worst_K"] = subset_to_json(report.worst_K);
        json rows = json::array();
        for (const auto& row : report.per_subset) {
            rows.push_back(json{{"K", subset_to_json(row.K)}, {"verdict", psd_to_json(row.verdict)}});
        }
        col["subsets"] = rows;
        columns["complete_dissipativity"] = col;
        column_names.push_back("complete_dissipativity");
        column_passes.push_back(report.completely_dissipative);
        if (!report.completely_dissipative) {
            witnesses["complete_dissipativity"] =
                json{{"K", subset_to_json(report.worst_K)},
                     {"min_eigenvalue", report.worst_min_eigenvalue}};
        }
    }

    PkScanReport scan;
    bool scan_ran = false;
    if (spec.run_pk_scan) {
        scan = pk_positivity_scan(fam, spec.t_axis_grid, spec.tol_psd, spec.threads);
        scan_ran = true;
        json col;
        col["pass"] = scan.all_psd;
        col["points_checked"] = scan.points_checked;
        col["worst"] = json{{"K", subset_to_json(scan.worst.K)},
                            {"t", vector_to_json(scan.worst.t)},
                            {"min_eigenvalue", scan.worst.min_eigenvalue}};
        columns["pk_positivity"] = col;
        column_names.push_back("pk_positivity");
        column_passes.push_back(scan.all_psd);
        if (!scan.all_psd) {
            json fails = json::array();
            for (std::size_t i = 0; i < scan.failures.size() && i < 8; ++i) {
                fails.push_back(json{{"K", subset_to_json(scan.failures[i].K)},
                                     {"t", vector_to_json(scan.failures[i].t)},
                                     {"min_eigenvalue", scan.failures[i].min_eigenvalue}});
            }
            witnesses["pk_positivity"] = fails;
        }
    }

    if (spec.run_approximants) {
        bool pass = true;
        json rows = json::array();
        json witness;
        for (double lambda : spec.lambdas) {
            for (ApproximantVariant variant : {ApproximantVariant::hille, ApproximantVariant::yosida}) {
                const char* kind_name = variant == ApproximantVariant::hille ? "hille" : "yosida";
                json row{{"kind", kind_name}, {"lambda", lambda}};
                std::vector<ComplexMatrix> gens;
                bool admissible = true;
                for (std::size_t i = 0; i < fam.size(); ++i) {
                    try {
                        gens.push_back(approximant_generator(fam.generator(i), {variant, lambda}).a);
                    } catch (const std::invalid_argument&) {
                        admissible = false;
                        break;
                    }
                }
                if (!admissible) {
                    row["skipped"] = "rate below the admissibility threshold";
                    rows.push_back(row);
                    continue;
                }
                CommutingFamily lifted(std::move(gens), -1.0, true);
                DissipativityReport report = complete_dissipativity_report(lifted, spec.tol_psd);
                row["pass"] = report.completely_dissipative;
                row["worst_min_eigenvalue"] = report.worst_min_eigenvalue;
                row["worst_K"] = subset_to_json(report.worst_K);
                rows.push_back(row);
                if (!report.completely_dissipative && pass) {
                    witness = json{{"kind", kind_name},
                                   {"lambda", lambda},
                                   {"K", subset_to_json(report.worst_K)},
                                   {"min_eigenvalue", report.worst_min_eigenvalue}};
                }
                pass = pass && report.completely_dissipative;
            }
        }
        json col;
        col["pass"] = pass;
        col["rows"] = rows;
        columns["approximant_dissipativity"] = col;
        column_names.push_back("approximant_dissipativity");
        column_passes.push_back(pass);
        if (!pass) witnesses["approximant_dissipativity"] = witness;
    }

    if (spec.run_poly_bounds) {
        // Corpus: p_K with exact sup 4^|K|, and its half shift
        // q_K = 4^|K|/2 - p_K with exact sup 4^|K|/2.  Both verdicts follow
        // from the spectrum of p_K at the grid point.
        std::vector<std::vector<ComplexMatrix>> cache(fam.size());
        for (std::size_t i = 0; i < fam.size(); ++i) {
            for (double t : spec.t_axis_grid) cache[i].push_back(fam.evaluate_member(i, t));
        }
        bool pass = true;
        json violations = json::array();
        double worst_excess = 0.0;
        walk_subset_grids(fam.size(), spec.t_axis_grid, [&](const SubsetGridWalk& walk) {
            const std::size_t k = walk.K.size();
            std::vector<std::size_t> all_of_k(k);
            for (std::size_t j = 0; j < k; ++j) all_of_k[j] = j;
            std::vector<ComplexMatrix> mats(k);
            for (std::size_t j = 0; j < k; ++j) {
                std::size_t gi = 0;
                while (spec.t_axis_grid[gi] != walk.t_on_k[j]) ++gi;
                mats[j] = cache[walk.K[j]][gi];
            }
            ComplexMatrix value = regular_poly_eval(p_k_polynomial(k, all_of_k), mats);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(0.5 * (value + value.adjoint()),
                                                                Eigen::EigenvaluesOnly);
            const double lo_eig = solver.eigenvalues().minCoeff();
            const double hi_eig = solver.eigenvalues().maxCoeff();
            const double cap = std::pow(4.0, static_cast<double>(k));
            // p_K bound: |spectrum| <= 4^k; q_K bound: spectrum >= -tol.
            bool p_ok = std::max(std::abs(lo_eig), std::abs(hi_eig)) <= cap + spec.tol_psd;
            bool q_ok = lo_eig >= -spec.tol_psd && hi_eig <= cap + spec.tol_psd;
            if (!p_ok || !q_ok) {
                pass = false;
                double excess = std::max({std::abs(lo_eig) - cap, std::abs(hi_eig) - cap, -lo_eig});
                if (violations.size() < 8) {
                    violations.push_back(json{{"polynomial", p_ok ? "half_shifted_p_K" : "p_K"},
                                              {"K", subset_to_json(walk.K)},
                                              {"t", vector_to_json(walk.t_full)},
                                              {"spectrum_min", lo_eig},
                                              {"spectrum_max", hi_eig},
                                              {"sup_bound", p_ok ? cap / 2.0 : cap}});
                }
                worst_excess = std::max(worst_excess, excess);
            }
        });
        json adjunct;
        adjunct["pass"] = pass;
        adjunct["worst_excess"] = worst_excess;
        if (!pass) {
            adjunct["violations"] = violations;
            witnesses["regular_polynomial_bounds"] = violations;
        }
        adjuncts["regular_polynomial_bounds"] = adjunct;
        column_names.push_back("regular_polynomial_bounds");
        column_passes.push_back(pass);
    }

    if (spec.run_gram) {
        MonoidRep rep = family_rep(fam);
        PositivityStructure structure = PositivityStructure::euclidean(static_cast<int>(fam.size()));
        bool pass = true;
        json rows = json::array();
        json witness;
        for (int e : spec.gram_h_exponents) {
            double h = std::pow(2.0, e);
            GramVerdict verdict =
                gram_kernel_test(structure, rep, euclidean_lattice(static_cast<int>(fam.size()), h),
                                 spec.tol_psd);
            rows.push_back(json{{"kind", "lattice"},
                                {"h", h},
                                {"is_psd", verdict.verdict.is_psd},
                                {"min_eigenvalue", verdict.verdict.min_eigenvalue}});
            if (!verdict.verdict.is_psd && pass) {
                witness = json{{"kind", "lattice"},
                               {"h", h},
                               {"min_eigenvalue", verdict.verdict.min_eigenvalue}};
            }
            pass = pass && verdict.verdict.is_psd;
        }
        {
            // Random cloud in the open orthant.
            auto rng = make_rng(spec.mc_seed, 301);
            std::exponential_distribution<double> expo(1.0);
            std::vector<Eigen::VectorXd> cloud{Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fam.size()))};
            for (int p = 0; p < 7; ++p) {
                Eigen::VectorXd x(static_cast<Eigen::Index>(fam.size()));
                for (Eigen::Index i = 0; i < x.size(); ++i) x(i) = expo(rng);
                cloud.push_back(std::move(x));
            }
            GramVerdict verdict = gram_kernel_test(structure, rep, cloud, spec.tol_psd);
            rows.push_back(json{{"kind", "cloud"},
                                {"points", cloud.size()},
                                {"is_psd", verdict.verdict.is_psd},
                                {"min_eigenvalue", verdict.verdict.min_eigenvalue}});
            if (!verdict.verdict.is_psd && pass) {
                json points = json::array();
                for (const auto& x : cloud) points.push_back(point_to_json(x));
                witness = json{{"kind", "cloud"},
                               {"points", points},
                               {"min_eigenvalue", verdict.verdict.min_eigenvalue}};
            }
            pass = pass && verdict.verdict.is_psd;
        }
        if (pass && scan_ran && !scan.all_psd) {
            // The scan found a negative direction; the two-corner lattice on
            // the failing axes converts it into a Gram certificate.
            std::vector<Eigen::VectorXd> corners;
            const std::size_t k = scan.worst.K.size();
            for (std::size_t mask = 0; mask < (std::size_t{1} << k); ++mask) {
                Eigen::VectorXd x = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(fam.size()));
                for (std::size_t j = 0; j < k; ++j) {
                    if ((mask >> j) & 1) x(static_cast<Eigen::Index>(scan.worst.K[j])) = scan.worst.t[j];
                }
                corners.push_back(std::move(x));
            }
            GramVerdict verdict = gram_kernel_test(structure, rep, corners, spec.tol_psd);
            rows.push_back(json{{"kind", "scan_corners"},
                                {"t", vector_to_json(scan.worst.t)},
                                {"is_psd", verdict.verdict.is_psd},
                                {"min_eigenvalue", verdict.verdict.min_eigenvalue}});
            if (!verdict.verdict.is_psd) {
                json points = json::array();
                for (const auto& x : corners) points.push_back(point_to_json(x));
                witness = json{{"kind", "scan_corners"},
                               {"points", points},
                               {"min_eigenvalue", verdict.verdict.min_eigenvalue}};
            }
            pass = pass && verdict.verdict.is_psd;
        }
        json adjunct;
        adjunct["pass"] = pass;
        adjunct["rows"] = rows;
        adjuncts["dilation_evidence_gram"] = adjunct;
        column_names.push_back("dilation_evidence_gram");
        column_passes.push_back(pass);
        if (!pass) witnesses["dilation_evidence_gram"] = witness;
    }

    bool all_pass = true, all_fail = true;
    for (bool p : column_passes) {
        all_pass = all_pass && p;
        all_fail = all_fail && !p;
    }
    const bool agreement = column_passes.empty() || all_pass || all_fail;

    json battery;
    battery["columns"] = columns;
    battery["adjuncts"] = adjuncts;
    battery["witnesses"] = witnesses;
    battery["agreement"] = agreement;
    battery["overall"] = all_pass ? "PASS" : "FAIL";
    if (!agreement) {
        json defect = json::object();
        for (std::size_t i = 0; i < column_names.size(); ++i) {
            defect[column_names[i]] = column_passes[i];
        }
        battery["defect"] = defect;
    }
    return battery;
}

json analysis_report(const FamilySpec& spec) {
    json report;
    report["schema"] = 1;
    report["tool_version"] = tool_version;
    report["spec_digest"] = spec_digest(spec);
    report["spec"] = family_spec_to_json(spec);
    report["seeds"] = json{{"family", spec.family_seed}, {"mc", spec.mc_seed}};

    json timings;
    double t0 = now_ms();
    CommutingFamily fam = build_family(spec);
    timings["build_ms"] = now_ms() - t0;

    report["family"] = json{{"members", fam.size()},
                            {"dim", fam.dim()},
                            {"commutator_bound", fam.commutator_bound()},
                            {"commutator_tolerance", fam.declared_tolerance()}};

    t0 = now_ms();
    json battery = run_equivalence_battery(fam, spec);
    timings["battery_ms"] = now_ms() - t0;

    report["verdicts"] = json{{"columns", battery["columns"]},
                              {"adjuncts", battery["adjuncts"]},
                              {"agreement", battery["agreement"]},
                              {"overall", battery["overall"]}};
    if (battery.contains("defect")) report["verdicts"]["defect"] = battery["defect"];
    report["witnesses"] = battery["witnesses"];
    report["timings_ms"] = timings;
    return report;
}

PowerDilationResult finite_power_dilation(const ComplexMatrix& s, int horizon,
                                          double tol_unitary, double tol_residual) {
    if (s.rows() != s.cols() || s.rows() == 0) {
        throw std::invalid_argument("finite_power_dilation: nonempty square matrix required");
    }
    if (horizon < 1) throw std::invalid_argument("finite_power_dilation: positive horizon required");
    if (operator_norm(s) > 1.0 + 1e-10) {
        throw std::invalid_argument("finite_power_dilation: contraction required");
    }
    const Eigen::Index k = s.rows();
    const Eigen::Index blocks = horizon + 1;

    // Both defect roots come from one SVD so the intertwining identities
    // cancel at machine precision even for nearly unitary inputs.
    const ComplexMatrix id = ComplexMatrix::Identity(k, k);
    Eigen::JacobiSVD<ComplexMatrix> svd(s, Eigen::ComputeFullU | Eigen::ComputeFullV);
    Eigen::VectorXd defects =
        (1.0 - svd.singularValues().array().square()).max(0.0).sqrt().matrix();
    ComplexMatrix d_s = svd.matrixV() * defects.asDiagonal() * svd.matrixV().adjoint();
    ComplexMatrix d_s_adj = svd.matrixU() * defects.asDiagonal() * svd.matrixU().adjoint();

    PowerDilationResult out;
    out.block = k;
    out.horizon = horizon;
    out.u = ComplexMatrix::Zero(blocks * k, blocks * k);
    out.u.block(0, 0, k, k) = s;
    out.u.block(0, (blocks - 1) * k, k, k) = d_s_adj;
    out.u.block(k, 0, k, k) = d_s;
    out.u.block(k, (blocks - 1) * k, k, k) = -s.adjoint();
    for (Eigen::Index j = 2; j < blocks; ++j) {
        out.u.block(j * k, (j - 1) * k, k, k) = id;
    }

    out.unitarity_defect = operator_norm(
        out.u.adjoint() * out.u - ComplexMatrix::Identity(blocks * k, blocks * k));

    ComplexMatrix u_power = ComplexMatrix::Identity(blocks * k, blocks * k);
    ComplexMatrix s_power = id;
    for (int p = 0; p <= horizon; ++p) {
        out.max_residual = std::max(out.max_residual,
                                    operator_norm(u_power.block(0, 0, k, k) - s_power));
        if (p < horizon) {
            u_power = u_power * out.u;
            s_power = s_power * s;
        }
    }
    out.ok = out.unitarity_defect <= tol_unitary && out.max_residual <= tol_residual;
    return out;
}

}
