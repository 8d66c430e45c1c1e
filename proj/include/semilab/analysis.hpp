#pragma once

#include "semilab/dissipativity.hpp"
#include "semilab/monoid.hpp"
#include "semilab/semigroup.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace semilab {

enum class FamilySource { explicit_list, tensor, diagonalizable, counterexample, ccr };

struct CounterexampleParams {
    int d = 2;
    int dim1 = 4;
    int dim2 = 2;
    double alpha = 0.8;
    std::uint64_t seed = 1;
};

struct CcrParams {
    int m = 2;
    int points = 6;
    Complex rate = Complex(-0.3, 0.0);
    std::vector<Eigen::VectorXi> shifts;
    std::vector<Eigen::VectorXd> weights;
};

/// Declarative description of a commuting family plus the battery
/// configuration; serializes to a canonical JSON document.
struct FamilySpec {
    int schema = 1;
    FamilySource source = FamilySource::tensor;

    std::vector<ComplexMatrix> generators;  // explicit_list
    int d = 2;                              // tensor / diagonalizable
    std::vector<int> block_dims = {2, 2};   // tensor
    int dim = 4;                            // diagonalizable
    std::uint64_t family_seed = 7;
    CounterexampleParams counterexample;
    CcrParams ccr;

    bool run_dissipativity = true;
    bool run_pk_scan = true;
    bool run_approximants = true;
    bool run_poly_bounds = true;
    bool run_gram = true;

    std::vector<double> t_axis_grid = default_t_axis_grid();
    std::vector<double> lambdas = {2.0, 8.0, 32.0};
    std::vector<int> gram_h_exponents = {0, -1, -2, -3, -4, -5, -6, -7, -8};
    std::size_t torus_resolution = 128;

    double tol_psd = 1e-9;
    std::optional<double> tol_commuting;

    std::size_t mc_n = 0;
    std::uint64_t mc_seed = 42;
    int threads = 1;
};

FamilySpec parse_family_spec(const nlohmann::json& doc);
nlohmann::json family_spec_to_json(const FamilySpec& spec);
std::string spec_digest(const FamilySpec& spec);

/// Materializes the commuting family a spec describes.
CommutingFamily build_family(const FamilySpec& spec);

/// Two nilpotent perturbations of -I with commuting legs; completely
/// dissipative at every proper order and certified non-dissipative at the
/// full order for admissible alpha.
CommutingFamily build_counterexample(const CounterexampleParams& params);

/// d independent tensor legs with strictly dissipative random blocks.
CommutingFamily random_tensor_family(int d, const std::vector<int>& block_dims, std::uint64_t seed);

/// Simultaneously diagonalizable family with spectra in the open left half
/// plane.
CommutingFamily random_diagonalizable_family(int d, int dim, std::uint64_t seed);

/// Runs the configured verdict columns and adjunct evidence; every FAIL
/// carries a witness.  Column vocabulary: complete_dissipativity,
/// pk_positivity, approximant_dissipativity, with regular_polynomial_bounds
/// and dilation_evidence_gram as adjuncts.
nlohmann::json run_equivalence_battery(const CommutingFamily& fam, const FamilySpec& spec);

/// Full analysis report around the battery: digest, verdicts, witnesses,
/// timings, seeds.
nlohmann::json analysis_report(const FamilySpec& spec);

struct PowerDilationResult {
    ComplexMatrix u;
    Eigen::Index block = 0;       // base space dimension
    int horizon = 0;              // powers 0..horizon are compressed exactly
    double unitarity_defect = 0.0;
    double max_residual = 0.0;
    bool ok = false;
};

/// Block unitary on (horizon + 1) copies of the base space whose corner
/// compressions reproduce S^k for k = 0..horizon.
PowerDilationResult finite_power_dilation(const ComplexMatrix& s, int horizon,
                                          double tol_unitary = 1e-10,
                                          double tol_residual = 1e-8);

/// Matrix serialization helpers shared by the spec and report formats:
/// row-major entries as [re, im] pairs.
nlohmann::json matrix_to_json(const ComplexMatrix& m);
ComplexMatrix matrix_from_json(const nlohmann::json& doc);
nlohmann::json polynomial_to_json(const LaurentPolynomial& p);
LaurentPolynomial polynomial_from_json(const nlohmann::json& doc);

}
