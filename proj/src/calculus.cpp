#include "semilab/calculus.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

std::ptrdiff_t find_point(const std::vector<Eigen::VectorXd>& support, const Eigen::VectorXd& x,
                          double tol) {
    for (std::size_t i = 0; i < support.size(); ++i) {
        if ((support[i] - x).cwiseAbs().maxCoeff() <= tol) return static_cast<std::ptrdiff_t>(i);
    }
    return -1;
}

void append_term(FiniteFunction& f, const Eigen::VectorXd& x, Complex c, double tol) {
    std::ptrdiff_t at = find_point(f.support, x, tol);
    if (at < 0) {
        if (std::abs(c) > 0.0) {
            f.support.push_back(x);
            f.coeff.push_back(c);
        }
        return;
    }
    f.coeff[static_cast<std::size_t>(at)] += c;
    if (std::abs(f.coeff[static_cast<std::size_t>(at)]) == 0.0) {
        f.support.erase(f.support.begin() + at);
        f.coeff.erase(f.coeff.begin() + at);
    }
}

ComplexMatrix rep_pair(const PositivityStructure& ps, const MonoidRep& rep,
                       const Eigen::VectorXd& x) {
    ComplexMatrix neg = rep(ps.negative_part(x));
    ComplexMatrix pos = rep(ps.positive_part(x));
    return neg.adjoint() * pos;
}

}  // namespace

FiniteFunction make_finite_function(const PositivityStructure& ps,
                                    std::vector<Eigen::VectorXd> points,
                                    std::vector<Complex> values, double merge_tol) {
    if (points.size() != values.size()) {
        throw std::invalid_argument("make_finite_function: one value per point required");
    }
    FiniteFunction f;
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (points[i].size() != ps.coord_dim()) {
            throw std::invalid_argument("make_finite_function: coordinate arity mismatch");
        }
        append_term(f, points[i], values[i], merge_tol);
    }
    return f;
}

FiniteFunction point_mass(const PositivityStructure& ps, const Eigen::VectorXd& x, Complex value) {
    return make_finite_function(ps, {x}, {value});
}

FiniteFunction convolution(const PositivityStructure& ps, const FiniteFunction& f,
                           const FiniteFunction& g, double merge_tol) {
    FiniteFunction out;
    for (std::size_t i = 0; i < f.support.size(); ++i) {
        for (std::size_t j = 0; j < g.support.size(); ++j) {
            append_term(out, ps.multiply(f.support[i], g.support[j]), f.coeff[i] * g.coeff[j],
                        merge_tol);
        }
    }
    return out;
}

FiniteFunction involution(const PositivityStructure& ps, const FiniteFunction& f) {
    FiniteFunction out;
    out.support.reserve(f.support.size());
    out.coeff.reserve(f.coeff.size());
    for (std::size_t i = 0; i < f.support.size(); ++i) {
        out.support.push_back(ps.inverse(f.support[i]));
        out.coeff.push_back(std::conj(f.coeff[i]));
    }
    return out;
}

MonoidRep family_rep(const CommutingFamily& fam) {
    // Copy the family into the closure so the representation owns its data.
    auto shared = std::make_shared<CommutingFamily>(fam);
    return [shared](const Eigen::VectorXd& x) {
        if (x.size() != static_cast<Eigen::Index>(shared->size())) {
            throw std::invalid_argument("family_rep: coordinate arity mismatch");
        }
        ComplexMatrix out = ComplexMatrix::Identity(shared->dim(), shared->dim());
        for (std::size_t i = 0; i < shared->size(); ++i) {
            double t = x(static_cast<Eigen::Index>(i));
            if (t < 0.0) {
                if (t < -1e-9) throw std::invalid_argument("family_rep: monoid points required");
                t = 0.0;
            }
            out = out * shared->evaluate_member(i, t);
        }
        return out;
    };
}

MonoidRep ccr_rep(const CcrFamily& fam) {
    auto shared = std::make_shared<CcrFamily>(fam);
    return [shared](const Eigen::VectorXd& x) {
        const Eigen::Index d = static_cast<Eigen::Index>(shared->members());
        if (x.size() != d + 1) {
            throw std::invalid_argument("ccr_rep: coordinate arity mismatch");
        }
        Eigen::VectorXi steps(d);
        for (Eigen::Index i = 0; i < d; ++i) {
            double rounded = std::round(x(i));
            if (std::abs(x(i) - rounded) > 1e-9 || rounded < -0.5) {
                throw std::invalid_argument("ccr_rep: nonnegative integer steps required");
            }
            steps(i) = static_cast<int>(rounded);
        }
        return shared->represent(steps, x(d));
    };
}

ComplexMatrix discrete_calculus_eval(const PositivityStructure& ps, const MonoidRep& rep,
                                     const FiniteFunction& f) {
    ComplexMatrix out = rep(ps.identity());
    const Eigen::Index n = out.rows();
    out = ComplexMatrix::Zero(n, n);
    for (std::size_t i = 0; i < f.support.size(); ++i) {
        out += f.coeff[i] * rep_pair(ps, rep, f.support[i]);
    }
    return out;
}

double multiplicativity_residual(const PositivityStructure& ps, const MonoidRep& rep,
                                 const FiniteFunction& f, const FiniteFunction& g) {
    ComplexMatrix combined = discrete_calculus_eval(ps, rep, convolution(ps, f, g));
    ComplexMatrix split = discrete_calculus_eval(ps, rep, f) * discrete_calculus_eval(ps, rep, g);
    return operator_norm(combined - split);
}

GramVerdict gram_kernel_test(const PositivityStructure& ps, const MonoidRep& rep,
                             const std::vector<Eigen::VectorXd>& points, double tol) {
    if (points.empty()) throw std::invalid_argument("gram_kernel_test: at least one point required");
    const std::size_t n = points.size();
    const Eigen::Index block = rep(ps.identity()).rows();
    ComplexMatrix gram = ComplexMatrix::Zero(static_cast<Eigen::Index>(n) * block,
                                             static_cast<Eigen::Index>(n) * block);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            Eigen::VectorXd y = ps.multiply(ps.inverse(points[i]), points[j]);
            gram.block(static_cast<Eigen::Index>(i) * block, static_cast<Eigen::Index>(j) * block,
                       block, block) = rep_pair(ps, rep, y);
        }
    }
    GramVerdict out;
    out.points = n;
    out.verdict = is_positive_semidefinite(gram, tol);
    if (!out.verdict.is_psd) out.witness = points;
    return out;
}

std::vector<Eigen::VectorXd> euclidean_lattice(int d, double h) {
    if (d < 1) throw std::invalid_argument("euclidean_lattice: positive dimension required");
    if (!(h > 0.0)) throw std::invalid_argument("euclidean_lattice: positive mesh required");
    std::size_t total = 1;
    for (int i = 0; i < d; ++i) total *= 3;
    std::vector<Eigen::VectorXd> points;
    points.reserve(total);
    for (std::size_t flat = 0; flat < total; ++flat) {
        Eigen::VectorXd x(d);
        std::size_t rem = flat;
        for (int i = 0; i < d; ++i) {
            x(i) = h * static_cast<double>(rem % 3);
            rem /= 3;
        }
        points.push_back(std::move(x));
    }
    return points;
}

namespace {

ComplexMatrix midpoint_quadrature(const CommutingFamily& fam, const BoxDensity& f,
                                  std::size_t cells_per_axis) {
    const std::size_t d = f.lo.size();
    // Member evaluations at the midpoints, cached per axis.
    std::vector<std::vector<ComplexMatrix>> cache(d);
    std::vector<double> width(d);
    for (std::size_t i = 0; i < d; ++i) {
        width[i] = (f.hi[i] - f.lo[i]) / static_cast<double>(cells_per_axis);
        cache[i].reserve(cells_per_axis);
        for (std::size_t j = 0; j < cells_per_axis; ++j) {
            double t = f.lo[i] + width[i] * (static_cast<double>(j) + 0.5);
            cache[i].push_back(fam.evaluate_member(i, t));
        }
    }
    double cell_volume = 1.0;
    for (std::size_t i = 0; i < d; ++i) cell_volume *= width[i];

    std::size_t total = 1;
    for (std::size_t i = 0; i < d; ++i) total *= cells_per_axis;
    ComplexMatrix sum = ComplexMatrix::Zero(fam.dim(), fam.dim());
    std::vector<double> point(d);
    for (std::size_t flat = 0; flat < total; ++flat) {
        std::size_t rem = flat;
        ComplexMatrix value = ComplexMatrix::Identity(fam.dim(), fam.dim());
        for (std::size_t i = 0; i < d; ++i) {
            std::size_t j = rem % cells_per_axis;
            rem /= cells_per_axis;
            point[i] = f.lo[i] + width[i] * (static_cast<double>(j) + 0.5);
            value = value * cache[i][j];
        }
        sum += (f.density(point) * cell_volume) * value;
    }
    return sum;
}

}  // namespace

QuadratureValue phillips_lemerdy_eval(const CommutingFamily& fam, Complex c,
                                      const BoxDensity& f, std::size_t resolution) {
    if (f.lo.size() != fam.size() || f.hi.size() != fam.size()) {
        throw std::invalid_argument("phillips_lemerdy_eval: box arity mismatch");
    }
    for (std::size_t i = 0; i < f.lo.size(); ++i) {
        if (!(0.0 <= f.lo[i]) || !(f.lo[i] <= f.hi[i])) {
            throw std::invalid_argument("phillips_lemerdy_eval: box must sit in the positive orthant");
        }
    }
    if (resolution < 2) throw std::invalid_argument("phillips_lemerdy_eval: resolution too small");
    double budget = std::pow(static_cast<double>(resolution), static_cast<double>(fam.size()));
    if (budget > static_cast<double>(1 << 22)) {
        throw std::invalid_argument("phillips_lemerdy_eval: grid budget exceeded");
    }

    ComplexMatrix coarse = midpoint_quadrature(fam, f, resolution / 2);
    ComplexMatrix fine = midpoint_quadrature(fam, f, resolution);
    QuadratureValue out;
    // Midpoint error scales like h^2, so the mesh pair gives a Richardson
    // estimate of the remaining error on the fine mesh.
    out.error_estimate = operator_norm(fine - coarse) / 3.0;
    out.value = c * ComplexMatrix::Identity(fam.dim(), fam.dim()) + fine;
    std::size_t cells = 1;
    for (std::size_t i = 0; i < fam.size(); ++i) cells *= resolution;
    out.cells = cells;
    return out;
}

std::vector<double> approximate_unit_errors(const CommutingFamily& fam, int k_max,
                                            const std::vector<ComplexVector>& probes,
                                            std::size_t resolution) {
    if (k_max < 0) throw std::invalid_argument("approximate_unit_errors: nonnegative k required");
    if (probes.empty()) throw std::invalid_argument("approximate_unit_errors: probes required");
    std::vector<double> errors;
    errors.reserve(static_cast<std::size_t>(k_max) + 1);
    for (int k = 0; k <= k_max; ++k) {
        double side = std::pow(2.0, -k);
        BoxDensity f;
        f.lo.assign(fam.size(), 0.0);
        f.hi.assign(fam.size(), side);
        double volume = std::pow(side, static_cast<double>(fam.size()));
        f.density = [volume](const std::vector<double>&) { return 1.0 / volume; };
        QuadratureValue phi = phillips_lemerdy_eval(fam, Complex(0.0, 0.0), f, resolution);
        double worst = 0.0;
        for (const auto& probe : probes) {
            worst = std::max(worst, (phi.value * probe - probe).norm() / std::max(1.0, probe.norm()));
        }
        errors.push_back(worst);
    }
    return errors;
}

}
