#include "semilab/monoid.hpp"

#include "semilab/util.hpp"

#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

Eigen::VectorXd floor0(const Eigen::VectorXd& v) {
    return v.cwiseMin(0.0);
}

Eigen::VectorXd ceil0(const Eigen::VectorXd& v) {
    return v.cwiseMax(0.0);
}

// Cocycle correction moving the central coordinate onto the submonoid:
// odd under inversion and zero on positive-part images.
double heisenberg_shear(const Eigen::VectorXd& x, const Eigen::VectorXd& p) {
    return 0.5 * (floor0(p).dot(ceil0(x)) - ceil0(p).dot(floor0(x)));
}

double correlated_shear(const Eigen::MatrixXd& c, const Eigen::VectorXd& x) {
    return ceil0(x).dot(c * floor0(x));
}

void require_dim(const Eigen::VectorXd& a, int dim, const char* who) {
    if (a.size() != dim) {
        throw std::invalid_argument(std::string(who) + ": coordinate arity mismatch");
    }
}

std::size_t encode(const Eigen::VectorXi& x, int points) {
    std::size_t flat = 0;
    for (Eigen::Index j = x.size() - 1; j >= 0; --j) {
        flat = flat * static_cast<std::size_t>(points) + static_cast<std::size_t>(x(j));
    }
    return flat;
}

Eigen::VectorXi decode(std::size_t flat, int m, int points) {
    Eigen::VectorXi x(m);
    for (int j = 0; j < m; ++j) {
        x(j) = static_cast<int>(flat % static_cast<std::size_t>(points));
        flat /= static_cast<std::size_t>(points);
    }
    return x;
}

}  // namespace

PositivityStructure PositivityStructure::euclidean(int d) {
    if (d < 1) throw std::invalid_argument("PositivityStructure: positive dimension required");
    PositivityStructure ps;
    ps.variant_ = GroupVariant::euclidean;
    ps.coord_dim_ = d;
    ps.spatial_dim_ = d;
    return ps;
}

PositivityStructure PositivityStructure::heisenberg(int d) {
    if (d < 1) throw std::invalid_argument("PositivityStructure: positive dimension required");
    PositivityStructure ps;
    ps.variant_ = GroupVariant::heisenberg;
    ps.coord_dim_ = 2 * d + 1;
    ps.spatial_dim_ = d;
    return ps;
}

PositivityStructure PositivityStructure::correlated_heisenberg(const Eigen::MatrixXd& c) {
    if (c.rows() != c.cols() || c.rows() < 1) {
        throw std::invalid_argument("PositivityStructure: square correlation required");
    }
    for (Eigen::Index i = 0; i < c.rows(); ++i) {
        for (Eigen::Index j = 0; j < c.cols(); ++j) {
            if (c(i, j) != -c(j, i)) {
                throw std::invalid_argument("PositivityStructure: antisymmetric correlation required");
            }
        }
    }
    PositivityStructure ps;
    ps.variant_ = GroupVariant::correlated_heisenberg;
    ps.coord_dim_ = static_cast<int>(c.rows()) + 1;
    ps.spatial_dim_ = static_cast<int>(c.rows());
    ps.correlation_ = c;
    return ps;
}

PositivityStructure PositivityStructure::product(PositivityStructure left, PositivityStructure right) {
    PositivityStructure ps;
    ps.variant_ = GroupVariant::product;
    ps.coord_dim_ = left.coord_dim_ + right.coord_dim_;
    ps.spatial_dim_ = left.spatial_dim_ + right.spatial_dim_;
    ps.left_ = std::make_shared<PositivityStructure>(std::move(left));
    ps.right_ = std::make_shared<PositivityStructure>(std::move(right));
    return ps;
}

const Eigen::MatrixXd& PositivityStructure::correlation() const {
    if (variant_ != GroupVariant::correlated_heisenberg) {
        throw std::logic_error("PositivityStructure: no correlation for this variant");
    }
    return correlation_;
}

const PositivityStructure& PositivityStructure::left_factor() const {
    if (variant_ != GroupVariant::product || !left_) {
        throw std::logic_error("PositivityStructure: not a product");
    }
    return *left_;
}

const PositivityStructure& PositivityStructure::right_factor() const {
    if (variant_ != GroupVariant::product || !right_) {
        throw std::logic_error("PositivityStructure: not a product");
    }
    return *right_;
}

Eigen::VectorXd PositivityStructure::identity() const {
    return Eigen::VectorXd::Zero(coord_dim_);
}

Eigen::VectorXd PositivityStructure::multiply(const Eigen::VectorXd& a, const Eigen::VectorXd& b) const {
    require_dim(a, coord_dim_, "multiply");
    require_dim(b, coord_dim_, "multiply");
    switch (variant_) {
        case GroupVariant::euclidean:
            return a + b;
        case GroupVariant::heisenberg: {
            const int d = spatial_dim_;
            Eigen::VectorXd out(coord_dim_);
            out.head(2 * d) = a.head(2 * d) + b.head(2 * d);
            out(2 * d) = a(2 * d) + b(2 * d) +
                         0.5 * (a.segment(d, d).dot(b.head(d)) - b.segment(d, d).dot(a.head(d)));
            return out;
        }
        case GroupVariant::correlated_heisenberg: {
            const int d = spatial_dim_;
            Eigen::VectorXd out(coord_dim_);
            out.head(d) = a.head(d) + b.head(d);
            out(d) = a(d) + b(d) + b.head(d).dot(correlation_ * a.head(d));
            return out;
        }
        case GroupVariant::product: {
            Eigen::VectorXd out(coord_dim_);
            out.head(left_->coord_dim_) =
                left_->multiply(a.head(left_->coord_dim_), b.head(left_->coord_dim_));
            out.tail(right_->coord_dim_) =
                right_->multiply(a.tail(right_->coord_dim_), b.tail(right_->coord_dim_));
            return out;
        }
    }
    throw std::logic_error("multiply: unknown variant");
}

Eigen::VectorXd PositivityStructure::inverse(const Eigen::VectorXd& a) const {
    require_dim(a, coord_dim_, "inverse");
    return -a;
}

Eigen::VectorXd PositivityStructure::positive_part(const Eigen::VectorXd& a) const {
    require_dim(a, coord_dim_, "positive_part");
    switch (variant_) {
        case GroupVariant::euclidean:
            return ceil0(a);
        case GroupVariant::heisenberg: {
            const int d = spatial_dim_;
            Eigen::VectorXd out(coord_dim_);
            out.head(2 * d) = ceil0(a.head(2 * d));
            out(2 * d) = std::max(a(2 * d) - heisenberg_shear(a.head(d), a.segment(d, d)), 0.0);
            return out;
        }
        case GroupVariant::correlated_heisenberg: {
            const int d = spatial_dim_;
            Eigen::VectorXd out(coord_dim_);
            out.head(d) = ceil0(a.head(d));
            out(d) = std::max(a(d) - correlated_shear(correlation_, a.head(d)), 0.0);
            return out;
        }
        case GroupVariant::product: {
            Eigen::VectorXd out(coord_dim_);
            out.head(left_->coord_dim_) = left_->positive_part(a.head(left_->coord_dim_));
            out.tail(right_->coord_dim_) = right_->positive_part(a.tail(right_->coord_dim_));
            return out;
        }
    }
    throw std::logic_error("positive_part: unknown variant");
}

Eigen::VectorXd PositivityStructure::negative_part(const Eigen::VectorXd& a) const {
    return positive_part(inverse(a));
}

bool PositivityStructure::in_submonoid(const Eigen::VectorXd& a, double tol) const {
    require_dim(a, coord_dim_, "in_submonoid");
    switch (variant_) {
        case GroupVariant::euclidean:
            return (a.array() >= -tol).all();
        case GroupVariant::heisenberg:
            return (a.head(2 * spatial_dim_).array() >= -tol).all();
        case GroupVariant::correlated_heisenberg:
            return (a.head(spatial_dim_).array() >= -tol).all();
        case GroupVariant::product:
            return left_->in_submonoid(a.head(left_->coord_dim_), tol) &&
                   right_->in_submonoid(a.tail(right_->coord_dim_), tol);
    }
    throw std::logic_error("in_submonoid: unknown variant");
}

Eigen::VectorXd PositivityStructure::random_element(std::mt19937_64& rng) const {
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd out(coord_dim_);
    for (int i = 0; i < coord_dim_; ++i) out(i) = normal(rng);
    return out;
}

WitnessBox e_joint_witness(const PositivityStructure& ps, double epsilon) {
    if (!(epsilon > 0.0)) throw std::invalid_argument("e_joint_witness: positive epsilon required");
    WitnessBox box;
    switch (ps.variant()) {
        case GroupVariant::euclidean: {
            box.measure = 1.0;
            for (int i = 0; i < ps.coord_dim(); ++i) {
                box.intervals.emplace_back(0.0, epsilon);
                box.measure *= epsilon;
            }
            return box;
        }
        case GroupVariant::heisenberg: {
            box.measure = 1.0;
            for (int i = 0; i < 2 * ps.spatial_dim(); ++i) {
                box.intervals.emplace_back(0.0, epsilon);
                box.measure *= epsilon;
            }
            box.intervals.emplace_back(-epsilon, epsilon);
            box.measure *= 2.0 * epsilon;
            return box;
        }
        case GroupVariant::correlated_heisenberg: {
            box.measure = 1.0;
            for (int i = 0; i < ps.spatial_dim(); ++i) {
                box.intervals.emplace_back(0.0, epsilon);
                box.measure *= epsilon;
            }
            box.intervals.emplace_back(-epsilon, epsilon);
            box.measure *= 2.0 * epsilon;
            return box;
        }
        case GroupVariant::product: {
            WitnessBox left = e_joint_witness(ps.left_factor(), epsilon);
            WitnessBox right = e_joint_witness(ps.right_factor(), epsilon);
            box.intervals = std::move(left.intervals);
            box.intervals.insert(box.intervals.end(), right.intervals.begin(), right.intervals.end());
            box.measure = left.measure * right.measure;
            return box;
        }
    }
    throw std::logic_error("e_joint_witness: unknown variant");
}

AxiomsReport axioms_check(const PositivityStructure& ps, std::size_t samples, std::uint64_t seed,
                          double tol, const PositivePartFn& override_map) {
    auto plus = [&](const Eigen::VectorXd& g) {
        return override_map ? override_map(g) : ps.positive_part(g);
    };
    AxiomsReport report;
    report.samples = samples;

    const Eigen::VectorXd e = ps.identity();
    Eigen::VectorXd e_plus = plus(e);
    report.identity_ok = (e_plus.array() == e.array()).all();
    if (!report.identity_ok && !report.has_failure) {
        report.has_failure = true;
        report.first_failure = e;
    }

    auto rng = make_rng(seed, 7);
    for (std::size_t s = 0; s < samples; ++s) {
        Eigen::VectorXd g = ps.random_element(rng);
        Eigen::VectorXd gp = plus(g);
        Eigen::VectorXd gm = plus(ps.inverse(g));
        bool ok = true;

        if (!(plus(gp).array() == gp.array()).all()) {
            report.idempotent_ok = false;
            ok = false;
        }
        Eigen::VectorXd rebuilt = ps.multiply(ps.inverse(gm), gp);
        double residual = (rebuilt - g).cwiseAbs().maxCoeff();
        report.max_factorization_residual = std::max(report.max_factorization_residual, residual);
        if (!(residual <= tol)) {
            report.factorization_ok = false;
            ok = false;
        }
        if (!(plus(ps.inverse(gp)).array() == e.array()).all()) {
            report.annihilation_ok = false;
            ok = false;
        }
        if (!ps.in_submonoid(gp)) {
            report.membership_ok = false;
            ok = false;
        }
        if (!ok && !report.has_failure) {
            report.has_failure = true;
            report.first_failure = g;
        }
    }
    report.all_ok = report.identity_ok && report.idempotent_ok && report.factorization_ok &&
                    report.annihilation_ok && report.membership_ok;
    return report;
}

ComplexMatrix CcrFamily::power(std::size_t i, long k) const {
    if (i >= steps.size()) throw std::invalid_argument("CcrFamily::power: member out of range");
    if (k < 0) throw std::invalid_argument("CcrFamily::power: nonnegative step required");
    ComplexMatrix out = ComplexMatrix::Identity(dim(), dim());
    for (long r = 0; r < k; ++r) out = out * steps[i];
    return out;
}

Complex CcrFamily::scalar_unitary(double e) const {
    return std::exp(rate * e);
}

ComplexMatrix CcrFamily::represent(const Eigen::VectorXi& x, double e) const {
    if (x.size() != static_cast<Eigen::Index>(members())) {
        throw std::invalid_argument("CcrFamily::represent: one step count per member required");
    }
    if (x.minCoeff() < 0) {
        throw std::invalid_argument("CcrFamily::represent: submonoid points require nonnegative steps");
    }
    double quad = 0.0;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        for (Eigen::Index j = i + 1; j < x.size(); ++j) {
            quad += correlation(i, j) * static_cast<double>(x(i)) * static_cast<double>(x(j));
        }
    }
    ComplexMatrix out = ComplexMatrix::Identity(dim(), dim());
    for (std::size_t i = 0; i < members(); ++i) {
        out = out * power(i, x(static_cast<Eigen::Index>(i)));
    }
    return scalar_unitary(e + quad) * out;
}

CcrFamily build_ccr_family(int m, int points, Complex rate,
                           const std::vector<Eigen::VectorXi>& shifts,
                           const std::vector<Eigen::VectorXd>& weights) {
    if (m < 1) throw std::invalid_argument("build_ccr_family: positive grid rank required");
    if (points < 1) throw std::invalid_argument("build_ccr_family: positive grid side required");
    if (shifts.empty() || shifts.size() != weights.size()) {
        throw std::invalid_argument("build_ccr_family: one shift and one weight per member required");
    }
    if (!(rate.real() <= 0.0)) {
        throw std::invalid_argument("build_ccr_family: nonpositive real part required");
    }
    double dims = std::pow(static_cast<double>(points), static_cast<double>(m));
    if (dims > static_cast<double>(1 << 20)) {
        throw std::invalid_argument("build_ccr_family: grid budget exceeded");
    }
    const std::size_t n = static_cast<std::size_t>(dims + 0.5);

    CcrFamily fam;
    fam.m = m;
    fam.points = points;
    fam.rate = rate;
    fam.shifts = shifts;
    fam.weights = weights;

    const std::size_t d = shifts.size();
    for (std::size_t i = 0; i < d; ++i) {
        if (shifts[i].size() != m || weights[i].size() != m) {
            throw std::invalid_argument("build_ccr_family: shift and weight arity mismatch");
        }
        if (shifts[i].minCoeff() < 0) {
            throw std::invalid_argument("build_ccr_family: nonnegative shifts required");
        }
        if (weights[i].minCoeff() < 0.0) {
            throw std::invalid_argument("build_ccr_family: nonnegative weights required");
        }
    }

    fam.correlation = Eigen::MatrixXd::Zero(d, d);
    for (std::size_t i = 0; i < d; ++i) {
        for (std::size_t j = 0; j < d; ++j) {
            double aij = weights[i].dot(shifts[j].cast<double>());
            double aji = weights[j].dot(shifts[i].cast<double>());
            fam.correlation(i, j) = 0.5 * (aij - aji);
        }
    }

    for (std::size_t i = 0; i < d; ++i) {
        ComplexMatrix step = ComplexMatrix::Zero(n, n);
        for (std::size_t flat = 0; flat < n; ++flat) {
            Eigen::VectorXi x = decode(flat, m, points);
            Eigen::VectorXi target = x + shifts[i];
            if (target.maxCoeff() < points) {
                step(flat, encode(target, points)) =
                    std::exp(rate * weights[i].dot(x.cast<double>()));
            }
        }
        if (step.cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
            throw std::logic_error("build_ccr_family: contraction property violated");
        }
        fam.steps.push_back(std::move(step));
    }
    return fam;
}

double ccr_relation_check(const CcrFamily& fam, long s, long t, std::size_t i, std::size_t j) {
    Complex phase = std::exp(2.0 * static_cast<double>(s) * static_cast<double>(t) * fam.rate *
                             fam.correlation(i, j));
    ComplexMatrix lhs = fam.power(j, t) * fam.power(i, s);
    ComplexMatrix rhs = phase * (fam.power(i, s) * fam.power(j, t));
    return operator_norm(lhs - rhs);
}

double ccr_relation_max_residual(const CcrFamily& fam, long max_step) {
    double worst = 0.0;
    for (std::size_t i = 0; i < fam.members(); ++i) {
        for (std::size_t j = 0; j < fam.members(); ++j) {
            if (i == j) continue;
            for (long s = 0; s <= max_step; ++s) {
                for (long t = 0; t <= max_step; ++t) {
                    worst = std::max(worst, ccr_relation_check(fam, s, t, i, j));
                }
            }
        }
    }
    return worst;
}

double heisenberg_homomorphism_residual(const CcrFamily& fam, const Eigen::VectorXi& x1, double e1,
                                        const Eigen::VectorXi& x2, double e2) {
    Eigen::VectorXd cx1 = fam.correlation * x1.cast<double>();
    double twist = cx1.dot(x2.cast<double>());
    ComplexMatrix lhs = fam.represent(x1, e1) * fam.represent(x2, e2);
    ComplexMatrix rhs = fam.represent(x1 + x2, e1 + e2 + twist);
    return operator_norm(lhs - rhs);
}

PositivityStructure ccr_structure(const CcrFamily& fam) {
    return PositivityStructure::correlated_heisenberg(fam.correlation);
}

}
