#include "semilab/semigroup.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <set>
#include <stdexcept>

namespace semilab {

namespace {

// Power series for M(t) on a norm ball where it converges without
// cancellation; terms are t^k A^k / (k+1)!.
ComplexMatrix average_series(const ComplexMatrix& ta) {
    const Eigen::Index n = ta.rows();
    ComplexMatrix sum = ComplexMatrix::Identity(n, n);
    ComplexMatrix term = ComplexMatrix::Identity(n, n);
    for (int k = 1; k <= 64; ++k) {
        term = (term * ta) / static_cast<double>(k + 1);
        sum += term;
        if (term.norm() <= 1e-16 * sum.norm()) break;
    }
    return sum;
}

}  // namespace

BoundedGenerator::BoundedGenerator(ComplexMatrix m) : a(std::move(m)) {
    if (a.rows() != a.cols() || a.rows() == 0) {
        throw std::invalid_argument("BoundedGenerator: nonempty square matrix required");
    }
    if (!a.allFinite()) {
        throw std::invalid_argument("BoundedGenerator: entries must be finite");
    }
}

ComplexMatrix evaluate(const BoundedGenerator& g, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("evaluate: nonnegative time required");
    }
    if (t == 0.0) return ComplexMatrix::Identity(g.dim(), g.dim());
    return matrix_exponential(g.a, t);
}

double growth_bound(const BoundedGenerator& g) {
    Eigen::ComplexEigenSolver<ComplexMatrix> solver(g.a, false);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("growth_bound: eigenvalue iteration failed");
    }
    return solver.eigenvalues().real().maxCoeff();
}

PsdVerdict is_dissipative(const BoundedGenerator& g, double tol) {
    ComplexMatrix herm = -0.5 * (g.a + g.a.adjoint());
    return is_positive_semidefinite(herm, tol);
}

ComplexMatrix time_average(const BoundedGenerator& g, double t) {
    if (!(t >= 0.0)) {
        throw std::invalid_argument("time_average: nonnegative time required");
    }
    const Eigen::Index n = g.dim();
    if (t == 0.0) return ComplexMatrix::Identity(n, n);

    ComplexMatrix ta = t * g.a;
    int doublings = 0;
    double nrm = ta.cwiseAbs().colwise().sum().maxCoeff();
    if (nrm > 0.5) {
        doublings = static_cast<int>(std::ceil(std::log2(nrm / 0.5)));
        ta /= std::pow(2.0, doublings);
    }
    ComplexMatrix avg = average_series(ta);
    if (doublings > 0) {
        // M(2s) = (I + T(s)) M(s) / 2 with T(2s) = T(s)^2.
        ComplexMatrix half = matrix_exponential(ta, 1.0);
        const ComplexMatrix id = ComplexMatrix::Identity(n, n);
        for (int k = 0; k < doublings; ++k) {
            avg = 0.5 * ((id + half) * avg);
            half = half * half;
        }
    }
    return avg;
}

CommutingFamily::CommutingFamily(std::vector<ComplexMatrix> generators,
                                 double tol_commuting,
                                 bool allow_loose) {
    if (generators.empty()) {
        throw std::invalid_argument("CommutingFamily: at least one generator required");
    }
    members_.reserve(generators.size());
    for (auto& m : generators) {
        members_.emplace_back(std::move(m));
        if (members_.back().dim() != members_.front().dim()) {
            throw std::invalid_argument("CommutingFamily: generators must share one space");
        }
    }
    for (const auto& g : members_) {
        scale_ = std::max(scale_, operator_norm(g.a));
    }
    for (std::size_t i = 0; i < members_.size(); ++i) {
        for (std::size_t j = i + 1; j < members_.size(); ++j) {
            ComplexMatrix comm = members_[i].a * members_[j].a - members_[j].a * members_[i].a;
            commutator_bound_ = std::max(commutator_bound_, operator_norm(comm));
        }
    }
    tolerance_ = tol_commuting >= 0.0 ? tol_commuting : 1e-8 * std::max(scale_ * scale_, 1e-300);
    if (commutator_bound_ > tolerance_ && !allow_loose) {
        throw std::invalid_argument("CommutingFamily: commutator defect exceeds tolerance");
    }
}

ComplexMatrix CommutingFamily::evaluate_member(std::size_t i, double t) const {
    return evaluate(members_.at(i), t);
}

CommutingFamily CommutingFamily::subfamily(const std::vector<std::size_t>& indices) const {
    std::vector<ComplexMatrix> gens;
    gens.reserve(indices.size());
    for (std::size_t i : indices) gens.push_back(members_.at(i).a);
    return CommutingFamily(std::move(gens), tolerance_, true);
}

ComplexMatrix family_product(const CommutingFamily& fam, const std::vector<double>& t) {
    if (t.size() != fam.size()) {
        throw std::invalid_argument("family_product: one time per member required");
    }
    ComplexMatrix result = ComplexMatrix::Identity(fam.dim(), fam.dim());
    for (std::size_t i = 0; i < fam.size(); ++i) {
        result = result * evaluate(fam.generator(i), t[i]);
    }
    return result;
}

double multi_time_average_check(const CommutingFamily& fam,
                                const std::vector<double>& t,
                                const std::vector<std::size_t>& K) {
    if (t.size() != fam.size()) {
        throw std::invalid_argument("multi_time_average_check: one time per member required");
    }
    std::set<std::size_t> in_k(K.begin(), K.end());
    if (in_k.size() != K.size()) {
        throw std::invalid_argument("multi_time_average_check: repeated index in K");
    }
    for (std::size_t i : K) {
        if (i >= fam.size()) {
            throw std::invalid_argument("multi_time_average_check: index out of range");
        }
        if (!(t[i] > 0.0)) {
            throw std::invalid_argument("multi_time_average_check: positive time required on K");
        }
    }
    const Eigen::Index n = fam.dim();
    ComplexMatrix lhs = ComplexMatrix::Identity(n, n);
    ComplexMatrix averages = ComplexMatrix::Identity(n, n);
    ComplexMatrix k_product = ComplexMatrix::Identity(n, n);
    for (std::size_t i = 0; i < fam.size(); ++i) {
        ComplexMatrix avg = time_average(fam.generator(i), t[i]);
        averages = averages * avg;
        if (in_k.count(i)) {
            ComplexMatrix increment = (evaluate(fam.generator(i), t[i]) - ComplexMatrix::Identity(n, n)) / t[i];
            lhs = lhs * increment;
            k_product = k_product * fam.generator(i).a;
        } else {
            lhs = lhs * avg;
        }
    }
    return operator_norm(lhs - k_product * averages);
}

}
