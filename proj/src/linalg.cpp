#include "semilab/linalg.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

namespace semilab {

namespace {

double one_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    return m.cwiseAbs().colwise().sum().maxCoeff();
}

void require_square(const ComplexMatrix& m, const char* who) {
    if (m.rows() != m.cols() || m.rows() == 0) {
        throw std::invalid_argument(std::string(who) + ": nonempty square matrix required");
    }
}

// Degree-13 coefficients of the diagonal Pade approximant to exp.
constexpr double pade13[] = {
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0,  129060195264000.0,   10559470521600.0,
    670442572800.0,      33522128640.0,       1323241920.0,
    40840800.0,          960960.0,            16380.0,
    182.0,               1.0};

ComplexMatrix pade_combine(const ComplexMatrix& u, const ComplexMatrix& v) {
    return (v - u).partialPivLu().solve(v + u);
}

ComplexMatrix pade_low(const ComplexMatrix& a, int degree) {
    const Eigen::Index n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    std::vector<double> b;
    switch (degree) {
        case 3: b = {120, 60, 12, 1}; break;
        case 5: b = {30240, 15120, 3360, 420, 30, 1}; break;
        case 7: b = {17297280, 8648640, 1995840, 277200, 25200, 1512, 56, 1}; break;
        default: b = {17643225600, 8821612800, 2075673600, 302702400, 30270240, 2162160, 110880, 3960, 90, 1}; break;
    }
    ComplexMatrix even = b[0] * id;
    ComplexMatrix odd = b[1] * id;
    ComplexMatrix pow = id;
    for (int k = 2; k + 1 < static_cast<int>(b.size()); k += 2) {
        pow = pow * a2;
        even += b[k] * pow;
        odd += b[k + 1] * pow;
    }
    return pade_combine(a * odd, even);
}

ComplexMatrix pade13_eval(const ComplexMatrix& a) {
    const Eigen::Index n = a.rows();
    const ComplexMatrix id = ComplexMatrix::Identity(n, n);
    const ComplexMatrix a2 = a * a;
    const ComplexMatrix a4 = a2 * a2;
    const ComplexMatrix a6 = a4 * a2;
    ComplexMatrix u = a * (a6 * (pade13[13] * a6 + pade13[11] * a4 + pade13[9] * a2) +
                           pade13[7] * a6 + pade13[5] * a4 + pade13[3] * a2 + pade13[1] * id);
    ComplexMatrix v = a6 * (pade13[12] * a6 + pade13[10] * a4 + pade13[8] * a2) +
                      pade13[6] * a6 + pade13[4] * a4 + pade13[2] * a2 + pade13[0] * id;
    return pade_combine(u, v);
}

}  // namespace

ComplexMatrix hermitian_adjoint(const ComplexMatrix& m) {
    return m.adjoint();
}

ComplexMatrix matrix_exponential(const ComplexMatrix& a, double t) {
    require_square(a, "matrix_exponential");
    if (!std::isfinite(t)) throw std::invalid_argument("matrix_exponential: t must be finite");
    ComplexMatrix m = t * a;
    if (!m.allFinite()) throw std::overflow_error("matrix_exponential: t * a is not finite");

    constexpr double theta3 = 1.495585217958292e-2;
    constexpr double theta5 = 2.539398330063230e-1;
    constexpr double theta7 = 9.504178996162932e-1;
    constexpr double theta9 = 2.097847961257068;
    constexpr double theta13 = 5.371920351148152;

    const double nrm = one_norm(m);
    ComplexMatrix result;
    if (nrm <= theta9) {
        int degree = 9;
        if (nrm <= theta3) degree = 3;
        else if (nrm <= theta5) degree = 5;
        else if (nrm <= theta7) degree = 7;
        result = pade_low(m, degree);
    } else {
        int squarings = 0;
        if (nrm > theta13) {
            squarings = static_cast<int>(std::ceil(std::log2(nrm / theta13)));
        }
        m /= std::pow(2.0, squarings);
        result = pade13_eval(m);
        for (int k = 0; k < squarings; ++k) {
            result = result * result;
            if (!result.allFinite()) {
                throw std::overflow_error("matrix_exponential: overflow while squaring");
            }
        }
    }
    if (!result.allFinite()) throw std::overflow_error("matrix_exponential: result is not finite");
    return result;
}

ComplexMatrix resolvent(const ComplexMatrix& a, Complex lambda) {
    require_square(a, "resolvent");
    const Eigen::Index n = a.rows();
    ComplexMatrix shifted = lambda * ComplexMatrix::Identity(n, n) - a;
    Eigen::FullPivLU<ComplexMatrix> lu(shifted);
    if (!lu.isInvertible()) {
        throw std::domain_error("resolvent: lambda belongs to the spectrum");
    }
    return lu.solve(ComplexMatrix::Identity(n, n));
}

PsdVerdict is_positive_semidefinite(const ComplexMatrix& m, double tol) {
    require_square(m, "is_positive_semidefinite");
    const ComplexMatrix herm = 0.5 * (m + m.adjoint());
    const double anti = 0.5 * (m - m.adjoint()).norm();

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(herm, Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("is_positive_semidefinite: eigenvalue iteration failed");
    }
    const auto& eigs = solver.eigenvalues();
    PsdVerdict verdict;
    verdict.min_eigenvalue = eigs.minCoeff();
    verdict.scale = std::max(std::abs(eigs.minCoeff()), std::abs(eigs.maxCoeff())) + anti;
    if (anti > 1e-6 * std::max(verdict.scale, 1e-300)) {
        throw std::domain_error("is_positive_semidefinite: matrix is not Hermitian");
    }
    verdict.is_psd = verdict.min_eigenvalue >= -tol * std::max(1.0, verdict.scale);
    return verdict;
}

double operator_norm(const ComplexMatrix& m) {
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<ComplexMatrix> svd(m);
    return svd.singularValues()(0);
}

}
