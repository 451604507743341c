#include "framekit/linalg.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "framekit/errors.hpp"

namespace framekit {

namespace {

using ThinSvd = Eigen::BDCSVD<CMatrix>;

Eigen::Index rank_from_sigma(const RVector& sigma, double cutoff_rel) {
    if (sigma.size() == 0 || sigma(0) <= 0.0) return 0;
    const double cutoff = cutoff_rel * sigma(0);
    Eigen::Index r = 0;
    while (r < sigma.size() && sigma(r) > cutoff) ++r;
    return r;
}

} // namespace

void TolerancePolicy::validate() const {
    auto open_unit = [](double v) { return v > 0.0 && v < 1.0; };
    if (!open_unit(rank_cutoff_rel)) throw InputError("rank_cutoff_rel must lie in (0, 1)");
    if (!open_unit(identity_residual_rel))
        throw InputError("identity_residual_rel must lie in (0, 1)");
    if (!(strict_contraction_margin >= 0.0 && strict_contraction_margin < 1.0))
        throw InputError("strict_contraction_margin must lie in [0, 1)");
}

bool all_finite(const CMatrix& m) {
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
    return true;
}

void require_finite(const CMatrix& m, const char* what) {
    if (!all_finite(m)) throw InputError(std::string(what) + ": non-finite entry");
}

CMatrix identity(Eigen::Index n) { return CMatrix::Identity(n, n); }

RVector singular_values(const CMatrix& m) {
    require_finite(m, "singular_values");
    if (m.size() == 0) return RVector();
    // Highly rectangular inputs: factor the small Gram matrix. sigma_max is
    // accurate to machine precision this way; small sigmas are not needed here.
    const Eigen::Index small = std::min(m.rows(), m.cols());
    const Eigen::Index large = std::max(m.rows(), m.cols());
    if (large > 1024 && large > 32 * small) {
        CMatrix gram = m.rows() <= m.cols() ? CMatrix(m * m.adjoint()) : CMatrix(m.adjoint() * m);
        Eigen::SelfAdjointEigenSolver<CMatrix> es(gram, Eigen::EigenvaluesOnly);
        RVector ev = es.eigenvalues().reverse();
        for (Eigen::Index i = 0; i < ev.size(); ++i) ev(i) = std::sqrt(std::max(ev(i), 0.0));
        return ev;
    }
    ThinSvd svd(m);
    return svd.singularValues();
}

double operator_norm(const CMatrix& m) {
    if (m.size() == 0) {
        return 0.0;
    }
    return singular_values(m)(0);
}

double min_singular_value(const CMatrix& m) {
    require_finite(m, "min_singular_value");
    if (m.rows() != m.cols()) throw InputError("min_singular_value: matrix must be square");
    if (m.size() == 0) return 0.0;
    Eigen::JacobiSVD<CMatrix> svd(m);
    return svd.singularValues()(svd.singularValues().size() - 1);
}

std::pair<double, double> hermitian_eig_extremes(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "hermitian_eig_extremes");
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InputError("hermitian_eig_extremes: matrix must be square and non-empty");
    const double scale = operator_norm(m);
    const CMatrix skew = (m - m.adjoint()) * 0.5;
    if (operator_norm(skew) > tol.identity_residual_rel * scale)
        throw SymmetryError("hermitian_eig_extremes: matrix is not Hermitian");
    const CMatrix herm = (m + m.adjoint()) * 0.5;
    Eigen::SelfAdjointEigenSolver<CMatrix> es(herm, Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return {ev(0), ev(ev.size() - 1)};
}

Eigen::Index numerical_rank(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "numerical_rank");
    if (m.size() == 0) return 0;
    ThinSvd svd(m);
    return rank_from_sigma(svd.singularValues(), tol.rank_cutoff_rel);
}

CMatrix range_basis(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "range_basis");
    if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.rows(), 0);
    ThinSvd svd(m, Eigen::ComputeThinU);
    const Eigen::Index r = rank_from_sigma(svd.singularValues(), tol.rank_cutoff_rel);
    return svd.matrixU().leftCols(r);
}

CMatrix corange_basis(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "corange_basis");
    if (m.cols() == 0 || m.rows() == 0) return CMatrix(m.cols(), 0);
    ThinSvd svd(m, Eigen::ComputeThinV);
    const Eigen::Index r = rank_from_sigma(svd.singularValues(), tol.rank_cutoff_rel);
    return svd.matrixV().leftCols(r);
}

CMatrix kernel_basis(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "kernel_basis");
    if (m.cols() == 0) return CMatrix(0, 0);
    if (m.rows() == 0) return identity(m.cols());
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    const Eigen::Index r = rank_from_sigma(svd.singularValues(), tol.rank_cutoff_rel);
    return svd.matrixV().rightCols(m.cols() - r);
}

CMatrix orth_projector(const CMatrix& spanning, const TolerancePolicy& tol) {
    const CMatrix q = range_basis(spanning, tol);
    return q * q.adjoint();
}

CMatrix project_out(const CMatrix& q, const CMatrix& x) {
    if (q.rows() != x.rows()) throw InputError("project_out: row mismatch");
    if (q.cols() == 0) return x;
    return x - q * (q.adjoint() * x);
}

CMatrix pseudo_inverse(const CMatrix& m, const TolerancePolicy& tol) {
    require_finite(m, "pseudo_inverse");
    if (m.size() == 0) return CMatrix::Zero(m.cols(), m.rows());
    ThinSvd svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const RVector& sigma = svd.singularValues();
    const Eigen::Index r = rank_from_sigma(sigma, tol.rank_cutoff_rel);
    CMatrix out = CMatrix::Zero(m.cols(), m.rows());
    for (Eigen::Index k = 0; k < r; ++k)
        out.noalias() += (svd.matrixV().col(k) / sigma(k)) * svd.matrixU().col(k).adjoint();
    return out;
}

} // namespace framekit
