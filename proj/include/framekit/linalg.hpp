#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

namespace framekit {

using cdouble = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;

/// Numerical thresholds shared by every module.
struct TolerancePolicy {
    /// Singular values <= rank_cutoff_rel * sigma_max count as zero.
    double rank_cutoff_rel = 1e-12;
    double identity_residual_rel = 1e-9;
    /// Accept ||I - A|| < 1 - strict_contraction_margin.
    double strict_contraction_margin = 0.0;

    /// Throws InputError when a field is outside its admissible range.
    void validate() const;
};

/// Throws InputError if any entry is NaN or infinite.
void require_finite(const CMatrix& m, const char* what);

bool all_finite(const CMatrix& m);

CMatrix identity(Eigen::Index n);

/// Largest singular value.
double operator_norm(const CMatrix& m);

/// Smallest singular value of a square matrix; 0 for rank-deficient input.
double min_singular_value(const CMatrix& m);

/// Singular values in decreasing order.
RVector singular_values(const CMatrix& m);

/// Extreme eigenvalues (min, max) of the Hermitian part (M + M*)/2.
///
/// Rejects non-square input with InputError and input whose anti-Hermitian
/// part exceeds identity_residual_rel * ||M|| with SymmetryError.
std::pair<double, double> hermitian_eig_extremes(const CMatrix& m,
                                                 const TolerancePolicy& tol = {});

/// Number of singular values above rank_cutoff_rel * sigma_max.
Eigen::Index numerical_rank(const CMatrix& m, const TolerancePolicy& tol = {});

/// Orthonormal basis (as columns) of the column space of `m`.
CMatrix range_basis(const CMatrix& m, const TolerancePolicy& tol = {});

/// Orthonormal basis (as columns) of the row space of `m`, i.e. ran(m*).
///
/// For a d x N synthesis matrix this is the range of the analysis operator.
/// Only the d-sized side is ever factored, so N may be large.
CMatrix corange_basis(const CMatrix& m, const TolerancePolicy& tol = {});

/// Orthonormal basis (as columns) of ker(m). Column count = cols - rank.
CMatrix kernel_basis(const CMatrix& m, const TolerancePolicy& tol = {});

/// Orthogonal projector onto the column span of `spanning`.
/// Zero columns give the zero matrix of size rows x rows.
CMatrix orth_projector(const CMatrix& spanning, const TolerancePolicy& tol = {});

/// (I - Q Q*) x for Q with orthonormal columns, without forming the projector.
CMatrix project_out(const CMatrix& q, const CMatrix& x);

/// Moore-Penrose pseudo-inverse with the rank cutoff applied to sigma.
CMatrix pseudo_inverse(const CMatrix& m, const TolerancePolicy& tol = {});

} // namespace framekit
