#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "framekit/approx_dual.hpp"
#include "framekit/audit.hpp"
#include "framekit/frame.hpp"

namespace framekit {

/// Time-frequency system on the cyclic group Z_L: the family
/// E_{mb} T_{na} g with (E_{mb} T_{na} g)[j] = exp(2 pi i m b j / L) g[(j - n a) mod L].
///
/// Family order is n outer (0 .. L/a - 1), m inner (0 .. L/b - 1).
struct GaborSystem {
    Eigen::Index L = 0;
    Eigen::Index a = 0;  ///< time step, divides L
    Eigen::Index b = 0;  ///< frequency step, divides L
    CVector window;

    /// Throws LatticeError on divisibility failure, InputError on bad window.
    void validate() const;

    Eigen::Index time_shifts() const { return L / a; }
    Eigen::Index modulations() const { return L / b; }
    Eigen::Index family_size() const { return time_shifts() * modulations(); }

    /// Same lattice, different window.
    GaborSystem with_window(CVector g) const;
};

Frame build_gabor_frame(const GaborSystem& sys);

/// out[k][j] = sum_n x[(j - n a) mod L] conj(y[(j - n a - k L/b) mod L]), k = 0 .. b-1.
std::vector<CVector> lattice_correlations(const CVector& x, const CVector& y, Eigen::Index L,
                                          Eigen::Index a, Eigen::Index b);

/// sum_n |x[(j - n a) mod L]|^2 for every j.
RVector periodized_energy(const CVector& x, Eigen::Index L, Eigen::Index a);

struct WalnutReport {
    std::vector<CVector> correlations;  ///< G_k, k = 0 .. b-1
    double lower_est = 0.0;  ///< (L/b) min_j (G_0[j] - sum_{k != 0} |G_k[j]|), clamped at 0
    double upper_est = 0.0;  ///< (L/b) max_j sum_k |G_k[j]|
};

WalnutReport walnut_report(const GaborSystem& sys);

/// max_j G_0[j] <= (b/L) M_opt.
BoundAudit envelope_audit(const GaborSystem& sys, const TolerancePolicy& tol = {});

/// sum over length-a blocks of the block maximum of |g|.
double wiener_norm(const CVector& g, Eigen::Index L, Eigen::Index a);

/// Upper Walnut estimate of the difference window g1 - g2 on the lattice of sys1.
double correlation_r(const GaborSystem& sys1, const CVector& g2);

struct OperatorSpec {
    enum class Kind { Scalar, Polynomial };
    Kind kind = Kind::Scalar;
    cdouble scalar{1.0, 0.0};
    /// A = sum_k coefficients[k] S^k for Kind::Polynomial.
    std::vector<cdouble> coefficients;
};

/// max(||A T_a - T_a A||, ||A E_b - E_b A||) for the generator shifts.
double commutation_residual(const GaborSystem& sys, const CMatrix& A);

/// c I or p(S). Throws ContractionError when ||I - A|| >= 1.
CMatrix commuting_operator(const GaborSystem& sys, const OperatorSpec& spec,
                           const TolerancePolicy& tol = {});

/// (2 / (m_opt + M_opt)) S, which has ||I - A|| = (M - m)/(M + m).
OperatorSpec optimal_scaling_spec(const GaborSystem& sys, const TolerancePolicy& tol = {});

struct GaborDualWindow {
    CVector window;
    ApproxDualReport report;
    /// ||T_G U_{G^ad} - A||
    double structure_residual = 0.0;
    /// Largest entrywise gap between the Gabor family of `window` and the
    /// family-level dual built from (A, bessel_to_theta(T_h)).
    double two_route_residual = 0.0;
};

/// g^ad = A* S^{-1} g + h - sum_{m,n} <S^{-1} g, E_{mb}T_{na} g> E_{mb}T_{na} h.
/// A must commute with the lattice generators.
GaborDualWindow gabor_approx_dual_window(const GaborSystem& sys, const CMatrix& A,
                                         const CVector& h, const TolerancePolicy& tol = {});

/// Perturbation audits for replacing the window g1 of sys1 by g2.
/// `h` selects the approximately dual window of sys1 (default 0).
std::vector<BoundAudit> gabor_perturbation_audit(const GaborSystem& sys1, const CVector& g2,
                                                 const CMatrix& A1, const CMatrix& A2,
                                                 const std::optional<CVector>& h = std::nullopt,
                                                 const TolerancePolicy& tol = {});

} // namespace framekit
