#pragma once

#include <cstdint>

#include "framekit/frame.hpp"

namespace framekit {

/// The pair (A, Theta) selecting one approximately dual frame of a frame F:
/// vector n of the dual is A* S^{-1} phi_n + Theta* delta_n, with
/// ||I - A|| < 1 and T_F Theta = 0.
struct ApproxDualParams {
    CMatrix A;      ///< d x d
    CMatrix Theta;  ///< N x d, maps C^d into ker T_F
    double contraction_norm = 0.0;  ///< measured ||I - A||
    double theta_residual = 0.0;    ///< measured ||T_F Theta||
    double projection_removed = 0.0;  ///< ||Theta_in - P_ker Theta_in||
    bool near_boundary = false;       ///< contraction_norm in [1 - 1e-12, 1)
};

struct ApproxDualReport {
    Frame dual;
    CMatrix reconstruction;  ///< T_F U_dual, equals A
    double rate = 0.0;       ///< ||I - reconstruction||
    bool is_alternate_dual = false;
};

/// Unvalidated parameters; pass through validate_params before use.
ApproxDualParams make_params(CMatrix A, CMatrix Theta);

/// Default parameters (I, 0) for F: the canonical dual.
ApproxDualParams identity_params(const Frame& f);

/// Checks ||I - A|| < 1 - margin and replaces Theta with its projection
/// onto ker T_F. Throws ContractionError / InconsistentThetaError / InputError.
ApproxDualParams validate_params(const Frame& f, const ApproxDualParams& p,
                                 const TolerancePolicy& tol = {});

/// A* S^{-1} T + Theta*, the synthesis matrix of Phi^ad_Theta(A). No validation.
CMatrix approx_dual_synthesis(const Frame& f, const CMatrix& A, const CMatrix& theta,
                              const TolerancePolicy& tol = {});

ApproxDualReport build_approx_dual(const Frame& f, const ApproxDualParams& p,
                                   const TolerancePolicy& tol = {});

/// The Theta = 0 member for a given A.
ApproxDualReport canonical_approx_dual(const Frame& f, const CMatrix& A,
                                       const TolerancePolicy& tol = {});

struct MinimalNormAudit {
    double lowerbound = 0.0;   ///< 1 / (m_opt ||A^{-1}||^2)
    double canon = 0.0;        ///< ||U_{Phi_0^ad(A)}||^2
    double min_trial = 0.0;    ///< smallest ||U_{Phi_Theta^ad(A)}||^2 over the trials
    double equality_gap = 0.0; ///< canon - lowerbound, reported only
    bool equality_flagged = false;  ///< equality_gap exceeds round-off
    bool lower_bound_holds = false;
    bool dominance_holds = false;           ///< every trial norm >= canon - 1e-10
    bool pointwise_dominance_holds = false; ///< ||U_Theta f||^2 >= ||U_0 f||^2 on samples
    bool frobenius_dominance_holds = false; ///< ||U_Theta||_F^2 = ||U_0||_F^2 + ||Theta||_F^2
    int trials = 0;
};

/// Compares the canonical approximate dual against `trials` random
/// kernel-valued Theta. Deterministic in `seed`.
MinimalNormAudit minimal_norm_audit(const Frame& f, const CMatrix& A, int trials,
                                    std::uint64_t seed, const TolerancePolicy& tol = {});

/// Theta = P_{ker T_F} W* for the synthesis matrix W (d x N) of a Bessel
/// family; the matching dual has vectors
/// A* S^{-1} phi_n + W delta_n - sum_j <S^{-1} phi_n, phi_j> W delta_j.
CMatrix bessel_to_theta(const Frame& f, const CMatrix& W, const TolerancePolicy& tol = {});

/// excess(F) == excess(R.dual).
bool same_excess_check(const Frame& f, const ApproxDualReport& r, const TolerancePolicy& tol = {});

/// Projects the columns of `theta` (N x k) onto ker T_F.
CMatrix project_to_kernel(const Frame& f, const CMatrix& theta, const TolerancePolicy& tol = {});

} // namespace framekit
