#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "framekit/approx_dual.hpp"
#include "framekit/audit.hpp"
#include "framekit/frame.hpp"

namespace framekit {

struct ClosenessReport {
    double q = 0.0;           ///< sum ||phi_n - psi_n||^2
    double q_weighted = 0.0;  ///< sum ||phi_n - psi_n|| ||pi_n(weight dual)||
    double q0 = 0.0;          ///< q_weighted for the canonical dual
    double mu = 0.0;          ///< ||T_F - T_G||
    double weight_upper = 0.0;  ///< optimal upper bound of the weight dual
    bool d_quad_flag = false;   ///< m_opt(F) <= q (the weighted sum is always finite here)
    bool c_quad_flag = false;   ///< q0 < 1
};

/// `weight_dual` must be a dual of F; when absent the canonical dual is used.
ClosenessReport closeness(const Frame& f, const Frame& g,
                          const std::optional<Frame>& weight_dual = std::nullopt,
                          const TolerancePolicy& tol = {});

struct GapReport {
    double delta_xy = 0.0;
    double delta_yx = 0.0;
    double Delta = 0.0;
    bool isomorphic_projections = false;  ///< Delta < 1
};

/// Gaps between the column spans of X_span and Y_span.
GapReport subspace_gap(const CMatrix& x_span, const CMatrix& y_span,
                       const TolerancePolicy& tol = {});

/// Same, from orthonormal bases of the two subspaces.
GapReport gap_from_bases(const CMatrix& bx, const CMatrix& by);

/// Gap between the analysis ranges ran U_F and ran U_G.
GapReport analysis_range_gap(const Frame& f, const Frame& g, const TolerancePolicy& tol = {});

/// delta(ran U_F, ran U_G) <= ||T_F - T_G|| / sqrt(m_F).
BoundAudit gap_bound_audit(const Frame& f, const Frame& g, const TolerancePolicy& tol = {});

enum class Per1200Variant { DQuad, CQuad, Mu };

/// Frame-bound and range-gap predictions for a perturbed family. For DQuad
/// the weight dual defaults to the canonical dual.
std::vector<BoundAudit> per1200_audit(const Frame& f, const Frame& g, Per1200Variant variant,
                                      const std::optional<Frame>& weight_dual = std::nullopt,
                                      const TolerancePolicy& tol = {});

struct DisIdentityResult {
    double residual = 0.0;  ///< ||lhs - rhs||
    double scale = 0.0;     ///< largest summand norm
};

/// Evaluates both sides of
///   T_{G^ad} - T_{F^ad} = T_{F^ad}(U_F - U_G) T_{G~} + Theta_2*
///                         - T_{F^ad} P_{ker T_G} - (A_1* - A_2*) T_{G~}.
DisIdentityResult dis_identity_residual(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                                        const ApproxDualParams& p2, const TolerancePolicy& tol = {});

/// P_{ker T_G} U_{F^ad_Theta(A)} (N x d).
CMatrix theta_ba(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                 const TolerancePolicy& tol = {});

struct BestApproxResult {
    ApproxDualReport report;  ///< G-dual built from (A2, Theta_ba)
    CMatrix theta_ba;
    double distance = 0.0;             ///< ||G-dual - F-dual||_Fr
    double projector_distance = 0.0;   ///< ||(A2* T_{G~(0)} - T_{F-dual}) P_{ran U_G}||
    double min_sampled_distance = 0.0; ///< over the random Lambda
    BoundAudit lambda_bound;
    BoundAudit optimality;
    BoundAudit projector_identity;
};

/// Requires mu = ||T_F - T_G|| < sqrt(m_opt(F)); throws PreconditionError
/// otherwise. `trials` random kernel-valued Lambda are compared against
/// Theta_ba.
BestApproxResult best_approx_dual(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                                  const CMatrix& A2, int trials, std::uint64_t seed,
                                  const TolerancePolicy& tol = {});

enum class DeviationKind { Cad, PropDis, DQuad, CQuad };

/// Deviation-bound audits between approximate duals of F and G. Failed
/// hypotheses come back as not-applicable audits. `theta` (validated against
/// F) is used by the d-quad/c-quad rho/upsilon bounds; default 0.
std::vector<BoundAudit> deviation_bound_audit(DeviationKind kind, const Frame& f, const Frame& g,
                                              const CMatrix& A1, const CMatrix& A2,
                                              const std::optional<Frame>& weight_dual = std::nullopt,
                                              const std::optional<CMatrix>& theta = std::nullopt,
                                              const TolerancePolicy& tol = {});

/// (A, Theta) for F  ->  (A, Theta_ba) for G. Requires mu < sqrt(m_opt(F))/2.
ApproxDualParams gamma_map(const Frame& f, const Frame& g, const ApproxDualParams& p,
                           const TolerancePolicy& tol = {});

/// Inverse of gamma_map: the Theta for F whose image under gamma_map is
/// Lambda (kernel-valued for G). Requires mu < sqrt(m_opt(F))/2.
CMatrix gamma_inverse(const Frame& f, const Frame& g, const CMatrix& lambda, const CMatrix& A,
                      const TolerancePolicy& tol = {});

} // namespace framekit
