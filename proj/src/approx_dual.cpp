#include "framekit/approx_dual.hpp"

#include <algorithm>
#include <cmath>

#include "framekit/errors.hpp"
#include "framekit/random.hpp"

namespace framekit {

namespace {

void require_param_shapes(const Frame& f, const CMatrix& A, const CMatrix& theta) {
    if (A.rows() != f.dim() || A.cols() != f.dim())
        throw InputError("approximate dual: A must be d x d");
    if (theta.rows() != f.size() || theta.cols() != f.dim())
        throw InputError("approximate dual: Theta must be N x d");
    require_finite(A, "A");
    require_finite(theta, "Theta");
}

} // namespace

ApproxDualParams make_params(CMatrix A, CMatrix Theta) {
    ApproxDualParams p;
    p.A = std::move(A);
    p.Theta = std::move(Theta);
    return p;
}

ApproxDualParams identity_params(const Frame& f) {
    return make_params(identity(f.dim()), CMatrix::Zero(f.size(), f.dim()));
}

CMatrix project_to_kernel(const Frame& f, const CMatrix& theta, const TolerancePolicy& tol) {
    if (theta.rows() != f.size()) throw InputError("project_to_kernel: row count must be N");
    return project_out(analysis_range_basis(f, tol), theta);
}

ApproxDualParams validate_params(const Frame& f, const ApproxDualParams& p,
                                 const TolerancePolicy& tol) {
    require_param_shapes(f, p.A, p.Theta);
    ApproxDualParams out = p;
    out.contraction_norm = operator_norm(identity(f.dim()) - p.A);
    if (!(out.contraction_norm < 1.0 - tol.strict_contraction_margin))
        throw ContractionError("||I - A|| = " + std::to_string(out.contraction_norm) +
                               " is not below 1");
    out.near_boundary = out.contraction_norm >= 1.0 - 1e-12;

    out.Theta = project_to_kernel(f, p.Theta, tol);
    out.projection_removed = operator_norm(p.Theta - out.Theta);
    out.theta_residual = operator_norm(f.columns() * out.Theta);
    const double allowed =
        tol.identity_residual_rel * operator_norm(f.columns()) * operator_norm(p.Theta);
    if (out.theta_residual > allowed)
        throw InconsistentThetaError("Theta is not kernel-valued after projection");
    return out;
}

CMatrix approx_dual_synthesis(const Frame& f, const CMatrix& A, const CMatrix& theta,
                              const TolerancePolicy& tol) {
    return A.adjoint() * canonical_dual_synthesis(f, tol) + theta.adjoint();
}

ApproxDualReport build_approx_dual(const Frame& f, const ApproxDualParams& p,
                                   const TolerancePolicy& tol) {
    const ApproxDualParams v = validate_params(f, p, tol);
    Frame dual(approx_dual_synthesis(f, v.A, v.Theta, tol));
    CMatrix reconstruction = f.columns() * dual.columns().adjoint();
    const double rate = operator_norm(identity(f.dim()) - reconstruction);
    return ApproxDualReport{std::move(dual), std::move(reconstruction), rate,
                            rate <= tol.identity_residual_rel};
}

ApproxDualReport canonical_approx_dual(const Frame& f, const CMatrix& A,
                                       const TolerancePolicy& tol) {
    return build_approx_dual(f, make_params(A, CMatrix::Zero(f.size(), f.dim())), tol);
}

MinimalNormAudit minimal_norm_audit(const Frame& f, const CMatrix& A, int trials,
                                    std::uint64_t seed, const TolerancePolicy& tol) {
    if (trials < 1) throw InputError("minimal_norm_audit: trials must be >= 1");
    const FrameBounds bounds = frame_bounds(f, tol);
    if (bounds.lower_opt <= 0.0) throw NotAFrameError("minimal_norm_audit: not a frame");
    const ApproxDualReport canon = canonical_approx_dual(f, A, tol);

    MinimalNormAudit out;
    out.trials = trials;
    // ||A^{-1}|| = 1 / sigma_min(A)
    const double sigma_min = min_singular_value(A);
    out.lowerbound = sigma_min * sigma_min / bounds.lower_opt;
    const double canon_norm = operator_norm(canon.dual.columns());
    out.canon = canon_norm * canon_norm;
    out.equality_gap = out.canon - out.lowerbound;
    out.equality_flagged = out.equality_gap > 1e-10 * std::max(1.0, out.canon);
    out.lower_bound_holds = out.canon >= out.lowerbound - 1e-9;

    const CMatrix range = analysis_range_basis(f, tol);
    const CMatrix u0 = canon.dual.columns().adjoint();
    const double frob0 = u0.squaredNorm();
    out.min_trial = out.canon;
    out.dominance_holds = true;
    out.pointwise_dominance_holds = true;
    out.frobenius_dominance_holds = true;
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, "minimal-norm", static_cast<std::uint64_t>(t));
        CMatrix theta = project_out(range, rng.gaussian_matrix(f.size(), f.dim()));
        const double scale = operator_norm(theta);
        const double target = rng.uniform(0.0, 2.0);
        // With a trivial kernel the projection is pure round-off.
        if (range.cols() == f.size()) theta.setZero();
        else if (scale > 0.0) theta *= target / scale;

        const CMatrix u = u0 + theta;  // analysis operator U S^{-1} A + Theta
        const double n_op = operator_norm(u);
        const double trial_norm = n_op * n_op;
        out.min_trial = std::min(out.min_trial, trial_norm);
        if (trial_norm < out.canon - 1e-10) out.dominance_holds = false;
        if (trial_norm < out.lowerbound - 1e-9) out.lower_bound_holds = false;

        const double frob = u.squaredNorm();
        const double expected = frob0 + theta.squaredNorm();
        if (std::abs(frob - expected) > 1e-9 * std::max(1.0, expected)) out.frobenius_dominance_holds = false;
        if (theta.squaredNorm() > 1e-20 && !(frob > frob0)) out.frobenius_dominance_holds = false;

        for (int s = 0; s < 4; ++s) {
            const CVector x = rng.gaussian_vector(f.dim());
            const double lhs = (u * x).squaredNorm();
            const double rhs = (u0 * x).squaredNorm() - 1e-10 * x.squaredNorm();
            if (lhs < rhs) out.pointwise_dominance_holds = false;
        }
    }
    return out;
}

CMatrix bessel_to_theta(const Frame& f, const CMatrix& W, const TolerancePolicy& tol) {
    if (W.rows() != f.dim() || W.cols() != f.size())
        throw InputError("bessel_to_theta: W must be d x N");
    require_finite(W, "W");
    return project_to_kernel(f, W.adjoint(), tol);
}

bool same_excess_check(const Frame& f, const ApproxDualReport& r, const TolerancePolicy& tol) {
    return excess(f, tol) == excess(r.dual, tol);
}

} // namespace framekit
