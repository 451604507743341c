#include "framekit/perturbation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "framekit/errors.hpp"
#include "framekit/kernels.hpp"
#include "framekit/random.hpp"

namespace framekit {

namespace {

double column_distance(const CMatrix& a, const CMatrix& b, Eigen::Index n) {
    const auto& k = kernels::active_kernels();
    return std::sqrt(k.squared_distance(a.col(n).data(), b.col(n).data(),
                                        static_cast<std::size_t>(a.rows())));
}

double column_norm(const CMatrix& a, Eigen::Index n) {
    const auto& k = kernels::active_kernels();
    return std::sqrt(k.squared_norm(a.col(n).data(), static_cast<std::size_t>(a.rows())));
}

void require_frame(const Frame& f, const TolerancePolicy& tol, const char* what) {
    if (!is_frame(f, tol)) throw NotAFrameError(std::string(what) + ": family is not a frame");
}

void require_admissible(const CMatrix& A, Eigen::Index d, const TolerancePolicy& tol) {
    if (A.rows() != d || A.cols() != d) throw InputError("A must be d x d");
    require_finite(A, "A");
    if (!(operator_norm(identity(d) - A) < 1.0 - tol.strict_contraction_margin))
        throw ContractionError("||I - A|| is not below 1");
}

// ||T_{G_0^ad(A2)} - T_{F_0^ad(A1)}||
double canonical_pair_distance(const Frame& f, const Frame& g, const CMatrix& A1,
                               const CMatrix& A2, const TolerancePolicy& tol) {
    const CMatrix tf = A1.adjoint() * canonical_dual_synthesis(f, tol);
    const CMatrix tg = A2.adjoint() * canonical_dual_synthesis(g, tol);
    return operator_norm(tg - tf);
}

// ||T_{G^ad_{Theta_ba}(A2)} - T_{F^ad_Theta(A1)}||
double best_pair_distance(const Frame& f, const Frame& g, const CMatrix& A1, const CMatrix& theta,
                          const CMatrix& A2, const TolerancePolicy& tol) {
    const CMatrix tfad = approx_dual_synthesis(f, A1, theta, tol);
    const CMatrix range_g = analysis_range_basis(g, tol);
    const CMatrix tba = project_out(range_g, tfad.adjoint());
    const CMatrix tgad = A2.adjoint() * canonical_dual_synthesis(g, tol) + tba.adjoint();
    return operator_norm(tgad - tfad);
}

} // namespace

ClosenessReport closeness(const Frame& f, const Frame& g, const std::optional<Frame>& weight_dual,
                          const TolerancePolicy& tol) {
    require_same_shape(f, g, "closeness");
    const CMatrix canon = canonical_dual_synthesis(f, tol);
    const CMatrix* weight = &canon;
    if (weight_dual) {
        require_same_shape(f, *weight_dual, "closeness weight dual");
        if (!is_dual_pair(f, *weight_dual, tol))
            throw InputError("closeness: weight family is not a dual of F");
        weight = &weight_dual->columns();
    }

    ClosenessReport r;
    const CMatrix& tf = f.columns();
    const CMatrix& tg = g.columns();
    for (Eigen::Index n = 0; n < f.size(); ++n) {
        const double dist = column_distance(tf, tg, n);
        r.q += dist * dist;
        r.q0 += dist * column_norm(canon, n);
        r.q_weighted += dist * column_norm(*weight, n);
    }
    r.mu = frame_norm_distance(f, g);
    r.weight_upper = weight_dual ? frame_bounds(*weight_dual, tol).upper_opt
                                 : 1.0 / frame_bounds(f, tol).lower_opt;
    r.d_quad_flag = frame_bounds(f, tol).lower_opt <= r.q;
    r.c_quad_flag = r.q0 < 1.0;
    return r;
}

GapReport gap_from_bases(const CMatrix& bx, const CMatrix& by) {
    if (bx.rows() != by.rows()) throw InputError("subspace_gap: ambient dimensions differ");
    auto one_sided = [](const CMatrix& from, const CMatrix& to) {
        if (from.cols() == 0) return 0.0;
        return std::min(1.0, operator_norm(project_out(to, from)));
    };
    GapReport r;
    r.delta_xy = one_sided(bx, by);
    r.delta_yx = one_sided(by, bx);
    r.Delta = std::max(r.delta_xy, r.delta_yx);
    r.isomorphic_projections = r.Delta < 1.0;
    return r;
}

GapReport subspace_gap(const CMatrix& x_span, const CMatrix& y_span, const TolerancePolicy& tol) {
    if (x_span.rows() != y_span.rows()) throw InputError("subspace_gap: ambient dimensions differ");
    return gap_from_bases(range_basis(x_span, tol), range_basis(y_span, tol));
}

GapReport analysis_range_gap(const Frame& f, const Frame& g, const TolerancePolicy& tol) {
    require_same_shape(f, g, "analysis_range_gap");
    return gap_from_bases(analysis_range_basis(f, tol), analysis_range_basis(g, tol));
}

BoundAudit gap_bound_audit(const Frame& f, const Frame& g, const TolerancePolicy& tol) {
    require_same_shape(f, g, "gap_bound_audit");
    const double lhs = analysis_range_gap(f, g, tol).delta_xy;
    const double m = frame_bounds(f, tol).lower_opt;
    if (m <= 0.0) return not_applicable("gap-11", lhs);
    return make_audit("gap-11", lhs, frame_norm_distance(f, g) / std::sqrt(m));
}

std::vector<BoundAudit> per1200_audit(const Frame& f, const Frame& g, Per1200Variant variant,
                                      const std::optional<Frame>& weight_dual,
                                      const TolerancePolicy& tol) {
    require_same_shape(f, g, "per1200_audit");
    const FrameBounds bf = frame_bounds(f, tol);
    const FrameBounds bg = frame_bounds(g, tol);
    const double m = bf.lower_opt;
    const double M = bf.upper_opt;
    const double gap = analysis_range_gap(f, g, tol).Delta;
    std::vector<BoundAudit> out;

    switch (variant) {
    case Per1200Variant::Mu: {
        const double mu = frame_norm_distance(f, g);
        const bool pre = m > 0.0 && strictly_below(mu, std::sqrt(m));
        if (!pre) {
            out.push_back(not_applicable("per1200.3.lower", 0.0, bg.lower_opt));
            out.push_back(not_applicable("per1200.3.upper", bg.upper_opt, 0.0));
            out.push_back(not_applicable("per1200.3.gap", gap, 0.0));
            break;
        }
        const double root = std::sqrt(m) - mu;
        out.push_back(make_audit("per1200.3.lower", root * root, bg.lower_opt));
        const double up = std::sqrt(M) + mu;
        out.push_back(make_audit("per1200.3.upper", bg.upper_opt, up * up));
        out.push_back(make_audit("per1200.3.gap", gap, mu / root));
        break;
    }
    case Per1200Variant::CQuad: {
        const ClosenessReport c = closeness(f, g, std::nullopt, tol);
        if (!(c.q0 < 1.0)) {
            out.push_back(not_applicable("per1200.2.lower", 0.0, bg.lower_opt));
            out.push_back(not_applicable("per1200.2.upper", bg.upper_opt, 0.0));
            out.push_back(not_applicable("per1200.2.gap", gap, 0.0));
            break;
        }
        const double shrink = 1.0 - c.q0;
        out.push_back(make_audit("per1200.2.lower", m * shrink * shrink, bg.lower_opt));
        const double up = std::sqrt(M) + std::sqrt(c.q);
        out.push_back(make_audit("per1200.2.upper", bg.upper_opt, up * up));
        out.push_back(make_audit("per1200.2.gap", gap, std::sqrt(c.q / m) / shrink));
        break;
    }
    case Per1200Variant::DQuad: {
        const ClosenessReport c = closeness(f, g, weight_dual, tol);
        const bool pre = c.q_weighted < 1.0 && c.d_quad_flag;
        if (!pre) {
            out.push_back(not_applicable("per1200.1.lower", 0.0, bg.lower_opt));
            out.push_back(not_applicable("per1200.1.upper", bg.upper_opt, 0.0));
            out.push_back(not_applicable("per1200.1a.gap", gap, 0.0));
            out.push_back(not_applicable("per1200.1b.gap", gap, 0.0));
            break;
        }
        const double shrink = 1.0 - c.q_weighted;
        const double ml = c.weight_upper;
        out.push_back(make_audit("per1200.1.lower", shrink * shrink / ml, bg.lower_opt));
        const double up = std::sqrt(M) + std::sqrt(c.q);
        out.push_back(make_audit("per1200.1.upper", bg.upper_opt, up * up));
        const double bound_a = std::sqrt(c.q / m);
        const double bound_b = std::sqrt(c.q * ml) / shrink;
        if (std::sqrt(m * ml) <= shrink * (1.0 + 1e-12)) {
            out.push_back(make_audit("per1200.1a.gap", gap, bound_a));
            out.push_back(not_applicable("per1200.1b.gap", gap, bound_b));
        } else {
            out.push_back(not_applicable("per1200.1a.gap", gap, bound_a));
            out.push_back(make_audit("per1200.1b.gap", gap, bound_b));
        }
        break;
    }
    }
    return out;
}

DisIdentityResult dis_identity_residual(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                                        const ApproxDualParams& p2, const TolerancePolicy& tol) {
    require_same_shape(f, g, "dis_identity_residual");
    const ApproxDualParams v1 = validate_params(f, p1, tol);
    const ApproxDualParams v2 = validate_params(g, p2, tol);

    const CMatrix tfad = approx_dual_synthesis(f, v1.A, v1.Theta, tol);
    const CMatrix tgad = approx_dual_synthesis(g, v2.A, v2.Theta, tol);
    const CMatrix tg0 = canonical_dual_synthesis(g, tol);
    const CMatrix range_g = analysis_range_basis(g, tol);

    const CMatrix lhs = tgad - tfad;
    // U_F - U_G = (T_F - T_G)*; contract on the d-side first.
    const CMatrix t1 = (tfad * (f.columns() - g.columns()).adjoint()) * tg0;
    const CMatrix t2 = v2.Theta.adjoint();
    const CMatrix t3 = tfad - (tfad * range_g) * range_g.adjoint();  // T_{F^ad} P_{ker T_G}
    const CMatrix t4 = (v1.A.adjoint() - v2.A.adjoint()) * tg0;
    const CMatrix rhs = t1 + t2 - t3 - t4;

    DisIdentityResult r;
    r.residual = operator_norm(lhs - rhs);
    r.scale = std::max({operator_norm(lhs), operator_norm(t1), operator_norm(t2),
                        operator_norm(t3), operator_norm(t4)});
    return r;
}

CMatrix theta_ba(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                 const TolerancePolicy& tol) {
    require_same_shape(f, g, "theta_ba");
    require_frame(g, tol, "theta_ba");
    const ApproxDualParams v = validate_params(f, p1, tol);
    const CMatrix tfad = approx_dual_synthesis(f, v.A, v.Theta, tol);
    return project_out(analysis_range_basis(g, tol), tfad.adjoint());
}

BestApproxResult best_approx_dual(const Frame& f, const Frame& g, const ApproxDualParams& p1,
                                  const CMatrix& A2, int trials, std::uint64_t seed,
                                  const TolerancePolicy& tol) {
    require_same_shape(f, g, "best_approx_dual");
    if (trials < 1) throw InputError("best_approx_dual: trials must be >= 1");
    const double m = frame_bounds(f, tol).lower_opt;
    const double mu = frame_norm_distance(f, g);
    if (!(m > 0.0 && strictly_below(mu, std::sqrt(m))))
        throw PreconditionError("best_approx_dual: requires ||T_F - T_G|| < sqrt(m_opt(F))");
    require_admissible(A2, f.dim(), tol);

    const ApproxDualParams v1 = validate_params(f, p1, tol);
    const CMatrix tfad = approx_dual_synthesis(f, v1.A, v1.Theta, tol);
    const CMatrix range_g = analysis_range_basis(g, tol);
    const CMatrix tg0 = canonical_dual_synthesis(g, tol);
    CMatrix tba = project_out(range_g, tfad.adjoint());

    BestApproxResult out{build_approx_dual(g, make_params(A2, tba), tol), tba, 0.0, 0.0, 0.0, {}, {}, {}};
    out.distance = operator_norm(out.report.dual.columns() - tfad);

    const CMatrix x = A2.adjoint() * tg0 - tfad;
    out.projector_distance = operator_norm((x * range_g) * range_g.adjoint());

    const double sqm = std::sqrt(m);
    const double lambda =
        mu / (sqm - mu) * (operator_norm(v1.A) / sqm + operator_norm(v1.Theta)) +
        operator_norm(v1.A - A2) / (sqm - mu);
    out.lambda_bound = make_audit("best-app.lambda", out.distance, lambda);

    // Half the samples are broad kernel-valued Lambda, half sit close to Theta_ba.
    const CMatrix base = A2.adjoint() * tg0 - tfad;
    const double tba_norm = operator_norm(tba);
    out.min_sampled_distance = std::numeric_limits<double>::infinity();
    for (int t = 0; t < trials; ++t) {
        Rng rng = Rng::stream(seed, "best-app", static_cast<std::uint64_t>(t));
        CMatrix dir = project_out(range_g, rng.gaussian_matrix(f.size(), f.dim()));
        const double dn = operator_norm(dir);
        if (range_g.cols() == g.size()) dir.setZero();
        else if (dn > 0.0) dir /= dn;
        CMatrix lambda_t;
        if (t % 2 == 0) {
            lambda_t = dir * rng.uniform(0.0, 2.0 * std::max(1.0, tba_norm));
        } else {
            lambda_t = tba + dir * (std::max(1e-6, tba_norm) * std::pow(10.0, rng.uniform(-4.0, 0.0)));
        }
        out.min_sampled_distance =
            std::min(out.min_sampled_distance, operator_norm(base + lambda_t.adjoint()));
    }
    out.optimality = make_audit("best-app.optimality", out.distance, out.min_sampled_distance);
    out.projector_identity =
        make_audit("best-app.projector-identity", std::abs(out.distance - out.projector_distance),
                   1e-10 * std::max(1.0, out.distance));
    return out;
}

std::vector<BoundAudit> deviation_bound_audit(DeviationKind kind, const Frame& f, const Frame& g,
                                              const CMatrix& A1, const CMatrix& A2,
                                              const std::optional<Frame>& weight_dual,
                                              const std::optional<CMatrix>& theta,
                                              const TolerancePolicy& tol) {
    require_same_shape(f, g, "deviation_bound_audit");
    require_admissible(A1, f.dim(), tol);
    require_admissible(A2, f.dim(), tol);
    const double m = frame_bounds(f, tol).lower_opt;
    if (m <= 0.0) throw NotAFrameError("deviation_bound_audit: F is not a frame");
    const double sqm = std::sqrt(m);
    const double a1 = operator_norm(A1);
    const double a2 = operator_norm(A2);
    const double a12 = operator_norm(A1 - A2);
    const double eps1 = operator_norm(identity(f.dim()) - A1);
    const double eps2 = operator_norm(identity(f.dim()) - A2);
    const bool g_frame = is_frame(g, tol);
    std::vector<BoundAudit> out;

    switch (kind) {
    case DeviationKind::Cad: {
        const double mu = frame_norm_distance(f, g);
        const double lhs = g_frame ? canonical_pair_distance(f, g, A1, A2, tol) : 0.0;
        if (!strictly_below(mu, sqm)) {
            out.push_back(not_applicable("cad.bound1", lhs));
            out.push_back(not_applicable("cad.bound2", lhs));
            break;
        }
        const double denom = sqm * (sqm - mu);
        out.push_back(make_audit("cad.bound1", lhs, 2.0 * mu * a1 / denom + a12 / (sqm - mu)));
        out.push_back(make_audit("cad.bound2", lhs,
                                 2.0 * mu / denom + eps1 * (2.0 * mu + sqm) / denom +
                                     eps2 / (sqm - mu)));
        break;
    }
    case DeviationKind::PropDis: {
        const double mu = frame_norm_distance(f, g);
        const double lhs = g_frame ? canonical_pair_distance(f, g, identity(f.dim()), A2, tol) : 0.0;
        if (!strictly_below(mu, sqm)) {
            out.push_back(not_applicable("prop-dis", lhs));
            break;
        }
        out.push_back(
            make_audit("prop-dis", lhs, (2.0 * mu * a2 + eps2 * sqm) / (sqm * (sqm - mu))));
        break;
    }
    case DeviationKind::DQuad:
    case DeviationKind::CQuad: {
        const bool dquad = kind == DeviationKind::DQuad;
        const std::string prefix = dquad ? "d-quad" : "c-quad";
        const ClosenessReport c = closeness(f, g, dquad ? weight_dual : std::nullopt, tol);
        const double qw = dquad ? c.q_weighted : c.q0;
        const bool pre = qw < 1.0 && (!dquad || c.d_quad_flag) && g_frame;
        CMatrix th = theta ? *theta : CMatrix::Zero(f.size(), f.dim());
        const ApproxDualParams v = validate_params(f, make_params(A1, th), tol);
        const double theta_norm = operator_norm(v.Theta);
        const double best = g_frame ? best_pair_distance(f, g, A1, v.Theta, A2, tol) : 0.0;
        const double canon = g_frame ? canonical_pair_distance(f, g, A1, A2, tol) : 0.0;
        const double sq = std::sqrt(c.q);

        if (dquad) {
            if (!pre) {
                out.push_back(not_applicable("d-quad.rho", best));
                out.push_back(not_applicable("d-quad.case1", canon));
                out.push_back(not_applicable("d-quad.case2", canon));
                break;
            }
            const double shrink = 1.0 - qw;
            const double sml = std::sqrt(c.weight_upper);
            // rho, expanded so that q = 0 needs no division
            const double rho = sml / shrink * (sq * (a1 / sqm + theta_norm) + a12);
            out.push_back(make_audit("d-quad.rho", best, rho));
            const double case1 = (2.0 * sq * a1 + sqm * a12) / m;
            const double case2 = sml / shrink * (2.0 * a1 * std::sqrt(c.q / m) + a12);
            if (sqm * sml <= shrink * (1.0 + 1e-12)) {
                out.push_back(make_audit("d-quad.case1", canon, case1));
                out.push_back(not_applicable("d-quad.case2", canon, case2));
            } else {
                out.push_back(not_applicable("d-quad.case1", canon, case1));
                out.push_back(make_audit("d-quad.case2", canon, case2));
            }
        } else {
            if (!pre) {
                out.push_back(not_applicable("c-quad.upsilon", best));
                out.push_back(not_applicable("c-quad.canonical", canon));
                break;
            }
            const double denom = sqm * (1.0 - qw);
            const double upsilon = (sq * (a1 / sqm + theta_norm) + a12) / denom;
            out.push_back(make_audit("c-quad.upsilon", best, upsilon));
            out.push_back(make_audit("c-quad.canonical", canon,
                                     (2.0 * a1 * std::sqrt(c.q / m) + a12) / denom));
        }
        break;
    }
    }
    return out;
}

ApproxDualParams gamma_map(const Frame& f, const Frame& g, const ApproxDualParams& p,
                           const TolerancePolicy& tol) {
    require_same_shape(f, g, "gamma_map");
    const double m = frame_bounds(f, tol).lower_opt;
    if (!(m > 0.0 && strictly_below(frame_norm_distance(f, g), 0.5 * std::sqrt(m))))
        throw PreconditionError("gamma_map: requires ||T_F - T_G|| < sqrt(m_opt(F)) / 2");
    const ApproxDualParams v = validate_params(f, p, tol);
    return validate_params(g, make_params(v.A, theta_ba(f, g, v, tol)), tol);
}

CMatrix gamma_inverse(const Frame& f, const Frame& g, const CMatrix& lambda, const CMatrix& A,
                      const TolerancePolicy& tol) {
    require_same_shape(f, g, "gamma_inverse");
    const double m = frame_bounds(f, tol).lower_opt;
    if (!(m > 0.0 && strictly_below(frame_norm_distance(f, g), 0.5 * std::sqrt(m))))
        throw PreconditionError("gamma_inverse: requires ||T_F - T_G|| < sqrt(m_opt(F)) / 2");
    require_admissible(A, f.dim(), tol);
    if (lambda.rows() != f.size() || lambda.cols() != f.dim())
        throw InputError("gamma_inverse: Lambda must be N x d");
    require_finite(lambda, "Lambda");

    const CMatrix q1 = analysis_range_basis(f, tol);
    const CMatrix q2 = analysis_range_basis(g, tol);
    // Right side: Lambda - P_{ker T_G} U_{F~(0)} A, a matrix with columns in ker T_G.
    const CMatrix u_f0 = canonical_dual_synthesis(f, tol).adjoint();
    const CMatrix y = project_out(q2, project_out(q2, lambda) - u_f0 * A);

    // Solve P_{K2} x = y for x in K1 = ran(Q1)^perp. Writing x = y + Q2 c and
    // imposing Q1* x = 0 gives (Q1* Q2) c = -Q1* y; Q1* Q2 is invertible
    // exactly when the restricted projection is an isomorphism.
    const CMatrix cross = q1.adjoint() * q2;
    if (cross.rows() != cross.cols() || min_singular_value(cross) < 1e-8)
        throw GapHypothesisError("gamma_inverse: P_{ker T_G} restricted to ker T_F is singular");
    const CMatrix c = cross.fullPivLu().solve(-(q1.adjoint() * y));
    return project_out(q1, y + q2 * c);
}

} // namespace framekit
