#include "framekit/gabor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <Eigen/Cholesky>

#include "framekit/errors.hpp"
#include "framekit/kernels.hpp"
#include "framekit/perturbation.hpp"

namespace framekit {

namespace {

Eigen::Index wrap(Eigen::Index i, Eigen::Index L) {
    const Eigen::Index r = i % L;
    return r < 0 ? r + L : r;
}

// exp(2 pi i r / L) for r = 0 .. L-1
CVector phase_table(Eigen::Index L) {
    CVector w(L);
    for (Eigen::Index r = 0; r < L; ++r) {
        const double t = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(L);
        w[r] = cdouble(std::cos(t), std::sin(t));
    }
    return w;
}

CVector doubled(const CVector& x) {
    CVector out(2 * x.size());
    out << x, x;
    return out;
}

void require_window(const CVector& g, Eigen::Index L, const char* what) {
    if (g.size() != L) throw InputError(std::string(what) + ": window length must equal L");
    require_finite(g, what);
}

CMatrix shift_matrix(Eigen::Index L, Eigen::Index a) {
    CMatrix t = CMatrix::Zero(L, L);
    for (Eigen::Index j = 0; j < L; ++j) t(j, wrap(j - a, L)) = 1.0;
    return t;
}

CVector modulation_diagonal(Eigen::Index L, Eigen::Index b) {
    const CVector w = phase_table(L);
    CVector e(L);
    for (Eigen::Index j = 0; j < L; ++j) e[j] = w[wrap(b * j, L)];
    return e;
}

void require_commuting(const GaborSystem& sys, const CMatrix& A, const char* what) {
    if (A.rows() != sys.L || A.cols() != sys.L) throw InputError(std::string(what) + ": A must be L x L");
    require_finite(A, what);
    if (commutation_residual(sys, A) > 1e-9 * std::max(1.0, operator_norm(A)))
        throw StructureError(std::string(what) + ": A does not commute with the lattice shifts");
}

// Window-level formula with the frame operator already factored.
CVector dual_window_formula(const GaborSystem& sys, const Frame& f, const Eigen::LLT<CMatrix>& s,
                            const CMatrix& A, const CVector& h) {
    const CVector sg = s.solve(sys.window);
    const CVector coeff = f.columns().adjoint() * sg;  // <S^{-1} g, E T g>
    const Frame fh = build_gabor_frame(sys.with_window(h));
    return A.adjoint() * sg + h - fh.columns() * coeff;
}

Eigen::LLT<CMatrix> factor(const Frame& f, const char* what) {
    Eigen::LLT<CMatrix> llt(frame_operator(f));
    if (llt.info() != Eigen::Success)
        throw PreconditionError(std::string(what) + ": system is not a frame");
    return llt;
}

double max_entry_gap(const CMatrix& x, const CMatrix& y) {
    return x.rows() == 0 ? 0.0 : (x - y).cwiseAbs().maxCoeff();
}

} // namespace

void GaborSystem::validate() const {
    if (L < 1 || a < 1 || b < 1) throw LatticeError("Gabor system: L, a, b must be positive");
    if (L % a != 0) throw LatticeError("Gabor system: a must divide L");
    if (L % b != 0) throw LatticeError("Gabor system: b must divide L");
    require_window(window, L, "Gabor window");
}

GaborSystem GaborSystem::with_window(CVector g) const {
    GaborSystem out = *this;
    out.window = std::move(g);
    return out;
}

Frame build_gabor_frame(const GaborSystem& sys) {
    sys.validate();
    const Eigen::Index L = sys.L;
    const Eigen::Index nt = sys.time_shifts();
    const Eigen::Index nm = sys.modulations();
    const CVector w = phase_table(L);
    CMatrix cols(L, nt * nm);
    for (Eigen::Index n = 0; n < nt; ++n) {
        for (Eigen::Index m = 0; m < nm; ++m) {
            auto col = cols.col(n * nm + m);
            for (Eigen::Index j = 0; j < L; ++j)
                col[j] = w[wrap(m * sys.b * j, L)] * sys.window[wrap(j - n * sys.a, L)];
        }
    }
    return Frame(std::move(cols));
}

std::vector<CVector> lattice_correlations(const CVector& x, const CVector& y, Eigen::Index L,
                                          Eigen::Index a, Eigen::Index b) {
    if (L < 1 || a < 1 || b < 1 || L % a != 0 || L % b != 0)
        throw LatticeError("lattice_correlations: a and b must divide L");
    require_window(x, L, "lattice_correlations");
    require_window(y, L, "lattice_correlations");
    const auto& k = kernels::active_kernels();
    const CVector xx = doubled(x);
    const CVector yy = doubled(y);
    const Eigen::Index step = L / b;
    const auto n = static_cast<std::size_t>(L);
    std::vector<CVector> out(static_cast<std::size_t>(b), CVector::Zero(L));
    for (Eigen::Index kk = 0; kk < b; ++kk) {
        for (Eigen::Index t = 0; t < L / a; ++t) {
            const Eigen::Index ox = wrap(-t * a, L);
            const Eigen::Index oy = wrap(-(t * a + kk * step), L);
            k.conj_product_accumulate(xx.data() + ox, yy.data() + oy, n,
                                      out[static_cast<std::size_t>(kk)].data());
        }
    }
    return out;
}

RVector periodized_energy(const CVector& x, Eigen::Index L, Eigen::Index a) {
    if (L < 1 || a < 1 || L % a != 0) throw LatticeError("periodized_energy: a must divide L");
    require_window(x, L, "periodized_energy");
    RVector out = RVector::Zero(L);
    for (Eigen::Index j = 0; j < L; ++j)
        for (Eigen::Index t = 0; t < L / a; ++t) out[j] += std::norm(x[wrap(j - t * a, L)]);
    return out;
}

WalnutReport walnut_report(const GaborSystem& sys) {
    sys.validate();
    WalnutReport r;
    r.correlations = lattice_correlations(sys.window, sys.window, sys.L, sys.a, sys.b);
    const double scale = static_cast<double>(sys.L) / static_cast<double>(sys.b);
    double hi = 0.0;
    double lo = std::numeric_limits<double>::infinity();
    for (Eigen::Index j = 0; j < sys.L; ++j) {
        double off = 0.0;
        for (std::size_t k = 1; k < r.correlations.size(); ++k) off += std::abs(r.correlations[k][j]);
        const double diag = r.correlations[0][j].real();
        hi = std::max(hi, std::abs(r.correlations[0][j]) + off);
        lo = std::min(lo, diag - off);
    }
    r.upper_est = scale * hi;
    r.lower_est = std::max(0.0, scale * lo);
    return r;
}

BoundAudit envelope_audit(const GaborSystem& sys, const TolerancePolicy& tol) {
    const RVector g0 = periodized_energy(sys.window, sys.L, sys.a);
    const double upper = frame_bounds(build_gabor_frame(sys), tol).upper_opt;
    return make_audit("envelope", g0.maxCoeff(),
                      static_cast<double>(sys.b) / static_cast<double>(sys.L) * upper);
}

double wiener_norm(const CVector& g, Eigen::Index L, Eigen::Index a) {
    if (L < 1 || a < 1 || L % a != 0) throw LatticeError("wiener_norm: a must divide L");
    require_window(g, L, "wiener_norm");
    const auto& k = kernels::active_kernels();
    double sum = 0.0;
    for (Eigen::Index blk = 0; blk < L / a; ++blk)
        sum += k.max_abs(g.data() + blk * a, static_cast<std::size_t>(a));
    return sum;
}

double correlation_r(const GaborSystem& sys1, const CVector& g2) {
    sys1.validate();
    require_window(g2, sys1.L, "correlation_r");
    return walnut_report(sys1.with_window(sys1.window - g2)).upper_est;
}

double commutation_residual(const GaborSystem& sys, const CMatrix& A) {
    if (A.rows() != sys.L || A.cols() != sys.L)
        throw InputError("commutation_residual: A must be L x L");
    const CMatrix t = shift_matrix(sys.L, sys.a);
    const CVector e = modulation_diagonal(sys.L, sys.b);
    const CMatrix ae = A * e.asDiagonal();
    const CMatrix ea = e.asDiagonal() * A;
    return std::max(operator_norm(A * t - t * A), operator_norm(ae - ea));
}

CMatrix commuting_operator(const GaborSystem& sys, const OperatorSpec& spec,
                           const TolerancePolicy& tol) {
    sys.validate();
    CMatrix A;
    if (spec.kind == OperatorSpec::Kind::Scalar) {
        A = spec.scalar * identity(sys.L);
    } else {
        if (spec.coefficients.empty()) throw InputError("commuting_operator: no coefficients");
        const CMatrix s = frame_operator(build_gabor_frame(sys));
        // Horner evaluation of sum_k c_k S^k.
        A = spec.coefficients.back() * identity(sys.L);
        for (auto it = spec.coefficients.rbegin() + 1; it != spec.coefficients.rend(); ++it)
            A = s * A + (*it) * identity(sys.L);
    }
    require_finite(A, "commuting_operator");
    const double eps = operator_norm(identity(sys.L) - A);
    if (!(eps < 1.0 - tol.strict_contraction_margin))
        throw ContractionError("commuting_operator: ||I - A|| = " + std::to_string(eps) +
                               " is not below 1");
    return A;
}

OperatorSpec optimal_scaling_spec(const GaborSystem& sys, const TolerancePolicy& tol) {
    const FrameBounds fb = frame_bounds(build_gabor_frame(sys), tol);
    if (fb.lower_opt <= 0.0) throw NotAFrameError("optimal_scaling_spec: system is not a frame");
    OperatorSpec spec;
    spec.kind = OperatorSpec::Kind::Polynomial;
    spec.coefficients = {cdouble(0.0), cdouble(2.0 / (fb.lower_opt + fb.upper_opt))};
    return spec;
}

GaborDualWindow gabor_approx_dual_window(const GaborSystem& sys, const CMatrix& A,
                                         const CVector& h, const TolerancePolicy& tol) {
    sys.validate();
    require_window(h, sys.L, "dual window h");
    const Frame f = build_gabor_frame(sys);
    if (!is_frame(f, tol)) throw PreconditionError("gabor_approx_dual_window: system is not a frame");
    require_commuting(sys, A, "gabor_approx_dual_window");
    const double eps = operator_norm(identity(sys.L) - A);
    if (!(eps < 1.0 - tol.strict_contraction_margin))
        throw ContractionError("gabor_approx_dual_window: ||I - A|| is not below 1");

    const auto llt = factor(f, "gabor_approx_dual_window");
    GaborDualWindow out{dual_window_formula(sys, f, llt, A, h),
                        ApproxDualReport{f, CMatrix(), 0.0, false}};
    Frame dual = build_gabor_frame(sys.with_window(out.window));
    CMatrix recon = f.columns() * dual.columns().adjoint();
    out.report.rate = operator_norm(identity(sys.L) - recon);
    out.report.is_alternate_dual = out.report.rate <= tol.identity_residual_rel;
    out.structure_residual = operator_norm(recon - A);

    const CMatrix th = bessel_to_theta(f, build_gabor_frame(sys.with_window(h)).columns(), tol);
    const ApproxDualReport family = build_approx_dual(f, make_params(A, th), tol);
    out.two_route_residual = max_entry_gap(dual.columns(), family.dual.columns());

    out.report.dual = std::move(dual);
    out.report.reconstruction = std::move(recon);
    return out;
}

std::vector<BoundAudit> gabor_perturbation_audit(const GaborSystem& sys1, const CVector& g2,
                                                 const CMatrix& A1, const CMatrix& A2,
                                                 const std::optional<CVector>& h,
                                                 const TolerancePolicy& tol) {
    sys1.validate();
    require_window(g2, sys1.L, "gabor_perturbation_audit");
    const GaborSystem sys2 = sys1.with_window(g2);
    const CVector hh = h ? *h : CVector::Zero(sys1.L);
    require_window(hh, sys1.L, "gabor_perturbation_audit h");
    require_commuting(sys1, A1, "gabor_perturbation_audit A1");
    require_commuting(sys1, A2, "gabor_perturbation_audit A2");
    for (const CMatrix* A : {&A1, &A2})
        if (!(operator_norm(identity(sys1.L) - *A) < 1.0 - tol.strict_contraction_margin))
            throw ContractionError("gabor_perturbation_audit: ||I - A|| is not below 1");

    const Frame f1 = build_gabor_frame(sys1);
    const Frame f2 = build_gabor_frame(sys2);
    const double m1 = frame_bounds(f1, tol).lower_opt;
    const double m2 = frame_bounds(f2, tol).lower_opt;
    const double r = correlation_r(sys1, g2);
    const double mu = frame_norm_distance(f1, f2);
    const double w = wiener_norm(sys1.window - g2, sys1.L, sys1.a);
    const double Lb = static_cast<double>(sys1.L) / static_cast<double>(sys1.b);
    const double bL = 1.0 / Lb;
    const double b = static_cast<double>(sys1.b);
    const double a1 = operator_norm(A1);
    const double a12 = operator_norm(A1 - A2);

    std::vector<BoundAudit> out;
    out.push_back(make_audit("gabor1.domination", mu, std::sqrt(r)));
    out.push_back(make_audit("info.wiener.domination.2b-linear", r, 2.0 / b * w));
    out.push_back(make_audit("info.wiener.domination.2b-squared", r, 2.0 / b * w * w));
    out.push_back(make_audit("info.wiener.domination.2Lb-linear", r, 2.0 * Lb * w));
    out.push_back(make_audit("info.wiener.domination.2Lb-squared", r, 2.0 * Lb * w * w));

    // Quantities needed by every branch; only meaningful when both systems are frames.
    const bool frames = m1 > 0.0 && m2 > 0.0;
    double env_lhs = 0.0;
    double best_lhs = 0.0;
    double canon_lhs = 0.0;
    double theta_norm = 0.0;
    double agreement = 0.0;
    double agreement_scale = 1.0;
    if (frames) {
        const auto llt1 = factor(f1, "gabor_perturbation_audit");
        const auto llt2 = factor(f2, "gabor_perturbation_audit");
        const CVector c1 = A1.adjoint() * llt1.solve(sys1.window);
        const CVector c2 = A2.adjoint() * llt2.solve(g2);
        env_lhs = periodized_energy(c1 - c2, sys1.L, sys1.a).maxCoeff();

        // Approximately dual window of sys1 selected by h, and its best approximation in sys2.
        const CVector g1ad = dual_window_formula(sys1, f1, llt1, A1, hh);
        const CVector g2ad = dual_window_formula(sys2, f2, llt2, A2, g1ad);
        const CMatrix t1ad = build_gabor_frame(sys1.with_window(g1ad)).columns();
        const CMatrix t2ad = build_gabor_frame(sys2.with_window(g2ad)).columns();
        best_lhs = operator_norm(t2ad - t1ad);

        const CMatrix th1 = bessel_to_theta(f1, build_gabor_frame(sys1.with_window(hh)).columns(), tol);
        theta_norm = operator_norm(th1);
        const ApproxDualParams p1 = validate_params(f1, make_params(A1, th1), tol);
        const CMatrix tba = theta_ba(f1, f2, p1, tol);
        const ApproxDualReport family = build_approx_dual(f2, make_params(A2, tba), tol);
        agreement = max_entry_gap(t2ad, family.dual.columns());
        agreement_scale = std::max(1.0, family.dual.columns().cwiseAbs().maxCoeff());

        // Canonical case, h = 0.
        const CVector c2best = dual_window_formula(sys2, f2, llt2, A2, c1);
        canon_lhs = periodized_energy(c1 - c2best, sys1.L, sys1.a).maxCoeff();
    }

    const auto branch = [&](const std::string& lower_name, const std::string& env_name,
                            const std::string& best_name, const std::string& canon_name,
                            double rho) {
        const double sqm = std::sqrt(m1);
        const double s = std::sqrt(rho);
        const bool pre = m1 > 0.0 && strictly_below(rho, m1);
        const double lower = pre ? (sqm - s) * (sqm - s) : 0.0;
        if (!pre) {
            out.push_back(not_applicable(lower_name, lower, m2));
            out.push_back(not_applicable(env_name, env_lhs));
            if (!best_name.empty()) out.push_back(not_applicable(best_name, best_lhs));
            out.push_back(not_applicable(canon_name, canon_lhs));
            return;
        }
        out.push_back(make_audit(lower_name, lower, m2));
        const double cad = 2.0 * s * a1 / (sqm * (sqm - s)) + a12 / (sqm - s);
        out.push_back(make_audit(env_name, env_lhs, bL * cad * cad));
        const double lambda0 = s / (sqm - s) * (a1 / sqm) + a12 / (sqm - s);
        if (!best_name.empty()) {
            const double lambda = s / (sqm - s) * (a1 / sqm + theta_norm) + a12 / (sqm - s);
            out.push_back(make_audit(best_name, best_lhs, lambda));
        }
        out.push_back(make_audit(canon_name, canon_lhs, bL * lambda0 * lambda0));
    };

    branch("gabor1.lower", "gabor1.envelope", "gabor1.best-app", "gabor2.envelope", r);
    if (frames && strictly_below(r, m1)) {
        out.push_back(make_audit("gabor1.window-agreement", agreement, 1e-9 * agreement_scale));
    } else {
        out.push_back(not_applicable("gabor1.window-agreement", agreement, 1e-9 * agreement_scale));
    }
    branch("gabor3.lower", "gabor3.envelope", "gabor3.best-app", "gabor4.envelope",
           2.0 * Lb * w * w);
    return out;
}

} // namespace framekit
