#include "framekit/harness.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "framekit/errors.hpp"
#include "framekit/gabor.hpp"
#include "framekit/generate.hpp"
#include "framekit/perturbation.hpp"
#include "framekit/random.hpp"

namespace framekit {

namespace {

struct KindInfo {
    AuditKind kind;
    const char* name;
    std::vector<const char*> audits;
};

const std::vector<KindInfo>& kind_table() {
    static const std::vector<KindInfo> table = {
        {AuditKind::Gap11, "gap-11", {"gap-11"}},
        {AuditKind::Per1200DQuad, "per1200-dquad",
         {"per1200.1.lower", "per1200.1.upper", "per1200.1a.gap", "per1200.1b.gap"}},
        {AuditKind::Per1200CQuad, "per1200-cquad",
         {"per1200.2.lower", "per1200.2.upper", "per1200.2.gap"}},
        {AuditKind::Per1200Mu, "per1200-mu", {"per1200.3.lower", "per1200.3.upper", "per1200.3.gap"}},
        {AuditKind::Dis, "dis", {"dis.identity"}},
        {AuditKind::Cad, "cad", {"cad.bound1", "cad.bound2"}},
        {AuditKind::PropDis, "prop-dis", {"prop-dis"}},
        {AuditKind::BestApp, "best-app",
         {"best-app.lambda", "best-app.optimality", "best-app.projector-identity"}},
        {AuditKind::DQuad, "d-quad", {"d-quad.rho", "d-quad.case1", "d-quad.case2"}},
        {AuditKind::CQuad, "c-quad", {"c-quad.upsilon", "c-quad.canonical"}},
        {AuditKind::Gamma, "gamma", {"gamma.roundtrip-theta", "gamma.roundtrip-lambda"}},
    };
    return table;
}

const KindInfo& info(AuditKind k) {
    for (const auto& e : kind_table())
        if (e.kind == k) return e;
    throw InputError("unknown audit kind");
}

void append_not_applicable(std::vector<BoundAudit>& out, AuditKind k) {
    for (const char* name : info(k).audits) out.push_back(not_applicable(name));
}

double roundoff_rhs(double scale) { return 1e-9 * std::max(1.0, scale); }

std::vector<BoundAudit> run_kind(AuditKind kind, const Frame& f, const Frame& g,
                                 const ApproxDualParams& p1, const CMatrix& A2,
                                 const std::optional<CMatrix>& lambda, const PerturbInputs& in,
                                 const TolerancePolicy& tol) {
    const bool g_frame = is_frame(g, tol);
    switch (kind) {
    case AuditKind::Gap11:
        return {gap_bound_audit(f, g, tol)};
    case AuditKind::Per1200DQuad:
        return per1200_audit(f, g, Per1200Variant::DQuad, std::nullopt, tol);
    case AuditKind::Per1200CQuad:
        return per1200_audit(f, g, Per1200Variant::CQuad, std::nullopt, tol);
    case AuditKind::Per1200Mu:
        return per1200_audit(f, g, Per1200Variant::Mu, std::nullopt, tol);
    case AuditKind::Dis: {
        if (!g_frame) return {not_applicable("dis.identity")};
        const CMatrix l = lambda ? *lambda : CMatrix::Zero(g.size(), g.dim());
        const ApproxDualParams p2 = validate_params(g, make_params(A2, l), tol);
        const DisIdentityResult r = dis_identity_residual(f, g, p1, p2, tol);
        return {make_audit("dis.identity", r.residual, 1e-9 * r.scale)};
    }
    case AuditKind::Cad:
        return deviation_bound_audit(DeviationKind::Cad, f, g, p1.A, A2, std::nullopt, p1.Theta, tol);
    case AuditKind::PropDis:
        return deviation_bound_audit(DeviationKind::PropDis, f, g, p1.A, A2, std::nullopt, p1.Theta,
                                     tol);
    case AuditKind::DQuad:
        return deviation_bound_audit(DeviationKind::DQuad, f, g, p1.A, A2, std::nullopt, p1.Theta,
                                     tol);
    case AuditKind::CQuad:
        return deviation_bound_audit(DeviationKind::CQuad, f, g, p1.A, A2, std::nullopt, p1.Theta,
                                     tol);
    case AuditKind::BestApp: {
        if (!g_frame) break;
        const BestApproxResult r = best_approx_dual(f, g, p1, A2, in.best_app_trials, in.seed, tol);
        return {r.lambda_bound, r.optimality, r.projector_identity};
    }
    case AuditKind::Gamma: {
        if (!g_frame) break;
        std::vector<BoundAudit> out;
        const ApproxDualParams image = gamma_map(f, g, p1, tol);
        const CMatrix back = gamma_inverse(f, g, image.Theta, p1.A, tol);
        out.push_back(make_audit("gamma.roundtrip-theta", operator_norm(back - p1.Theta),
                                 roundoff_rhs(operator_norm(p1.Theta))));
        const CMatrix l = lambda ? project_to_kernel(g, *lambda, tol)
                                 : CMatrix::Zero(g.size(), g.dim());
        const CMatrix theta = gamma_inverse(f, g, l, p1.A, tol);
        const ApproxDualParams again = gamma_map(f, g, make_params(p1.A, theta), tol);
        out.push_back(make_audit("gamma.roundtrip-lambda", operator_norm(again.Theta - l),
                                 roundoff_rhs(operator_norm(l))));
        return out;
    }
    }
    std::vector<BoundAudit> out;
    append_not_applicable(out, kind);
    return out;
}

} // namespace

const char* kind_name(AuditKind k) { return info(k).name; }

std::set<AuditKind> parse_kinds(const std::string& list) {
    std::set<AuditKind> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        item.erase(0, item.find_first_not_of(" \t"));
        item.erase(item.find_last_not_of(" \t") + 1);
        if (item.empty()) continue;
        if (item == "all") {
            for (const auto& e : kind_table()) out.insert(e.kind);
            continue;
        }
        if (item == "mu-only") {
            out.insert({AuditKind::Per1200Mu, AuditKind::Cad, AuditKind::PropDis,
                        AuditKind::BestApp, AuditKind::Gamma});
            continue;
        }
        bool found = false;
        for (const auto& e : kind_table()) {
            if (item == e.name) {
                out.insert(e.kind);
                found = true;
            }
        }
        if (!found) throw InputError("unknown audit kind: " + item);
    }
    if (out.empty()) throw InputError("no audit kinds selected");
    return out;
}

std::vector<BoundAudit> run_perturb_audits(const Frame& f, const Frame& g, const PerturbInputs& in,
                                           const std::set<AuditKind>& kinds,
                                           const TolerancePolicy& tol) {
    require_same_shape(f, g, "perturb audit");
    if (!is_frame(f, tol)) throw NotAFrameError("perturb audit: F is not a frame");
    const ApproxDualParams p1 = validate_params(f, in.p1, tol);
    const CMatrix A2 = in.A2 ? *in.A2 : p1.A;
    if (A2.rows() != f.dim() || A2.cols() != f.dim()) throw InputError("A2 must be d x d");
    if (!(operator_norm(identity(f.dim()) - A2) < 1.0 - tol.strict_contraction_margin))
        throw ContractionError("||I - A2|| is not below 1");
    std::optional<CMatrix> lambda = in.lambda;
    if (lambda && (lambda->rows() != g.size() || lambda->cols() != g.dim()))
        throw InputError("Lambda must be N x d");
    if (!lambda && is_frame(g, tol)) {
        Rng rng = Rng::stream(in.seed, "perturb.lambda");
        lambda = random_kernel_theta(rng, g, rng.uniform(0.0, 1.0), tol);
    }

    std::vector<BoundAudit> out;
    for (AuditKind k : kinds) {
        try {
            auto part = run_kind(k, f, g, p1, A2, lambda, in, tol);
            out.insert(out.end(), part.begin(), part.end());
        } catch (const PreconditionError&) {
            append_not_applicable(out, k);
        } catch (const NotAFrameError&) {
            append_not_applicable(out, k);
        }
    }
    return out;
}

namespace {

void add(std::vector<TrialAudit>& sink, int trial, const std::vector<BoundAudit>& audits) {
    for (const auto& a : audits) sink.push_back({trial, a});
}

Frame corpus_pair_f(Rng& rng, int t, std::optional<Frame>& g_out, const TolerancePolicy& tol) {
    if (t % 4 == 3) {
        const Eigen::Index d = rng.uniform_int(2, 3);
        const int copies = static_cast<int>(rng.uniform_int(4, 6));
        FramePair p = random_redundant_pair(rng, d, copies);
        g_out = std::move(p.g);
        return std::move(p.f);
    }
    const Eigen::Index d = rng.uniform_int(2, 5);
    const Eigen::Index N = rng.uniform_int(d, 2 * d + 3);
    Frame f = random_frame(rng, d, N, tol);
    const double ratio = t % 3 == 0 ? rng.uniform(0.0, 1.3) : rng.uniform(0.0, 0.5);
    g_out = random_perturbation(rng, f, ratio, tol);
    return f;
}

void frame_trial(std::vector<TrialAudit>& sink, std::uint64_t seed, int t, int& flagged,
                 const TolerancePolicy& tol) {
    Rng rng = Rng::stream(seed, "corpus.frames", static_cast<std::uint64_t>(t));
    std::optional<Frame> g;
    const Frame f = corpus_pair_f(rng, t, g, tol);
    PerturbInputs in;
    in.p1 = make_params(random_admissible_A(rng, f.dim()),
                        random_kernel_theta(rng, f, rng.uniform(0.0, 1.5), tol));
    in.A2 = random_admissible_A(rng, f.dim());
    if (is_frame(*g, tol)) in.lambda = random_kernel_theta(rng, *g, rng.uniform(0.0, 1.5), tol);
    in.best_app_trials = 20;
    in.seed = seed ^ static_cast<std::uint64_t>(t);
    const std::set<AuditKind> all = parse_kinds("all");
    add(sink, t, run_perturb_audits(f, *g, in, all, tol));

    // Excess of F against the duals it and its perturbation produce.
    const ApproxDualReport dual_f = build_approx_dual(f, in.p1, tol);
    int mismatch = same_excess_check(f, dual_f, tol) ? 0 : 1;
    if (is_frame(*g, tol)) {
        const ApproxDualReport dual_g = build_approx_dual(*g, make_params(*in.A2, *in.lambda), tol);
        mismatch += same_excess_check(*g, dual_g, tol) ? 0 : 1;
    }
    add(sink, t, {make_audit("excess.preserved", mismatch, 0.0)});

    const MinimalNormAudit mn = minimal_norm_audit(f, in.p1.A, 10, in.seed, tol);
    if (mn.equality_flagged) ++flagged;
    add(sink, t,
        {make_audit("minimal-norm.lower-bound", mn.lowerbound, std::min(mn.canon, mn.min_trial)),
         make_audit("minimal-norm.dominance", mn.canon, mn.min_trial + 1e-10),
         make_audit("minimal-norm.pointwise", mn.pointwise_dominance_holds ? 0.0 : 1.0, 0.0),
         make_audit("info.minimal-norm.equality", mn.canon, mn.lowerbound)});
}

void gabor_trial(std::vector<TrialAudit>& sink, std::uint64_t seed, int t,
                 const TolerancePolicy& tol) {
    Rng rng = Rng::stream(seed, "corpus.gabor", static_cast<std::uint64_t>(t));
    static constexpr Eigen::Index lengths[] = {8, 12, 16};
    const GaborSystem sys = random_gabor(rng, lengths[rng.uniform_int(0, 2)]);
    const Frame f = build_gabor_frame(sys);
    const FrameBounds fb = frame_bounds(f, tol);
    const WalnutReport w = walnut_report(sys);
    add(sink, t,
        {make_audit("walnut.lower", w.lower_est, fb.lower_opt),
         make_audit("walnut.upper", fb.upper_opt, w.upper_est), envelope_audit(sys, tol)});
    if (fb.lower_opt <= 0.0) return;

    const CMatrix A1 = t % 2 == 0 ? commuting_operator(sys, optimal_scaling_spec(sys, tol), tol)
                                  : commuting_operator(sys, {OperatorSpec::Kind::Scalar,
                                                             rng.uniform(0.6, 1.4), {}},
                                                       tol);
    const CMatrix A2 =
        commuting_operator(sys, {OperatorSpec::Kind::Scalar, rng.uniform(0.6, 1.4), {}}, tol);
    std::optional<CVector> h;
    if (t % 3 == 0) h = 0.3 * rng.gaussian_vector(sys.L) / std::sqrt(double(sys.L));

    const GaborDualWindow dw =
        gabor_approx_dual_window(sys, A1, h ? *h : CVector::Zero(sys.L), tol);
    add(sink, t,
        {make_audit("gabor.structure", dw.structure_residual, roundoff_rhs(operator_norm(A1))),
         make_audit("gabor.two-route", dw.two_route_residual,
                    roundoff_rhs(dw.window.cwiseAbs().maxCoeff())),
         make_audit("excess.preserved", same_excess_check(f, dw.report, tol) ? 0.0 : 1.0, 0.0)});

    const CVector delta = rng.gaussian_vector(sys.L);
    const double size = sys.window.norm() * std::pow(10.0, rng.uniform(-2.5, -0.3));
    const CVector g2 = sys.window + delta * (size / delta.norm());
    add(sink, t, gabor_perturbation_audit(sys, g2, A1, A2, h, tol));
}

} // namespace

CorpusResult run_corpus(std::uint64_t seed, int trials, const TolerancePolicy& tol) {
    if (trials < 1) throw InputError("corpus: trials must be >= 1");
    CorpusResult r;
    for (int t = 0; t < trials; ++t) {
        frame_trial(r.audits, seed, t, r.minimal_norm_flagged, tol);
        gabor_trial(r.audits, seed, t, tol);
    }
    std::stable_sort(r.audits.begin(), r.audits.end(), [](const TrialAudit& a, const TrialAudit& b) {
        if (a.audit.name != b.audit.name) return a.audit.name < b.audit.name;
        return a.trial < b.trial;
    });
    for (const auto& ta : r.audits) {
        AuditTally& s = r.per_name[ta.audit.name];
        switch (verdict(ta.audit)) {
        case Verdict::Holds:
            ++s.applicable;
            ++s.holds;
            break;
        case Verdict::Violated:
            ++s.applicable;
            ++s.violated;
            break;
        case Verdict::NotApplicable:
            ++s.not_applicable;
            break;
        }
    }
    std::vector<BoundAudit> flat;
    flat.reserve(r.audits.size());
    for (const auto& ta : r.audits) flat.push_back(ta.audit);
    r.totals = tally(flat);
    return r;
}

} // namespace framekit
