#include "framekit/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "framekit/errors.hpp"
#include "framekit/gabor.hpp"
#include "framekit/generate.hpp"
#include "framekit/harness.hpp"
#include "framekit/json_io.hpp"
#include "framekit/perturbation.hpp"

namespace framekit::cli {

namespace {

using io::json;
namespace fs = std::filesystem;

TolerancePolicy policy_from_env() {
    TolerancePolicy tol;
    if (const char* v = std::getenv("FRAMEKIT_TOL"); v && *v) {
        char* end = nullptr;
        const double x = std::strtod(v, &end);
        if (end == v || *end != '\0') throw InputError("FRAMEKIT_TOL is not a number");
        tol.identity_residual_rel = x;
    }
    tol.validate();
    return tol;
}

void emit(const json& report, const std::string& path, std::ostream& out) {
    if (path.empty()) {
        out << io::dump(report);
    } else {
        io::write_file(path, report);
    }
}

json bounds_json(const FrameBounds& b) {
    json j;
    j["lower"] = b.lower_opt;
    j["upper"] = b.upper_opt;
    j["tight"] = b.tight;
    return j;
}

json audits_json(const std::vector<BoundAudit>& audits) {
    json arr = json::array();
    for (const auto& a : audits) arr.push_back(io::audit_to_json(a));
    return arr;
}

json tally_json(const AuditTally& t) {
    json j;
    j["applicable"] = t.applicable;
    j["holds"] = t.holds;
    j["violated"] = t.violated;
    j["not_applicable"] = t.not_applicable;
    return j;
}

int audit_exit(const std::vector<BoundAudit>& audits) {
    const AuditTally t = tally(audits);
    if (t.violated > 0) return Violated;
    if (t.applicable == 0) return NothingApplicable;
    return Ok;
}

CVector window_from_file(const std::string& path) {
    const json j = io::read_file(path);
    if (j.is_object()) {
        if (!j.contains("window")) throw InputError(path + ": missing \"window\"");
        return io::vector_from_json(j["window"]);
    }
    return io::vector_from_json(j);
}

CMatrix operator_from_spec(const GaborSystem& sys, const std::string& spec,
                           const TolerancePolicy& tol) {
    if (spec == "optimal") return commuting_operator(sys, optimal_scaling_spec(sys, tol), tol);
    OperatorSpec s;
    std::stringstream ss(spec);
    std::string item;
    std::vector<cdouble> coeffs;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            coeffs.emplace_back(std::stod(item, &used), 0.0);
            if (used != item.size()) throw InputError("");
        } catch (const std::exception&) {
            throw InputError("operator spec must be \"optimal\", a scalar, or c0,c1,... : " + spec);
        }
    }
    if (coeffs.empty()) throw InputError("empty operator spec");
    if (coeffs.size() == 1) {
        s.scalar = coeffs.front();
    } else {
        s.kind = OperatorSpec::Kind::Polynomial;
        s.coefficients = coeffs;
    }
    return commuting_operator(sys, s, tol);
}

int frame_analyze(const std::string& in, bool emit_dual, const std::string& out_path,
                  std::ostream& out, const TolerancePolicy& tol) {
    const Frame f = io::frame_from_json(io::read_file(in));
    const FrameBounds b = frame_bounds(f, tol);
    json r;
    r["dim"] = f.dim();
    r["N"] = f.size();
    r["bounds"] = bounds_json(b);
    r["is_frame"] = b.lower_opt > 0.0;
    r["excess"] = excess(f, tol);
    if (emit_dual && b.lower_opt > 0.0) r["canonical_dual"] = io::frame_to_json(canonical_dual(f, tol));
    emit(r, out_path, out);
    return Ok;
}

json closeness_json(const ClosenessReport& c) {
    json j;
    j["q"] = c.q;
    j["q0"] = c.q0;
    j["mu"] = c.mu;
    j["d_quad_flag"] = c.d_quad_flag;
    j["c_quad_flag"] = c.c_quad_flag;
    return j;
}

int perturb_audit(const std::string& a_path, const std::string& b_path,
                  const std::string& params_path, const std::string& kinds_list, int trials,
                  std::uint64_t seed, const std::string& out_path, std::ostream& out,
                  const TolerancePolicy& tol) {
    const Frame f = io::frame_from_json(io::read_file(a_path));
    const Frame g = io::frame_from_json(io::read_file(b_path));
    require_same_shape(f, g, "perturb audit");
    const std::set<AuditKind> kinds = parse_kinds(kinds_list);

    PerturbInputs in;
    in.p1 = identity_params(f);
    in.best_app_trials = trials;
    in.seed = seed;
    if (!params_path.empty()) {
        const json pj = io::read_file(params_path);
        in.p1 = io::params_from_json(pj, f);
        if (pj.contains("A2")) in.A2 = io::matrix_from_json(pj["A2"]);
        if (pj.contains("Lambda")) in.lambda = io::matrix_from_json(pj["Lambda"]);
    }
    if (!is_frame(f, tol)) throw InputError("perturb audit: the first family is not a frame");

    const std::vector<BoundAudit> audits = run_perturb_audits(f, g, in, kinds, tol);
    json r;
    r["closeness"] = closeness_json(closeness(f, g, std::nullopt, tol));
    r["bounds"]["F"] = bounds_json(frame_bounds(f, tol));
    r["bounds"]["G"] = bounds_json(frame_bounds(g, tol));
    json names = json::array();
    for (AuditKind k : kinds) names.push_back(kind_name(k));
    r["kinds"] = names;
    r["audits"] = audits_json(audits);
    r["tally"] = tally_json(tally(audits));
    r["notes"] = json::array(
        {"c-quad audits use q0, the closeness weighted by the canonical dual",
         "d-quad and per1200.1 audits require m_opt(F) <= q",
         "strict hypotheses (mu < sqrt(m), rho < m) carry a 1e-12 relative margin"});
    emit(r, out_path, out);
    return audit_exit(audits);
}

int generate_exam(int blocks, const std::string& dir) {
    const ExamPair p = exam_pair(blocks);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw InputError("cannot create " + dir);
    io::write_file(fs::path(dir) / "phi.json", io::frame_to_json(p.phi));
    io::write_file(fs::path(dir) / "psi.json", io::frame_to_json(p.psi));
    json meta;
    meta["blocks"] = p.blocks;
    meta["dim"] = p.phi.dim();
    meta["N"] = p.phi.size();
    meta["limits"]["q"] = p.q_limit;
    meta["limits"]["q0"] = p.q0_limit;
    meta["limits"]["mu"] = 1.0;
    meta["tails"]["q"] = p.q_tail;
    meta["tails"]["q0"] = p.q0_tail;
    io::write_file(fs::path(dir) / "meta.json", meta);
    return Ok;
}

int gabor_analyze(const std::string& in, const std::string& out_path, std::ostream& out,
                  const TolerancePolicy& tol) {
    const GaborSystem sys = io::gabor_from_json(io::read_file(in));
    const FrameBounds b = frame_bounds(build_gabor_frame(sys), tol);
    const WalnutReport w = walnut_report(sys);
    const BoundAudit env = envelope_audit(sys, tol);
    json r;
    r["L"] = sys.L;
    r["a"] = sys.a;
    r["b"] = sys.b;
    r["bounds"] = bounds_json(b);
    r["walnut"]["lower_est"] = w.lower_est;
    r["walnut"]["upper_est"] = w.upper_est;
    json corr = json::array();
    for (const auto& c : w.correlations) corr.push_back(io::vector_to_json(c));
    r["walnut"]["correlations"] = corr;
    r["envelope"] = io::audit_to_json(env);
    r["notes"] = json::array({"lower_est is the inf-form estimate and upper_est the sup form; "
                              "the sandwich lower_est <= m_opt <= M_opt <= upper_est fixes "
                              "which is which"});
    emit(r, out_path, out);
    return env.holds ? Ok : Violated;
}

int gabor_dual_window(const std::string& in, const std::string& spec, const std::string& h_path,
                      const std::string& out_path, std::ostream& out, const TolerancePolicy& tol) {
    const GaborSystem sys = io::gabor_from_json(io::read_file(in));
    const CMatrix A = operator_from_spec(sys, spec, tol);
    const CVector h = h_path.empty() ? CVector::Zero(sys.L) : window_from_file(h_path);
    const GaborDualWindow d = gabor_approx_dual_window(sys, A, h, tol);
    json r;
    r["window"] = io::vector_to_json(d.window);
    r["operator"] = spec;
    r["rate"] = d.report.rate;
    r["is_alternate_dual"] = d.report.is_alternate_dual;
    r["structure_residual"] = d.structure_residual;
    r["two_route_residual"] = d.two_route_residual;
    emit(r, out_path, out);
    return Ok;
}

int gabor_perturb(const std::string& in, const std::string& g2_path, const std::string& a1,
                  const std::string& a2, const std::string& h_path, const std::string& out_path,
                  std::ostream& out, const TolerancePolicy& tol) {
    const GaborSystem sys = io::gabor_from_json(io::read_file(in));
    const CVector g2 = window_from_file(g2_path);
    if (g2.size() != sys.L) throw InputError("perturbed window length must equal L");
    const CMatrix A1 = operator_from_spec(sys, a1, tol);
    const CMatrix A2 = operator_from_spec(sys, a2, tol);
    std::optional<CVector> h;
    if (!h_path.empty()) h = window_from_file(h_path);
    const std::vector<BoundAudit> audits = gabor_perturbation_audit(sys, g2, A1, A2, h, tol);
    json r;
    r["r"] = correlation_r(sys, g2);
    r["mu"] = frame_norm_distance(build_gabor_frame(sys), build_gabor_frame(sys.with_window(g2)));
    r["wiener_norm"] = wiener_norm(sys.window - g2, sys.L, sys.a);
    r["audits"] = audits_json(audits);
    r["tally"] = tally_json(tally(audits));
    r["notes"] = json::array(
        {"Wiener branch (gabor3, gabor4) uses rho = (2L/b) w^2 with w the block-max norm of g1 - g2",
         "info.wiener.domination.* compare r with the candidate proxies (2/b, 2L/b) x (w, w^2)",
         "envelope bounds are squared and carry the factor b/L"});
    emit(r, out_path, out);
    return audit_exit(audits);
}

int corpus(std::uint64_t seed, int trials, const std::string& dir, bool csv, std::ostream& out,
           const TolerancePolicy& tol) {
    const CorpusResult res = run_corpus(seed, trials, tol);
    json summary;
    summary["seed"] = seed;
    summary["trials"] = trials;
    summary["totals"] = tally_json(res.totals);
    summary["minimal_norm_equality_flagged"] = res.minimal_norm_flagged;
    json per = json::object();
    for (const auto& [name, t] : res.per_name) {
        per[name] = tally_json(t);
        per[name]["informational"] = name.rfind("info.", 0) == 0;
    }
    summary["audits"] = per;

    if (dir.empty()) {
        out << io::dump(summary);
    } else {
        std::error_code ec;
        fs::create_directories(dir, ec);
        if (ec) throw InputError("cannot create " + dir);
        io::write_file(fs::path(dir) / "summary.json", summary);
        json all = json::array();
        for (const auto& ta : res.audits) {
            json e;
            e["trial"] = ta.trial;
            e["audit"] = io::audit_to_json(ta.audit);
            all.push_back(std::move(e));
        }
        io::write_file(fs::path(dir) / "audits.json", all);
        if (csv) {
            std::ofstream c(fs::path(dir) / "audits.csv", std::ios::binary);
            if (!c) throw InputError("cannot write audits.csv");
            c << "name,trial,lhs,rhs,holds\n";
            for (const auto& ta : res.audits) {
                c << ta.audit.name << ',' << ta.trial << ',' << json(ta.audit.lhs).dump() << ','
                  << json(ta.audit.rhs).dump() << ',' << (ta.audit.holds ? "true" : "false")
                  << '\n';
            }
        }
    }
    return res.totals.violated > 0 ? Violated : Ok;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"framekit: frames, approximate duals, and perturbation audits"};
    app.require_subcommand(1);
    std::function<int(const TolerancePolicy&)> action;

    auto* frame = app.add_subcommand("frame", "frame utilities")->require_subcommand(1);
    auto* analyze = frame->add_subcommand("analyze", "bounds, excess, canonical dual");
    std::string in, out_path;
    bool emit_dual = false;
    analyze->add_option("input", in, "frame JSON")->required();
    analyze->add_flag("--emit-dual", emit_dual, "include the canonical dual");
    analyze->add_option("-o,--output", out_path);
    analyze->callback([&] {
        action = [&](const TolerancePolicy& tol) {
            return frame_analyze(in, emit_dual, out_path, out, tol);
        };
    });

    auto* perturb = app.add_subcommand("perturb", "perturbation audits")->require_subcommand(1);
    auto* audit = perturb->add_subcommand("audit", "audit a frame against a perturbation");
    std::string b_path, params_path, kinds = "all";
    int trials = 100;
    std::uint64_t seed = 42;
    audit->add_option("F", in, "frame JSON")->required();
    audit->add_option("G", b_path, "perturbed frame JSON")->required();
    audit->add_option("--params", params_path, "{\"A\", \"Theta\"} JSON, optional A2 and Lambda");
    audit->add_option("--kinds", kinds, "comma-separated audit kinds, all, or mu-only");
    audit->add_option("--trials", trials, "random Lambda samples for best-app")->check(CLI::PositiveNumber);
    audit->add_option("--seed", seed);
    audit->add_option("-o,--output", out_path);
    audit->callback([&] {
        action = [&](const TolerancePolicy& tol) {
            return perturb_audit(in, b_path, params_path, kinds, trials, seed, out_path, out, tol);
        };
    });

    auto* generate = app.add_subcommand("generate", "instance generators")->require_subcommand(1);
    auto* exam = generate->add_subcommand("exam", "block frame pair with mu = sqrt(m)");
    int blocks = 0;
    exam->add_option("--blocks", blocks, "block count K in 1..10")->required();
    exam->add_option("-o,--output", out_path, "output directory")->required();
    exam->callback([&] {
        action = [&](const TolerancePolicy&) { return generate_exam(blocks, out_path); };
    });

    auto* gabor = app.add_subcommand("gabor", "discrete Gabor systems")->require_subcommand(1);
    auto* g_an = gabor->add_subcommand("analyze", "bounds, Walnut estimates, envelope");
    g_an->add_option("system", in, "GaborSystem JSON")->required();
    g_an->add_option("-o,--output", out_path);
    g_an->callback([&] {
        action = [&](const TolerancePolicy& tol) { return gabor_analyze(in, out_path, out, tol); };
    });
    auto* g_dw = gabor->add_subcommand("dual-window", "approximately dual window");
    std::string spec = "1", h_path;
    g_dw->add_option("system", in, "GaborSystem JSON")->required();
    g_dw->add_option("--operator", spec, "\"optimal\", a scalar c, or polynomial c0,c1,... in S");
    g_dw->add_option("--window-h", h_path, "window h (array or object with \"window\")");
    g_dw->add_option("-o,--output", out_path);
    g_dw->callback([&] {
        action = [&](const TolerancePolicy& tol) {
            return gabor_dual_window(in, spec, h_path, out_path, out, tol);
        };
    });
    auto* g_pt = gabor->add_subcommand("perturb", "window perturbation audits");
    std::string g2_path, a1 = "1", a2 = "1";
    g_pt->add_option("system", in, "GaborSystem JSON")->required();
    g_pt->add_option("window2", g2_path, "perturbed window")->required();
    g_pt->add_option("--a1", a1, "operator spec for the original system");
    g_pt->add_option("--a2", a2, "operator spec for the perturbed system");
    g_pt->add_option("--window-h", h_path, "window h selecting the approximately dual window");
    g_pt->add_option("-o,--output", out_path);
    g_pt->callback([&] {
        action = [&](const TolerancePolicy& tol) {
            return gabor_perturb(in, g2_path, a1, a2, h_path, out_path, out, tol);
        };
    });

    auto* corp = app.add_subcommand("corpus", "seeded randomized audit corpus");
    bool csv = false;
    corp->add_option("--seed", seed);
    corp->add_option("--trials", trials)->check(CLI::PositiveNumber);
    corp->add_option("-o,--output", out_path, "output directory");
    corp->add_flag("--csv", csv, "also write audits.csv");
    corp->callback([&] {
        action = [&](const TolerancePolicy& tol) {
            return corpus(seed, trials, out_path, csv, out, tol);
        };
    });

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return Ok;
    } catch (const CLI::ParseError& e) {
        err << e.what() << "\n";
        return InputFailure;
    }
    if (!action) return InputFailure;
    try {
        return action(policy_from_env());
    } catch (const std::invalid_argument& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const ContractionError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const NotAFrameError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const StructureError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const InconsistentThetaError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const PreconditionError& e) {
        err << "input error: " << e.what() << "\n";
    } catch (const SymmetryError& e) {
        err << "input error: " << e.what() << "\n";
    }
    return InputFailure;
}

} // namespace framekit::cli
