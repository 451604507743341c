#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "framekit/cli.hpp"
#include "framekit/json_io.hpp"
#include "framekit/generate.hpp"

using namespace framekit;
using io::json;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path scratch() {
    static const fs::path dir = [] {
        fs::path p = fs::temp_directory_path() / ("framekit_cli_test_" + std::to_string(::getpid()));
        fs::create_directories(p);
        return p;
    }();
    return dir;
}

std::string write(const std::string& name, const json& j) {
    const fs::path p = scratch() / name;
    io::write_file(p, j);
    return p.string();
}

std::string write_raw(const std::string& name, const std::string& text) {
    const fs::path p = scratch() / name;
    std::ofstream(p) << text;
    return p.string();
}

json onb_json() {
    return json::parse(R"({"dim":2,"vectors":[[[1,0],[0,0]],[[0,0],[1,0]]]})");
}

json mercedes_json() {
    const double s = std::sqrt(3.0) / 2.0;
    json j;
    j["dim"] = 2;
    j["vectors"] = json::array({json::array({json::array({0.0, 0.0}), json::array({1.0, 0.0})}),
                                json::array({json::array({-s, 0.0}), json::array({-0.5, 0.0})}),
                                json::array({json::array({s, 0.0}), json::array({-0.5, 0.0})})});
    return j;
}

json tight_gabor() {
    const double r = 1.0 / std::sqrt(2.0);
    json j;
    j["L"] = 4;
    j["a"] = 2;
    j["b"] = 1;
    j["window"] = json::array({json::array({r, 0.0}), json::array({r, 0.0}),
                               json::array({0.0, 0.0}), json::array({0.0, 0.0})});
    return j;
}

} // namespace

TEST_CASE("frame analyze") {
    const Result onb = run({"frame", "analyze", write("onb.json", onb_json())});
    REQUIRE(onb.code == cli::Ok);
    const json r = json::parse(onb.out);
    CHECK(r["bounds"]["lower"].get<double>() == doctest::Approx(1.0));
    CHECK(r["bounds"]["tight"].get<bool>());
    CHECK(r["excess"].get<int>() == 0);
    CHECK(r["is_frame"].get<bool>());

    const Result m = run({"frame", "analyze", write("merc.json", mercedes_json()), "--emit-dual"});
    REQUIRE(m.code == cli::Ok);
    const json rm = json::parse(m.out);
    CHECK(rm["bounds"]["upper"].get<double>() == doctest::Approx(1.5));
    CHECK(rm["excess"].get<int>() == 1);
    CHECK(rm.contains("canonical_dual"));
}

TEST_CASE("input errors map to exit code 2") {
    CHECK(run({"frame", "analyze", write_raw("trunc.json", R"({"dim":2,"vectors":[[[1,0)")}).code ==
          cli::InputFailure);
    CHECK(run({"frame", "analyze", (scratch() / "missing.json").string()}).code == cli::InputFailure);
    CHECK(run({"frame", "analyze", write_raw("dim.json", R"({"dim":3,"vectors":[[[1,0],[0,0]]]})")})
              .code == cli::InputFailure);
    CHECK(run({"frame", "bogus"}).code == cli::InputFailure);
    CHECK(run({"generate", "exam", "--blocks", "0", "-o", (scratch() / "exam0").string()}).code ==
          cli::InputFailure);
    const std::string onb = write("onb.json", onb_json());
    CHECK(run({"perturb", "audit", onb, write("merc.json", mercedes_json())}).code ==
          cli::InputFailure);
    CHECK(run({"perturb", "audit", onb, onb, "--kinds", "nonsense"}).code == cli::InputFailure);
}

TEST_CASE("help exits cleanly") {
    const Result h = run({"--help"});
    CHECK(h.code == cli::Ok);
    CHECK(h.out.find("perturb") != std::string::npos);
}

TEST_CASE("perturb audit on identical frames") {
    const std::string f = write("merc.json", mercedes_json());
    const Result r = run({"perturb", "audit", f, f});
    REQUIRE(r.code == cli::Ok);
    const json j = json::parse(r.out);
    CHECK(j["closeness"]["mu"].get<double>() == 0.0);
    for (const auto& a : j["audits"]) {
        CHECK(a.contains("name"));
        CHECK(a.contains("slack"));
        if (a["preconditions_met"].get<bool>()) CHECK(a["holds"].get<bool>());
    }
}

TEST_CASE("perturb audit with nothing applicable") {
    // mu = sqrt(m) on the first exam truncation defeats every mu hypothesis
    const fs::path dir = scratch() / "exam1";
    REQUIRE(run({"generate", "exam", "--blocks", "1", "-o", dir.string()}).code == cli::Ok);
    const Result r = run({"perturb", "audit", (dir / "phi.json").string(), (dir / "psi.json").string(),
                          "--kinds", "mu-only"});
    CHECK(r.code == cli::NothingApplicable);
    const json meta = io::read_file(dir / "meta.json");
    CHECK(meta["limits"]["q"].get<double>() == doctest::Approx(13.0 / 12.0));
}

TEST_CASE("FRAMEKIT_TOL") {
    const std::string f = write("onb.json", onb_json());
    ::setenv("FRAMEKIT_TOL", "abc", 1);
    CHECK(run({"frame", "analyze", f}).code == cli::InputFailure);
    ::setenv("FRAMEKIT_TOL", "-1", 1);
    CHECK(run({"frame", "analyze", f}).code == cli::InputFailure);
    ::setenv("FRAMEKIT_TOL", "1e-8", 1);
    CHECK(run({"frame", "analyze", f}).code == cli::Ok);
    ::unsetenv("FRAMEKIT_TOL");
}

TEST_CASE("gabor subcommands") {
    const std::string sys = write("gabor.json", tight_gabor());
    const Result an = run({"gabor", "analyze", sys});
    REQUIRE(an.code == cli::Ok);
    const json ja = json::parse(an.out);
    CHECK(ja["bounds"]["lower"].get<double>() == doctest::Approx(2.0));
    CHECK(ja["walnut"]["upper_est"].get<double>() == doctest::Approx(2.0));

    const Result dw = run({"gabor", "dual-window", sys, "--operator", "0.9"});
    REQUIRE(dw.code == cli::Ok);
    const json jd = json::parse(dw.out);
    CHECK(jd["rate"].get<double>() == doctest::Approx(0.1));
    CHECK(jd["window"][0][0].get<double>() == doctest::Approx(0.45 / std::sqrt(2.0)));
    CHECK(run({"gabor", "dual-window", sys, "--operator", "optimal"}).code == cli::Ok);
    CHECK(run({"gabor", "dual-window", sys, "--operator", "2"}).code == cli::InputFailure);

    json w2 = tight_gabor()["window"];
    w2[0][0] = w2[0][0].get<double>() + 0.01;
    const Result pt = run({"gabor", "perturb", sys, write("w2.json", w2), "--a1", "0.9"});
    CHECK(pt.code == cli::Ok);
    const json jp = json::parse(pt.out);
    CHECK(jp["r"].get<double>() == doctest::Approx(4e-4));

    json bad = tight_gabor();
    bad["a"] = 3;
    CHECK(run({"gabor", "analyze", write("bad.json", bad)}).code == cli::InputFailure);
}

TEST_CASE("corpus is deterministic") {
    const Result a = run({"corpus", "--seed", "7", "--trials", "12"});
    const Result b = run({"corpus", "--seed", "7", "--trials", "12"});
    REQUIRE(a.code == cli::Ok);
    CHECK(a.out == b.out);
    const json j = json::parse(a.out);
    CHECK(j["totals"]["violated"].get<int>() == 0);
    const fs::path dir = scratch() / "corpus";
    REQUIRE(run({"corpus", "--seed", "7", "--trials", "12", "-o", dir.string(), "--csv"}).code == cli::Ok);
    CHECK(fs::exists(dir / "summary.json"));
    CHECK(fs::exists(dir / "audits.json"));
    CHECK(fs::exists(dir / "audits.csv"));
}

TEST_CASE("frame JSON round trip is exact") {
    Rng rng(31);
    const Frame f = random_frame(rng, 3, 7);
    const json j = io::frame_to_json(f);
    const Frame back = io::frame_from_json(json::parse(io::dump(j)));
    CHECK((back.columns() - f.columns()).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("binary exit codes") {
    const std::string bin = FRAMEKIT_BINARY;
    const std::string f = write("onb.json", onb_json());
    CHECK(std::system((bin + " frame analyze " + f + " > /dev/null").c_str()) == 0);
    const int rc = std::system((bin + " frame analyze /nonexistent/x.json 2> /dev/null").c_str());
    CHECK(WEXITSTATUS(rc) == 2);
}
