#include <doctest.h>

#include <cmath>
#include <complex>
#include <numbers>

#include "framekit/errors.hpp"
#include "framekit/gabor.hpp"
#include "framekit/generate.hpp"
#include "test_support.hpp"

using namespace framekit;

namespace {

GaborSystem tight_example() {
    GaborSystem s;
    s.L = 4;
    s.a = 2;
    s.b = 1;
    s.window = CVector::Zero(4);
    s.window(0) = s.window(1) = 1.0 / std::sqrt(2.0);
    return s;
}

cdouble naive_entry(const GaborSystem& s, Eigen::Index n, Eigen::Index m, Eigen::Index j) {
    const double ph = 2.0 * std::numbers::pi * double(m * s.b * j) / double(s.L);
    return std::polar(1.0, ph) * s.window(((j - n * s.a) % s.L + s.L) % s.L);
}

bool none_violated(const std::vector<BoundAudit>& audits) {
    for (const auto& a : audits)
        if (!is_informational(a) && verdict(a) == Verdict::Violated) {
            MESSAGE(a.name << " lhs=" << a.lhs << " rhs=" << a.rhs);
            return false;
        }
    return true;
}

GaborSystem random_frame_system(Rng& rng, Eigen::Index L) {
    for (;;) {
        GaborSystem s = random_gabor(rng, L);
        if (is_frame(build_gabor_frame(s))) return s;
    }
}

} // namespace

TEST_CASE("tight two-shift example") {
    const GaborSystem s = tight_example();
    const Frame f = build_gabor_frame(s);
    CHECK(f.size() == 8);
    const FrameBounds b = frame_bounds(f);
    CHECK(b.lower_opt == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(b.upper_opt == doctest::Approx(2.0).epsilon(1e-14));

    const WalnutReport w = walnut_report(s);
    CHECK(w.lower_est == doctest::Approx(2.0).epsilon(1e-14));
    CHECK(w.upper_est == doctest::Approx(2.0).epsilon(1e-14));

    const BoundAudit env = envelope_audit(s);
    CHECK(env.lhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(env.rhs == doctest::Approx(0.5).epsilon(1e-14));
    CHECK(verdict(env) == Verdict::Holds);

    const GaborDualWindow dw = gabor_approx_dual_window(s, identity(4), CVector::Zero(4));
    CHECK((dw.window - s.window / 2.0).norm() < 1e-14);
    CHECK(dw.report.is_alternate_dual);
}

TEST_CASE("family entries and ordering") {
    Rng rng(3);
    GaborSystem s;
    s.L = 12;
    s.a = 3;
    s.b = 4;
    s.window = rng.gaussian_vector(12);
    const Frame f = build_gabor_frame(s);
    CHECK(f.size() == s.time_shifts() * s.modulations());
    for (Eigen::Index n = 0; n < s.time_shifts(); ++n)
        for (Eigen::Index m = 0; m < s.modulations(); ++m)
            for (Eigen::Index j = 0; j < s.L; ++j)
                CHECK(std::abs(f.columns()(j, n * s.modulations() + m) - naive_entry(s, n, m, j)) <
                      1e-13);
}

TEST_CASE("lattice validation and degenerate systems") {
    GaborSystem s = tight_example();
    s.a = 3;
    CHECK_THROWS_AS(s.validate(), LatticeError);
    s.a = 0;
    CHECK_THROWS_AS(s.validate(), LatticeError);
    s = tight_example();
    s.window = CVector::Zero(3);
    CHECK_THROWS_AS(s.validate(), InputError);

    GaborSystem one;
    one.L = one.a = one.b = 4;
    one.window = CVector::Zero(4);
    one.window(0) = 1.0;
    CHECK_FALSE(is_frame(build_gabor_frame(one)));
    CHECK_THROWS_AS(gabor_approx_dual_window(one, identity(4), CVector::Zero(4)), PreconditionError);
}

TEST_CASE("lattice correlations against a naive loop") {
    Rng rng(5);
    for (auto [L, a, b] : {std::tuple<Eigen::Index, Eigen::Index, Eigen::Index>{12, 3, 2},
                           {16, 4, 4}, {8, 1, 8}, {10, 5, 2}}) {
        const CVector x = rng.gaussian_vector(L);
        const CVector y = rng.gaussian_vector(L);
        const auto corr = lattice_correlations(x, y, L, a, b);
        REQUIRE(corr.size() == std::size_t(b));
        for (Eigen::Index k = 0; k < b; ++k)
            for (Eigen::Index j = 0; j < L; ++j) {
                cdouble acc = 0.0;
                for (Eigen::Index n = 0; n < L / a; ++n) {
                    const auto i1 = ((j - n * a) % L + L) % L;
                    const auto i2 = ((j - n * a - k * L / b) % L + 2 * L) % L;
                    acc += x(i1) * std::conj(y(i2));
                }
                CHECK(std::abs(corr[k](j) - acc) < 1e-12);
            }
        const RVector e = periodized_energy(x, L, a);
        for (Eigen::Index j = 0; j < L; ++j)
            CHECK(e(j) == doctest::Approx(corr.size() ? lattice_correlations(x, x, L, a, b)[0](j).real() : 0.0));
    }
}

TEST_CASE("Walnut estimates sandwich the optimal bounds") {
    Rng rng(6);
    for (int t = 0; t < 40; ++t) {
        GaborSystem s = random_gabor(rng, t % 2 ? 12 : 16);
        if (t % 3 == 0) s.window = rng.gaussian_vector(s.L);
        const FrameBounds b = frame_bounds(build_gabor_frame(s));
        const WalnutReport w = walnut_report(s);
        CHECK(w.lower_est <= b.lower_opt * (1 + 1e-10) + 1e-12);
        CHECK(w.upper_est >= b.upper_opt * (1 - 1e-10));
        CHECK(verdict(envelope_audit(s)) == Verdict::Holds);
    }
}

TEST_CASE("Wiener norm") {
    const GaborSystem s = tight_example();
    CHECK(wiener_norm(s.window, 4, 2) == doctest::Approx(1.0 / std::sqrt(2.0)));
    Rng rng(7);
    const CVector g = rng.gaussian_vector(12);
    CHECK(wiener_norm(cdouble(0.0, -3.0) * g, 12, 4) == doctest::Approx(3.0 * wiener_norm(g, 12, 4)));
    CHECK(wiener_norm(g, 12, 1) == doctest::Approx(g.cwiseAbs().sum()));
    CHECK(wiener_norm(g, 12, 12) == doctest::Approx(g.cwiseAbs().maxCoeff()));
}

TEST_CASE("correlation r of the window difference") {
    const GaborSystem s = tight_example();
    CHECK(correlation_r(s, s.window) == 0.0);
    CVector g2 = s.window;
    g2(0) += 1.0;
    CHECK(correlation_r(s, g2) == doctest::Approx(4.0));

    Rng rng(8);
    for (int t = 0; t < 20; ++t) {
        const GaborSystem s1 = random_gabor(rng, 12);
        const CVector g2r = s1.window + 0.1 * rng.gaussian_vector(12);
        const double r = correlation_r(s1, g2r);
        const double mu = operator_norm(build_gabor_frame(s1).columns() -
                                        build_gabor_frame(s1.with_window(g2r)).columns());
        CHECK(mu <= std::sqrt(r) * (1 + 1e-10));
    }
}

TEST_CASE("operators commuting with the lattice") {
    Rng rng(9);
    const GaborSystem s = random_frame_system(rng, 12);
    OperatorSpec one;
    CHECK(oracle::max_abs_diff(commuting_operator(s, one), identity(12)) == 0.0);

    const FrameBounds b = frame_bounds(build_gabor_frame(s));
    const CMatrix A = commuting_operator(s, optimal_scaling_spec(s));
    CHECK(operator_norm(identity(12) - A) ==
          doctest::Approx((b.upper_opt - b.lower_opt) / (b.upper_opt + b.lower_opt)).epsilon(1e-9));
    CHECK(commutation_residual(s, A) < 1e-10);

    OperatorSpec two;
    two.scalar = 2.0;
    CHECK_THROWS_AS(commuting_operator(s, two), ContractionError);

    CMatrix diag = identity(12);
    diag(1, 1) = 0.9;
    CHECK(commutation_residual(s, diag) > 1e-3);
    CHECK_THROWS_AS(gabor_approx_dual_window(s, diag, CVector::Zero(12)), StructureError);
}

TEST_CASE("approximately dual windows") {
    Rng rng(10);
    for (int t = 0; t < 15; ++t) {
        const GaborSystem s = random_frame_system(rng, t % 2 ? 8 : 12);
        const Frame f = build_gabor_frame(s);
        const CMatrix sop = frame_operator(f);
        const CVector canon = sop.ldlt().solve(s.window);

        const GaborDualWindow d09 = gabor_approx_dual_window(s, 0.9 * identity(s.L), CVector::Zero(s.L));
        CHECK((d09.window - 0.9 * canon).norm() < 1e-10);
        CHECK(d09.report.rate == doctest::Approx(0.1).epsilon(1e-9));
        CHECK(d09.structure_residual < 1e-10);
        CHECK(d09.two_route_residual < 1e-10);

        // h = S g^d with g^d a dual window: the h terms collapse to S g^d - g
        const CVector h = sop * canon;
        const GaborDualWindow dh = gabor_approx_dual_window(s, identity(s.L), h);
        CHECK((dh.window - (canon - s.window + h)).norm() < 1e-10);
        CHECK(dh.two_route_residual < 1e-10);
        CHECK(dh.report.is_alternate_dual);

        const CVector hr = rng.gaussian_vector(s.L);
        const CMatrix A = commuting_operator(s, optimal_scaling_spec(s));
        const GaborDualWindow dr = gabor_approx_dual_window(s, A, hr);
        CHECK(dr.structure_residual < 1e-9);
        CHECK(dr.two_route_residual < 1e-9);
    }
}

TEST_CASE("window perturbation audits") {
    const GaborSystem s = tight_example();
    const CMatrix A = 0.9 * identity(4);
    const auto same = gabor_perturbation_audit(s, s.window, A, A);
    CHECK(none_violated(same));
    for (const auto& a : same)
        if (a.name == "gabor1.domination" || a.name == "gabor1.best-app") CHECK(a.lhs < 1e-12);

    CVector g2 = s.window;
    g2(0) += 0.01;
    CHECK(none_violated(gabor_perturbation_audit(s, g2, A, identity(4))));

    Rng rng(11);
    for (int t = 0; t < 15; ++t) {
        const GaborSystem s1 = random_frame_system(rng, 12);
        const CVector gp = s1.window + 0.05 * s1.window.norm() * rng.gaussian_vector(12) / std::sqrt(12.0);
        const auto audits = gabor_perturbation_audit(s1, gp, 0.95 * identity(12), identity(12),
                                                     rng.gaussian_vector(12) * 0.1);
        CHECK(none_violated(audits));
    }
}
