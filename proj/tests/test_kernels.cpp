#include <doctest.h>

#include <vector>

#include "framekit/kernels.hpp"
#include "framekit/random.hpp"

using namespace framekit;
using kernels::cdouble;

namespace {

std::vector<cdouble> draw(Rng& rng, std::size_t n) {
    std::vector<cdouble> v(n);
    for (auto& z : v) z = rng.complex_normal();
    return v;
}

void check_against(const kernels::KernelSet& k, const kernels::KernelSet& ref) {
    Rng rng(77);
    for (std::size_t n = 0; n < 70; ++n) {
        const auto x = draw(rng, n);
        const auto y = draw(rng, n);
        const double sd = ref.squared_distance(x.data(), y.data(), n);
        CHECK(k.squared_distance(x.data(), y.data(), n) == doctest::Approx(sd).epsilon(1e-13));
        const double sn = ref.squared_norm(x.data(), n);
        CHECK(k.squared_norm(x.data(), n) == doctest::Approx(sn).epsilon(1e-13));
        CHECK(k.max_abs(x.data(), n) == doctest::Approx(ref.max_abs(x.data(), n)).epsilon(1e-15));

        auto acc = draw(rng, n);
        auto acc_ref = acc;
        k.conj_product_accumulate(x.data(), y.data(), n, acc.data());
        ref.conj_product_accumulate(x.data(), y.data(), n, acc_ref.data());
        for (std::size_t i = 0; i < n; ++i) CHECK(std::abs(acc[i] - acc_ref[i]) < 1e-14);
    }
}

} // namespace

TEST_CASE("scalar kernels agree with the textbook formulas") {
    const auto& k = kernels::scalar_kernels();
    Rng rng(1);
    const auto x = draw(rng, 13);
    const auto y = draw(rng, 13);
    double sd = 0.0, sn = 0.0, mx = 0.0;
    std::vector<cdouble> acc(13, cdouble(0.0, 0.0));
    for (std::size_t i = 0; i < 13; ++i) {
        sd += std::norm(x[i] - y[i]);
        sn += std::norm(x[i]);
        mx = std::max(mx, std::abs(x[i]));
    }
    CHECK(k.squared_distance(x.data(), y.data(), 13) == doctest::Approx(sd).epsilon(1e-14));
    CHECK(k.squared_norm(x.data(), 13) == doctest::Approx(sn).epsilon(1e-14));
    CHECK(k.max_abs(x.data(), 13) == doctest::Approx(mx).epsilon(1e-15));
    k.conj_product_accumulate(x.data(), y.data(), 13, acc.data());
    for (std::size_t i = 0; i < 13; ++i) CHECK(std::abs(acc[i] - x[i] * std::conj(y[i])) < 1e-15);
    CHECK(k.max_abs(nullptr, 0) == 0.0);
}

TEST_CASE("AVX2 kernels match the scalar reference") {
    const kernels::KernelSet* avx = kernels::avx2_kernels();
    if (avx == nullptr) {
        MESSAGE("AVX2 not available on this CPU; equivalence test skipped");
        return;
    }
    check_against(*avx, kernels::scalar_kernels());
}

TEST_CASE("active kernel set is one of the known implementations") {
    const auto& k = kernels::active_kernels();
    const bool known = &k == &kernels::scalar_kernels() || &k == kernels::avx2_kernels();
    CHECK(known);
    check_against(k, kernels::scalar_kernels());
}
