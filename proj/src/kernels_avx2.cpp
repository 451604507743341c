#include "framekit/kernels.hpp"

#if defined(__x86_64__) && (defined(__GNUC__) || defined(__clang__))
#define FRAMEKIT_HAVE_AVX2_KERNELS 1
#include <immintrin.h>
#endif

#include <algorithm>
#include <cmath>

namespace framekit::kernels {

#ifdef FRAMEKIT_HAVE_AVX2_KERNELS

namespace {

#define FK_AVX2 __attribute__((target("avx2,fma")))

// Two complex<double> per __m256d, laid out (re0, im0, re1, im1).

FK_AVX2 inline double hsum(__m256d v) {
    const __m128d lo = _mm256_castpd256_pd128(v);
    const __m128d hi = _mm256_extractf128_pd(v, 1);
    const __m128d s = _mm_add_pd(lo, hi);
    return _mm_cvtsd_f64(_mm_add_sd(s, _mm_unpackhi_pd(s, s)));
}

FK_AVX2 double squared_distance(const cdouble* x, const cdouble* y, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d d0 = _mm256_sub_pd(_mm256_loadu_pd(xp + 2 * i), _mm256_loadu_pd(yp + 2 * i));
        const __m256d d1 =
            _mm256_sub_pd(_mm256_loadu_pd(xp + 2 * i + 4), _mm256_loadu_pd(yp + 2 * i + 4));
        acc0 = _mm256_fmadd_pd(d0, d0, acc0);
        acc1 = _mm256_fmadd_pd(d1, d1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) {
        const double dr = x[i].real() - y[i].real();
        const double di = x[i].imag() - y[i].imag();
        acc += dr * dr + di * di;
    }
    return acc;
}

FK_AVX2 double squared_norm(const cdouble* x, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d acc0 = _mm256_setzero_pd();
    __m256d acc1 = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const __m256d v0 = _mm256_loadu_pd(xp + 2 * i);
        const __m256d v1 = _mm256_loadu_pd(xp + 2 * i + 4);
        acc0 = _mm256_fmadd_pd(v0, v0, acc0);
        acc1 = _mm256_fmadd_pd(v1, v1, acc1);
    }
    double acc = hsum(_mm256_add_pd(acc0, acc1));
    for (; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

FK_AVX2 void conj_product_accumulate(const cdouble* x, const cdouble* y, std::size_t n,
                                     cdouble* acc) {
    const double* xp = reinterpret_cast<const double*>(x);
    const double* yp = reinterpret_cast<const double*>(y);
    double* ap = reinterpret_cast<double*>(acc);
    // Flips the sign of the imaginary lanes.
    const __m256d odd_sign = _mm256_set_pd(-0.0, 0.0, -0.0, 0.0);
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d xv = _mm256_loadu_pd(xp + 2 * i);
        const __m256d yv = _mm256_loadu_pd(yp + 2 * i);
        const __m256d y_re = _mm256_movedup_pd(yv);                                 // (yr, yr)
        const __m256d y_im = _mm256_xor_pd(_mm256_permute_pd(yv, 0xF), odd_sign);  // (yi, -yi)
        const __m256d x_sw = _mm256_permute_pd(xv, 0x5);                            // (xi, xr)
        // (xr*yr + xi*yi, xi*yr - xr*yi)
        const __m256d prod = _mm256_fmadd_pd(x_sw, y_im, _mm256_mul_pd(xv, y_re));
        _mm256_storeu_pd(ap + 2 * i, _mm256_add_pd(_mm256_loadu_pd(ap + 2 * i), prod));
    }
    for (; i < n; ++i) {
        const double re = x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        const double im = x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
        acc[i] += cdouble(re, im);
    }
}

FK_AVX2 double max_abs(const cdouble* x, std::size_t n) {
    const double* xp = reinterpret_cast<const double*>(x);
    __m256d best = _mm256_setzero_pd();
    std::size_t i = 0;
    for (; i + 2 <= n; i += 2) {
        const __m256d v = _mm256_loadu_pd(xp + 2 * i);
        const __m256d sq = _mm256_mul_pd(v, v);
        // re^2 + im^2 in both lanes of each complex
        const __m256d mag2 = _mm256_add_pd(sq, _mm256_permute_pd(sq, 0x5));
        best = _mm256_max_pd(best, mag2);
    }
    alignas(32) double lanes[4];
    _mm256_store_pd(lanes, best);
    double b2 = std::max(std::max(lanes[0], lanes[1]), std::max(lanes[2], lanes[3]));
    for (; i < n; ++i)
        b2 = std::max(b2, x[i].real() * x[i].real() + x[i].imag() * x[i].imag());
    return std::sqrt(b2);
}

#undef FK_AVX2

bool cpu_has_avx2() {
    __builtin_cpu_init();
    return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
}

} // namespace

const KernelSet* avx2_kernels() {
    static const KernelSet set{"avx2", &squared_distance, &squared_norm, &conj_product_accumulate,
                               &max_abs};
    static const bool supported = cpu_has_avx2();
    return supported ? &set : nullptr;
}

#else

const KernelSet* avx2_kernels() { return nullptr; }

#endif

} // namespace framekit::kernels
