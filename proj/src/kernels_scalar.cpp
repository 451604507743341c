#include <algorithm>
#include <cmath>

#include "framekit/kernels.hpp"

namespace framekit::kernels {

namespace {

double squared_distance(const cdouble* x, const cdouble* y, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dr = x[i].real() - y[i].real();
        const double di = x[i].imag() - y[i].imag();
        acc += dr * dr + di * di;
    }
    return acc;
}

double squared_norm(const cdouble* x, std::size_t n) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += x[i].real() * x[i].real() + x[i].imag() * x[i].imag();
    return acc;
}

void conj_product_accumulate(const cdouble* x, const cdouble* y, std::size_t n, cdouble* acc) {
    for (std::size_t i = 0; i < n; ++i) {
        const double re = x[i].real() * y[i].real() + x[i].imag() * y[i].imag();
        const double im = x[i].imag() * y[i].real() - x[i].real() * y[i].imag();
        acc[i] += cdouble(re, im);
    }
}

double max_abs(const cdouble* x, std::size_t n) {
    double best = 0.0;
    for (std::size_t i = 0; i < n; ++i) best = std::max(best, std::abs(x[i]));
    return best;
}

} // namespace

const KernelSet& scalar_kernels() {
    static const KernelSet set{"scalar", &squared_distance, &squared_norm, &conj_product_accumulate,
                               &max_abs};
    return set;
}

} // namespace framekit::kernels
