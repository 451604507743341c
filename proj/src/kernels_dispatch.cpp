#include <cstdlib>
#include <string_view>

#include "framekit/kernels.hpp"

namespace framekit::kernels {

namespace {

const KernelSet& select() {
    const char* forced = std::getenv("FRAMEKIT_SIMD");
    if (forced != nullptr && std::string_view(forced) == "scalar") return scalar_kernels();
    if (const KernelSet* avx = avx2_kernels()) return *avx;
    return scalar_kernels();
}

} // namespace

const KernelSet& active_kernels() {
    static const KernelSet& chosen = select();
    return chosen;
}

} // namespace framekit::kernels
