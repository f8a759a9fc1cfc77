#include "gssr/core/kernels.hpp"

#include <cstdlib>
#include <cstring>

namespace gssr::kernels {

GaussWeightsRowFn gauss_weights_row = scalar::gauss_weights_row;
AdamStepFn adam_step = scalar::adam_step;
SumFn sum = scalar::sum;
DotFn dot = scalar::dot;
SumAbsDiffFn sum_abs_diff = scalar::sum_abs_diff;
SumSqDiffFn sum_sq_diff = scalar::sum_sq_diff;
AxpyFn axpy = scalar::axpy;
ConvRowFn conv_row = scalar::conv_row;

namespace {
const char* g_active_isa = "scalar";
}

const char* active_isa() { return g_active_isa; }

void force_scalar() {
    gauss_weights_row = scalar::gauss_weights_row;
    adam_step = scalar::adam_step;
    sum = scalar::sum;
    dot = scalar::dot;
    sum_abs_diff = scalar::sum_abs_diff;
    sum_sq_diff = scalar::sum_sq_diff;
    axpy = scalar::axpy;
    conv_row = scalar::conv_row;
    g_active_isa = "scalar";
}

void select_best() {
    force_scalar();
    const char* env = std::getenv("GSSR_SIMD");
    if (env && std::strcmp(env, "scalar") == 0) return;
#if defined(__x86_64__) || defined(_M_X64)
    if (avx2::supported()) {
        gauss_weights_row = avx2::gauss_weights_row;
        adam_step = avx2::adam_step;
        sum = avx2::sum;
        dot = avx2::dot;
        sum_abs_diff = avx2::sum_abs_diff;
        sum_sq_diff = avx2::sum_sq_diff;
        axpy = avx2::axpy;
        conv_row = avx2::conv_row;
        g_active_isa = "avx2";
    }
#elif defined(__aarch64__)
    if (neon::supported()) {
        gauss_weights_row = neon::gauss_weights_row;
        adam_step = neon::adam_step;
        sum = neon::sum;
        dot = neon::dot;
        sum_abs_diff = neon::sum_abs_diff;
        sum_sq_diff = neon::sum_sq_diff;
        axpy = neon::axpy;
        conv_row = neon::conv_row;
        g_active_isa = "neon";
    }
#endif
}

namespace {
// Bind the best variant before main() runs.
struct DispatchInit {
    DispatchInit() { select_best(); }
} g_dispatch_init;
}  // namespace

}  // namespace gssr::kernels
