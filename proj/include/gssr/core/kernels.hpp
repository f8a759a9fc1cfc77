#pragma once

#include <cstddef>

/// Hot float32 inner loops used by the rasterizer, optimizer, and image
/// losses. Every kernel has a scalar reference implementation plus optional
/// SIMD variants (AVX2 on x86-64, NEON on aarch64). The function pointers
/// below are bound once at startup to the best variant the running CPU
/// supports; tests can pin them to the scalar reference with force_scalar().
namespace gssr::kernels {

/// out[i] = exp(power_i) for power_i = -0.5*(a*dx_i^2 + c*dy^2) - b*dx_i*dy
/// with dx_i = dx0 + i, or 0 when power_i > 0. This is the per-row Gaussian
/// falloff of a splat with conic (a, b, c) evaluated along a scanline.
using GaussWeightsRowFn = void (*)(int n, float dx0, float dy, float a, float b, float c, float* out);

/// One Adam update over n parameters:
///   m = b1*m + (1-b1)*g
///   v = b2*v + (1-b2)*g^2
///   p -= c1 * m / (c2*sqrt(v) + eps)
/// where c1 = lr/(1-b1^t) and c2 = 1/sqrt(1-b2^t) fold in bias correction.
using AdamStepFn = void (*)(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1,
                            float c2, float eps);

using SumFn = float (*)(size_t n, const float* x);
using DotFn = float (*)(size_t n, const float* x, const float* y);
using SumAbsDiffFn = float (*)(size_t n, const float* x, const float* y);
using SumSqDiffFn = float (*)(size_t n, const float* x, const float* y);

/// y[i] += alpha * x[i]
using AxpyFn = void (*)(size_t n, float alpha, const float* x, float* y);

/// Valid 1-D correlation: out[i] = sum_j k[j] * x[i+j] for i in
/// [0, n - klen]; out must hold n - klen + 1 values.
using ConvRowFn = void (*)(int n, const float* x, const float* k, int klen, float* out);

extern GaussWeightsRowFn gauss_weights_row;
extern AdamStepFn adam_step;
extern SumFn sum;
extern DotFn dot;
extern SumAbsDiffFn sum_abs_diff;
extern SumSqDiffFn sum_sq_diff;
extern AxpyFn axpy;
extern ConvRowFn conv_row;

/// Name of the variant currently bound ("scalar", "avx2", or "neon").
const char* active_isa();

/// Rebind every pointer to the scalar reference implementation.
void force_scalar();

/// Rebind every pointer to the best variant for this CPU (the default,
/// honoring GSSR_SIMD=scalar in the environment).
void select_best();

namespace scalar {
void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out);
void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps);
float sum(size_t n, const float* x);
float dot(size_t n, const float* x, const float* y);
float sum_abs_diff(size_t n, const float* x, const float* y);
float sum_sq_diff(size_t n, const float* x, const float* y);
void axpy(size_t n, float alpha, const float* x, float* y);
void conv_row(int n, const float* x, const float* k, int klen, float* out);
}  // namespace scalar

#if defined(__x86_64__) || defined(_M_X64)
namespace avx2 {
bool supported();
void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out);
void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps);
float sum(size_t n, const float* x);
float dot(size_t n, const float* x, const float* y);
float sum_abs_diff(size_t n, const float* x, const float* y);
float sum_sq_diff(size_t n, const float* x, const float* y);
void axpy(size_t n, float alpha, const float* x, float* y);
void conv_row(int n, const float* x, const float* k, int klen, float* out);
}  // namespace avx2
#endif

#if defined(__aarch64__)
namespace neon {
bool supported();
void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out);
void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps);
float sum(size_t n, const float* x);
float dot(size_t n, const float* x, const float* y);
float sum_abs_diff(size_t n, const float* x, const float* y);
float sum_sq_diff(size_t n, const float* x, const float* y);
void axpy(size_t n, float alpha, const float* x, float* y);
void conv_row(int n, const float* x, const float* k, int klen, float* out);
}  // namespace neon
#endif

}  // namespace gssr::kernels
