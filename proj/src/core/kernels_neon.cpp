#include "gssr/core/kernels.hpp"

#if defined(__aarch64__)

#include <arm_neon.h>

#include <cmath>

namespace gssr::kernels::neon {

bool supported() { return true; }  // NEON is mandatory on aarch64.

namespace {

/// Vectorized expf mirroring the Cephes polynomial used by the AVX2 variant.
inline float32x4_t exp_f32x4(float32x4_t x) {
    const float32x4_t hi = vdupq_n_f32(88.3762626647949f);
    const float32x4_t lo = vdupq_n_f32(-87.3365478515625f);
    const float32x4_t log2e = vdupq_n_f32(1.44269504088896341f);
    const float32x4_t ln2_hi = vdupq_n_f32(0.693359375f);
    const float32x4_t ln2_lo = vdupq_n_f32(-2.12194440e-4f);
    const float32x4_t one = vdupq_n_f32(1.0f);

    x = vminq_f32(x, hi);
    x = vmaxq_f32(x, lo);

    float32x4_t fx = vfmaq_f32(vdupq_n_f32(0.5f), x, log2e);
    fx = vrndmq_f32(fx);  // floor
    x = vfmsq_f32(x, fx, ln2_hi);
    x = vfmsq_f32(x, fx, ln2_lo);

    float32x4_t y = vdupq_n_f32(1.9875691500e-4f);
    y = vfmaq_f32(vdupq_n_f32(1.3981999507e-3f), y, x);
    y = vfmaq_f32(vdupq_n_f32(8.3334519073e-3f), y, x);
    y = vfmaq_f32(vdupq_n_f32(4.1665795894e-2f), y, x);
    y = vfmaq_f32(vdupq_n_f32(1.6666665459e-1f), y, x);
    y = vfmaq_f32(vdupq_n_f32(5.0000001201e-1f), y, x);
    y = vfmaq_f32(x, y, vmulq_f32(x, x));
    y = vaddq_f32(y, one);

    int32x4_t n = vcvtq_s32_f32(fx);
    n = vaddq_s32(n, vdupq_n_s32(0x7f));
    n = vshlq_n_s32(n, 23);
    return vmulq_f32(y, vreinterpretq_f32_s32(n));
}

}  // namespace

void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out) {
    const float base = -0.5f * c * dy * dy;
    const float half_a = 0.5f * a;
    const float b_dy = b * dy;
    const float32x4_t vbase = vdupq_n_f32(base);
    const float32x4_t vhalf_a = vdupq_n_f32(half_a);
    const float32x4_t vb_dy = vdupq_n_f32(b_dy);
    const float32x4_t lane = {0.0f, 1.0f, 2.0f, 3.0f};

    int i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t dx = vaddq_f32(vdupq_n_f32(dx0 + float(i)), lane);
        float32x4_t power = vfmsq_f32(vbase, vmulq_f32(vhalf_a, dx), dx);
        power = vfmsq_f32(power, vb_dy, dx);
        const uint32x4_t keep = vcleq_f32(power, vdupq_n_f32(0.0f));
        const float32x4_t w = exp_f32x4(power);
        vst1q_f32(out + i, vreinterpretq_f32_u32(vandq_u32(vreinterpretq_u32_f32(w), keep)));
    }
    for (; i < n; ++i) {
        const float dx = dx0 + float(i);
        const float power = base - half_a * dx * dx - b_dy * dx;
        out[i] = power > 0.0f ? 0.0f : std::exp(power);
    }
}

void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps) {
    const float32x4_t vb1 = vdupq_n_f32(b1);
    const float32x4_t vb2 = vdupq_n_f32(b2);
    const float32x4_t vnb1 = vdupq_n_f32(1.0f - b1);
    const float32x4_t vnb2 = vdupq_n_f32(1.0f - b2);
    const float32x4_t vc1 = vdupq_n_f32(c1);
    const float32x4_t vc2 = vdupq_n_f32(c2);
    const float32x4_t veps = vdupq_n_f32(eps);

    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t gi = vld1q_f32(g + i);
        const float32x4_t mi = vfmaq_f32(vmulq_f32(vnb1, gi), vb1, vld1q_f32(m + i));
        const float32x4_t vi = vfmaq_f32(vmulq_f32(vnb2, vmulq_f32(gi, gi)), vb2, vld1q_f32(v + i));
        const float32x4_t denom = vfmaq_f32(veps, vc2, vsqrtq_f32(vi));
        const float32x4_t step = vdivq_f32(vmulq_f32(vc1, mi), denom);
        vst1q_f32(m + i, mi);
        vst1q_f32(v + i, vi);
        vst1q_f32(p + i, vsubq_f32(vld1q_f32(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0f - b1) * g[i];
        v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
        p[i] -= c1 * m[i] / (c2 * std::sqrt(v[i]) + eps);
    }
}

float sum(size_t n, const float* x) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vld1q_f32(x + i));
    float r = vaddvq_f32(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

float dot(size_t n, const float* x, const float* y) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = vfmaq_f32(acc, vld1q_f32(x + i), vld1q_f32(y + i));
    float r = vaddvq_f32(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

float sum_abs_diff(size_t n, const float* x, const float* y) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) acc = vaddq_f32(acc, vabdq_f32(vld1q_f32(x + i), vld1q_f32(y + i)));
    float r = vaddvq_f32(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - y[i]);
    return r;
}

float sum_sq_diff(size_t n, const float* x, const float* y) {
    float32x4_t acc = vdupq_n_f32(0.0f);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) {
        const float32x4_t d = vsubq_f32(vld1q_f32(x + i), vld1q_f32(y + i));
        acc = vfmaq_f32(acc, d, d);
    }
    float r = vaddvq_f32(acc);
    for (; i < n; ++i) {
        const float d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

void axpy(size_t n, float alpha, const float* x, float* y) {
    const float32x4_t va = vdupq_n_f32(alpha);
    size_t i = 0;
    for (; i + 4 <= n; i += 4) vst1q_f32(y + i, vfmaq_f32(vld1q_f32(y + i), va, vld1q_f32(x + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void conv_row(int n, const float* x, const float* k, int klen, float* out) {
    const int m = n - klen + 1;
    int i = 0;
    for (; i + 4 <= m; i += 4) {
        float32x4_t acc = vdupq_n_f32(0.0f);
        for (int j = 0; j < klen; ++j) acc = vfmaq_f32(acc, vdupq_n_f32(k[j]), vld1q_f32(x + i + j));
        vst1q_f32(out + i, acc);
    }
    for (; i < m; ++i) {
        float acc = 0.0f;
        for (int j = 0; j < klen; ++j) acc += k[j] * x[i + j];
        out[i] = acc;
    }
}

}  // namespace gssr::kernels::neon

#endif  // aarch64
