#include "gssr/core/kernels.hpp"

#if defined(__x86_64__) || defined(_M_X64)

#include <immintrin.h>

#include <cmath>

namespace gssr::kernels::avx2 {

bool supported() { return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma"); }

namespace {

/// Vectorized expf (Cephes polynomial, ~1 ulp on the range used here).
inline __m256 exp256(__m256 x) {
    const __m256 hi = _mm256_set1_ps(88.3762626647949f);
    const __m256 lo = _mm256_set1_ps(-87.3365478515625f);
    const __m256 log2e = _mm256_set1_ps(1.44269504088896341f);
    const __m256 ln2_hi = _mm256_set1_ps(0.693359375f);
    const __m256 ln2_lo = _mm256_set1_ps(-2.12194440e-4f);
    const __m256 one = _mm256_set1_ps(1.0f);

    x = _mm256_min_ps(x, hi);
    x = _mm256_max_ps(x, lo);

    __m256 fx = _mm256_fmadd_ps(x, log2e, _mm256_set1_ps(0.5f));
    fx = _mm256_floor_ps(fx);
    x = _mm256_fnmadd_ps(fx, ln2_hi, x);
    x = _mm256_fnmadd_ps(fx, ln2_lo, x);

    __m256 y = _mm256_set1_ps(1.9875691500e-4f);
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.3981999507e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(8.3334519073e-3f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(4.1665795894e-2f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(1.6666665459e-1f));
    y = _mm256_fmadd_ps(y, x, _mm256_set1_ps(5.0000001201e-1f));
    y = _mm256_fmadd_ps(y, _mm256_mul_ps(x, x), x);
    y = _mm256_add_ps(y, one);

    __m256i n = _mm256_cvttps_epi32(fx);
    n = _mm256_add_epi32(n, _mm256_set1_epi32(0x7f));
    n = _mm256_slli_epi32(n, 23);
    return _mm256_mul_ps(y, _mm256_castsi256_ps(n));
}

inline float hadd(__m256 v) {
    const __m128 lo = _mm256_castps256_ps128(v);
    const __m128 hi = _mm256_extractf128_ps(v, 1);
    __m128 s = _mm_add_ps(lo, hi);
    s = _mm_add_ps(s, _mm_movehl_ps(s, s));
    s = _mm_add_ss(s, _mm_shuffle_ps(s, s, 1));
    return _mm_cvtss_f32(s);
}

}  // namespace

void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out) {
    const float base = -0.5f * c * dy * dy;
    const float half_a = 0.5f * a;
    const float b_dy = b * dy;
    const __m256 vbase = _mm256_set1_ps(base);
    const __m256 vhalf_a = _mm256_set1_ps(half_a);
    const __m256 vb_dy = _mm256_set1_ps(b_dy);
    const __m256 vzero = _mm256_setzero_ps();
    const __m256 lane = _mm256_setr_ps(0, 1, 2, 3, 4, 5, 6, 7);

    int i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 dx = _mm256_add_ps(_mm256_set1_ps(dx0 + float(i)), lane);
        __m256 power = _mm256_fnmadd_ps(_mm256_mul_ps(vhalf_a, dx), dx, vbase);
        power = _mm256_fnmadd_ps(vb_dy, dx, power);
        const __m256 keep = _mm256_cmp_ps(power, vzero, _CMP_LE_OQ);
        _mm256_storeu_ps(out + i, _mm256_and_ps(exp256(power), keep));
    }
    for (; i < n; ++i) {
        const float dx = dx0 + float(i);
        const float power = base - half_a * dx * dx - b_dy * dx;
        out[i] = power > 0.0f ? 0.0f : std::exp(power);
    }
}

void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps) {
    const __m256 vb1 = _mm256_set1_ps(b1);
    const __m256 vb2 = _mm256_set1_ps(b2);
    const __m256 vnb1 = _mm256_set1_ps(1.0f - b1);
    const __m256 vnb2 = _mm256_set1_ps(1.0f - b2);
    const __m256 vc1 = _mm256_set1_ps(c1);
    const __m256 vc2 = _mm256_set1_ps(c2);
    const __m256 veps = _mm256_set1_ps(eps);

    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 gi = _mm256_loadu_ps(g + i);
        __m256 mi = _mm256_fmadd_ps(vb1, _mm256_loadu_ps(m + i), _mm256_mul_ps(vnb1, gi));
        __m256 vi = _mm256_fmadd_ps(vb2, _mm256_loadu_ps(v + i), _mm256_mul_ps(vnb2, _mm256_mul_ps(gi, gi)));
        const __m256 denom = _mm256_fmadd_ps(vc2, _mm256_sqrt_ps(vi), veps);
        const __m256 step = _mm256_div_ps(_mm256_mul_ps(vc1, mi), denom);
        _mm256_storeu_ps(m + i, mi);
        _mm256_storeu_ps(v + i, vi);
        _mm256_storeu_ps(p + i, _mm256_sub_ps(_mm256_loadu_ps(p + i), step));
    }
    for (; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0f - b1) * g[i];
        v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
        p[i] -= c1 * m[i] / (c2 * std::sqrt(v[i]) + eps);
    }
}

float sum(size_t n, const float* x) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_add_ps(acc, _mm256_loadu_ps(x + i));
    float r = hadd(acc);
    for (; i < n; ++i) r += x[i];
    return r;
}

float dot(size_t n, const float* x, const float* y) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) acc = _mm256_fmadd_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i), acc);
    float r = hadd(acc);
    for (; i < n; ++i) r += x[i] * y[i];
    return r;
}

float sum_abs_diff(size_t n, const float* x, const float* y) {
    const __m256 absmask = _mm256_castsi256_ps(_mm256_set1_epi32(0x7fffffff));
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
        acc = _mm256_add_ps(acc, _mm256_and_ps(d, absmask));
    }
    float r = hadd(acc);
    for (; i < n; ++i) r += std::fabs(x[i] - y[i]);
    return r;
}

float sum_sq_diff(size_t n, const float* x, const float* y) {
    __m256 acc = _mm256_setzero_ps();
    size_t i = 0;
    for (; i + 8 <= n; i += 8) {
        const __m256 d = _mm256_sub_ps(_mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i));
        acc = _mm256_fmadd_ps(d, d, acc);
    }
    float r = hadd(acc);
    for (; i < n; ++i) {
        const float d = x[i] - y[i];
        r += d * d;
    }
    return r;
}

void axpy(size_t n, float alpha, const float* x, float* y) {
    const __m256 va = _mm256_set1_ps(alpha);
    size_t i = 0;
    for (; i + 8 <= n; i += 8)
        _mm256_storeu_ps(y + i, _mm256_fmadd_ps(va, _mm256_loadu_ps(x + i), _mm256_loadu_ps(y + i)));
    for (; i < n; ++i) y[i] += alpha * x[i];
}

void conv_row(int n, const float* x, const float* k, int klen, float* out) {
    const int m = n - klen + 1;
    int i = 0;
    for (; i + 8 <= m; i += 8) {
        __m256 acc = _mm256_setzero_ps();
        for (int j = 0; j < klen; ++j) acc = _mm256_fmadd_ps(_mm256_set1_ps(k[j]), _mm256_loadu_ps(x + i + j), acc);
        _mm256_storeu_ps(out + i, acc);
    }
    for (; i < m; ++i) {
        float acc = 0.0f;
        for (int j = 0; j < klen; ++j) acc += k[j] * x[i + j];
        out[i] = acc;
    }
}

}  // namespace gssr::kernels::avx2

#endif  // x86-64
