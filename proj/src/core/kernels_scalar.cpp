#include "gssr/core/kernels.hpp"

#include <cmath>

namespace gssr::kernels::scalar {

void gauss_weights_row(int n, float dx0, float dy, float a, float b, float c, float* out) {
    const float base = -0.5f * c * dy * dy;
    for (int i = 0; i < n; ++i) {
        const float dx = dx0 + float(i);
        const float power = base - 0.5f * a * dx * dx - b * dx * dy;
        out[i] = power > 0.0f ? 0.0f : std::exp(power);
    }
}

void adam_step(size_t n, float* p, float* m, float* v, const float* g, float b1, float b2, float c1, float c2,
               float eps) {
    for (size_t i = 0; i < n; ++i) {
        m[i] = b1 * m[i] + (1.0f - b1) * g[i];
        v[i] = b2 * v[i] + (1.0f - b2) * g[i] * g[i];
        p[i] -= c1 * m[i] / (c2 * std::sqrt(v[i]) + eps);
    }
}

float sum(size_t n, const float* x) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) acc += x[i];
    return acc;
}

float dot(size_t n, const float* x, const float* y) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) acc += x[i] * y[i];
    return acc;
}

float sum_abs_diff(size_t n, const float* x, const float* y) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) acc += std::fabs(x[i] - y[i]);
    return acc;
}

float sum_sq_diff(size_t n, const float* x, const float* y) {
    float acc = 0.0f;
    for (size_t i = 0; i < n; ++i) {
        const float d = x[i] - y[i];
        acc += d * d;
    }
    return acc;
}

void axpy(size_t n, float alpha, const float* x, float* y) {
    for (size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void conv_row(int n, const float* x, const float* k, int klen, float* out) {
    const int m = n - klen + 1;
    for (int i = 0; i < m; ++i) {
        float acc = 0.0f;
        for (int j = 0; j < klen; ++j) acc += k[j] * x[i + j];
        out[i] = acc;
    }
}

}  // namespace gssr::kernels::scalar
