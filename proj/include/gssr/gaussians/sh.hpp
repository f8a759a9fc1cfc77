#pragma once

#include "gssr/core/types.hpp"

namespace gssr {

/// Real spherical-harmonics color model in the standard 3DGS convention:
/// channel value = Σ_b basis_b(dir)·coeff_b + 0.5, clamped below at 0.
namespace sh {

inline constexpr double kC0 = 0.28209479177387814;
inline constexpr double kC1 = 0.4886025119029199;
inline constexpr double kC2[5] = {1.0925484305920792, -1.0925484305920792, 0.31539156525252005, -1.0925484305920792,
                                  0.5462742152960396};
inline constexpr double kC3[7] = {-0.5900435899266435, 2.890611442640554, -0.4570457994644658, 0.3731763325901154,
                                  -0.4570457994644658, 1.445305721320277, -0.5900435899266435};

inline int basis_count(int degree) { return (degree + 1) * (degree + 1); }

/// Evaluates the B = (degree+1)^2 basis functions at unit direction d.
template <class T>
void basis(int degree, const Vec3<T>& d, T* out) {
    const T x = d.x(), y = d.y(), z = d.z();
    out[0] = T(kC0);
    if (degree < 1) return;
    out[1] = T(-kC1) * y;
    out[2] = T(kC1) * z;
    out[3] = T(-kC1) * x;
    if (degree < 2) return;
    const T xx = x * x, yy = y * y, zz = z * z;
    out[4] = T(kC2[0]) * x * y;
    out[5] = T(kC2[1]) * y * z;
    out[6] = T(kC2[2]) * (T(2) * zz - xx - yy);
    out[7] = T(kC2[3]) * x * z;
    out[8] = T(kC2[4]) * (xx - yy);
    if (degree < 3) return;
    out[9] = T(kC3[0]) * y * (T(3) * xx - yy);
    out[10] = T(kC3[1]) * x * y * z;
    out[11] = T(kC3[2]) * y * (T(4) * zz - xx - yy);
    out[12] = T(kC3[3]) * z * (T(2) * zz - T(3) * xx - T(3) * yy);
    out[13] = T(kC3[4]) * x * (T(4) * zz - xx - yy);
    out[14] = T(kC3[5]) * z * (xx - yy);
    out[15] = T(kC3[6]) * x * (xx - T(3) * yy);
}

/// Basis values plus their direction derivatives d(basis_b)/d(dir).
template <class T>
void basis_grad(int degree, const Vec3<T>& d, T* out, Vec3<T>* dout) {
    basis(degree, d, out);
    const T x = d.x(), y = d.y(), z = d.z();
    dout[0] = Vec3<T>::Zero();
    if (degree < 1) return;
    dout[1] = Vec3<T>(T(0), T(-kC1), T(0));
    dout[2] = Vec3<T>(T(0), T(0), T(kC1));
    dout[3] = Vec3<T>(T(-kC1), T(0), T(0));
    if (degree < 2) return;
    dout[4] = T(kC2[0]) * Vec3<T>(y, x, T(0));
    dout[5] = T(kC2[1]) * Vec3<T>(T(0), z, y);
    dout[6] = T(kC2[2]) * Vec3<T>(T(-2) * x, T(-2) * y, T(4) * z);
    dout[7] = T(kC2[3]) * Vec3<T>(z, T(0), x);
    dout[8] = T(kC2[4]) * Vec3<T>(T(2) * x, T(-2) * y, T(0));
    if (degree < 3) return;
    const T xx = x * x, yy = y * y, zz = z * z;
    dout[9] = T(kC3[0]) * Vec3<T>(T(6) * x * y, T(3) * xx - T(3) * yy, T(0));
    dout[10] = T(kC3[1]) * Vec3<T>(y * z, x * z, x * y);
    dout[11] = T(kC3[2]) * Vec3<T>(T(-2) * x * y, T(4) * zz - xx - T(3) * yy, T(8) * y * z);
    dout[12] = T(kC3[3]) * Vec3<T>(T(-6) * x * z, T(-6) * y * z, T(6) * zz - T(3) * xx - T(3) * yy);
    dout[13] = T(kC3[4]) * Vec3<T>(T(4) * zz - T(3) * xx - yy, T(-2) * x * y, T(8) * x * z);
    dout[14] = T(kC3[5]) * Vec3<T>(T(2) * x * z, T(-2) * y * z, xx - yy);
    dout[15] = T(kC3[6]) * Vec3<T>(T(3) * xx - T(3) * yy, T(-6) * x * y, T(0));
}

/// RGB color from basis-major coefficients (B×3) at unit view direction.
/// `clamped`, when non-null, records which channels hit the lower clamp so
/// the backward pass can zero their gradients.
template <class T>
Vec3<T> eval_color(int degree, const T* coeffs, const Vec3<T>& dir, bool* clamped = nullptr) {
    T b[16];
    basis(degree, dir, b);
    const int B = basis_count(degree);
    Vec3<T> c(T(0.5), T(0.5), T(0.5));
    for (int k = 0; k < B; ++k)
        for (int ch = 0; ch < 3; ++ch) c[ch] += b[k] * coeffs[k * 3 + ch];
    for (int ch = 0; ch < 3; ++ch) {
        const bool clip = c[ch] < T(0);
        if (clamped) clamped[ch] = clip;
        if (clip) c[ch] = T(0);
    }
    return c;
}

/// Backward of eval_color. Accumulates into dL_dcoeffs (B×3, may be null)
/// and returns dL/d(dir) — without the normalization chain of dir itself.
template <class T>
Vec3<T> eval_color_backward(int degree, const T* coeffs, const Vec3<T>& dir, const bool* clamped,
                            const Vec3<T>& dL_dcolor, T* dL_dcoeffs) {
    T b[16];
    Vec3<T> db[16];
    basis_grad(degree, dir, b, db);
    const int B = basis_count(degree);
    Vec3<T> g = dL_dcolor;
    for (int ch = 0; ch < 3; ++ch)
        if (clamped && clamped[ch]) g[ch] = T(0);
    Vec3<T> dL_ddir = Vec3<T>::Zero();
    for (int k = 0; k < B; ++k) {
        T coeff_dot = T(0);
        for (int ch = 0; ch < 3; ++ch) {
            if (dL_dcoeffs) dL_dcoeffs[k * 3 + ch] += b[k] * g[ch];
            coeff_dot += coeffs[k * 3 + ch] * g[ch];
        }
        dL_ddir += db[k] * coeff_dot;
    }
    return dL_ddir;
}

}  // namespace sh
}  // namespace gssr
