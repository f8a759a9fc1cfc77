#pragma once

#include "gssr/core/types.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <vector>

namespace gssr {

/// Optimizable Gaussian scene parameters, structure-of-arrays. Parameters are
/// stored activation-free: scales as logs, opacities as logits; activations
/// are applied at use sites so the optimizer runs unconstrained.
///
/// Quaternions are (w, x, y, z) and are renormalized after every optimizer
/// step rather than kept unit during gradient math.
template <class T>
struct GaussianSet {
    int sh_degree = 2;  ///< basis count B = (sh_degree+1)^2

    std::vector<T> centers;         ///< N×3, world units
    std::vector<T> rotations;       ///< N×4 quaternions (w,x,y,z)
    std::vector<T> log_scales;      ///< N×3, scale = exp(entry)
    std::vector<T> opacity_logits;  ///< N, opacity = sigmoid(entry)
    std::vector<T> sh;              ///< N×B×3, basis-major per Gaussian: sh[(i·B + b)·3 + c]

    size_t size() const { return opacity_logits.size(); }
    int basis_count() const { return (sh_degree + 1) * (sh_degree + 1); }

    void resize(size_t n) {
        centers.resize(n * 3, T(0));
        rotations.resize(n * 4, T(0));
        log_scales.resize(n * 3, T(0));
        opacity_logits.resize(n, T(0));
        sh.resize(n * size_t(basis_count()) * 3, T(0));
    }

    Vec3<T> center(size_t i) const { return Vec3<T>(centers[i * 3], centers[i * 3 + 1], centers[i * 3 + 2]); }
    Vec4<T> rotation(size_t i) const {
        return Vec4<T>(rotations[i * 4], rotations[i * 4 + 1], rotations[i * 4 + 2], rotations[i * 4 + 3]);
    }
    Vec3<T> scale(size_t i) const {
        using std::exp;
        return Vec3<T>(exp(log_scales[i * 3]), exp(log_scales[i * 3 + 1]), exp(log_scales[i * 3 + 2]));
    }
    /// sigmoid(logit), pulled into the open interval (0,1): extreme logits
    /// would otherwise round to exactly 0 or 1 and the clamp changes the
    /// value by at most machine epsilon.
    T opacity(size_t i) const {
        const T eps = std::numeric_limits<T>::epsilon();
        const T v = T(1) / (T(1) + std::exp(-opacity_logits[i]));
        return clamp(v, eps, T(1) - eps);
    }

    void set_center(size_t i, const Vec3<T>& v) {
        for (int k = 0; k < 3; ++k) centers[i * 3 + k] = v[k];
    }
    void set_rotation(size_t i, const Vec4<T>& v) {
        for (int k = 0; k < 4; ++k) rotations[i * 4 + k] = v[k];
    }
    void set_log_scales(size_t i, const Vec3<T>& v) {
        for (int k = 0; k < 3; ++k) log_scales[i * 3 + k] = v[k];
    }

    /// Appends all Gaussians of `other` (same sh_degree required).
    void append(const GaussianSet& other);

    /// Returns the subset where keep[i] != 0, preserving order.
    GaussianSet filtered(const std::vector<uint8_t>& keep) const;

    template <class U>
    GaussianSet<U> cast() const {
        GaussianSet<U> out;
        out.sh_degree = sh_degree;
        auto conv = [](const std::vector<T>& src, std::vector<U>& dst) {
            dst.resize(src.size());
            for (size_t i = 0; i < src.size(); ++i) dst[i] = static_cast<U>(src[i]);
        };
        conv(centers, out.centers);
        conv(rotations, out.rotations);
        conv(log_scales, out.log_scales);
        conv(opacity_logits, out.opacity_logits);
        conv(sh, out.sh);
        return out;
    }
};

/// Rotation matrix of a unit quaternion (w, x, y, z).
template <class T>
Mat3<T> quat_rotmat(const Vec4<T>& q);

/// Backpropagates a rotation-matrix gradient to the (unit) quaternion:
/// returns dL/dq given G = dL/dR. Does not include the normalization
/// Jacobian; apply quat_normalize_grad for raw parameters.
template <class T>
Vec4<T> quat_rotmat_grad(const Vec4<T>& q, const Mat3<T>& G);

/// Chain rule through q̂ = q/|q|: maps dL/dq̂ to dL/dq.
template <class T>
Vec4<T> quat_normalize_grad(const Vec4<T>& q_raw, const Vec4<T>& grad_unit);

/// World-space covariance Σ = R·diag(s²)·Rᵀ.
template <class T>
Mat3<T> covariance_from(const Vec4<T>& q, const Vec3<T>& s);

/// Index of the strict minimum scale (ties broken toward the smaller index).
template <class T>
int min_scale_axis(const Vec3<T>& s);

/// Surface normal of a flattened Gaussian: the rotation column of the
/// minimum-scale axis, flipped so it faces the camera (dot with view_dir
/// negative).
template <class T>
Vec3<T> gaussian_normal(const Vec4<T>& q, const Vec3<T>& s, const Vec3<T>& view_dir);

/// One flattened Gaussian: min-scale axis along `normal`, min scale
/// radius·flatten_ratio, the other two scales = radius, opacity 0.5, SH DC
/// from `color`, higher orders zero. Non-unit normals are normalized.
template <class T>
GaussianSet<T> create_flattened(const Vec3<T>& position, Vec3<T> normal, T radius, const Vec3<T>& color,
                                int sh_degree, T flatten_ratio = T(0.1));

extern template struct GaussianSet<float>;
extern template struct GaussianSet<double>;

}  // namespace gssr
