#include "gssr/gaussians/gaussian_set.hpp"

#include "gssr/gaussians/sh.hpp"

#include <cmath>

namespace gssr {

template <class T>
void GaussianSet<T>::append(const GaussianSet<T>& other) {
    if (other.sh_degree != sh_degree) throw DimensionMismatch("append: sh_degree mismatch");
    centers.insert(centers.end(), other.centers.begin(), other.centers.end());
    rotations.insert(rotations.end(), other.rotations.begin(), other.rotations.end());
    log_scales.insert(log_scales.end(), other.log_scales.begin(), other.log_scales.end());
    opacity_logits.insert(opacity_logits.end(), other.opacity_logits.begin(), other.opacity_logits.end());
    sh.insert(sh.end(), other.sh.begin(), other.sh.end());
}

template <class T>
GaussianSet<T> GaussianSet<T>::filtered(const std::vector<uint8_t>& keep) const {
    if (keep.size() != size()) throw DimensionMismatch("filtered: mask size mismatch");
    GaussianSet<T> out;
    out.sh_degree = sh_degree;
    const size_t B3 = size_t(basis_count()) * 3;
    for (size_t i = 0; i < size(); ++i) {
        if (!keep[i]) continue;
        for (int k = 0; k < 3; ++k) out.centers.push_back(centers[i * 3 + k]);
        for (int k = 0; k < 4; ++k) out.rotations.push_back(rotations[i * 4 + k]);
        for (int k = 0; k < 3; ++k) out.log_scales.push_back(log_scales[i * 3 + k]);
        out.opacity_logits.push_back(opacity_logits[i]);
        for (size_t k = 0; k < B3; ++k) out.sh.push_back(sh[i * B3 + k]);
    }
    return out;
}

template <class T>
Mat3<T> quat_rotmat(const Vec4<T>& q) {
    const T w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3<T> R;
    R << T(1) - T(2) * (y * y + z * z), T(2) * (x * y - w * z), T(2) * (x * z + w * y),  //
        T(2) * (x * y + w * z), T(1) - T(2) * (x * x + z * z), T(2) * (y * z - w * x),  //
        T(2) * (x * z - w * y), T(2) * (y * z + w * x), T(1) - T(2) * (x * x + y * y);
    return R;
}

template <class T>
Vec4<T> quat_rotmat_grad(const Vec4<T>& q, const Mat3<T>& G) {
    const T w = q[0], x = q[1], y = q[2], z = q[3];
    Mat3<T> dw, dx, dy, dz;
    dw << T(0), -z, y, z, T(0), -x, -y, x, T(0);
    dx << T(0), y, z, y, T(-2) * x, -w, z, w, T(-2) * x;
    dy << T(-2) * y, x, w, x, T(0), z, -w, z, T(-2) * y;
    dz << T(-2) * z, -w, x, w, T(-2) * z, y, x, y, T(0);
    return T(2) * Vec4<T>(G.cwiseProduct(dw).sum(), G.cwiseProduct(dx).sum(), G.cwiseProduct(dy).sum(),
                          G.cwiseProduct(dz).sum());
}

template <class T>
Vec4<T> quat_normalize_grad(const Vec4<T>& q_raw, const Vec4<T>& grad_unit) {
    const T norm = q_raw.norm();
    const Vec4<T> qh = q_raw / norm;
    return (grad_unit - qh * qh.dot(grad_unit)) / norm;
}

template <class T>
Mat3<T> covariance_from(const Vec4<T>& q, const Vec3<T>& s) {
    const Mat3<T> R = quat_rotmat(q);
    return R * s.cwiseProduct(s).asDiagonal() * R.transpose();
}

template <class T>
int min_scale_axis(const Vec3<T>& s) {
    int axis = 0;
    for (int k = 1; k < 3; ++k)
        if (s[k] < s[axis]) axis = k;
    return axis;
}

template <class T>
Vec3<T> gaussian_normal(const Vec4<T>& q, const Vec3<T>& s, const Vec3<T>& view_dir) {
    const Mat3<T> R = quat_rotmat(q);
    Vec3<T> n = R.col(min_scale_axis(s));
    if (n.dot(view_dir) > T(0)) n = -n;
    return n;
}

template <class T>
GaussianSet<T> create_flattened(const Vec3<T>& position, Vec3<T> normal, T radius, const Vec3<T>& color,
                                int sh_degree, T flatten_ratio) {
    if (!(radius > T(0))) throw GssrError("create_flattened: radius must be positive");
    const T norm = normal.norm();
    if (norm < T(1e-12)) throw GssrError("create_flattened: zero normal");
    normal /= norm;

    GaussianSet<T> out;
    out.sh_degree = sh_degree;
    out.resize(1);
    out.set_center(0, position);

    // Rotation taking the z axis onto the normal; the z scale is the
    // flattened (minimum) one.
    Eigen::Quaternion<T> q = Eigen::Quaternion<T>::FromTwoVectors(Vec3<T>(T(0), T(0), T(1)), normal);
    out.set_rotation(0, Vec4<T>(q.w(), q.x(), q.y(), q.z()));
    using std::log;
    out.set_log_scales(0, Vec3<T>(log(radius), log(radius), log(radius * flatten_ratio)));
    out.opacity_logits[0] = T(0);  // sigmoid(0) = 0.5
    for (int ch = 0; ch < 3; ++ch) out.sh[ch] = (color[ch] - T(0.5)) / T(sh::kC0);
    return out;
}

template struct GaussianSet<float>;
template struct GaussianSet<double>;

#define GSSR_INSTANTIATE(T)                                                                 \
    template Mat3<T> quat_rotmat<T>(const Vec4<T>&);                                        \
    template Vec4<T> quat_rotmat_grad<T>(const Vec4<T>&, const Mat3<T>&);                   \
    template Vec4<T> quat_normalize_grad<T>(const Vec4<T>&, const Vec4<T>&);                \
    template Mat3<T> covariance_from<T>(const Vec4<T>&, const Vec3<T>&);                    \
    template int min_scale_axis<T>(const Vec3<T>&);                                         \
    template Vec3<T> gaussian_normal<T>(const Vec4<T>&, const Vec3<T>&, const Vec3<T>&);    \
    template GaussianSet<T> create_flattened<T>(const Vec3<T>&, Vec3<T>, T, const Vec3<T>&, int, T);

GSSR_INSTANTIATE(float)
GSSR_INSTANTIATE(double)
#undef GSSR_INSTANTIATE

}  // namespace gssr
