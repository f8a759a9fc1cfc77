#include "gssr/raster/depth_normal.hpp"

#include "gssr/core/types.hpp"

#include <cmath>

namespace gssr {

namespace {

inline Vec3d pixel_ray(const CameraIntrinsics& intr, int x, int y) {
    return Vec3d((x - intr.cx) / intr.fx, (y - intr.cy) / intr.fy, 1.0);
}

/// Recomputes the unnormalized cross product and camera-facing sign at a
/// pixel; returns false where the normal is invalid.
template <class T>
bool normal_geometry(const Image<T>& depth, const CameraIntrinsics& intr, int x, int y, Vec3d* cross, double* sign) {
    if (x <= 0 || y <= 0 || x >= depth.width - 1 || y >= depth.height - 1) return false;
    const double dc = double(depth(x, y));
    const double dr = double(depth(x + 1, y));
    const double dl = double(depth(x - 1, y));
    const double dd = double(depth(x, y + 1));
    const double du = double(depth(x, y - 1));
    if (dc == 0.0 || dr == 0.0 || dl == 0.0 || dd == 0.0 || du == 0.0) return false;
    const Vec3d A = dr * pixel_ray(intr, x + 1, y) - dl * pixel_ray(intr, x - 1, y);
    const Vec3d B = dd * pixel_ray(intr, x, y + 1) - du * pixel_ray(intr, x, y - 1);
    *cross = A.cross(B);
    if (cross->norm() < 1e-12) return false;
    *sign = (cross->dot(pixel_ray(intr, x, y)) > 0.0) ? -1.0 : 1.0;
    return true;
}

}  // namespace

template <class T>
Image<T> depth_to_normal(const Image<T>& depth, const CameraIntrinsics& intr) {
    Image<T> out(depth.width, depth.height, 3);
    out.fill(T(0));
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            Vec3d c;
            double sign;
            if (!normal_geometry(depth, intr, x, y, &c, &sign)) continue;
            const Vec3d n = sign * c.normalized();
            T* px = out.at(x, y);
            for (int k = 0; k < 3; ++k) px[k] = T(n[k]);
        }
    }
    return out;
}

template <class T>
void depth_to_normal_backward(const Image<T>& depth, const CameraIntrinsics& intr, const Image<T>& normals,
                              const Image<T>& grad_normals, Image<T>& grad_depth) {
    for (int y = 0; y < depth.height; ++y) {
        for (int x = 0; x < depth.width; ++x) {
            const T* np = normals.at(x, y);
            if (np[0] == T(0) && np[1] == T(0) && np[2] == T(0)) continue;
            const T* gp = grad_normals.at(x, y);
            if (gp[0] == T(0) && gp[1] == T(0) && gp[2] == T(0)) continue;
            Vec3d c;
            double sign;
            if (!normal_geometry(depth, intr, x, y, &c, &sign)) continue;
            const Vec3d n{double(np[0]), double(np[1]), double(np[2])};
            const Vec3d gn{double(gp[0]), double(gp[1]), double(gp[2])};
            const Vec3d gc = sign * (gn - n * n.dot(gn)) / c.norm();
            // c = A × B with A, B the central differences of backprojections.
            const double dl = double(depth(x - 1, y));
            const double du = double(depth(x, y - 1));
            const double dr = double(depth(x + 1, y));
            const double dd = double(depth(x, y + 1));
            const Vec3d A = dr * pixel_ray(intr, x + 1, y) - dl * pixel_ray(intr, x - 1, y);
            const Vec3d B = dd * pixel_ray(intr, x, y + 1) - du * pixel_ray(intr, x, y - 1);
            const Vec3d gA = B.cross(gc);
            const Vec3d gB = gc.cross(A);
            grad_depth(x + 1, y) += T(gA.dot(pixel_ray(intr, x + 1, y)));
            grad_depth(x - 1, y) -= T(gA.dot(pixel_ray(intr, x - 1, y)));
            grad_depth(x, y + 1) += T(gB.dot(pixel_ray(intr, x, y + 1)));
            grad_depth(x, y - 1) -= T(gB.dot(pixel_ray(intr, x, y - 1)));
        }
    }
}

template <class T>
Image<T> bilateral_filter(const Image<T>& map, const Image<T>& guide_depth, double spatial_sigma, double range_sigma,
                          bool renormalize_vectors) {
    if (map.width != guide_depth.width || map.height != guide_depth.height)
        throw DimensionMismatch("bilateral_filter: map/guide shapes differ");
    if (spatial_sigma <= 0 || range_sigma <= 0) throw GssrError("bilateral_filter: sigmas must be positive");
    const int radius = int(std::ceil(2.0 * spatial_sigma));
    const double inv2ss = 1.0 / (2.0 * spatial_sigma * spatial_sigma);
    const double inv2rs = 1.0 / (2.0 * range_sigma * range_sigma);
    const int C = map.channels;

    Image<T> out(map.width, map.height, C);
    std::vector<double> acc(size_t(C), 0.0);
    for (int y = 0; y < map.height; ++y) {
        for (int x = 0; x < map.width; ++x) {
            const double center_depth = double(guide_depth(x, y));
            T* op = out.at(x, y);
            if (center_depth == 0.0) {
                const T* ip = map.at(x, y);
                for (int k = 0; k < C; ++k) op[k] = ip[k];
                continue;
            }
            std::fill(acc.begin(), acc.end(), 0.0);
            double wsum = 0.0;
            for (int dy = -radius; dy <= radius; ++dy) {
                const int yy = y + dy;
                if (yy < 0 || yy >= map.height) continue;
                for (int dx = -radius; dx <= radius; ++dx) {
                    const int xx = x + dx;
                    if (xx < 0 || xx >= map.width) continue;
                    const double dq = double(guide_depth(xx, yy));
                    if (dq == 0.0) continue;
                    const double delta = dq - center_depth;
                    const double w = std::exp(-(dx * dx + dy * dy) * inv2ss - delta * delta * inv2rs);
                    const T* ip = map.at(xx, yy);
                    for (int k = 0; k < C; ++k) acc[size_t(k)] += w * double(ip[k]);
                    wsum += w;
                }
            }
            for (int k = 0; k < C; ++k) op[k] = T(acc[size_t(k)] / wsum);
            if (renormalize_vectors && C == 3) {
                const double norm =
                    std::sqrt(double(op[0]) * op[0] + double(op[1]) * op[1] + double(op[2]) * op[2]);
                if (norm > 1e-12)
                    for (int k = 0; k < 3; ++k) op[k] = T(double(op[k]) / norm);
            }
        }
    }
    return out;
}

template Image<float> depth_to_normal<float>(const Image<float>&, const CameraIntrinsics&);
template Image<double> depth_to_normal<double>(const Image<double>&, const CameraIntrinsics&);
template void depth_to_normal_backward<float>(const Image<float>&, const CameraIntrinsics&, const Image<float>&,
                                              const Image<float>&, Image<float>&);
template void depth_to_normal_backward<double>(const Image<double>&, const CameraIntrinsics&, const Image<double>&,
                                               const Image<double>&, Image<double>&);
template Image<float> bilateral_filter<float>(const Image<float>&, const Image<float>&, double, double, bool);
template Image<double> bilateral_filter<double>(const Image<double>&, const Image<double>&, double, double, bool);

}  // namespace gssr
