#include "gssr/synth/raytrace.hpp"

#include "gssr/core/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gssr {

namespace {

constexpr double kRayEps = 1e-9;

struct LocalHit {
    double t;
    Vec3d normal_local;  // geometric normal in the primitive frame
    double u, v;         // texture coordinates
};

bool hit_plane(const Primitive& p, const Vec3d& o, const Vec3d& d, LocalHit* out) {
    if (std::abs(d.z()) < 1e-14) return false;
    const double t = -o.z() / d.z();
    if (t <= kRayEps) return false;
    const double x = o.x() + t * d.x();
    const double y = o.y() + t * d.y();
    if (std::abs(x) > p.size.x() || std::abs(y) > p.size.y()) return false;
    out->t = t;
    out->normal_local = Vec3d(0, 0, 1);
    out->u = x;
    out->v = y;
    return true;
}

bool hit_sphere(const Primitive& p, const Vec3d& o, const Vec3d& d, LocalHit* out) {
    const double r = p.size.x();
    const double a = d.squaredNorm();
    const double b = 2.0 * o.dot(d);
    const double c = o.squaredNorm() - r * r;
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0) return false;
    const double sq = std::sqrt(disc);
    double t = (-b - sq) / (2.0 * a);
    if (t <= kRayEps) t = (-b + sq) / (2.0 * a);
    if (t <= kRayEps) return false;
    const Vec3d n = (o + t * d) / r;
    out->t = t;
    out->normal_local = n;
    // Arc-length style parameterization so texture scale is per world unit.
    out->u = std::atan2(n.y(), n.x()) * r;
    out->v = std::acos(clamp(n.z(), -1.0, 1.0)) * r;
    return true;
}

bool hit_box(const Primitive& p, const Vec3d& o, const Vec3d& d, LocalHit* out) {
    double tmin = -std::numeric_limits<double>::infinity();
    double tmax = std::numeric_limits<double>::infinity();
    int axis_min = -1, axis_max = -1;
    for (int k = 0; k < 3; ++k) {
        if (std::abs(d[k]) < 1e-14) {
            if (std::abs(o[k]) > p.size[k]) return false;
            continue;
        }
        double t0 = (-p.size[k] - o[k]) / d[k];
        double t1 = (p.size[k] - o[k]) / d[k];
        if (t0 > t1) std::swap(t0, t1);
        if (t0 > tmin) {
            tmin = t0;
            axis_min = k;
        }
        if (t1 < tmax) {
            tmax = t1;
            axis_max = k;
        }
    }
    if (tmax < tmin) return false;
    double t;
    int axis;
    if (tmin > kRayEps) {
        t = tmin;
        axis = axis_min;
    } else if (tmax > kRayEps) {
        t = tmax;  // origin inside the box: the visible wall is the exit face
        axis = axis_max;
    } else {
        return false;
    }
    if (axis < 0) return false;
    const Vec3d hit = o + t * d;
    Vec3d n = Vec3d::Zero();
    n[axis] = hit[axis] > 0 ? 1.0 : -1.0;
    out->t = t;
    out->normal_local = n;
    out->u = hit[(axis + 1) % 3];
    out->v = hit[(axis + 2) % 3];
    return true;
}

}  // namespace

bool intersect_scene(const GroundTruthScene& scene, const Vec3d& origin, const Vec3d& direction, RayHit* hit) {
    double best = std::numeric_limits<double>::infinity();
    bool found = false;
    for (size_t i = 0; i < scene.primitives.size(); ++i) {
        const Primitive& p = scene.primitives[i];
        const Vec3d o = p.rotation.transpose() * (origin - p.position);
        const Vec3d d = p.rotation.transpose() * direction;
        LocalHit lh;
        bool ok = false;
        switch (p.kind) {
            case Primitive::Kind::kPlane:
                ok = hit_plane(p, o, d, &lh);
                break;
            case Primitive::Kind::kSphere:
                ok = hit_sphere(p, o, d, &lh);
                break;
            case Primitive::Kind::kBox:
                ok = hit_box(p, o, d, &lh);
                break;
        }
        if (!ok || lh.t >= best) continue;
        best = lh.t;
        found = true;
        hit->t = lh.t;
        hit->point = origin + lh.t * direction;
        hit->normal = p.rotation * lh.normal_local;
        hit->albedo = texture_sample(p.texture, lh.u, lh.v);
        hit->primitive = int(i);
    }
    return found;
}

ViewRecord render_reference(const GroundTruthScene& scene, const CameraView& camera) {
    camera.intr.validate();
    const int w = camera.intr.width, h = camera.intr.height;
    ViewRecord rec;
    rec.intr = camera.intr;
    rec.pose = camera.pose;
    rec.image = Image<float>(w, h, 3);
    rec.gt_depth = Image<float>(w, h, 1);
    rec.gt_normal = Image<float>(w, h, 3);

    const Mat3d kinv = camera.intr.inverse_matrix();
    const Mat3d cam_to_world = camera.pose.rotation.transpose();
    const Vec3d eye = camera.pose.center;
    const Vec3d light = scene.light.direction.normalized();

    parallel_chunks(size_t(h), 8, [&](size_t row0, size_t row1) {
        for (int y = int(row0); y < int(row1); ++y)
            for (int x = 0; x < w; ++x) {
                // Unnormalized camera ray with z = 1, so the hit t is camera z.
                const Vec3d dir_cam = kinv * Vec3d(double(x), double(y), 1.0);
                const Vec3d dir_world = cam_to_world * dir_cam;
                RayHit hit;
                if (!intersect_scene(scene, eye, dir_world, &hit)) continue;

                const double diffuse = std::abs(hit.normal.dot(light));
                const double shade = scene.light.ambient + scene.light.intensity * diffuse;
                for (int c = 0; c < 3; ++c)
                    rec.image(x, y, c) = float(clamp(hit.albedo[c] * shade, 0.0, 1.0));
                rec.gt_depth(x, y) = float(hit.t);
                const Vec3d facing = hit.normal.dot(dir_world) < 0 ? hit.normal : Vec3d(-hit.normal);
                const Vec3d n_cam = camera.pose.rotation * facing;
                for (int c = 0; c < 3; ++c) rec.gt_normal(x, y, c) = float(n_cam[c]);
            }
    });
    return rec;
}

PointCloud sample_gt_points(const GroundTruthScene& scene, size_t n, std::uint64_t seed) {
    if (scene.primitives.empty()) throw InvalidScene("sample_gt_points: scene has no primitives");
    if (n == 0) throw InvalidScene("sample_gt_points: n must be positive");

    std::vector<double> cum_area;
    double total = 0.0;
    for (const Primitive& p : scene.primitives) {
        total += p.area();
        cum_area.push_back(total);
    }
    if (!(total > 0.0)) throw InvalidScene("sample_gt_points: zero total surface area");

    PointCloud cloud;
    cloud.points.reserve(n);
    cloud.normals.reserve(n);
    Rng rng(seed);
    for (size_t k = 0; k < n; ++k) {
        const double r = rng.uniform(0.0, total);
        const size_t pi =
            std::min(size_t(std::upper_bound(cum_area.begin(), cum_area.end(), r) - cum_area.begin()),
                     scene.primitives.size() - 1);
        const Primitive& p = scene.primitives[pi];
        Vec3d local, normal_local;
        switch (p.kind) {
            case Primitive::Kind::kPlane: {
                local = Vec3d(rng.uniform(-p.size.x(), p.size.x()), rng.uniform(-p.size.y(), p.size.y()), 0.0);
                normal_local = Vec3d(0, 0, 1);
                break;
            }
            case Primitive::Kind::kSphere: {
                const double z = rng.uniform(-1.0, 1.0);
                const double phi = rng.uniform(0.0, 2.0 * M_PI);
                const double rr = std::sqrt(std::max(0.0, 1.0 - z * z));
                normal_local = Vec3d(rr * std::cos(phi), rr * std::sin(phi), z);
                local = p.size.x() * normal_local;
                break;
            }
            case Primitive::Kind::kBox: {
                // Pick the face proportionally to its area, then a uniform
                // point on it.
                const double ax = p.size.y() * p.size.z();  // +-x faces
                const double ay = p.size.x() * p.size.z();
                const double az = p.size.x() * p.size.y();
                const double face_total = 2.0 * (ax + ay + az);
                double f = rng.uniform(0.0, face_total);
                int axis;
                if (f < 2.0 * ax) {
                    axis = 0;
                } else if (f < 2.0 * (ax + ay)) {
                    axis = 1;
                    f -= 2.0 * ax;
                } else {
                    axis = 2;
                    f -= 2.0 * (ax + ay);
                }
                const double side = (f < (axis == 0 ? ax : axis == 1 ? ay : az)) ? 1.0 : -1.0;
                local[axis] = side * p.size[axis];
                const int a1 = (axis + 1) % 3, a2 = (axis + 2) % 3;
                local[a1] = rng.uniform(-p.size[a1], p.size[a1]);
                local[a2] = rng.uniform(-p.size[a2], p.size[a2]);
                normal_local = Vec3d::Zero();
                normal_local[axis] = side;
                break;
            }
        }
        cloud.points.push_back(p.rotation * local + p.position);
        cloud.normals.push_back(p.rotation * normal_local);
    }
    return cloud;
}

}  // namespace gssr
