#pragma once

#include "gssr/core/rng.hpp"
#include "gssr/io/point_ply.hpp"
#include "gssr/synth/dataset.hpp"
#include "gssr/synth/scene.hpp"

namespace gssr {

/// Closest intersection along origin + t·direction (t > 1e-9). `direction`
/// need not be unit length; t is in its units. The stored normal is the
/// geometric one (outward / +local z), not yet flipped toward the ray.
struct RayHit {
    double t = 0;
    Vec3d point = Vec3d::Zero();
    Vec3d normal = Vec3d::Zero();
    Vec3d albedo = Vec3d::Zero();
    int primitive = -1;
};

/// True when the ray hits any primitive; fills the nearest hit.
bool intersect_scene(const GroundTruthScene& scene, const Vec3d& origin, const Vec3d& direction, RayHit* hit);

/// One primary ray per pixel through the pinhole camera, analytic
/// intersections, two-sided Lambertian shading (ambient + one directional
/// light). Depth is camera-frame z with 0 where nothing is hit; the normal
/// map is camera-frame and camera-facing.
ViewRecord render_reference(const GroundTruthScene& scene, const CameraView& camera);

/// `n` area-weighted uniform surface samples with geometric normals,
/// deterministic per seed. Throws InvalidScene when the scene has no
/// primitives.
PointCloud sample_gt_points(const GroundTruthScene& scene, size_t n, std::uint64_t seed);

}  // namespace gssr
