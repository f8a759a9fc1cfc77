#pragma once

#include "gssr/core/types.hpp"
#include "gssr/geometry/camera.hpp"
#include "gssr/synth/texture.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gssr {

class InvalidScene : public GssrError {
  public:
    explicit InvalidScene(const std::string& msg) : GssrError("invalid scene: " + msg) {}
};

/// A textured analytic primitive. `rotation`/`position` place the local
/// frame in the world; `size` is interpreted per kind:
///  - plane: finite rectangle in the local xy-plane, half extents
///    (size.x, size.y), geometric normal +local z;
///  - sphere: radius size.x around `position`;
///  - box: half extents size, faces textured in their own 2D coordinates.
struct Primitive {
    enum class Kind { kPlane, kSphere, kBox };

    Kind kind = Kind::kPlane;
    Mat3d rotation = Mat3d::Identity();  ///< local-to-world
    Vec3d position = Vec3d::Zero();
    Vec3d size = Vec3d::Ones();
    TextureSpec texture;

    double area() const;
};

/// Evenly spaced cameras on a circle of `radius` about `target`, raised by
/// `elevation`, all looking at the target (z-up world).
struct OrbitRig {
    int count = 16;
    double radius = 4.0;
    double elevation = 1.2;
    Vec3d target = Vec3d::Zero();
    int image_size = 128;
    double fov_deg = 50.0;  ///< full horizontal field of view
};

/// Ambient plus one directional light, Lambertian shading.
struct LightSpec {
    double ambient = 0.35;
    double intensity = 0.65;
    Vec3d direction = Vec3d(-0.4, -0.6, -0.7).normalized();  ///< travel direction
};

struct GroundTruthScene {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<Primitive> primitives;
    OrbitRig rig;
    LightSpec light;
};

/// The cameras of an orbit rig, in orbit order.
std::vector<CameraView> rig_cameras(const OrbitRig& rig);

/// Named benchmark scenes: "two-planes" (perpendicular textured planes
/// meeting in a concave corner), "sphere-on-plane", "box-room"
/// (inward-facing cameras inside a textured box). Throws InvalidScene for
/// unknown names.
GroundTruthScene make_benchmark_scene(const std::string& name, std::uint64_t seed);

}  // namespace gssr
