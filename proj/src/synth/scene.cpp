#include "gssr/synth/scene.hpp"

#include <cmath>

namespace gssr {

double Primitive::area() const {
    switch (kind) {
        case Kind::kPlane:
            return 4.0 * size.x() * size.y();
        case Kind::kSphere:
            return 4.0 * M_PI * size.x() * size.x();
        case Kind::kBox:
            return 8.0 * (size.x() * size.y() + size.y() * size.z() + size.x() * size.z());
    }
    return 0.0;
}

std::vector<CameraView> rig_cameras(const OrbitRig& rig) {
    if (rig.count <= 0) throw InvalidScene("orbit rig needs at least one camera");
    if (rig.image_size < 8) throw InvalidScene("orbit rig image size too small");
    CameraIntrinsics intr;
    intr.width = rig.image_size;
    intr.height = rig.image_size;
    intr.fx = intr.fy = 0.5 * rig.image_size / std::tan(0.5 * rig.fov_deg * M_PI / 180.0);
    intr.cx = intr.cy = (rig.image_size - 1) / 2.0;
    intr.validate();

    std::vector<CameraView> views;
    views.reserve(size_t(rig.count));
    for (int i = 0; i < rig.count; ++i) {
        const double theta = 2.0 * M_PI * double(i) / double(rig.count);
        const Vec3d eye = rig.target + Vec3d(rig.radius * std::cos(theta), rig.radius * std::sin(theta),
                                             rig.elevation);
        CameraView view;
        view.intr = intr;
        view.pose = look_at(eye, rig.target, Vec3d(0, 0, 1));
        views.push_back(view);
    }
    return views;
}

namespace {

/// Rectangle in the local xy-plane whose +x edge direction is `edge_u` and
/// whose geometric normal is `normal` (both unit, orthogonal).
Primitive make_plane(const Vec3d& center, const Vec3d& edge_u, const Vec3d& normal, double half_u, double half_v,
                     const TextureSpec& texture) {
    Primitive p;
    p.kind = Primitive::Kind::kPlane;
    p.rotation.col(0) = edge_u;
    p.rotation.col(1) = normal.cross(edge_u);
    p.rotation.col(2) = normal;
    p.position = center;
    p.size = Vec3d(half_u, half_v, 0.0);
    p.texture = texture;
    return p;
}

TextureSpec checker(double scale, const Vec3d& a, const Vec3d& b) {
    TextureSpec t;
    t.kind = TextureSpec::Kind::kCheckerboard;
    t.scale = scale;
    t.color_a = a;
    t.color_b = b;
    return t;
}

TextureSpec noise(double scale, std::uint64_t seed, const Vec3d& a, const Vec3d& b) {
    TextureSpec t;
    t.kind = TextureSpec::Kind::kValueNoise;
    t.scale = scale;
    t.seed = seed;
    t.color_a = a;
    t.color_b = b;
    return t;
}

}  // namespace

GroundTruthScene make_benchmark_scene(const std::string& name, std::uint64_t seed) {
    GroundTruthScene scene;
    scene.name = name;
    scene.seed = seed;

    if (name == "two-planes") {
        // Concave corner: two perpendicular rectangles sharing the edge
        // x = y = 0, z in [-1, 1], opening toward +x+y.
        scene.primitives.push_back(make_plane(Vec3d(0.7, 0.0, 0.0), Vec3d(1, 0, 0), Vec3d(0, 1, 0), 0.7, 1.0,
                                              noise(3.0, seed * 2 + 1, Vec3d(0.9, 0.75, 0.55), Vec3d(0.2, 0.3, 0.45))));
        scene.primitives.push_back(make_plane(Vec3d(0.0, 0.7, 0.0), Vec3d(0, 1, 0), Vec3d(1, 0, 0), 0.7, 1.0,
                                              checker(4.0, Vec3d(0.85, 0.85, 0.8), Vec3d(0.25, 0.15, 0.15))));
        scene.rig.count = 16;
        scene.rig.radius = 4.0;
        scene.rig.elevation = 1.2;
        scene.rig.image_size = 128;
    } else if (name == "sphere-on-plane") {
        scene.primitives.push_back(make_plane(Vec3d(0, 0, 0), Vec3d(1, 0, 0), Vec3d(0, 0, 1), 1.4, 1.4,
                                              checker(3.0, Vec3d(0.9, 0.9, 0.85), Vec3d(0.2, 0.2, 0.25))));
        Primitive sphere;
        sphere.kind = Primitive::Kind::kSphere;
        sphere.position = Vec3d(0, 0, 0.5);
        sphere.size = Vec3d(0.5, 0, 0);
        sphere.texture = noise(2.0, seed * 2 + 5, Vec3d(0.85, 0.55, 0.35), Vec3d(0.3, 0.35, 0.6));
        scene.primitives.push_back(sphere);
        scene.rig.count = 16;
        scene.rig.radius = 4.0;
        scene.rig.elevation = 1.6;
        scene.rig.image_size = 128;
    } else if (name == "box-room") {
        Primitive box;
        box.kind = Primitive::Kind::kBox;
        box.position = Vec3d::Zero();
        box.size = Vec3d(2.0, 2.0, 1.4);
        box.texture = noise(2.5, seed * 2 + 9, Vec3d(0.85, 0.8, 0.7), Vec3d(0.25, 0.3, 0.4));
        scene.primitives.push_back(box);
        scene.rig.count = 16;
        scene.rig.radius = 0.9;
        scene.rig.elevation = 0.25;
        scene.rig.image_size = 128;
    } else {
        throw InvalidScene("unknown benchmark scene '" + name + "'");
    }
    return scene;
}

}  // namespace gssr
