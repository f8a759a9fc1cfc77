#pragma once

#include "gssr/core/types.hpp"

namespace gssr {

class BehindCamera : public GssrError {
  public:
    explicit BehindCamera(const std::string& msg) : GssrError("behind camera: " + msg) {}
};
class NonPositiveDepth : public GssrError {
  public:
    explicit NonPositiveDepth(const std::string& msg) : GssrError("non-positive depth: " + msg) {}
};
class DegeneratePlane : public GssrError {
  public:
    explicit DegeneratePlane(const std::string& msg) : GssrError("degenerate plane: " + msg) {}
};
class ProjectionAtInfinity : public GssrError {
  public:
    explicit ProjectionAtInfinity(const std::string& msg) : GssrError("projection at infinity: " + msg) {}
};
class InvalidCamera : public GssrError {
  public:
    explicit InvalidCamera(const std::string& msg) : GssrError("invalid camera: " + msg) {}
};

/// Pinhole intrinsics. Pixel centers sit at integer coordinates; the
/// homogeneous pixel is p̃ = (u, v, 1).
struct CameraIntrinsics {
    double fx = 0, fy = 0;
    double cx = 0, cy = 0;
    int width = 0, height = 0;

    Mat3d matrix() const;
    Mat3d inverse_matrix() const;

    /// Throws InvalidCamera unless fx,fy > 0 and the principal point lies
    /// strictly inside the image.
    void validate() const;
};

/// Rigid camera pose stored as world-to-camera rotation plus the camera
/// center in world coordinates, so camera-frame coordinates are
/// X_c = R · (X_w − center).
struct CameraPose {
    Mat3d rotation = Mat3d::Identity();
    Vec3d center = Vec3d::Zero();

    Vec3d to_camera(const Vec3d& world) const { return rotation * (world - center); }
    Vec3d to_world(const Vec3d& cam) const { return rotation.transpose() * cam + center; }

    /// World-frame viewing direction (camera +z axis).
    Vec3d optical_axis() const { return rotation.row(2).transpose(); }

    /// Throws InvalidCamera unless rotation is orthonormal with det +1
    /// (tolerance 1e-9).
    void validate() const;
};

/// Rigid map from reference-camera frame to neighbor-camera frame:
/// X_n = rotation · X_r + translation.
struct RelativePose {
    Mat3d rotation = Mat3d::Identity();
    Vec3d translation = Vec3d::Zero();

    Vec3d apply(const Vec3d& ref_cam) const { return rotation * ref_cam + translation; }
};

/// 3×3 map on homogeneous pixel coordinates.
struct Homography {
    Mat3d m = Mat3d::Identity();

    /// Applies the homography and dehomogenizes. Throws ProjectionAtInfinity
    /// when the homogeneous w-coordinate magnitude is ≤ 1e-12.
    Vec2d apply(const Vec2d& pixel) const;
};

struct Projection {
    Vec2d pixel;
    double depth = 0;
};

/// Projects a world point through the pinhole model. Throws BehindCamera when
/// the camera-frame depth is ≤ 1e-6.
Projection project(const Vec3d& point, const CameraIntrinsics& intr, const CameraPose& pose);

/// Lifts a pixel at the given camera-frame depth back to a world point.
/// Throws NonPositiveDepth when depth ≤ 0.
Vec3d backproject(const Vec2d& pixel, double depth, const CameraIntrinsics& intr, const CameraPose& pose);

/// Relative rigid transform taking ref-frame coordinates to nbr-frame
/// coordinates: R_rn = R_n·R_rᵀ, T_rn = R_n·(c_r − c_n).
RelativePose relative_pose(const CameraPose& ref, const CameraPose& nbr);

/// Homography induced by the plane n_rᵀX + d_r = 0 (ref camera frame, n_r a
/// unit normal facing the camera so d_r > 0 for visible planes):
///   H = K_n (R_rn − T_rn·n_rᵀ / d_r) K_r^{-1}
/// Throws DegeneratePlane when d_r ≤ 1e-9 or n_r is not unit length (1e-6).
Homography plane_homography(const CameraIntrinsics& K_r, const CameraIntrinsics& K_n, const RelativePose& rel,
                            const Vec3d& n_r, double d_r);

struct ReprojectionWeight {
    double phi = 0;  ///< forward-backward pixel error
    double w = 0;    ///< exp(−phi), cut to 0 when phi ≥ 1
};

/// Forward-backward transfer error of p_r under H_rn then H_nr, and the
/// resulting occlusion-robust weight.
ReprojectionWeight reprojection_weight(const Vec2d& p_r, const Homography& H_rn, const Homography& H_nr);

/// Pose looking from `eye` toward `target` with `up` fixing the roll
/// (camera +z points at the target, +y roughly against up, image-down).
CameraPose look_at(const Vec3d& eye, const Vec3d& target, const Vec3d& up);

/// A renderable viewpoint: intrinsics plus pose.
struct CameraView {
    CameraIntrinsics intr;
    CameraPose pose;
};

}  // namespace gssr
