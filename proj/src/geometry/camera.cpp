#include "gssr/geometry/camera.hpp"

#include <cmath>

namespace gssr {

Mat3d CameraIntrinsics::matrix() const {
    Mat3d K;
    K << fx, 0, cx, 0, fy, cy, 0, 0, 1;
    return K;
}

Mat3d CameraIntrinsics::inverse_matrix() const {
    Mat3d Kinv;
    Kinv << 1.0 / fx, 0, -cx / fx, 0, 1.0 / fy, -cy / fy, 0, 0, 1;
    return Kinv;
}

void CameraIntrinsics::validate() const {
    if (!(fx > 0) || !(fy > 0)) throw InvalidCamera("focal lengths must be positive");
    if (!(cx > 0 && cx < width) || !(cy > 0 && cy < height))
        throw InvalidCamera("principal point must lie inside the image");
}

void CameraPose::validate() const {
    const double ortho_err = (rotation * rotation.transpose() - Mat3d::Identity()).norm();
    if (ortho_err > 1e-9) throw InvalidCamera("rotation is not orthonormal");
    if (std::abs(rotation.determinant() - 1.0) > 1e-9) throw InvalidCamera("rotation determinant is not +1");
}

Vec2d Homography::apply(const Vec2d& pixel) const {
    const Vec3d h = m * Vec3d(pixel.x(), pixel.y(), 1.0);
    if (std::abs(h.z()) <= 1e-12) throw ProjectionAtInfinity("homography maps pixel to the line at infinity");
    return Vec2d(h.x() / h.z(), h.y() / h.z());
}

Projection project(const Vec3d& point, const CameraIntrinsics& intr, const CameraPose& pose) {
    const Vec3d cam = pose.to_camera(point);
    if (cam.z() <= 1e-6) throw BehindCamera("point has camera-frame depth <= 1e-6");
    Projection out;
    out.pixel = Vec2d(intr.fx * cam.x() / cam.z() + intr.cx, intr.fy * cam.y() / cam.z() + intr.cy);
    out.depth = cam.z();
    return out;
}

Vec3d backproject(const Vec2d& pixel, double depth, const CameraIntrinsics& intr, const CameraPose& pose) {
    if (depth <= 0) throw NonPositiveDepth("backproject requires depth > 0");
    const Vec3d cam((pixel.x() - intr.cx) / intr.fx * depth, (pixel.y() - intr.cy) / intr.fy * depth, depth);
    return pose.to_world(cam);
}

RelativePose relative_pose(const CameraPose& ref, const CameraPose& nbr) {
    RelativePose rel;
    rel.rotation = nbr.rotation * ref.rotation.transpose();
    rel.translation = nbr.rotation * (ref.center - nbr.center);
    return rel;
}

Homography plane_homography(const CameraIntrinsics& K_r, const CameraIntrinsics& K_n, const RelativePose& rel,
                            const Vec3d& n_r, double d_r) {
    if (std::abs(n_r.norm() - 1.0) > 1e-6) throw DegeneratePlane("plane normal must be unit length");
    if (d_r <= 1e-9) throw DegeneratePlane("plane distance must exceed 1e-9");
    Homography H;
    H.m = K_n.matrix() * (rel.rotation - rel.translation * n_r.transpose() / d_r) * K_r.inverse_matrix();
    return H;
}

ReprojectionWeight reprojection_weight(const Vec2d& p_r, const Homography& H_rn, const Homography& H_nr) {
    const Vec2d forward = H_rn.apply(p_r);
    const Vec2d back = H_nr.apply(forward);
    ReprojectionWeight out;
    out.phi = (p_r - back).norm();
    out.w = out.phi < 1.0 ? std::exp(-out.phi) : 0.0;
    return out;
}

CameraPose look_at(const Vec3d& eye, const Vec3d& target, const Vec3d& up) {
    const Vec3d forward = target - eye;
    if (forward.norm() < 1e-12) throw InvalidCamera("look_at eye and target coincide");
    const Vec3d z = forward.normalized();
    Vec3d x = z.cross(up);
    if (x.norm() < 1e-9) throw InvalidCamera("look_at gaze is parallel to up");
    x.normalize();
    const Vec3d y = z.cross(x);
    CameraPose pose;
    pose.rotation.row(0) = x.transpose();
    pose.rotation.row(1) = y.transpose();
    pose.rotation.row(2) = z.transpose();
    pose.center = eye;
    return pose;
}

}  // namespace gssr
