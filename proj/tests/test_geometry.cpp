#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gssr/core/rng.hpp"
#include "gssr/geometry/camera.hpp"

#include <cmath>

using namespace gssr;

namespace {

CameraIntrinsics make_intrinsics(double f = 100, int w = 100, int h = 100) {
    CameraIntrinsics intr;
    intr.fx = f;
    intr.fy = f;
    intr.cx = w / 2.0;
    intr.cy = h / 2.0;
    intr.width = w;
    intr.height = h;
    return intr;
}

CameraPose random_pose(Rng& rng, double center_range = 2.0) {
    Quatd q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    q.normalize();
    CameraPose pose;
    pose.rotation = q.toRotationMatrix();
    pose.center = Vec3d(rng.uniform(-center_range, center_range), rng.uniform(-center_range, center_range),
                        rng.uniform(-center_range, center_range));
    return pose;
}

}  // namespace

TEST_CASE("project maps the optical axis to the principal point") {
    const auto intr = make_intrinsics();
    CameraPose pose;  // identity
    const auto pr = project(Vec3d(0, 0, 2), intr, pose);
    CHECK(pr.pixel.x() == doctest::Approx(intr.cx));
    CHECK(pr.pixel.y() == doctest::Approx(intr.cy));
    CHECK(pr.depth == doctest::Approx(2.0));
}

TEST_CASE("project direct substitution") {
    auto intr = make_intrinsics(100, 100, 100);
    intr.cx = 50;
    intr.cy = 50;
    CameraPose pose;
    const auto pr = project(Vec3d(1, 0, 1), intr, pose);
    CHECK(pr.pixel.x() == doctest::Approx(150.0));
    CHECK(pr.pixel.y() == doctest::Approx(50.0));
    CHECK(pr.depth == doctest::Approx(1.0));
}

TEST_CASE("project throws BehindCamera for non-positive depth") {
    const auto intr = make_intrinsics();
    CameraPose pose;
    CHECK_THROWS_AS(project(Vec3d(0, 0, -1), intr, pose), BehindCamera);
    CHECK_THROWS_AS(project(Vec3d(0, 0, 0), intr, pose), BehindCamera);
}

TEST_CASE("backproject basics and errors") {
    const auto intr = make_intrinsics();
    CameraPose pose;
    const Vec3d p = backproject(Vec2d(intr.cx, intr.cy), 3.0, intr, pose);
    CHECK(p.x() == doctest::Approx(0.0));
    CHECK(p.y() == doctest::Approx(0.0));
    CHECK(p.z() == doctest::Approx(3.0));
    CHECK_THROWS_AS(backproject(Vec2d(1, 1), 0.0, intr, pose), NonPositiveDepth);
    CHECK_THROWS_AS(backproject(Vec2d(1, 1), -1.0, intr, pose), NonPositiveDepth);
}

TEST_CASE("project/backproject roundtrip on random poses") {
    Rng rng(101);
    const auto intr = make_intrinsics(120, 128, 96);
    for (int trial = 0; trial < 1000; ++trial) {
        const auto pose = random_pose(rng);
        // A point guaranteed to be in front of the camera.
        const Vec3d cam(rng.uniform(-1, 1), rng.uniform(-1, 1), rng.uniform(0.5, 5.0));
        const Vec3d world = pose.to_world(cam);
        const auto pr = project(world, intr, pose);
        const Vec3d rt = backproject(pr.pixel, pr.depth, intr, pose);
        CHECK((rt - world).norm() < 1e-9);
    }
}

TEST_CASE("relative_pose identities and sign convention") {
    Rng rng(7);
    const auto pose = random_pose(rng);
    const auto rel_same = relative_pose(pose, pose);
    CHECK((rel_same.rotation - Mat3d::Identity()).norm() < 1e-12);
    CHECK(rel_same.translation.norm() < 1e-12);

    CameraPose ref;  // identity at origin
    CameraPose nbr;
    nbr.center = Vec3d(1, 0, 0);
    const auto rel = relative_pose(ref, nbr);
    CHECK((rel.rotation - Mat3d::Identity()).norm() < 1e-12);
    CHECK((rel.translation - Vec3d(-1, 0, 0)).norm() < 1e-12);
}

TEST_CASE("relative_pose matches two-step transform on random pairs") {
    Rng rng(13);
    for (int trial = 0; trial < 100; ++trial) {
        const auto a = random_pose(rng);
        const auto b = random_pose(rng);
        const auto rel = relative_pose(a, b);
        const Vec3d world(rng.uniform(-3, 3), rng.uniform(-3, 3), rng.uniform(-3, 3));
        const Vec3d direct = b.to_camera(world);
        const Vec3d via_rel = rel.apply(a.to_camera(world));
        CHECK((direct - via_rel).norm() < 1e-9);
    }
}

TEST_CASE("relative_pose composes") {
    Rng rng(17);
    for (int trial = 0; trial < 50; ++trial) {
        const auto a = random_pose(rng);
        const auto b = random_pose(rng);
        const auto c = random_pose(rng);
        const auto ab = relative_pose(a, b);
        const auto bc = relative_pose(b, c);
        const auto ac = relative_pose(a, c);
        CHECK((bc.rotation * ab.rotation - ac.rotation).norm() < 1e-9);
        CHECK((bc.rotation * ab.translation + bc.translation - ac.translation).norm() < 1e-9);
    }
}

TEST_CASE("plane_homography is identity for coincident cameras") {
    const auto intr = make_intrinsics();
    RelativePose rel;  // identity / zero
    const auto H = plane_homography(intr, intr, rel, Vec3d(0, 0, -1), 2.0);
    CHECK((H.m - Mat3d::Identity()).norm() < 1e-12);
}

TEST_CASE("plane_homography ignores the plane under pure rotation") {
    Rng rng(19);
    const auto K_r = make_intrinsics(90, 128, 128);
    const auto K_n = make_intrinsics(110, 128, 128);
    Quatd q(rng.normal(), rng.normal(), rng.normal(), rng.normal());
    q.normalize();
    RelativePose rel;
    rel.rotation = q.toRotationMatrix();
    const Mat3d expect = K_n.matrix() * rel.rotation * K_r.inverse_matrix();
    for (int trial = 0; trial < 5; ++trial) {
        Vec3d n(rng.normal(), rng.normal(), rng.normal());
        n.normalize();
        const auto H = plane_homography(K_r, K_n, rel, n, rng.uniform(0.5, 5.0));
        CHECK((H.m - expect).norm() < 1e-9);
    }
}

TEST_CASE("plane_homography rejects degenerate inputs") {
    const auto intr = make_intrinsics();
    RelativePose rel;
    CHECK_THROWS_AS(plane_homography(intr, intr, rel, Vec3d(0, 0, -1), 0.0), DegeneratePlane);
    CHECK_THROWS_AS(plane_homography(intr, intr, rel, Vec3d(0, 0, -2), 1.0), DegeneratePlane);
}

TEST_CASE("plane_homography matches the ray-plane intersection oracle") {
    Rng rng(23);
    const auto intr = make_intrinsics(110, 128, 128);
    int checked = 0;
    for (int trial = 0; trial < 50; ++trial) {
        // Reference camera and a mildly perturbed neighbor.
        const auto ref = random_pose(rng);
        Quatd dq(1.0, 0.05 * rng.normal(), 0.05 * rng.normal(), 0.05 * rng.normal());
        dq.normalize();
        CameraPose nbr;
        nbr.rotation = dq.toRotationMatrix() * ref.rotation;
        nbr.center = ref.center + Vec3d(rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2), rng.uniform(-0.2, 0.2));
        const auto rel = relative_pose(ref, nbr);

        // Random plane facing the reference camera, crossing the frustum
        // around depth 3.
        Vec3d n_c(rng.uniform(-0.4, 0.4), rng.uniform(-0.4, 0.4), -1.0);
        n_c.normalize();
        const Vec3d X0(rng.uniform(-0.5, 0.5), rng.uniform(-0.5, 0.5), rng.uniform(2.5, 3.5));
        const double d_r = -n_c.dot(X0);
        REQUIRE(d_r > 0);

        const auto H = plane_homography(intr, intr, rel, n_c, d_r);
        for (double u : {20.0, 64.0, 100.0}) {
            for (double v : {24.0, 64.0, 104.0}) {
                // Oracle: intersect the pixel ray with the plane, then
                // project the 3D point into the neighbor view.
                const Vec3d dir = intr.inverse_matrix() * Vec3d(u, v, 1.0);
                const double denom = n_c.dot(dir);
                if (std::abs(denom) < 1e-6) continue;
                const double t = -d_r / denom;
                if (t <= 0) continue;
                const Vec3d X_world = ref.to_world(t * dir);
                if (nbr.to_camera(X_world).z() < 0.1) continue;
                const auto oracle = project(X_world, intr, nbr);
                const Vec2d via_h = H.apply(Vec2d(u, v));
                CHECK((via_h - oracle.pixel).norm() < 1e-6);
                ++checked;
            }
        }
    }
    CHECK(checked > 200);  // the configurations above are rarely skipped
}

TEST_CASE("reprojection_weight basics") {
    Homography id;
    const auto rw = reprojection_weight(Vec2d(10, 20), id, id);
    CHECK(rw.phi == doctest::Approx(0.0));
    CHECK(rw.w == doctest::Approx(1.0));

    // A pure pixel translation pair with mismatched inverse: phi equals the
    // residual offset.
    Homography shift;
    shift.m(0, 2) = 1.5;  // u' = u + 1.5, not undone by the identity backward map
    const auto cut = reprojection_weight(Vec2d(0, 0), shift, id);
    CHECK(cut.phi == doctest::Approx(1.5));
    CHECK(cut.w == 0.0);
}

TEST_CASE("reprojection_weight is exp(-phi) below the cutoff and decreasing") {
    Homography id;
    double prev_w = 2.0;
    for (double offset : {0.0, 0.1, 0.4, 0.7, 0.99}) {
        Homography shift;
        shift.m(0, 2) = offset;
        const auto rw = reprojection_weight(Vec2d(5, 5), shift, id);
        CHECK(rw.phi == doctest::Approx(offset));
        CHECK(rw.w == doctest::Approx(std::exp(-offset)));
        CHECK(rw.w < prev_w);
        prev_w = rw.w;
    }
}

TEST_CASE("reprojection_weight on exact inverse pairs") {
    Rng rng(29);
    const auto intr = make_intrinsics(100, 128, 128);
    for (int trial = 0; trial < 20; ++trial) {
        const auto ref = random_pose(rng);
        CameraPose nbr = ref;
        nbr.center += Vec3d(rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3), rng.uniform(-0.3, 0.3));
        const auto rel = relative_pose(ref, nbr);
        Vec3d n_c(0.1, -0.2, -1.0);
        n_c.normalize();
        const auto H_rn = plane_homography(intr, intr, rel, n_c, 2.5);
        Homography H_nr;
        H_nr.m = H_rn.m.inverse();
        const auto rw = reprojection_weight(Vec2d(40, 70), H_rn, H_nr);
        CHECK(rw.phi < 1e-9);
        CHECK(rw.w == doctest::Approx(1.0));
    }
}

TEST_CASE("homography apply throws at infinity") {
    Homography H;
    H.m.row(2) = Eigen::RowVector3d(0, 0, 0);
    CHECK_THROWS_AS(H.apply(Vec2d(1, 1)), ProjectionAtInfinity);
}

TEST_CASE("camera validation") {
    auto intr = make_intrinsics();
    CHECK_NOTHROW(intr.validate());
    intr.fx = -1;
    CHECK_THROWS_AS(intr.validate(), InvalidCamera);

    CameraPose pose;
    CHECK_NOTHROW(pose.validate());
    pose.rotation(0, 0) = 2.0;
    CHECK_THROWS_AS(pose.validate(), InvalidCamera);
}

TEST_CASE("look_at frames the target on the optical axis") {
    const auto intr = make_intrinsics();
    const Vec3d eye(2, -4, 1.5);
    const Vec3d target(0.5, 0.5, 0.5);
    const auto pose = look_at(eye, target, Vec3d(0, 0, 1));
    CHECK_NOTHROW(pose.validate());
    const auto pr = project(target, intr, pose);
    CHECK(pr.pixel.x() == doctest::Approx(intr.cx));
    CHECK(pr.pixel.y() == doctest::Approx(intr.cy));
    CHECK(pr.depth == doctest::Approx((target - eye).norm()));
    // Image-down convention: the camera y axis points against world up.
    CHECK(pose.rotation.row(1).dot(Eigen::RowVector3d(0, 0, 1)) < 0);
}
