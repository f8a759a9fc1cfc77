#include "gssr/losses/losses.hpp"

#include "gssr/losses/ncc.hpp"
#include "gssr/losses/ssim.hpp"
#include "gssr/raster/depth_normal.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace gssr {

double combine_total(const LossValues& v, const LossWeights& w) {
    return v.rgb + w.lambda_normal * v.normal + w.lambda_normal_g * v.normal_g + w.lambda_opacity * v.opacity +
           w.lambda_mv * v.mv + w.lambda_mv_g * v.mv_g + w.lambda_scale * v.scale;
}

namespace {

inline double sign_of(double x) { return x > 0 ? 1.0 : (x < 0 ? -1.0 : 0.0); }

/// Per-Gaussian tangent-plane geometry in a view's camera frame, recomputed
/// live from the parameter set so instance losses differentiate through it.
struct GaussianPlane {
    Vec3d mu;      // world center
    Vec3d m;       // camera-frame center
    Vec4d q_unit;  // normalized quaternion
    Mat3d R3;
    int axis = 0;
    double sign = 1;  // camera-facing flip of the min-scale column
    Vec3d n_cam;      // unit normal, camera frame
    double dist = 0;  // d_i = m·n_cam (≤ 0 when camera-facing)
    double alpha = 0;
};

template <class T>
bool gaussian_plane(const GaussianSet<T>& set, const CameraView& view, size_t i, GaussianPlane* gp) {
    gp->mu = Vec3d(double(set.centers[i * 3]), double(set.centers[i * 3 + 1]), double(set.centers[i * 3 + 2]));
    gp->m = view.pose.to_camera(gp->mu);
    Vec4d q(double(set.rotations[i * 4]), double(set.rotations[i * 4 + 1]), double(set.rotations[i * 4 + 2]),
            double(set.rotations[i * 4 + 3]));
    const double qn = q.norm();
    if (qn < 1e-12) return false;
    gp->q_unit = q / qn;
    gp->R3 = quat_rotmat(gp->q_unit);
    const Vec3d s(std::exp(double(set.log_scales[i * 3])), std::exp(double(set.log_scales[i * 3 + 1])),
                  std::exp(double(set.log_scales[i * 3 + 2])));
    gp->axis = min_scale_axis(s);
    Vec3d n_world = gp->R3.col(gp->axis);
    const Vec3d to_center = gp->mu - view.pose.center;
    gp->sign = n_world.dot(to_center) > 0 ? -1.0 : 1.0;
    n_world *= gp->sign;
    gp->n_cam = view.pose.rotation * n_world;
    gp->dist = gp->m.dot(gp->n_cam);
    gp->alpha = clamp(1.0 / (1.0 + std::exp(-double(set.opacity_logits[i]))), 2.2e-16, 1.0 - 2.2e-16);
    return true;
}

/// Scatters an upstream world-normal adjoint into the quaternion gradient.
template <class T>
void scatter_rotation_grad(const GaussianSet<T>& set, size_t i, const GaussianPlane& gp, const Vec3d& dn_world,
                           ParamGrads<T>& grads) {
    Mat3d dR3 = Mat3d::Zero();
    dR3.col(gp.axis) = gp.sign * dn_world;
    const Vec4d q_raw(double(set.rotations[i * 4]), double(set.rotations[i * 4 + 1]),
                      double(set.rotations[i * 4 + 2]), double(set.rotations[i * 4 + 3]));
    const Vec4d dq = quat_normalize_grad(q_raw, quat_rotmat_grad(gp.q_unit, dR3));
    for (int k = 0; k < 4; ++k) grads.rotations[i * 4 + k] += T(dq[k]);
}

/// Adjoint of H = K_n (R − T n̂ᵀ/d) K_r⁻¹ with respect to the plane (n̂, d).
void homography_param_grad(const CameraIntrinsics& K_r, const CameraIntrinsics& K_n, const RelativePose& rel,
                           const Vec3d& n_hat, double d, const Mat3d& dH, Vec3d* dn, double* dd) {
    const Vec3d P = K_n.matrix() * rel.translation;
    const Mat3d Krinv = K_r.inverse_matrix();
    *dn = -(1.0 / d) * (Krinv * (dH.transpose() * P));
    *dd = (1.0 / (d * d)) * P.dot(dH * (Krinv.transpose() * n_hat));
}

/// NCC between a reference patch and the homography-warped neighbor patch.
/// ref_at(dx,dy) supplies reference samples (constant). On success and when
/// dH is non-null, writes dNCC/dH. Fails when any warped sample leaves the
/// neighbor image.
template <class T>
bool warped_patch_ncc(const Image<T>& nbr_gray, double u, double v, int patch,
                      const std::vector<double>& ref_patch, const Homography& H, double* value, Mat3d* dH) {
    const int r = patch / 2;
    const size_t count = size_t(patch) * patch;
    std::vector<double> b(count), bu(count), bv(count);
    std::vector<Vec3d> hpoints(count);
    std::vector<double> hw(count);
    size_t j = 0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++j) {
            const Vec3d p(u + dx, v + dy, 1.0);
            const Vec3d q = H.m * p;
            if (std::abs(q.z()) < 1e-12) return false;
            const double qu = q.x() / q.z();
            const double qv = q.y() / q.z();
            double val, gx, gy;
            if (!bilinear_sample_grad(nbr_gray, qu, qv, 0, &val, &gx, &gy)) return false;
            b[j] = val;
            bu[j] = gx;
            bv[j] = gy;
            hpoints[j] = p;
            hw[j] = q.z();
        }
    }
    if (!dH) {
        *value = ncc(ref_patch.data(), b.data(), count);
        return true;
    }
    std::vector<double> db(count);
    *value = ncc_grad(ref_patch.data(), b.data(), count, db.data());
    dH->setZero();
    j = 0;
    for (int dy = -r; dy <= r; ++dy) {
        for (int dx = -r; dx <= r; ++dx, ++j) {
            const Vec3d p = hpoints[j];
            const Vec3d q = H.m * p;
            const double du = db[j] * bu[j];
            const double dv = db[j] * bv[j];
            // (qu, qv) = (qx/qw, qy/qw)
            const double dqx = du / hw[j];
            const double dqy = dv / hw[j];
            const double dqw = -(du * q.x() + dv * q.y()) / (hw[j] * hw[j]);
            const Vec3d dq(dqx, dqy, dqw);
            *dH += dq * p.transpose();
        }
    }
    return true;
}

}  // namespace

template <class T>
double rgb_loss(const Image<T>& rendered, const Image<T>& observed, double dssim_mix, double grad_weight,
                Image<T>& grad_rendered) {
    if (!rendered.same_shape(observed)) throw DimensionMismatch("rgb_loss: image shapes differ");
    const size_t n = rendered.data.size();
    double l1 = 0;
    for (size_t k = 0; k < n; ++k) {
        const double diff = double(rendered.data[k]) - double(observed.data[k]);
        l1 += std::abs(diff);
        grad_rendered.data[k] += T(grad_weight * (1.0 - dssim_mix) * sign_of(diff) / double(n));
    }
    l1 /= double(n);
    if (dssim_mix == 0.0) return l1;
    // (1 − SSIM)/2 share: d/d rendered = −0.5·mix·dSSIM
    const double s = ssim(rendered, observed, &grad_rendered, -0.5 * dssim_mix * grad_weight);
    return (1.0 - dssim_mix) * l1 + dssim_mix * (1.0 - s) / 2.0;
}

template <class T>
double scale_loss(const GaussianSet<T>& set, double grad_weight, ParamGrads<T>& grads) {
    const size_t n = set.size();
    if (n == 0) return 0;
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
        int argmin = 0;
        double smin = std::exp(double(set.log_scales[i * 3]));
        for (int k = 1; k < 3; ++k) {
            const double s = std::exp(double(set.log_scales[i * 3 + k]));
            if (s < smin) {
                smin = s;
                argmin = k;
            }
        }
        total += smin;
        grads.log_scales[i * 3 + argmin] += T(grad_weight * smin / double(n));
    }
    return total / double(n);
}

template <class T>
double opacity_loss(const GaussianSet<T>& set, double grad_weight, ParamGrads<T>& grads) {
    const size_t n = set.size();
    if (n == 0) return 0;
    double total = 0;
    for (size_t i = 0; i < n; ++i) {
        const double alpha = 1.0 / (1.0 + std::exp(-double(set.opacity_logits[i])));
        const double a = clamp(alpha, 1e-4, 1.0 - 1e-4);
        total += std::log(a) + std::log(1.0 - a);
        if (alpha > 1e-4 && alpha < 1.0 - 1e-4) {
            const double dalpha = (1.0 / a - 1.0 / (1.0 - a)) / double(n);
            grads.opacity_logits[i] += T(grad_weight * dalpha * alpha * (1.0 - alpha));
        }
    }
    return total / double(n);
}

template <class T>
double normal_consistency_loss(const RenderOutputs<T>& outputs, const CameraIntrinsics& intr,
                               const Image<T>& n_depth, double mask_alpha, double grad_weight,
                               Image<T>& grad_normal, Image<T>& grad_distance) {
    const int W = outputs.normal.width, H = outputs.normal.height;
    // First pass: count valid pixels so per-pixel gradients carry the final
    // 1/|V| normalization immediately.
    size_t valid = 0;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            if (double(outputs.alpha(x, y)) <= mask_alpha) continue;
            const T* nd = n_depth.at(x, y);
            if (nd[0] == T(0) && nd[1] == T(0) && nd[2] == T(0)) continue;
            const T* nr = outputs.normal.at(x, y);
            const double norm = std::sqrt(double(nr[0]) * nr[0] + double(nr[1]) * nr[1] + double(nr[2]) * nr[2]);
            if (norm < 1e-12) continue;
            ++valid;
        }
    }
    if (valid == 0) return 0;
    const double scale = grad_weight / double(valid);

    Image<T> grad_ndepth(W, H, 3);
    Image<T> grad_depth(W, H, 1);
    double total = 0;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            if (double(outputs.alpha(x, y)) <= mask_alpha) continue;
            const T* nd = n_depth.at(x, y);
            if (nd[0] == T(0) && nd[1] == T(0) && nd[2] == T(0)) continue;
            const T* nr = outputs.normal.at(x, y);
            const Vec3d N{double(nr[0]), double(nr[1]), double(nr[2])};
            const double norm = N.norm();
            if (norm < 1e-12) continue;
            const Vec3d n_hat = N / norm;
            Vec3d diff;
            for (int k = 0; k < 3; ++k) diff[k] = double(nd[k]) - n_hat[k];
            total += std::abs(diff[0]) + std::abs(diff[1]) + std::abs(diff[2]);

            const Vec3d sgn(sign_of(diff[0]), sign_of(diff[1]), sign_of(diff[2]));
            // rendered path: d‖·‖₁/dn_hat = −sgn, through the normalization
            const Vec3d g_hat = -sgn * scale;
            const Vec3d gN = (g_hat - n_hat * n_hat.dot(g_hat)) / norm;
            T* gn = grad_normal.at(x, y);
            for (int k = 0; k < 3; ++k) gn[k] += T(gN[k]);
            // depth path: d‖·‖₁/dn_depth = +sgn
            T* gd = grad_ndepth.at(x, y);
            for (int k = 0; k < 3; ++k) gd[k] += T(sgn[k] * scale);
        }
    }
    depth_to_normal_backward(outputs.depth, intr, n_depth, grad_ndepth, grad_depth);
    depth_quotient_backward(outputs, intr, grad_depth, grad_normal, grad_distance);
    return total / double(valid);
}

template <class T>
double multiview_photometric_loss(const CameraView& ref_view, const CameraView& nbr_view,
                                  const RenderOutputs<T>& ref_outputs, const RenderOutputs<T>& nbr_outputs,
                                  const Image<T>& ref_gray, const Image<T>& nbr_gray, const LossConfig& lcfg,
                                  double grad_weight, Image<T>& grad_normal, Image<T>& grad_distance) {
    const int W = ref_view.intr.width, H = ref_view.intr.height;
    const int r = lcfg.ncc_patch / 2;
    const RelativePose rel_rn = relative_pose(ref_view.pose, nbr_view.pose);
    const RelativePose rel_nr = relative_pose(nbr_view.pose, ref_view.pose);

    auto pixel_plane = [&](const RenderOutputs<T>& out, int x, int y, Vec3d* n_hat, double* norm,
                           double* d_plane) {
        if (double(out.alpha(x, y)) <= lcfg.mask_alpha) return false;
        const T* nm = out.normal.at(x, y);
        const Vec3d N{double(nm[0]), double(nm[1]), double(nm[2])};
        *norm = N.norm();
        if (*norm < 1e-12) return false;
        *n_hat = N / *norm;
        *d_plane = -double(out.distance(x, y));
        return *d_plane > 1e-6;
    };

    // |Ω| = pixels with valid reference geometry, fixed before the main pass.
    size_t omega = 0;
    for (int y = r; y < H - r; y += lcfg.mv_stride) {
        for (int x = r; x < W - r; x += lcfg.mv_stride) {
            Vec3d n_hat;
            double norm, d_plane;
            if (pixel_plane(ref_outputs, x, y, &n_hat, &norm, &d_plane)) ++omega;
        }
    }
    if (omega == 0) return 0;
    const double scale = grad_weight / double(omega);

    double total = 0;
    std::vector<double> ref_patch(size_t(lcfg.ncc_patch) * lcfg.ncc_patch);
    for (int y = r; y < H - r; y += lcfg.mv_stride) {
        for (int x = r; x < W - r; x += lcfg.mv_stride) {
            Vec3d n_hat;
            double norm, d_plane;
            if (!pixel_plane(ref_outputs, x, y, &n_hat, &norm, &d_plane)) continue;
            const Homography H_fwd = plane_homography(ref_view.intr, nbr_view.intr, rel_rn, n_hat, d_plane);
            const Vec2d p_r(x, y);
            Vec2d p_n;
            try {
                p_n = H_fwd.apply(p_r);
            } catch (const GssrError&) {
                continue;  // plane through the neighbor center: w = 0
            }
            // Occlusion weight from the neighbor's rendered geometry
            // (constant for gradients).
            const int nx = int(std::lround(p_n.x()));
            const int ny = int(std::lround(p_n.y()));
            if (nx < 0 || ny < 0 || nx >= nbr_view.intr.width || ny >= nbr_view.intr.height) continue;
            Vec3d nbr_nhat;
            double nbr_norm, nbr_dplane;
            if (!pixel_plane(nbr_outputs, nx, ny, &nbr_nhat, &nbr_norm, &nbr_dplane)) continue;
            double w;
            try {
                const Homography H_bwd =
                    plane_homography(nbr_view.intr, ref_view.intr, rel_nr, nbr_nhat, nbr_dplane);
                w = reprojection_weight(p_r, H_fwd, H_bwd).w;
            } catch (const GssrError&) {
                continue;
            }
            if (w <= 0) continue;

            size_t j = 0;
            for (int dy = -r; dy <= r; ++dy)
                for (int dx = -r; dx <= r; ++dx, ++j) ref_patch[j] = double(ref_gray(x + dx, y + dy));
            double value;
            Mat3d dH;
            if (!warped_patch_ncc(nbr_gray, double(x), double(y), lcfg.ncc_patch, ref_patch, H_fwd, &value, &dH))
                continue;
            total += w * (1.0 - value);

            // d total/dNCC = −w; chain into the rendered plane at p_r.
            Vec3d dn_hat;
            double dd_plane;
            homography_param_grad(ref_view.intr, nbr_view.intr, rel_rn, n_hat, d_plane, dH, &dn_hat, &dd_plane);
            dn_hat *= -w * scale;
            dd_plane *= -w * scale;
            const Vec3d gN = (dn_hat - n_hat * n_hat.dot(dn_hat)) / norm;
            T* gn = grad_normal.at(x, y);
            for (int k = 0; k < 3; ++k) gn[k] += T(gN[k]);
            grad_distance(x, y) += T(-dd_plane);
        }
    }
    return total / double(omega);
}

template <class T>
FrontSelection select_front_gaussians(const GaussianSet<T>& set, const CameraView& view,
                                      const RenderOutputs<T>& outputs, double depth_tolerance,
                                      double mask_alpha) {
    FrontSelection sel;
    const auto& proj = outputs.projected;
    if (proj.count != set.size())
        throw DimensionMismatch("select_front_gaussians: outputs were not rendered from this set");
    const int W = view.intr.width, H = view.intr.height;
    for (size_t i = 0; i < set.size(); ++i) {
        if (proj.culled[i]) continue;
        const double u = double(proj.mean2d[i * 2]);
        const double v = double(proj.mean2d[i * 2 + 1]);
        const int px = int(std::lround(u));
        const int py = int(std::lround(v));
        if (px < 0 || py < 0 || px >= W || py >= H) continue;
        if (double(outputs.alpha(px, py)) <= mask_alpha) continue;
        const double z = double(proj.depth[i]);
        if (z >= double(outputs.depth(px, py)) + depth_tolerance) continue;
        sel.indices.push_back(uint32_t(i));
        sel.px.push_back(px);
        sel.py.push_back(py);
        sel.u.push_back(u);
        sel.v.push_back(v);
        sel.z.push_back(z);
        sel.radius.push_back(double(proj.radius[i]));
        sel.psi.push_back(double(proj.opacity[i]) * double(proj.radius[i]));
    }
    return sel;
}

template <class T>
double gaussian_normal_loss(const GaussianSet<T>& set, const FrontSelection& sel, const CameraView& view,
                            const Image<T>& n_depth, double grad_weight, ParamGrads<T>& grads) {
    if (sel.size() == 0) return 0;
    const double scale = grad_weight / double(sel.size());
    double total = 0;
    for (size_t k = 0; k < sel.size(); ++k) {
        const size_t i = sel.indices[k];
        const T* nd = n_depth.at(sel.px[k], sel.py[k]);
        if (nd[0] == T(0) && nd[1] == T(0) && nd[2] == T(0)) continue;
        GaussianPlane gp;
        if (!gaussian_plane(set, view, i, &gp)) continue;
        Vec3d diff;
        for (int c = 0; c < 3; ++c) diff[c] = double(nd[c]) - gp.n_cam[c];
        const double l1 = std::abs(diff[0]) + std::abs(diff[1]) + std::abs(diff[2]);
        total += sel.psi[k] * l1;
        // ψ frozen; n_depth stop-gradient; d‖·‖₁/dn_cam = −sign(diff)
        const Vec3d dn_cam(-sign_of(diff[0]), -sign_of(diff[1]), -sign_of(diff[2]));
        const Vec3d dn_world = view.pose.rotation.transpose() * (sel.psi[k] * scale * dn_cam);
        scatter_rotation_grad(set, i, gp, dn_world, grads);
    }
    return total / double(sel.size());
}

template <class T>
double gaussian_multiview_loss(const GaussianSet<T>& set, const FrontSelection& sel, const CameraView& ref_view,
                               const CameraView& nbr_view, const Image<T>& ref_gray, const Image<T>& nbr_gray,
                               const LossConfig& lcfg, double grad_weight, ParamGrads<T>& grads) {
    if (sel.size() == 0) return 0;
    const double scale = grad_weight / double(sel.size());
    const RelativePose rel_rn = relative_pose(ref_view.pose, nbr_view.pose);
    const int r = lcfg.ncc_patch / 2;
    std::vector<double> ref_patch(size_t(lcfg.ncc_patch) * lcfg.ncc_patch);

    double total = 0;
    for (size_t k = 0; k < sel.size(); ++k) {
        const size_t i = sel.indices[k];
        GaussianPlane gp;
        if (!gaussian_plane(set, ref_view, i, &gp)) continue;
        const double d_plane = -gp.dist;
        if (d_plane <= 1e-6) continue;

        // Reference patch at the frozen subpixel center.
        bool ok = true;
        size_t j = 0;
        for (int dy = -r; dy <= r && ok; ++dy) {
            for (int dx = -r; dx <= r && ok; ++dx, ++j) {
                ok = bilinear_sample(ref_gray, sel.u[k] + dx, sel.v[k] + dy, 0, &ref_patch[j]);
            }
        }
        if (!ok) continue;

        const Homography H = plane_homography(ref_view.intr, nbr_view.intr, rel_rn, gp.n_cam, d_plane);
        double value;
        Mat3d dH;
        if (!warped_patch_ncc(nbr_gray, sel.u[k], sel.v[k], lcfg.ncc_patch, ref_patch, H, &value, &dH)) continue;

        const double psi = gp.alpha * sel.radius[k];
        total += psi * (1.0 - value);

        // ψ path: live α_i, constant r_i.
        grads.opacity_logits[i] +=
            T(scale * sel.radius[k] * (1.0 - value) * gp.alpha * (1.0 - gp.alpha));

        // homography path: dNCC→(n̂, d_plane)→(μ, q).
        Vec3d dn_cam;
        double dd_plane;
        homography_param_grad(ref_view.intr, nbr_view.intr, rel_rn, gp.n_cam, d_plane, dH, &dn_cam, &dd_plane);
        dn_cam *= -psi * scale;
        dd_plane *= -psi * scale;
        const double dd_i = -dd_plane;
        const Vec3d dn_cam_total = dn_cam + dd_i * gp.m;  // d_i = m·n_cam
        const Vec3d dm = dd_i * gp.n_cam;
        const Vec3d dmu = ref_view.pose.rotation.transpose() * dm;
        for (int c = 0; c < 3; ++c) grads.centers[i * 3 + c] += T(dmu[c]);
        scatter_rotation_grad(set, i, gp, ref_view.pose.rotation.transpose() * dn_cam_total, grads);
    }
    return total / double(sel.size());
}

template <class T>
LossValues eval_losses(const GaussianSet<T>& set, const CameraView& view, const RenderOutputs<T>& outputs,
                       const Image<T>& observed, const Image<T>& observed_gray, const NeighborData<T>& nbr,
                       bool enable_instance, const LossWeights& weights, const LossConfig& lcfg,
                       const RenderConfig& rcfg, ParamGrads<T>& grads) {
    const int W = view.intr.width, H = view.intr.height;
    Image<T> grad_color(W, H, 3), grad_normal(W, H, 3), grad_distance(W, H, 1), grad_alpha(W, H, 1);

    LossValues v;
    v.rgb = rgb_loss(outputs.color, observed, weights.rgb_dssim_mix, 1.0, grad_color);
    v.scale = scale_loss(set, weights.lambda_scale, grads);
    v.opacity = opacity_loss(set, weights.lambda_opacity, grads);

    const Image<T> n_depth = depth_to_normal(outputs.depth, view.intr);
    v.normal = normal_consistency_loss(outputs, view.intr, n_depth, lcfg.mask_alpha, weights.lambda_normal,
                                       grad_normal, grad_distance);
    const bool have_nbr = nbr.view != nullptr && nbr.outputs != nullptr && nbr.gray != nullptr;
    if (have_nbr) {
        v.mv = multiview_photometric_loss(view, *nbr.view, outputs, *nbr.outputs, observed_gray, *nbr.gray, lcfg,
                                          weights.lambda_mv, grad_normal, grad_distance);
    }
    if (enable_instance) {
        const FrontSelection sel =
            select_front_gaussians(set, view, outputs, lcfg.depth_tolerance, lcfg.mask_alpha);
        v.normal_g = gaussian_normal_loss(set, sel, view, n_depth, weights.lambda_normal_g, grads);
        if (have_nbr) {
            v.mv_g = gaussian_multiview_loss(set, sel, view, *nbr.view, observed_gray, *nbr.gray, lcfg,
                                             weights.lambda_mv_g, grads);
        }
    }
    render_backward(set, view, rcfg, outputs, grad_color, grad_normal, grad_distance, grad_alpha, grads);
    v.total = combine_total(v, weights);
    return v;
}

#define GSSR_LOSSES_IMPL(T)                                                                                 \
    template double rgb_loss<T>(const Image<T>&, const Image<T>&, double, double, Image<T>&);               \
    template double scale_loss<T>(const GaussianSet<T>&, double, ParamGrads<T>&);                           \
    template double opacity_loss<T>(const GaussianSet<T>&, double, ParamGrads<T>&);                         \
    template double normal_consistency_loss<T>(const RenderOutputs<T>&, const CameraIntrinsics&,            \
                                               const Image<T>&, double, double, Image<T>&, Image<T>&);      \
    template double multiview_photometric_loss<T>(const CameraView&, const CameraView&,                     \
                                                  const RenderOutputs<T>&, const RenderOutputs<T>&,         \
                                                  const Image<T>&, const Image<T>&, const LossConfig&,      \
                                                  double, Image<T>&, Image<T>&);                            \
    template FrontSelection select_front_gaussians<T>(const GaussianSet<T>&, const CameraView&,             \
                                                      const RenderOutputs<T>&, double, double);             \
    template double gaussian_normal_loss<T>(const GaussianSet<T>&, const FrontSelection&, const CameraView&, \
                                            const Image<T>&, double, ParamGrads<T>&);                       \
    template double gaussian_multiview_loss<T>(const GaussianSet<T>&, const FrontSelection&, const CameraView&, \
                                               const CameraView&, const Image<T>&, const Image<T>&,         \
                                               const LossConfig&, double, ParamGrads<T>&);                  \
    template LossValues eval_losses<T>(const GaussianSet<T>&, const CameraView&, const RenderOutputs<T>&,   \
                                       const Image<T>&, const Image<T>&, const NeighborData<T>&, bool,      \
                                       const LossWeights&, const LossConfig&, const RenderConfig&,          \
                                       ParamGrads<T>&);
GSSR_LOSSES_IMPL(float)
GSSR_LOSSES_IMPL(double)
#undef GSSR_LOSSES_IMPL

}  // namespace gssr
