#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include "gssr/core/rng.hpp"
#include "gssr/gaussians/gaussian_set.hpp"
#include "gssr/raster/depth_normal.hpp"
#include "gssr/raster/rasterizer.hpp"

#include <cmath>
#include <functional>

using namespace gssr;

namespace {

constexpr double kSceneExtent = 4.0;

/// Rendering config without the measure-zero discontinuities of the
/// production defaults (alpha cutoff, transmittance floor, 3σ footprint), so
/// central differences see a smooth objective.
RenderConfig smooth_cfg() {
    RenderConfig cfg;
    cfg.alpha_cutoff = 0.0;
    cfg.transmittance_floor = 0.0;
    cfg.gaussian_extent_sigmas = 8.0;
    return cfg;
}

CameraView make_view(int size = 32, double f = 40.0) {
    CameraView view;
    view.intr.fx = f;
    view.intr.fy = f;
    view.intr.cx = (size - 1) / 2.0;
    view.intr.cy = (size - 1) / 2.0;
    view.intr.width = size;
    view.intr.height = size;
    view.pose.rotation = Mat3d::Identity();
    view.pose.center = Vec3d::Zero();
    return view;
}

/// 10-Gaussian scene kept away from every non-smooth boundary: distinct
/// depths (no sort swaps), normals at a safe angle to the view ray (no
/// camera-facing flips), opacities below the 0.99 clamp, colors away from the
/// SH clamp at zero.
GaussianSet<double> make_fd_scene(Rng& rng, size_t n, const CameraView& view) {
    GaussianSet<double> set;
    set.sh_degree = 1;
    set.resize(n);
    const double tanf = view.intr.width / (2.0 * view.intr.fx);
    for (size_t i = 0; i < n; ++i) {
        const double z = 3.0 + 0.4 * double(i) + rng.uniform(0.05, 0.15);
        set.centers[i * 3] = rng.uniform(-0.5, 0.5) * tanf * z;
        set.centers[i * 3 + 1] = rng.uniform(-0.5, 0.5) * tanf * z;
        set.centers[i * 3 + 2] = z;
        const Vec3d dir = Vec3d(set.centers[i * 3], set.centers[i * 3 + 1], z).normalized();
        Vec4d q;
        while (true) {
            q = Vec4d(rng.normal(), rng.normal(), rng.normal(), rng.normal()).normalized();
            const Vec3d s(0.3, 0.3, 0.04);
            const Vec3d axis = quat_rotmat(q).col(min_scale_axis(s));
            if (std::abs(axis.dot(dir)) > 0.25) break;  // margin to the sign flip
        }
        for (int k = 0; k < 4; ++k) set.rotations[i * 4 + k] = q[k] * rng.uniform(0.8, 1.2);  // unnormalized on purpose
        set.log_scales[i * 3] = std::log(rng.uniform(0.25, 0.35));
        set.log_scales[i * 3 + 1] = std::log(rng.uniform(0.25, 0.35));
        set.log_scales[i * 3 + 2] = std::log(rng.uniform(0.03, 0.05));
        set.opacity_logits[i] = rng.uniform(0.2, 1.2);
        const int B = set.basis_count();
        for (int k = 0; k < B * 3; ++k) set.sh[i * size_t(B) * 3 + k] = rng.uniform(-0.2, 0.2);
        for (int c = 0; c < 3; ++c) set.sh[i * size_t(B) * 3 + c] = rng.uniform(0.4, 1.0);
    }
    return set;
}

/// |a − f| within 1e-3 relative, elements below 1e-8 compared absolutely.
void check_close(double analytic, double fd, const char* what, size_t idx) {
    const double scale = std::max(std::abs(analytic), std::abs(fd));
    const double err = std::abs(analytic - fd);
    if (scale < 1e-8) {
        CHECK_MESSAGE(err < 1e-8, what, "[", idx, "]: analytic=", analytic, " fd=", fd);
    } else {
        CHECK_MESSAGE(err / scale < 1e-3, what, "[", idx, "]: analytic=", analytic, " fd=", fd,
                      " rel=", err / scale);
    }
}

struct Objective {
    Image<double> wc{32, 32, 3};
    Image<double> wn{32, 32, 3};
    Image<double> wd{32, 32, 1};
    Image<double> wa{32, 32, 1};
};

Objective make_objective(Rng& rng, bool color_only) {
    Objective o;
    for (auto& v : o.wc.data) v = rng.uniform(-1, 1);
    if (color_only) {
        o.wc.fill(1.0);
        o.wn.fill(0.0);
        o.wd.fill(0.0);
        o.wa.fill(0.0);
        return o;
    }
    for (auto& v : o.wn.data) v = rng.uniform(-1, 1);
    for (auto& v : o.wd.data) v = rng.uniform(-1, 1);
    for (auto& v : o.wa.data) v = rng.uniform(-1, 1);
    return o;
}

double eval_objective(const GaussianSet<double>& set, const CameraView& view, const RenderConfig& cfg,
                      const Objective& o) {
    const auto out = render(set, view, cfg);
    double L = 0;
    for (size_t k = 0; k < out.color.data.size(); ++k) L += o.wc.data[k] * out.color.data[k];
    for (size_t k = 0; k < out.normal.data.size(); ++k) L += o.wn.data[k] * out.normal.data[k];
    for (size_t k = 0; k < out.distance.data.size(); ++k) L += o.wd.data[k] * out.distance.data[k];
    for (size_t k = 0; k < out.alpha.data.size(); ++k) L += o.wa.data[k] * out.alpha.data[k];
    return L;
}

/// Central-difference check of every parameter against render_backward.
void run_fd_check(GaussianSet<double> set, const CameraView& view, const RenderConfig& cfg, const Objective& o) {
    const auto out = render(set, view, cfg);
    ParamGrads<double> g;
    g.resize_like(set);
    render_backward(set, view, cfg, out, o.wc, o.wn, o.wd, o.wa, g);

    struct Block {
        std::vector<double>* values;
        const std::vector<double>* grads;
        double h;
        const char* name;
    };
    Block blocks[] = {
        {&set.centers, &g.centers, 1e-4 * kSceneExtent, "d_center"},
        {&set.rotations, &g.rotations, 1e-5, "d_rotation"},
        {&set.log_scales, &g.log_scales, 1e-5, "d_log_scale"},
        {&set.opacity_logits, &g.opacity_logits, 1e-5, "d_opacity_logit"},
        {&set.sh, &g.sh, 1e-5, "d_sh"},
    };
    for (auto& blk : blocks) {
        for (size_t k = 0; k < blk.values->size(); ++k) {
            const double orig = (*blk.values)[k];
            (*blk.values)[k] = orig + blk.h;
            const double lp = eval_objective(set, view, cfg, o);
            (*blk.values)[k] = orig - blk.h;
            const double lm = eval_objective(set, view, cfg, o);
            (*blk.values)[k] = orig;
            check_close((*blk.grads)[k], (lp - lm) / (2 * blk.h), blk.name, k);
        }
    }
}

}  // namespace

TEST_CASE("gradcheck: single Gaussian, L = sum of color map, dL/dmu") {
    const CameraView view = make_view();
    Rng rng(42);
    auto set = make_fd_scene(rng, 1, view);
    const RenderConfig cfg = smooth_cfg();
    Objective o = make_objective(rng, /*color_only=*/true);

    const auto out = render(set, view, cfg);
    ParamGrads<double> g;
    g.resize_like(set);
    render_backward(set, view, cfg, out, o.wc, o.wn, o.wd, o.wa, g);

    const double h = 1e-4 * kSceneExtent;
    for (size_t k = 0; k < 3; ++k) {
        const double orig = set.centers[k];
        set.centers[k] = orig + h;
        const double lp = eval_objective(set, view, cfg, o);
        set.centers[k] = orig - h;
        const double lm = eval_objective(set, view, cfg, o);
        set.centers[k] = orig;
        check_close(g.centers[k], (lp - lm) / (2 * h), "d_center", k);
    }
}

TEST_CASE("gradcheck: 10-Gaussian color objective, all parameters") {
    const CameraView view = make_view();
    Rng rng(20240812);
    auto set = make_fd_scene(rng, 10, view);
    Objective o = make_objective(rng, /*color_only=*/true);
    run_fd_check(set, view, smooth_cfg(), o);
}

TEST_CASE("gradcheck: 10-Gaussian weighted color/normal/distance/alpha objective") {
    const CameraView view = make_view();
    Rng rng(31337);
    auto set = make_fd_scene(rng, 10, view);
    Objective o = make_objective(rng, /*color_only=*/false);
    run_fd_check(set, view, smooth_cfg(), o);
}

TEST_CASE("gradcheck: unbiased-depth objective through the quotient chain") {
    const CameraView view = make_view();
    Rng rng(271828);
    auto set = make_fd_scene(rng, 10, view);
    const RenderConfig cfg = smooth_cfg();

    // Frozen mask of reliably covered pixels; weights only there.
    const auto base = render(set, view, cfg);
    Image<double> wD(32, 32, 1);
    wD.fill(0.0);
    int masked = 0;
    for (int y = 0; y < 32; ++y) {
        for (int x = 0; x < 32; ++x) {
            if (base.alpha(x, y) > cfg.alpha_floor + 0.05 && base.depth(x, y) != 0.0) {
                wD(x, y) = rng.uniform(0.5, 1.5);
                ++masked;
            }
        }
    }
    REQUIRE(masked > 20);

    // Analytic: depth adjoints → (normal, distance) adjoints → parameters.
    Image<double> gn(32, 32, 3), gd(32, 32, 1), zero3(32, 32, 3), zero1(32, 32, 1);
    gn.fill(0.0);
    gd.fill(0.0);
    zero3.fill(0.0);
    zero1.fill(0.0);
    depth_quotient_backward(base, view.intr, wD, gn, gd);
    ParamGrads<double> g;
    g.resize_like(set);
    render_backward(set, view, cfg, base, zero3, gn, gd, zero1, g);

    auto eval_depth = [&](const GaussianSet<double>& s) {
        const auto out = render(s, view, cfg);
        double L = 0;
        for (int y = 0; y < 32; ++y)
            for (int x = 0; x < 32; ++x) L += wD(x, y) * out.depth(x, y);
        return L;
    };

    struct Block {
        std::vector<double>* values;
        const std::vector<double>* grads;
        double h;
        const char* name;
    };
    Block blocks[] = {
        {&set.centers, &g.centers, 1e-4 * kSceneExtent, "depth d_center"},
        {&set.rotations, &g.rotations, 1e-5, "depth d_rotation"},
        {&set.log_scales, &g.log_scales, 1e-5, "depth d_log_scale"},
        {&set.opacity_logits, &g.opacity_logits, 1e-5, "depth d_opacity_logit"},
    };
    for (auto& blk : blocks) {
        for (size_t k = 0; k < blk.values->size(); ++k) {
            const double orig = (*blk.values)[k];
            (*blk.values)[k] = orig + blk.h;
            const double lp = eval_depth(set);
            (*blk.values)[k] = orig - blk.h;
            const double lm = eval_depth(set);
            (*blk.values)[k] = orig;
            check_close((*blk.grads)[k], (lp - lm) / (2 * blk.h), blk.name, k);
        }
    }
}

TEST_CASE("gradcheck: depth_quotient_backward against a direct oracle") {
    Rng rng(555);
    CameraView view = make_view(8, 10.0);
    RenderOutputs<double> out;
    out.normal = Image<double>(8, 8, 3);
    out.distance = Image<double>(8, 8, 1);
    out.depth = Image<double>(8, 8, 1);
    out.alpha = Image<double>(8, 8, 1);
    out.alpha.fill(0.9);
    for (int y = 0; y < 8; ++y) {
        for (int x = 0; x < 8; ++x) {
            out.normal.at(x, y)[0] = 0.2 * rng.normal();
            out.normal.at(x, y)[1] = 0.2 * rng.normal();
            out.normal.at(x, y)[2] = -0.8 + 0.1 * rng.normal();
            out.distance(x, y) = -4.0 + rng.uniform(-0.5, 0.5);
        }
    }
    auto quotient = [&](const Image<double>& nmap, const Image<double>& dmap, int x, int y) {
        const Vec3d N{nmap.at(x, y)[0], nmap.at(x, y)[1], nmap.at(x, y)[2]};
        const Vec3d ray((x - view.intr.cx) / view.intr.fx, (y - view.intr.cy) / view.intr.fy, 1.0);
        return dmap(x, y) / (N.normalized().dot(ray));
    };
    for (int y = 0; y < 8; ++y)
        for (int x = 0; x < 8; ++x) out.depth(x, y) = quotient(out.normal, out.distance, x, y);

    Image<double> wD(8, 8, 1);
    for (auto& v : wD.data) v = rng.uniform(-1, 1);
    Image<double> gn(8, 8, 3), gd(8, 8, 1);
    gn.fill(0.0);
    gd.fill(0.0);
    depth_quotient_backward(out, view.intr, wD, gn, gd);

    auto eval = [&](const Image<double>& nmap, const Image<double>& dmap) {
        double L = 0;
        for (int y = 0; y < 8; ++y)
            for (int x = 0; x < 8; ++x) L += wD(x, y) * quotient(nmap, dmap, x, y);
        return L;
    };
    const double h = 1e-6;
    for (size_t k = 0; k < out.normal.data.size(); ++k) {
        Image<double> n2 = out.normal;
        n2.data[k] += h;
        const double lp = eval(n2, out.distance);
        n2.data[k] -= 2 * h;
        const double lm = eval(n2, out.distance);
        check_close(gn.data[k], (lp - lm) / (2 * h), "quotient d_normal", k);
    }
    for (size_t k = 0; k < out.distance.data.size(); ++k) {
        Image<double> d2 = out.distance;
        d2.data[k] += h;
        const double lp = eval(out.normal, d2);
        d2.data[k] -= 2 * h;
        const double lm = eval(out.normal, d2);
        check_close(gd.data[k], (lp - lm) / (2 * h), "quotient d_distance", k);
    }
}

TEST_CASE("gradcheck: depth_to_normal_backward") {
    const CameraView view = make_view(16, 20.0);
    Rng rng(777);
    Image<double> depth(16, 16, 1);
    for (int y = 0; y < 16; ++y)
        for (int x = 0; x < 16; ++x)
            depth(x, y) = 5.0 + 0.3 * std::sin(0.4 * x) + 0.2 * std::cos(0.3 * y) + 0.02 * rng.normal();

    Image<double> w(16, 16, 3);
    for (auto& v : w.data) v = rng.uniform(-1, 1);

    const auto normals = depth_to_normal(depth, view.intr);
    Image<double> gdepth(16, 16, 1);
    gdepth.fill(0.0);
    depth_to_normal_backward(depth, view.intr, normals, w, gdepth);

    auto eval = [&](const Image<double>& d) {
        const auto n = depth_to_normal(d, view.intr);
        double L = 0;
        for (size_t k = 0; k < n.data.size(); ++k) L += w.data[k] * n.data[k];
        return L;
    };
    const double h = 1e-6;
    for (size_t k = 0; k < depth.data.size(); ++k) {
        Image<double> d2 = depth;
        d2.data[k] += h;
        const double lp = eval(d2);
        d2.data[k] -= 2 * h;
        const double lm = eval(d2);
        check_close(gdepth.data[k], (lp - lm) / (2 * h), "depth_to_normal d_depth", k);
    }
}
