#include "gssr/raster/rasterizer.hpp"

#include "gssr/core/kernels.hpp"
#include "gssr/core/parallel.hpp"
#include "gssr/gaussians/sh.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace gssr {

namespace {

/// Opacity activation used consistently by forward and backward.
template <class T>
double activated_opacity(const GaussianSet<T>& set, size_t i) {
    const double v = 1.0 / (1.0 + std::exp(-double(set.opacity_logits[i])));
    return clamp(v, 2.2e-16, 1.0 - 2.2e-16);
}

/// Per-Gaussian double-precision projection state shared by forward and
/// backward phase 2.
struct ProjectionScratch {
    Vec3d m;        // camera-frame center
    Mat3d R3;       // rotation of the unit quaternion
    Vec3d s;        // activated scales
    Vec3d dir;      // unit world-space view direction to the center
    double dir_len; // ‖μ − camera center‖
    Eigen::Matrix<double, 2, 3> J;
    Mat3d Sigma;    // world covariance
    Mat2d cov2d;    // dilated screen covariance
};

template <class T>
bool project_one(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg, size_t i,
                 ProjectionScratch& ps) {
    const Vec3d mu(double(set.centers[i * 3]), double(set.centers[i * 3 + 1]), double(set.centers[i * 3 + 2]));
    ps.m = view.pose.to_camera(mu);
    const double z = ps.m.z();
    if (z <= cfg.near_plane) return false;
    const double tan_fovx = view.intr.width / (2.0 * view.intr.fx);
    const double tan_fovy = view.intr.height / (2.0 * view.intr.fy);
    if (std::abs(ps.m.x() / z) > 1.3 * tan_fovx || std::abs(ps.m.y() / z) > 1.3 * tan_fovy) return false;

    Vec4d q(double(set.rotations[i * 4]), double(set.rotations[i * 4 + 1]), double(set.rotations[i * 4 + 2]),
            double(set.rotations[i * 4 + 3]));
    const double qn = q.norm();
    if (qn < 1e-12) return false;
    q /= qn;
    ps.R3 = quat_rotmat(q);
    ps.s = Vec3d(std::exp(double(set.log_scales[i * 3])), std::exp(double(set.log_scales[i * 3 + 1])),
                 std::exp(double(set.log_scales[i * 3 + 2])));
    ps.Sigma = ps.R3 * ps.s.cwiseProduct(ps.s).asDiagonal() * ps.R3.transpose();

    ps.J.setZero();
    ps.J(0, 0) = view.intr.fx / z;
    ps.J(0, 2) = -view.intr.fx * ps.m.x() / (z * z);
    ps.J(1, 1) = view.intr.fy / z;
    ps.J(1, 2) = -view.intr.fy * ps.m.y() / (z * z);

    const Eigen::Matrix<double, 2, 3> U = ps.J * view.pose.rotation;
    ps.cov2d = U * ps.Sigma * U.transpose() + 0.3 * Mat2d::Identity();

    const Vec3d to_center = mu - view.pose.center;
    ps.dir_len = to_center.norm();
    if (ps.dir_len < 1e-12) return false;
    ps.dir = to_center / ps.dir_len;
    return true;
}

}  // namespace

template <class T>
ProjectedGaussians<T> project_to_screen(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg) {
    const size_t n = set.size();
    ProjectedGaussians<T> out;
    out.count = n;
    out.culled.assign(n, 1);
    out.mean2d.assign(n * 2, T(0));
    out.conic.assign(n * 3, T(0));
    out.radius.assign(n, T(0));
    out.depth.assign(n, T(0));
    out.dist.assign(n, T(0));
    out.normal_cam.assign(n * 3, T(0));
    out.color.assign(n * 3, T(0));
    out.color_clamped.assign(n * 3, 0);
    out.normal_sign.assign(n, 1);
    out.normal_axis.assign(n, 0);
    out.opacity.assign(n, T(0));

    const int B = set.basis_count();
    parallel_chunks(n, 512, [&](size_t begin, size_t end) {
        ProjectionScratch ps;
        double coeffs[16 * 3];
        for (size_t i = begin; i < end; ++i) {
            if (!project_one(set, view, cfg, i, ps)) continue;

            const double det = ps.cov2d(0, 0) * ps.cov2d(1, 1) - ps.cov2d(0, 1) * ps.cov2d(0, 1);
            if (det <= 0) continue;
            const Mat2d conic = ps.cov2d.inverse();
            const double mid = 0.5 * (ps.cov2d(0, 0) + ps.cov2d(1, 1));
            const double lambda_max = mid + std::sqrt(std::max(0.0, mid * mid - det));
            const double radius = cfg.gaussian_extent_sigmas * std::sqrt(lambda_max);

            // Camera-facing normal from the minimum-scale axis.
            const int axis = min_scale_axis(ps.s);
            Vec3d n_world = ps.R3.col(axis);
            int8_t sign = 1;
            if (n_world.dot(ps.dir) > 0) {
                n_world = -n_world;
                sign = -1;
            }
            const Vec3d n_cam = view.pose.rotation * n_world;
            const double d_i = ps.m.dot(n_cam);

            for (int k = 0; k < B * 3; ++k) coeffs[k] = double(set.sh[i * size_t(B) * 3 + k]);
            bool clamped[3];
            const Vec3d color = sh::eval_color(set.sh_degree, coeffs, ps.dir, clamped);

            out.culled[i] = 0;
            out.mean2d[i * 2] = T(view.intr.fx * ps.m.x() / ps.m.z() + view.intr.cx);
            out.mean2d[i * 2 + 1] = T(view.intr.fy * ps.m.y() / ps.m.z() + view.intr.cy);
            out.conic[i * 3] = T(conic(0, 0));
            out.conic[i * 3 + 1] = T(conic(0, 1));
            out.conic[i * 3 + 2] = T(conic(1, 1));
            out.radius[i] = T(radius);
            out.depth[i] = T(ps.m.z());
            out.dist[i] = T(d_i);
            for (int k = 0; k < 3; ++k) {
                out.normal_cam[i * 3 + k] = T(n_cam[k]);
                out.color[i * 3 + k] = T(color[k]);
                out.color_clamped[i * 3 + k] = clamped[k] ? 1 : 0;
            }
            out.normal_sign[i] = sign;
            out.normal_axis[i] = uint8_t(axis);
            out.opacity[i] = T(activated_opacity(set, i));
        }
    });
    return out;
}

namespace {

/// Splat footprint as an inclusive pixel-rectangle; false when off-image.
template <class T>
bool splat_bbox(const ProjectedGaussians<T>& proj, size_t i, int width, int height, int* x0, int* x1, int* y0,
                int* y1) {
    const double u = double(proj.mean2d[i * 2]);
    const double v = double(proj.mean2d[i * 2 + 1]);
    const double r = double(proj.radius[i]);
    *x0 = int(std::floor(u - r));
    *x1 = int(std::ceil(u + r));
    *y0 = int(std::floor(v - r));
    *y1 = int(std::ceil(v + r));
    if (*x1 < 0 || *y1 < 0 || *x0 >= width || *y0 >= height) return false;
    *x0 = std::max(*x0, 0);
    *y0 = std::max(*y0, 0);
    *x1 = std::min(*x1, width - 1);
    *y1 = std::min(*y1, height - 1);
    return true;
}

}  // namespace

template <class T>
RenderOutputs<T> render(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg) {
    const int W = view.intr.width;
    const int H = view.intr.height;
    RenderOutputs<T> out;
    out.color = Image<T>(W, H, 3);
    out.normal = Image<T>(W, H, 3);
    out.distance = Image<T>(W, H, 1);
    out.depth = Image<T>(W, H, 1);
    out.alpha = Image<T>(W, H, 1);
    out.projected = project_to_screen(set, view, cfg);
    const auto& proj = out.projected;

    // Depth order: (z_i, index) over visible Gaussians.
    std::vector<uint32_t> order;
    order.reserve(set.size());
    for (uint32_t i = 0; i < set.size(); ++i)
        if (!proj.culled[i]) order.push_back(i);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return proj.depth[a] < proj.depth[b]; });

    // Tile binning in depth order.
    const int tile = cfg.tile_size;
    const int tiles_x = (W + tile - 1) / tile;
    const int tiles_y = (H + tile - 1) / tile;
    std::vector<std::vector<uint32_t>> tile_lists(size_t(tiles_x) * tiles_y);
    for (uint32_t id : order) {
        int x0, x1, y0, y1;
        if (!splat_bbox(proj, id, W, H, &x0, &x1, &y0, &y1)) continue;
        for (int ty = y0 / tile; ty <= y1 / tile; ++ty)
            for (int tx = x0 / tile; tx <= x1 / tile; ++tx) tile_lists[size_t(ty) * tiles_x + tx].push_back(id);
    }

    // Per-tile forward pass. Each tile owns its pixels; per-pixel contributor
    // lists are kept tile-local and assembled serially afterwards.
    std::vector<std::vector<std::vector<Contributor<T>>>> tile_pixel_lists(tile_lists.size());
    const size_t num_tiles = tile_lists.size();
    parallel_chunks(num_tiles, 1, [&](size_t t_begin, size_t t_end) {
        constexpr int kChunk = 64;
        std::vector<T> gbuf;  // kChunk × tile pixels
        for (size_t t = t_begin; t < t_end; ++t) {
            const int tx0 = int(t % size_t(tiles_x)) * tile;
            const int ty0 = int(t / size_t(tiles_x)) * tile;
            const int tw = std::min(tile, W - tx0);
            const int th = std::min(tile, H - ty0);
            const int npix = tw * th;
            const auto& list = tile_lists[t];
            auto& pixel_lists = tile_pixel_lists[t];
            pixel_lists.resize(size_t(npix));
            if (list.empty()) continue;

            std::vector<T> trans(size_t(npix), T(1));
            std::vector<uint8_t> done(size_t(npix), 0);
            std::vector<T> acc(size_t(npix) * 8, T(0));  // r,g,b, nx,ny,nz, dist, alpha
            int active = npix;
            gbuf.resize(size_t(kChunk) * npix);

            for (size_t base = 0; base < list.size() && active > 0; base += kChunk) {
                const int chunk = int(std::min(size_t(kChunk), list.size() - base));
                // Precompute the 2D falloff G for every Gaussian in the chunk
                // over the whole tile (row kernel vectorizes the exp).
                for (int k = 0; k < chunk; ++k) {
                    const uint32_t id = list[base + size_t(k)];
                    const T mu_u = proj.mean2d[id * 2];
                    const T mu_v = proj.mean2d[id * 2 + 1];
                    const T ca = proj.conic[id * 3], cb = proj.conic[id * 3 + 1], cc = proj.conic[id * 3 + 2];
                    for (int y = 0; y < th; ++y) {
                        T* row = gbuf.data() + size_t(k) * npix + size_t(y) * tw;
                        const T dy = T(ty0 + y) - mu_v;
                        const T dx0 = T(tx0) - mu_u;
                        if constexpr (std::is_same_v<T, float>) {
                            kernels::gauss_weights_row(tw, dx0, dy, ca, cb, cc, row);
                        } else {
                            for (int x = 0; x < tw; ++x) {
                                const T dx = dx0 + T(x);
                                const T power = T(-0.5) * (ca * dx * dx + cc * dy * dy) - cb * dx * dy;
                                row[x] = power > T(0) ? T(0) : std::exp(power);
                            }
                        }
                    }
                }
                for (int p = 0; p < npix; ++p) {
                    if (done[p]) continue;
                    T Tcur = trans[p];
                    T* a8 = acc.data() + size_t(p) * 8;
                    auto& plist = pixel_lists[size_t(p)];
                    for (int k = 0; k < chunk; ++k) {
                        const uint32_t id = list[base + size_t(k)];
                        const T G = gbuf[size_t(k) * npix + size_t(p)];
                        const T a = std::min(T(0.99), proj.opacity[id] * G);
                        if (a < T(cfg.alpha_cutoff)) continue;
                        const T w = Tcur * a;
                        a8[0] += w * proj.color[id * 3];
                        a8[1] += w * proj.color[id * 3 + 1];
                        a8[2] += w * proj.color[id * 3 + 2];
                        a8[3] += w * proj.normal_cam[id * 3];
                        a8[4] += w * proj.normal_cam[id * 3 + 1];
                        a8[5] += w * proj.normal_cam[id * 3 + 2];
                        a8[6] += w * proj.dist[id];
                        a8[7] += w;
                        plist.push_back(Contributor<T>{id, G, Tcur});
                        Tcur *= (T(1) - a);
                        if (Tcur < T(cfg.transmittance_floor)) {
                            done[p] = 1;
                            --active;
                            break;
                        }
                    }
                    trans[p] = Tcur;
                }
            }
            // Scatter accumulators into the output images.
            for (int y = 0; y < th; ++y) {
                for (int x = 0; x < tw; ++x) {
                    const T* a8 = acc.data() + size_t(y * tw + x) * 8;
                    T* c = out.color.at(tx0 + x, ty0 + y);
                    c[0] = a8[0];
                    c[1] = a8[1];
                    c[2] = a8[2];
                    T* nm = out.normal.at(tx0 + x, ty0 + y);
                    nm[0] = a8[3];
                    nm[1] = a8[4];
                    nm[2] = a8[5];
                    out.distance(tx0 + x, ty0 + y) = a8[6];
                    out.alpha(tx0 + x, ty0 + y) = a8[7];
                }
            }
        }
    });

    // Assemble global per-pixel contributor lists (row-major pixel order).
    out.contrib_offsets.assign(size_t(W) * H + 1, 0);
    size_t total = 0;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const size_t t = size_t(y / tile) * tiles_x + size_t(x / tile);
            const int tw = std::min(tile, W - (x / tile) * tile);
            const size_t local = size_t(y % tile) * tw + size_t(x % tile);
            total += tile_pixel_lists[t].empty() ? 0 : tile_pixel_lists[t][local].size();
            out.contrib_offsets[size_t(y) * W + x + 1] = uint32_t(total);
        }
    }
    out.contribs.resize(total);
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const size_t t = size_t(y / tile) * tiles_x + size_t(x / tile);
            const int tw = std::min(tile, W - (x / tile) * tile);
            const size_t local = size_t(y % tile) * tw + size_t(x % tile);
            if (tile_pixel_lists[t].empty()) continue;
            const auto& plist = tile_pixel_lists[t][local];
            std::copy(plist.begin(), plist.end(), out.contribs.begin() + out.contrib_offsets[size_t(y) * W + x]);
        }
    }

    // Unbiased depth D(p) = d(p) / (N̂(p)ᵀ K⁻¹ p̃) on sufficiently covered
    // pixels; 0 sentinel elsewhere.
    parallel_chunks(size_t(H), 16, [&](size_t y_begin, size_t y_end) {
        for (size_t y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < W; ++x) {
                if (double(out.alpha(x, int(y))) <= cfg.alpha_floor) continue;
                const T* nm = out.normal.at(x, int(y));
                const double norm = std::sqrt(double(nm[0]) * nm[0] + double(nm[1]) * nm[1] + double(nm[2]) * nm[2]);
                if (norm < 1e-12) continue;
                const double rx = (x - view.intr.cx) / view.intr.fx;
                const double ry = (double(y) - view.intr.cy) / view.intr.fy;
                const double denom = (double(nm[0]) * rx + double(nm[1]) * ry + double(nm[2])) / norm;
                if (std::abs(denom) < 1e-6) continue;
                out.depth(x, int(y)) = T(double(out.distance(x, int(y))) / denom);
            }
        }
    });

    return out;
}

template <class T>
void depth_quotient_backward(const RenderOutputs<T>& outputs, const CameraIntrinsics& intr,
                             const Image<T>& grad_depth, Image<T>& grad_normal, Image<T>& grad_distance) {
    const int W = outputs.depth.width;
    const int H = outputs.depth.height;
    for (int y = 0; y < H; ++y) {
        for (int x = 0; x < W; ++x) {
            const double gD = double(grad_depth(x, y));
            if (gD == 0.0 || double(outputs.depth(x, y)) == 0.0) continue;
            const T* nm = outputs.normal.at(x, y);
            const Vec3d N{double(nm[0]), double(nm[1]), double(nm[2])};
            const double norm = N.norm();
            const Vec3d Nh = N / norm;
            const Vec3d ray((x - intr.cx) / intr.fx, (y - intr.cy) / intr.fy, 1.0);
            const double denom = Nh.dot(ray);
            const double d_raw = double(outputs.distance(x, y));
            grad_distance(x, y) += T(gD / denom);
            const Vec3d gNh = -gD * d_raw / (denom * denom) * ray;
            const Vec3d gN = (gNh - Nh * Nh.dot(gNh)) / norm;
            T* gn = grad_normal.at(x, y);
            for (int k = 0; k < 3; ++k) gn[k] += T(gN[k]);
        }
    }
}

template <class T>
void render_backward(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg,
                     const RenderOutputs<T>& outputs, const Image<T>& grad_color, const Image<T>& grad_normal,
                     const Image<T>& grad_distance, const Image<T>& grad_alpha, ParamGrads<T>& grads) {
    if (!outputs.has_contributors()) throw MissingContributorLists("render_backward needs retained lists");
    const int W = outputs.color.width;
    const int H = outputs.color.height;
    const auto& proj = outputs.projected;
    const size_t n = set.size();

    // Phase 1: per-pixel compositing adjoints, accumulated into 13 screen-
    // space slots per Gaussian: dmean2d(2), dconic(3), dalpha(1), dcolor(3),
    // dnormal_cam(3), ddist(1). Row chunks accumulate locally and merge in
    // fixed order so results are worker-count independent.
    constexpr int kSlots = 13;
    const size_t chunk_rows = 16;
    const size_t num_chunks = (size_t(H) + chunk_rows - 1) / chunk_rows;
    std::vector<std::vector<double>> partials(num_chunks);
    parallel_chunks(size_t(H), chunk_rows, [&](size_t y_begin, size_t y_end) {
        auto& acc = partials[y_begin / chunk_rows];
        acc.assign(n * kSlots, 0.0);
        for (size_t y = y_begin; y < y_end; ++y) {
            for (int x = 0; x < W; ++x) {
                const size_t pix = y * size_t(W) + size_t(x);
                const uint32_t cb = outputs.contrib_offsets[pix];
                const uint32_t ce = outputs.contrib_offsets[pix + 1];
                if (cb == ce) continue;
                const T* gc = grad_color.at(x, int(y));
                const T* gn = grad_normal.at(x, int(y));
                const double gd = double(grad_distance(x, int(y)));
                const double ga = double(grad_alpha(x, int(y)));
                if (gc[0] == T(0) && gc[1] == T(0) && gc[2] == T(0) && gn[0] == T(0) && gn[1] == T(0) &&
                    gn[2] == T(0) && gd == 0.0 && ga == 0.0)
                    continue;

                // Back-to-front walk with suffix sums of blended terms.
                double sfx[8] = {0, 0, 0, 0, 0, 0, 0, 0};
                for (uint32_t c = ce; c-- > cb;) {
                    const auto& rec = outputs.contribs[c];
                    const uint32_t id = rec.id;
                    const double G = double(rec.gweight);
                    const double Tc = double(rec.transmittance);
                    const double alpha_i = double(proj.opacity[id]);
                    const bool clamped = alpha_i * G > 0.99;
                    const double a = clamped ? 0.99 : alpha_i * G;
                    const double w = Tc * a;
                    double* slots = acc.data() + size_t(id) * kSlots;

                    // Direct attribute gradients.
                    double da = 0.0;
                    for (int ch = 0; ch < 3; ++ch) {
                        const double g = double(gc[ch]);
                        slots[7 + ch] += g * w;
                        da += g * (Tc * double(proj.color[id * 3 + ch]) - sfx[ch] / (1.0 - a));
                    }
                    for (int ch = 0; ch < 3; ++ch) {
                        const double g = double(gn[ch]);
                        slots[10 + ch] += g * w;
                        da += g * (Tc * double(proj.normal_cam[id * 3 + ch]) - sfx[3 + ch] / (1.0 - a));
                    }
                    slots[6] += gd * w;
                    da += gd * (Tc * double(proj.dist[id]) - sfx[6] / (1.0 - a));
                    da += ga * (Tc - sfx[7] / (1.0 - a));

                    // Suffix sums now include this contributor.
                    sfx[0] += w * double(proj.color[id * 3]);
                    sfx[1] += w * double(proj.color[id * 3 + 1]);
                    sfx[2] += w * double(proj.color[id * 3 + 2]);
                    sfx[3] += w * double(proj.normal_cam[id * 3]);
                    sfx[4] += w * double(proj.normal_cam[id * 3 + 1]);
                    sfx[5] += w * double(proj.normal_cam[id * 3 + 2]);
                    sfx[6] += w * double(proj.dist[id]);
                    sfx[7] += w;

                    if (clamped) continue;  // d a / d(alpha, G) = 0 at the clamp
                    const double dalpha = da * G;
                    const double dG = da * alpha_i;
                    slots[5] += dalpha;
                    // G = exp(power), power = -0.5(A dx² + C dy²) - B dx dy.
                    const double dpower = dG * G;
                    const double dx = double(x) - double(proj.mean2d[id * 2]);
                    const double dy = double(y) - double(proj.mean2d[id * 2 + 1]);
                    const double A = double(proj.conic[id * 3]);
                    const double Bc = double(proj.conic[id * 3 + 1]);
                    const double C = double(proj.conic[id * 3 + 2]);
                    slots[2] += dpower * (-0.5 * dx * dx);
                    slots[3] += dpower * (-dx * dy);
                    slots[4] += dpower * (-0.5 * dy * dy);
                    const double ddx = dpower * (-(A * dx + Bc * dy));
                    const double ddy = dpower * (-(C * dy + Bc * dx));
                    slots[0] -= ddx;
                    slots[1] -= ddy;
                }
            }
        }
    });
    std::vector<double> screen(n * kSlots, 0.0);
    for (const auto& part : partials) {
        if (part.empty()) continue;
        for (size_t k = 0; k < screen.size(); ++k) screen[k] += part[k];
    }

    // Phase 2: per-Gaussian geometric chain rule down to the raw parameters.
    const int B = set.basis_count();
    parallel_chunks(n, 256, [&](size_t begin, size_t end) {
        ProjectionScratch ps;
        double coeffs[16 * 3];
        for (size_t i = begin; i < end; ++i) {
            if (proj.culled[i]) continue;
            const double* slots = screen.data() + i * kSlots;
            bool any = false;
            for (int k = 0; k < kSlots; ++k)
                if (slots[k] != 0.0) any = true;
            if (!any) continue;
            if (!project_one(set, view, cfg, i, ps)) continue;

            const double du = slots[0], dv = slots[1];
            const double dA = slots[2], dB = slots[3], dC = slots[4];
            const double dalpha = slots[5];
            const double ddist_total = slots[6];
            const Vec3d dcolor(slots[7], slots[8], slots[9]);

            const double z = ps.m.z();
            const double fx = view.intr.fx, fy = view.intr.fy;

            // conic → 2D covariance.
            const Mat2d M = ps.cov2d.inverse();
            Mat2d Gm;
            Gm << dA, dB * 0.5, dB * 0.5, dC;
            const Mat2d dcov2d = -M * Gm * M;

            // 2D covariance → world covariance, J.
            const Eigen::Matrix<double, 2, 3> U = ps.J * view.pose.rotation;
            const Mat3d dSigma = U.transpose() * dcov2d * U;
            const Eigen::Matrix<double, 2, 3> dU = 2.0 * dcov2d * U * ps.Sigma;
            const Eigen::Matrix<double, 2, 3> dJ = dU * view.pose.rotation.transpose();

            // world covariance → rotation, log-scales.
            const Vec3d s2 = ps.s.cwiseProduct(ps.s);
            Mat3d dR3 = 2.0 * dSigma * ps.R3 * s2.asDiagonal();
            const Mat3d RtGR = ps.R3.transpose() * dSigma * ps.R3;
            Vec3d dlog_s;
            for (int k = 0; k < 3; ++k) dlog_s[k] = RtGR(k, k) * 2.0 * s2[k];

            // normal and plane-distance paths: d_i = m · n_cam.
            const Vec3d n_cam(double(proj.normal_cam[i * 3]), double(proj.normal_cam[i * 3 + 1]),
                              double(proj.normal_cam[i * 3 + 2]));
            const Vec3d dn_cam_total = Vec3d(slots[10], slots[11], slots[12]) + ddist_total * ps.m;
            Vec3d dm = ddist_total * n_cam;
            const Vec3d dn_world = view.pose.rotation.transpose() * dn_cam_total;
            const Vec3d dcol = double(proj.normal_sign[i]) * dn_world;
            Mat3d Gn = Mat3d::Zero();
            Gn.col(proj.normal_axis[i]) = dcol;
            dR3 += Gn;

            // rotation → quaternion (through normalization).
            Vec4d q_raw(double(set.rotations[i * 4]), double(set.rotations[i * 4 + 1]),
                        double(set.rotations[i * 4 + 2]), double(set.rotations[i * 4 + 3]));
            const Vec4d q_unit = q_raw.normalized();
            const Vec4d dq = quat_normalize_grad(q_raw, quat_rotmat_grad(q_unit, dR3));

            // mean2d and J → camera-frame center.
            dm.x() += du * fx / z;
            dm.y() += dv * fy / z;
            dm.z() += -du * fx * ps.m.x() / (z * z) - dv * fy * ps.m.y() / (z * z);
            dm.x() += dJ(0, 2) * (-fx / (z * z));
            dm.y() += dJ(1, 2) * (-fy / (z * z));
            dm.z() += dJ(0, 0) * (-fx / (z * z)) + dJ(1, 1) * (-fy / (z * z)) +
                      dJ(0, 2) * (2.0 * fx * ps.m.x() / (z * z * z)) + dJ(1, 2) * (2.0 * fy * ps.m.y() / (z * z * z));

            // SH color → coefficients and view direction.
            for (int k = 0; k < B * 3; ++k) coeffs[k] = double(set.sh[i * size_t(B) * 3 + k]);
            bool clamped[3];
            for (int ch = 0; ch < 3; ++ch) clamped[ch] = proj.color_clamped[i * 3 + ch] != 0;
            double dcoeffs[16 * 3] = {0};
            const Vec3d ddir = sh::eval_color_backward(set.sh_degree, coeffs, ps.dir, clamped, dcolor, dcoeffs);

            // Assemble world-space center gradient.
            Vec3d dmu = view.pose.rotation.transpose() * dm;
            dmu += (ddir - ps.dir * ps.dir.dot(ddir)) / ps.dir_len;

            // Opacity logit.
            const double alpha_i = double(proj.opacity[i]);
            const double dlogit = dalpha * alpha_i * (1.0 - alpha_i);

            for (int k = 0; k < 3; ++k) grads.centers[i * 3 + k] += T(dmu[k]);
            for (int k = 0; k < 4; ++k) grads.rotations[i * 4 + k] += T(dq[k]);
            for (int k = 0; k < 3; ++k) grads.log_scales[i * 3 + k] += T(dlog_s[k]);
            grads.opacity_logits[i] += T(dlogit);
            for (int k = 0; k < B * 3; ++k) grads.sh[i * size_t(B) * 3 + k] += T(dcoeffs[k]);
            grads.mean2d_grad_norm[i] += T(std::sqrt(du * du + dv * dv));
        }
    });
}

template struct ProjectedGaussians<float>;
template struct ProjectedGaussians<double>;
template struct RenderOutputs<float>;
template struct RenderOutputs<double>;

template ProjectedGaussians<float> project_to_screen<float>(const GaussianSet<float>&, const CameraView&,
                                                            const RenderConfig&);
template ProjectedGaussians<double> project_to_screen<double>(const GaussianSet<double>&, const CameraView&,
                                                              const RenderConfig&);
template RenderOutputs<float> render<float>(const GaussianSet<float>&, const CameraView&, const RenderConfig&);
template RenderOutputs<double> render<double>(const GaussianSet<double>&, const CameraView&, const RenderConfig&);
template void depth_quotient_backward<float>(const RenderOutputs<float>&, const CameraIntrinsics&,
                                             const Image<float>&, Image<float>&, Image<float>&);
template void depth_quotient_backward<double>(const RenderOutputs<double>&, const CameraIntrinsics&,
                                              const Image<double>&, Image<double>&, Image<double>&);
template void render_backward<float>(const GaussianSet<float>&, const CameraView&, const RenderConfig&,
                                     const RenderOutputs<float>&, const Image<float>&, const Image<float>&,
                                     const Image<float>&, const Image<float>&, ParamGrads<float>&);
template void render_backward<double>(const GaussianSet<double>&, const CameraView&, const RenderConfig&,
                                      const RenderOutputs<double>&, const Image<double>&, const Image<double>&,
                                      const Image<double>&, const Image<double>&, ParamGrads<double>&);

}  // namespace gssr
