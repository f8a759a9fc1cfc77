#include "gssr/density/density.hpp"

#include "gssr/core/log.hpp"
#include "gssr/losses/losses.hpp"

#include <algorithm>
#include <cmath>

namespace gssr {

template <class T>
void accumulate_gradients(DensifyState& state, const ParamGrads<T>& grads, const ProjectedGaussians<T>& proj) {
    if (state.size() != proj.count || grads.mean2d_grad_norm.size() != proj.count)
        throw DimensionMismatch("accumulate_gradients: state/grads/projection sizes differ");
    for (size_t i = 0; i < proj.count; ++i) {
        if (proj.culled[i] || !(proj.radius[i] > T(0))) continue;
        state.grad_accum[i] += double(grads.mean2d_grad_norm[i]);
        state.counts[i] += 1;
        state.max_radius2d[i] = std::max(state.max_radius2d[i], double(proj.radius[i]));
    }
}

namespace {

/// Copies Gaussian i of src onto the end of dst, overriding its center and
/// log scales; rotation, opacity, and SH coefficients carry over.
template <class T>
void emit_child(GaussianSet<T>& dst, const GaussianSet<T>& src, size_t i, const Vec3<T>& center,
                const Vec3<T>& log_scales) {
    for (int k = 0; k < 3; ++k) dst.centers.push_back(center[k]);
    for (int k = 0; k < 4; ++k) dst.rotations.push_back(src.rotations[i * 4 + k]);
    for (int k = 0; k < 3; ++k) dst.log_scales.push_back(log_scales[k]);
    dst.opacity_logits.push_back(src.opacity_logits[i]);
    const size_t b3 = size_t(src.basis_count()) * 3;
    dst.sh.insert(dst.sh.end(), src.sh.begin() + i * b3, src.sh.begin() + (i + 1) * b3);
}

}  // namespace

template <class T>
DensifyStats densify_and_prune(GaussianSet<T>& set, DensifyState& state, Rng& rng) {
    const size_t n = set.size();
    if (state.size() != n) throw DimensionMismatch("densify_and_prune: state does not match the Gaussian count");

    DensifyStats stats;
    const double clone_below = 0.01 * state.scene_extent;
    const T split_shrink = T(std::log(1.6));

    GaussianSet<T> grown;
    grown.sh_degree = set.sh_degree;
    std::vector<uint32_t> parent;
    parent.reserve(n + n / 8);

    for (size_t i = 0; i < n; ++i) {
        const double mean_grad = state.counts[i] > 0 ? state.grad_accum[i] / double(state.counts[i]) : 0.0;
        const Vec4<T> q = set.rotation(i);
        const T qnorm = q.norm();
        if (mean_grad > state.grad_threshold && qnorm > T(1e-12)) {
            const Mat3<T> R = quat_rotmat<T>(Vec4<T>(q / qnorm));
            const Vec3<T> c = set.center(i);
            const Vec3<T> s = set.scale(i);
            const Vec3<T> logs(set.log_scales[i * 3], set.log_scales[i * 3 + 1], set.log_scales[i * 3 + 2]);
            if (double(s.maxCoeff()) < clone_below) {
                // Clone: the pair straddles the parent center inside its
                // one-sigma footprint, preserving the population mean.
                Vec3<T> u;
                for (int k = 0; k < 3; ++k) u[k] = T(rng.uniform(-1.0, 1.0));
                const Vec3<T> delta = R * Vec3<T>(s.cwiseProduct(u));
                emit_child(grown, set, i, Vec3<T>(c + delta), logs);
                emit_child(grown, set, i, Vec3<T>(c - delta), logs);
                stats.cloned++;
            } else {
                // Split: two positions drawn from the parent's own
                // distribution, scales divided by 1.6.
                const Vec3<T> shrunk = logs - Vec3<T>::Constant(split_shrink);
                for (int copy = 0; copy < 2; ++copy) {
                    Vec3<T> xi;
                    for (int k = 0; k < 3; ++k) xi[k] = T(rng.normal());
                    emit_child(grown, set, i, Vec3<T>(c + R * Vec3<T>(s.cwiseProduct(xi))), shrunk);
                }
                stats.split++;
            }
            parent.push_back(uint32_t(i));
            parent.push_back(uint32_t(i));
        } else {
            emit_child(grown, set, i, set.center(i),
                       Vec3<T>(set.log_scales[i * 3], set.log_scales[i * 3 + 1], set.log_scales[i * 3 + 2]));
            parent.push_back(uint32_t(i));
        }
    }

    const double extent_limit = 0.1 * state.scene_extent;
    std::vector<uint8_t> keep(grown.size(), 1);
    for (size_t j = 0; j < grown.size(); ++j) {
        const bool faint = double(grown.opacity(j)) < state.prune_opacity;
        const bool oversized = double(grown.scale(j).maxCoeff()) > extent_limit;
        const bool too_big_on_screen =
            state.max_screen_size > 0.0 && state.max_radius2d[parent[j]] > state.max_screen_size;
        if (faint || oversized || too_big_on_screen) {
            keep[j] = 0;
            stats.pruned++;
        }
    }

    GaussianSet<T> result = grown.filtered(keep);
    stats.parent_of.reserve(result.size());
    for (size_t j = 0; j < grown.size(); ++j)
        if (keep[j]) stats.parent_of.push_back(parent[j]);

    set = std::move(result);
    state.reset(set.size());
    return stats;
}

template <class T>
Image<T> front_opacity_map(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg,
                           const RenderOutputs<T>& outputs, double depth_tolerance, double mask_alpha) {
    const FrontSelection sel = select_front_gaussians(set, view, outputs, depth_tolerance, mask_alpha);
    if (sel.size() == 0) return Image<T>(outputs.alpha.width, outputs.alpha.height, 1, T(0));
    std::vector<uint8_t> keep(set.size(), 0);
    for (const uint32_t id : sel.indices) keep[id] = 1;
    const GaussianSet<T> front = set.filtered(keep);
    return render(front, view, cfg).alpha;
}

template <class T>
long reinit_sample_count(const Image<T>& weights, int n_per_view) {
    const size_t total = size_t(weights.width) * size_t(weights.height);
    if (total == 0 || n_per_view <= 0) return 0;
    double sum = 0.0;
    for (size_t p = 0; p < total; ++p) sum += double(weights.data[p]);
    return long(std::floor(double(n_per_view) * (sum / double(total)) + 0.5));
}

template <class T>
size_t resample_view(GaussianSet<T>& set, const CameraView& view, const Image<T>& filtered_depth,
                     const Image<T>& filtered_normal, const Image<T>& observed, const ResampleBudget<T>& budget,
                     uint64_t rng_seed, double radius_px) {
    const int w = filtered_depth.width, h = filtered_depth.height;
    if (filtered_depth.channels != 1 || budget.weights.width != w || budget.weights.height != h ||
        budget.weights.channels != 1)
        throw DimensionMismatch("resample_view: depth/weight maps must be H×W×1 and agree");
    if (filtered_normal.width != w || filtered_normal.height != h || filtered_normal.channels != 3 ||
        observed.width != w || observed.height != h || observed.channels != 3)
        throw DimensionMismatch("resample_view: normal/observed maps must be H×W×3");

    const long n_new = reinit_sample_count(budget.weights, budget.n_per_view);
    if (n_new <= 0) return 0;

    // Cumulative weights with sentinel-depth pixels zeroed before
    // normalization; zero-weight pixels can never be drawn because they do
    // not advance the cumulative sum.
    std::vector<double> cumulative(size_t(w) * size_t(h));
    double total = 0.0;
    size_t last_positive = 0;
    for (size_t p = 0; p < cumulative.size(); ++p) {
        const double weight = filtered_depth.data[p] > T(0) ? double(budget.weights.data[p]) : 0.0;
        if (weight > 0.0) last_positive = p;
        total += weight;
        cumulative[p] = total;
    }
    if (!(total > 0.0)) {
        log_warn("resample_view: weight map is empty, nothing to add");
        return 0;
    }

    Rng rng(rng_seed);
    const double radius_per_depth = radius_px * 2.0 / (view.intr.fx + view.intr.fy);
    const Mat3d cam_to_world = view.pose.rotation.transpose();
    size_t appended = 0;
    for (long k = 0; k < n_new; ++k) {
        const double r = rng.uniform(0.0, total);
        size_t p = size_t(std::upper_bound(cumulative.begin(), cumulative.end(), r) - cumulative.begin());
        if (p >= cumulative.size()) p = last_positive;
        const int x = int(p % size_t(w)), y = int(p / size_t(w));

        const double depth = double(filtered_depth(x, y));
        Vec3d n_cam(double(filtered_normal(x, y, 0)), double(filtered_normal(x, y, 1)),
                    double(filtered_normal(x, y, 2)));
        if (n_cam.norm() < 1e-12) continue;  // degenerate filtered normal; skip the draw

        const Vec3d position = backproject(Vec2d(double(x), double(y)), depth, view.intr, view.pose);
        const Vec3d n_world = cam_to_world * n_cam;
        const Vec3<T> color(observed(x, y, 0), observed(x, y, 1), observed(x, y, 2));
        set.append(create_flattened<T>(position.cast<T>(), n_world.cast<T>(), T(depth * radius_per_depth), color,
                                       set.sh_degree));
        ++appended;
    }
    return appended;
}

#define GSSR_DENSITY_IMPL(T)                                                                                     \
    template void accumulate_gradients<T>(DensifyState&, const ParamGrads<T>&, const ProjectedGaussians<T>&);    \
    template DensifyStats densify_and_prune<T>(GaussianSet<T>&, DensifyState&, Rng&);                            \
    template Image<T> front_opacity_map<T>(const GaussianSet<T>&, const CameraView&, const RenderConfig&,        \
                                           const RenderOutputs<T>&, double, double);                             \
    template long reinit_sample_count<T>(const Image<T>&, int);                                                  \
    template size_t resample_view<T>(GaussianSet<T>&, const CameraView&, const Image<T>&, const Image<T>&,       \
                                     const Image<T>&, const ResampleBudget<T>&, uint64_t, double);
GSSR_DENSITY_IMPL(float)
GSSR_DENSITY_IMPL(double)
#undef GSSR_DENSITY_IMPL

}  // namespace gssr
