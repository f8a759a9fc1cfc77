#pragma once

#include "gssr/core/image.hpp"
#include "gssr/core/rng.hpp"
#include "gssr/gaussians/gaussian_set.hpp"
#include "gssr/geometry/camera.hpp"
#include "gssr/raster/rasterizer.hpp"

#include <cstdint>
#include <vector>

namespace gssr {

/// Running per-Gaussian screen-space gradient statistics plus the thresholds
/// steering the clone/split/prune decisions. Statistic arrays always match
/// the Gaussian count; reset()/extend_to() keep them in sync across density
/// events.
struct DensifyState {
    double grad_threshold = 2e-4;   ///< densify when mean ‖dL/d(mean2d)‖ exceeds this
    double prune_opacity = 0.005;   ///< remove Gaussians whose α falls below this
    double max_screen_size = 0.0;   ///< screen-radius prune in pixels; ≤ 0 disables
    double scene_extent = 1.0;      ///< world reference scale for clone/split/prune

    std::vector<double> grad_accum;    ///< Σ over views of ‖dL/d(mean2d)‖
    std::vector<uint32_t> counts;      ///< number of views the Gaussian rasterized in
    std::vector<double> max_radius2d;  ///< largest screen radius seen since last reset

    size_t size() const { return grad_accum.size(); }

    /// Zeroes all statistics for a population of n Gaussians.
    void reset(size_t n) {
        grad_accum.assign(n, 0.0);
        counts.assign(n, 0);
        max_radius2d.assign(n, 0.0);
    }

    /// Grows the statistic arrays to n with zeroed tail entries (after
    /// appends); n must not shrink the arrays.
    void extend_to(size_t n) {
        grad_accum.resize(n, 0.0);
        counts.resize(n, 0);
        max_radius2d.resize(n, 0.0);
    }
};

/// Outcome of densify_and_prune, including the provenance map the optimizer
/// needs to carry moment vectors across the mutation: entry j of the result
/// set descends from Gaussian parent_of[j] of the input set.
struct DensifyStats {
    size_t cloned = 0;   ///< Gaussians replaced by two offset copies
    size_t split = 0;    ///< Gaussians replaced by two resampled, shrunken copies
    size_t pruned = 0;   ///< Gaussians removed by the α / extent tests
    std::vector<uint32_t> parent_of;
};

/// Per-view reinitialization budget: the predefined per-view sample count and
/// the per-pixel weights 1 − α_acc(p), each in [0, 1].
template <class T>
struct ResampleBudget {
    int n_per_view = 10000;
    Image<T> weights;
};

/// Folds one view's screen-space positional-gradient norms into the running
/// statistics. Only Gaussians actually rasterized in the view (not culled,
/// positive splat radius) contribute and have their count incremented.
template <class T>
void accumulate_gradients(DensifyState& state, const ParamGrads<T>& grads, const ProjectedGaussians<T>& proj);

/// Gradient-driven densify followed by prune. Every Gaussian whose mean
/// screen gradient exceeds grad_threshold is replaced by two copies: offset
/// to ±δ inside the parent footprint when its max scale < 0.01·scene_extent
/// (clone), or drawn from the parent's own distribution with scales divided
/// by 1.6 (split). Gaussians with α < prune_opacity or max world scale
/// > 0.1·scene_extent are then removed (screen-radius prune too, when
/// max_screen_size > 0), and the statistics reset to the new population.
template <class T>
DensifyStats densify_and_prune(GaussianSet<T>& set, DensifyState& state, Rng& rng);

/// Accumulated alpha of only the front Gaussians: the compositor re-run on
/// the subset passing select_front_gaussians against the rendered depth map
/// (within depth_tolerance, at pixels with coverage above mask_alpha).
/// `outputs` must be the render of `set` in this view and config.
template <class T>
Image<T> front_opacity_map(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg,
                           const RenderOutputs<T>& outputs, double depth_tolerance, double mask_alpha = 0.5);

/// N_new = round(n_per_view · mean(weights)), rounding half-up.
template <class T>
long reinit_sample_count(const Image<T>& weights, int n_per_view);

/// Draws reinit_sample_count(budget) pixels by multinomial sampling over
/// budget.weights with sentinel-depth pixels excluded before normalization,
/// then for each draw backprojects the filtered depth to world, carries the
/// filtered normal to world, and appends a flattened Gaussian of world
/// radius depth·2/(fx+fy)·radius_px colored from the observed image at that
/// pixel. Returns the number appended; zero (with a warning) when every
/// usable weight vanishes. Identical seeds reproduce identical draws.
template <class T>
size_t resample_view(GaussianSet<T>& set, const CameraView& view, const Image<T>& filtered_depth,
                     const Image<T>& filtered_normal, const Image<T>& observed, const ResampleBudget<T>& budget,
                     uint64_t rng_seed, double radius_px = 2.0);

#define GSSR_DENSITY_DECL(T)                                                                                     \
    extern template void accumulate_gradients<T>(DensifyState&, const ParamGrads<T>&, const ProjectedGaussians<T>&); \
    extern template DensifyStats densify_and_prune<T>(GaussianSet<T>&, DensifyState&, Rng&);                     \
    extern template Image<T> front_opacity_map<T>(const GaussianSet<T>&, const CameraView&, const RenderConfig&, \
                                                  const RenderOutputs<T>&, double, double);                      \
    extern template long reinit_sample_count<T>(const Image<T>&, int);                                           \
    extern template size_t resample_view<T>(GaussianSet<T>&, const CameraView&, const Image<T>&, const Image<T>&, \
                                            const Image<T>&, const ResampleBudget<T>&, uint64_t, double);
GSSR_DENSITY_DECL(float)
GSSR_DENSITY_DECL(double)
#undef GSSR_DENSITY_DECL

}  // namespace gssr
