#pragma once

#include "gssr/gaussians/gaussian_set.hpp"
#include "gssr/raster/rasterizer.hpp"

#include <cstdint>
#include <vector>

namespace gssr {

/// Moment-decay and stabilization constants of the first-order optimizer.
struct AdamConfig {
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-15;
};

/// Step sizes per parameter group. `centers` is the effective value used
/// this step; schedules live with the caller.
struct LearningRates {
    double centers = 1.6e-4;
    double rotations = 1e-3;
    double log_scales = 5e-3;
    double opacity_logits = 5e-2;
    double sh = 2.5e-3;
};

/// Per-group first and second moment accumulators plus the shared step
/// counter. Lengths always track the parameter lengths; density events are
/// carried across with remap/extend_to.
template <class T>
struct OptimizerState {
    long step = 0;
    std::vector<T> m_centers, v_centers;
    std::vector<T> m_rotations, v_rotations;
    std::vector<T> m_log_scales, v_log_scales;
    std::vector<T> m_opacity, v_opacity;
    std::vector<T> m_sh, v_sh;

    size_t size() const { return m_opacity.size(); }

    /// Zeroes all moments to the shapes of `set`; keeps the step counter.
    void init_like(const GaussianSet<T>& set);

    /// Rebuilds the moments after densify_and_prune: entry j of the new
    /// state copies the moments of Gaussian parent_of[j] of the old state.
    void remap(const std::vector<uint32_t>& parent_of, int basis_count);

    /// Appends zero moments for freshly added Gaussians up to count n.
    void extend_to(size_t n, int basis_count);
};

/// One bias-corrected moment update over every parameter group, followed by
/// quaternion renormalization. Gradient and state lengths must match the
/// parameter lengths (ShapeMismatch otherwise).
template <class T>
void optimizer_step(GaussianSet<T>& params, const ParamGrads<T>& grads, OptimizerState<T>& state,
                    const LearningRates& lr, const AdamConfig& adam = {});

#define GSSR_OPTIMIZER_DECL(T)                                                                          \
    extern template struct OptimizerState<T>;                                                           \
    extern template void optimizer_step<T>(GaussianSet<T>&, const ParamGrads<T>&, OptimizerState<T>&,   \
                                           const LearningRates&, const AdamConfig&);
GSSR_OPTIMIZER_DECL(float)
GSSR_OPTIMIZER_DECL(double)
#undef GSSR_OPTIMIZER_DECL

}  // namespace gssr
