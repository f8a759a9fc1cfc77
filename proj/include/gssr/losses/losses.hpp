#pragma once

#include "gssr/core/image.hpp"
#include "gssr/gaussians/gaussian_set.hpp"
#include "gssr/geometry/camera.hpp"
#include "gssr/raster/rasterizer.hpp"

#include <cstdint>
#include <vector>

namespace gssr {

/// Term weights of the combined training objective.
struct LossWeights {
    double lambda_normal = 0.015;     ///< pixel normal consistency
    double lambda_normal_g = 0.0075;  ///< per-Gaussian normal alignment
    double lambda_opacity = 0.0001;   ///< binary-opacity pressure
    double lambda_mv = 0.15;          ///< multi-view photometric
    double lambda_mv_g = 0.15;        ///< per-Gaussian multi-view photometric
    double lambda_scale = 100.0;      ///< minimum-scale flattening
    double rgb_dssim_mix = 0.2;       ///< D-SSIM share inside the RGB term
};

/// Knobs of the photometric machinery.
struct LossConfig {
    int ncc_patch = 7;               ///< square patch side for NCC terms
    int mv_stride = 2;               ///< pixel sampling stride of the mv loss
    double mask_alpha = 0.5;         ///< pixels below this accumulated alpha are masked
    double depth_tolerance = 0.04;   ///< absolute front-selection tolerance (0.01·scene_extent)
};

/// Unweighted per-term values plus the weighted total.
struct LossValues {
    double rgb = 0;
    double normal = 0;
    double normal_g = 0;
    double opacity = 0;
    double mv = 0;
    double mv_g = 0;
    double scale = 0;
    double total = 0;
};

double combine_total(const LossValues& v, const LossWeights& w);

/// Gaussians whose center depth lies in front of the rendered surface, with
/// their projected centers and selection-time ψ weights.
struct FrontSelection {
    std::vector<uint32_t> indices;
    std::vector<int> px, py;      ///< nearest pixel of the projected center
    std::vector<double> u, v;     ///< subpixel projected center
    std::vector<double> z;        ///< camera-frame center depth
    std::vector<double> radius;   ///< screen radius r_i in pixels (constant in losses)
    std::vector<double> psi;      ///< ψ(i) = α_i · r_i at selection time
    size_t size() const { return indices.size(); }
};

/// Everything the multi-view terms need to know about the neighbor view.
template <class T>
struct NeighborData {
    const CameraView* view = nullptr;
    const RenderOutputs<T>* outputs = nullptr;
    const Image<T>* gray = nullptr;  ///< observed neighbor image, grayscale
};

/// (1−m)·L1 + m·(1−SSIM)/2 between rendered and observed color.
/// grad_weight times the gradient is accumulated into grad_rendered.
template <class T>
double rgb_loss(const Image<T>& rendered, const Image<T>& observed, double dssim_mix, double grad_weight,
                Image<T>& grad_rendered);

/// Mean minimum activated scale; the gradient reaches only the argmin
/// log-scale of each Gaussian (ties break to the lowest index).
template <class T>
double scale_loss(const GaussianSet<T>& set, double grad_weight, ParamGrads<T>& grads);

/// Mean of log α̂ + log(1−α̂) with α̂ clamped to [1e-4, 1−1e-4]; minimizing
/// pushes opacities toward 0 or 1.
template <class T>
double opacity_loss(const GaussianSet<T>& set, double grad_weight, ParamGrads<T>& grads);

/// Mean L1 gap between depth-implied normals (n_depth, precomputed via
/// depth_to_normal on outputs.depth) and renormalized rendered normals over
/// unmasked pixels. Both gradient paths are live: into the rendered normal
/// map directly, and into the depth map (hence the normal/distance maps
/// through the unbiased-depth quotient).
template <class T>
double normal_consistency_loss(const RenderOutputs<T>& outputs, const CameraIntrinsics& intr,
                               const Image<T>& n_depth, double mask_alpha, double grad_weight,
                               Image<T>& grad_normal, Image<T>& grad_distance);

/// Plane-induced multi-view photometric loss: for sampled reference pixels,
/// warp a k×k patch into the neighbor view by the homography of the rendered
/// local plane and score 1−NCC, weighted by the forward-backward
/// reprojection weight (computed from the neighbor's rendered geometry,
/// treated as constant). Gradients flow into the reference normal and
/// distance maps only.
template <class T>
double multiview_photometric_loss(const CameraView& ref_view, const CameraView& nbr_view,
                                  const RenderOutputs<T>& ref_outputs, const RenderOutputs<T>& nbr_outputs,
                                  const Image<T>& ref_gray, const Image<T>& nbr_gray, const LossConfig& lcfg,
                                  double grad_weight, Image<T>& grad_normal, Image<T>& grad_distance);

/// Gaussians in front of the rendered surface: projected center in bounds,
/// alpha_acc at the center above mask_alpha, z_i < D(p_i) + depth_tolerance.
/// `outputs` must be the render of this very set in this view (the retained
/// projection is reused); anything else throws DimensionMismatch.
template <class T>
FrontSelection select_front_gaussians(const GaussianSet<T>& set, const CameraView& view,
                                      const RenderOutputs<T>& outputs, double depth_tolerance,
                                      double mask_alpha = 0.5);

/// ψ-weighted L1 alignment of per-Gaussian normals to the depth-implied
/// normal at the projected center (nearest pixel, stop-gradient). ψ is the
/// frozen selection-time weight; gradients reach the rotations.
template <class T>
double gaussian_normal_loss(const GaussianSet<T>& set, const FrontSelection& sel, const CameraView& view,
                            const Image<T>& n_depth, double grad_weight, ParamGrads<T>& grads);

/// ψ-weighted per-Gaussian photometric term: NCC between the reference patch
/// at the (frozen) projected center and the neighbor patch warped by the
/// homography of the Gaussian's own tangent plane. Gradients flow through
/// n_i, d_i into centers and rotations and through ψ's live α_i into the
/// opacity logits; r_i and the patch center are constants.
template <class T>
double gaussian_multiview_loss(const GaussianSet<T>& set, const FrontSelection& sel, const CameraView& ref_view,
                               const CameraView& nbr_view, const Image<T>& ref_gray, const Image<T>& nbr_gray,
                               const LossConfig& lcfg, double grad_weight, ParamGrads<T>& grads);

/// Full objective for one reference view: evaluates every enabled term,
/// routes the image-space adjoints through render_backward, and accumulates
/// parameter gradients. Multi-view terms run only when nbr.view is set; the
/// instance-level terms only when enable_instance is true.
template <class T>
LossValues eval_losses(const GaussianSet<T>& set, const CameraView& view, const RenderOutputs<T>& outputs,
                       const Image<T>& observed, const Image<T>& observed_gray, const NeighborData<T>& nbr,
                       bool enable_instance, const LossWeights& weights, const LossConfig& lcfg,
                       const RenderConfig& rcfg, ParamGrads<T>& grads);

#define GSSR_LOSSES_DECL(T)                                                                                        \
    extern template double rgb_loss<T>(const Image<T>&, const Image<T>&, double, double, Image<T>&);               \
    extern template double scale_loss<T>(const GaussianSet<T>&, double, ParamGrads<T>&);                           \
    extern template double opacity_loss<T>(const GaussianSet<T>&, double, ParamGrads<T>&);                         \
    extern template double normal_consistency_loss<T>(const RenderOutputs<T>&, const CameraIntrinsics&,            \
                                                      const Image<T>&, double, double, Image<T>&, Image<T>&);      \
    extern template double multiview_photometric_loss<T>(const CameraView&, const CameraView&,                     \
                                                         const RenderOutputs<T>&, const RenderOutputs<T>&,         \
                                                         const Image<T>&, const Image<T>&, const LossConfig&,      \
                                                         double, Image<T>&, Image<T>&);                            \
    extern template FrontSelection select_front_gaussians<T>(const GaussianSet<T>&, const CameraView&,             \
                                                             const RenderOutputs<T>&, double, double);             \
    extern template double gaussian_normal_loss<T>(const GaussianSet<T>&, const FrontSelection&,                   \
                                                   const CameraView&, const Image<T>&, double, ParamGrads<T>&);    \
    extern template double gaussian_multiview_loss<T>(const GaussianSet<T>&, const FrontSelection&,                \
                                                      const CameraView&, const CameraView&, const Image<T>&,       \
                                                      const Image<T>&, const LossConfig&, double, ParamGrads<T>&); \
    extern template LossValues eval_losses<T>(const GaussianSet<T>&, const CameraView&, const RenderOutputs<T>&,   \
                                              const Image<T>&, const Image<T>&, const NeighborData<T>&, bool,      \
                                              const LossWeights&, const LossConfig&, const RenderConfig&,          \
                                              ParamGrads<T>&);
GSSR_LOSSES_DECL(float)
GSSR_LOSSES_DECL(double)
#undef GSSR_LOSSES_DECL

}  // namespace gssr
