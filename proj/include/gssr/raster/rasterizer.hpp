#pragma once

#include "gssr/core/image.hpp"
#include "gssr/core/types.hpp"
#include "gssr/gaussians/gaussian_set.hpp"
#include "gssr/geometry/camera.hpp"

#include <cstdint>
#include <vector>

namespace gssr {

class MissingContributorLists : public GssrError {
  public:
    explicit MissingContributorLists(const std::string& msg)
        : GssrError("missing contributor lists: " + msg) {}
};

struct RenderConfig {
    int tile_size = 16;
    double alpha_cutoff = 1.0 / 255.0;     ///< skip contributions below this alpha
    double transmittance_floor = 1e-4;     ///< stop compositing when T drops below
    double gaussian_extent_sigmas = 3.0;   ///< splat radius in standard deviations
    double alpha_floor = 0.5;              ///< coverage needed for a valid depth / loss pixel
    double near_plane = 0.01;              ///< cull Gaussians at or behind this camera depth
};

/// Per-Gaussian view-dependent quantities from EWA projection. Entries for
/// culled Gaussians are zero and must not be read.
template <class T>
struct ProjectedGaussians {
    size_t count = 0;
    std::vector<uint8_t> culled;
    std::vector<T> mean2d;         ///< N×2 pixel coordinates of the projected center
    std::vector<T> conic;          ///< N×3 inverse 2D covariance (a, b, c)
    std::vector<T> radius;         ///< N splat radius r_i in pixels
    std::vector<T> depth;          ///< N camera-frame center depth z_i
    std::vector<T> dist;           ///< N tangent-plane distance d_i (negative: camera-facing)
    std::vector<T> normal_cam;     ///< N×3 camera-frame unit normal n_i
    std::vector<T> color;          ///< N×3 SH-evaluated RGB
    std::vector<uint8_t> color_clamped;  ///< N×3 lower-clamp flags from SH evaluation
    std::vector<int8_t> normal_sign;     ///< ±1 camera-facing flip applied to the min axis column
    std::vector<uint8_t> normal_axis;    ///< argmin scale axis index
    std::vector<T> opacity;              ///< activated per-Gaussian opacity
};

/// One composited contribution: which Gaussian, its 2D falloff G at the
/// pixel, and the transmittance T in force when it was blended.
template <class T>
struct Contributor {
    uint32_t id;
    T gweight;
    T transmittance;
};

template <class T>
struct RenderOutputs {
    Image<T> color;     ///< H×W×3
    Image<T> normal;    ///< H×W×3 raw alpha-blended camera-frame normal N(p)
    Image<T> distance;  ///< H×W raw alpha-blended plane distance d(p)
    Image<T> depth;     ///< H×W unbiased depth D(p); 0 where coverage < alpha_floor
    Image<T> alpha;     ///< H×W accumulated alpha

    /// Per-pixel contributor lists in compositing order (front to back);
    /// pixel (x, y) owns contribs[contrib_offsets[y*W+x] .. contrib_offsets[y*W+x+1]).
    std::vector<uint32_t> contrib_offsets;
    std::vector<Contributor<T>> contribs;

    ProjectedGaussians<T> projected;  ///< retained for the backward pass and losses

    bool has_contributors() const { return !contrib_offsets.empty(); }
};

/// Gradient accumulators mirroring GaussianSet's parameter arrays, plus the
/// per-view screen-space positional gradient magnitude used by densification.
template <class T>
struct ParamGrads {
    std::vector<T> centers;
    std::vector<T> rotations;
    std::vector<T> log_scales;
    std::vector<T> opacity_logits;
    std::vector<T> sh;
    std::vector<T> mean2d_grad_norm;  ///< ‖dL/d(mean2d)‖ accumulated this pass

    void resize_like(const GaussianSet<T>& set) {
        centers.assign(set.centers.size(), T(0));
        rotations.assign(set.rotations.size(), T(0));
        log_scales.assign(set.log_scales.size(), T(0));
        opacity_logits.assign(set.opacity_logits.size(), T(0));
        sh.assign(set.sh.size(), T(0));
        mean2d_grad_norm.assign(set.size(), T(0));
    }
};

/// EWA projection of every Gaussian into the view: 2D mean/conic/radius,
/// camera depth z_i, tangent-plane distance d_i, camera-frame normal, and
/// SH color. Gaussians behind the near plane or far outside the frustum are
/// flagged culled.
template <class T>
ProjectedGaussians<T> project_to_screen(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg);

/// Depth-sorted, tile-bucketed alpha compositing of color, normal, plane
/// distance, and alpha, plus the unbiased depth map
/// D(p) = d(p) / (N̂(p)ᵀ K⁻¹ p̃) with N̂ the renormalized blended normal.
/// Contributor lists are retained for render_backward.
template <class T>
RenderOutputs<T> render(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg);

/// Analytic adjoint of render: given per-pixel gradients of the color,
/// raw normal, raw distance, and alpha maps, accumulates parameter
/// gradients into `grads` (+=). Gradients w.r.t. the depth map must first be
/// converted with depth_quotient_backward. Throws MissingContributorLists
/// if outputs lack the retained lists.
template <class T>
void render_backward(const GaussianSet<T>& set, const CameraView& view, const RenderConfig& cfg,
                     const RenderOutputs<T>& outputs, const Image<T>& grad_color, const Image<T>& grad_normal,
                     const Image<T>& grad_distance, const Image<T>& grad_alpha, ParamGrads<T>& grads);

/// Chain rule through D(p) = d(p)/(N̂(p)ᵀK⁻¹p̃): converts a depth-map
/// adjoint into raw normal-map and distance-map adjoints (accumulated +=).
/// Sentinel pixels (depth == 0) receive no gradient.
template <class T>
void depth_quotient_backward(const RenderOutputs<T>& outputs, const CameraIntrinsics& intr,
                             const Image<T>& grad_depth, Image<T>& grad_normal, Image<T>& grad_distance);

extern template struct ProjectedGaussians<float>;
extern template struct ProjectedGaussians<double>;
extern template struct RenderOutputs<float>;
extern template struct RenderOutputs<double>;

}  // namespace gssr
