#pragma once

#include "gssr/core/image.hpp"
#include "gssr/geometry/camera.hpp"

namespace gssr {

/// Camera-frame normals from depth gradients: per pixel, backproject the
/// 4-neighborhood P = D · K⁻¹ p̃ and take n = normalize((P_right − P_left) ×
/// (P_down − P_up)), sign-flipped toward the camera. Border pixels and pixels
/// whose center or 4-neighborhood touches a 0-sentinel get the invalid
/// sentinel (0,0,0).
template <class T>
Image<T> depth_to_normal(const Image<T>& depth, const CameraIntrinsics& intr);

/// Adjoint of depth_to_normal: scatters grad_normals back onto grad_depth.
/// `normals` must be the matching forward output; invalid pixels are skipped.
template <class T>
void depth_to_normal_backward(const Image<T>& depth, const CameraIntrinsics& intr, const Image<T>& normals,
                              const Image<T>& grad_normals, Image<T>& grad_depth);

/// Cross-bilateral filter over a (2·ceil(2·spatial_sigma)+1)² window with
/// spatial and guide-depth range kernels. Pixels whose guide depth is the
/// 0-sentinel are excluded from both numerator and denominator; a sentinel
/// center passes through unchanged. With renormalize_vectors the filtered
/// 3-channel output is renormalized to unit length (for normal maps).
template <class T>
Image<T> bilateral_filter(const Image<T>& map, const Image<T>& guide_depth, double spatial_sigma, double range_sigma,
                          bool renormalize_vectors = false);

extern template Image<float> depth_to_normal<float>(const Image<float>&, const CameraIntrinsics&);
extern template Image<double> depth_to_normal<double>(const Image<double>&, const CameraIntrinsics&);
extern template void depth_to_normal_backward<float>(const Image<float>&, const CameraIntrinsics&,
                                                     const Image<float>&, const Image<float>&, Image<float>&);
extern template void depth_to_normal_backward<double>(const Image<double>&, const CameraIntrinsics&,
                                                      const Image<double>&, const Image<double>&, Image<double>&);
extern template Image<float> bilateral_filter<float>(const Image<float>&, const Image<float>&, double, double, bool);
extern template Image<double> bilateral_filter<double>(const Image<double>&, const Image<double>&, double, double,
                                                       bool);

}  // namespace gssr
