#pragma once

#include "gssr/core/image.hpp"

namespace gssr {

/// Mean single-scale SSIM between two same-shape images, 11×11 Gaussian
/// window (σ = 1.5), stabilizers C1 = 0.01², C2 = 0.03² for unit dynamic
/// range. The map is evaluated on the valid region (window fully inside) and
/// averaged over pixels and channels. When grad_a is given, grad_scale times
/// the derivative of the mean w.r.t. image a is accumulated into it.
/// Throws DimensionMismatch on shape mismatch or images smaller than the
/// window.
template <class T>
double ssim(const Image<T>& a, const Image<T>& b, Image<T>* grad_a = nullptr, double grad_scale = 1.0);

extern template double ssim<float>(const Image<float>&, const Image<float>&, Image<float>*, double);
extern template double ssim<double>(const Image<double>&, const Image<double>&, Image<double>*, double);

}  // namespace gssr
