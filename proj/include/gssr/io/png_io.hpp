#pragma once

#include "gssr/core/image.hpp"

#include <string>

namespace gssr {

/// Writes a 1- or 3-channel float image in [0,1] as an 8-bit PNG
/// (values rounded, out-of-range clamped). Throws IoError on file or
/// encoder failure, DimensionMismatch for other channel counts.
void png_write(const Image<float>& img, const std::string& path);

/// Reads an 8- or 16-bit PNG into a float image in [0,1]. Grayscale stays
/// single-channel; palette and RGBA inputs come back as 3-channel RGB.
Image<float> png_read(const std::string& path);

}  // namespace gssr
