#pragma once

#include "gssr/core/image.hpp"

#include <string>

namespace gssr {

/// Writes a float image as a raw little-endian float32 dump, row-major, with
/// a 16-byte header: magic "GSRF" then uint32 height, width, channels.
void raw_write(const Image<float>& img, const std::string& path);

/// Reads a raw_write dump; throws IoError on bad magic or truncation.
Image<float> raw_read(const std::string& path);

}  // namespace gssr
