#pragma once

#include "gssr/core/types.hpp"
#include "gssr/gaussians/gaussian_set.hpp"

#include <string>

namespace gssr {

class MalformedPly : public GssrError {
  public:
    explicit MalformedPly(const std::string& msg) : GssrError("malformed ply: " + msg) {}
};

/// Writes a binary little-endian PLY with the de-facto 3DGS field layout:
/// x,y,z, nx,ny,nz (derived min-axis normals), f_dc_0..2, f_rest_*
/// (channel-major), opacity (logit), scale_0..2 (log), rot_0..3 (w first).
void ply_write(const GaussianSet<float>& set, const std::string& path);

/// Reads a PLY produced by ply_write or a compatible 3DGS exporter. Unknown
/// properties are skipped; all recognized fields must be 32-bit floats.
GaussianSet<float> ply_read(const std::string& path);

}  // namespace gssr
