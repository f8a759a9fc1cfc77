#pragma once

#include "gssr/core/types.hpp"

#include <array>
#include <cstdint>
#include <string>
#include <vector>

namespace gssr {

/// Plain point cloud with optional per-point normals and 8-bit colors;
/// auxiliary arrays are either empty or the same length as `points`.
struct PointCloud {
    std::vector<Vec3d> points;
    std::vector<Vec3d> normals;
    std::vector<std::array<std::uint8_t, 3>> colors;

    size_t size() const { return points.size(); }
};

/// Writes a binary little-endian PLY with float32 x,y,z, optional float32
/// nx,ny,nz, and optional uchar red,green,blue.
void point_ply_write(const PointCloud& cloud, const std::string& path);

/// Reads a PLY written by point_ply_write. Throws IoError on malformed or
/// unsupported content.
PointCloud point_ply_read(const std::string& path);

}  // namespace gssr
