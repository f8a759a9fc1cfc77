#pragma once

#include "gssr/geometry/camera.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gssr {

/// One camera of a persisted dataset plus the relative paths of its images.
/// Depth/normal paths may be empty when no ground truth was stored.
struct SceneViewEntry {
    CameraIntrinsics intr;
    CameraPose pose;
    std::string image;
    std::string depth;
    std::string normal;
};

/// Contents of a scene.txt: scene identity and the per-view camera blocks.
struct SceneFile {
    std::string name;
    std::uint64_t seed = 0;
    std::string gt_points;  ///< relative path of the GT surface-sample PLY
    std::vector<SceneViewEntry> views;
};

/// Writes the human-readable scene file; numbers keep full double precision
/// so write/read round-trips are exact.
void scene_txt_write(const SceneFile& scene, const std::string& path);

/// Parses a scene file written by scene_txt_write. Blank lines and lines
/// starting with '#' are ignored; malformed content throws IoError.
SceneFile scene_txt_read(const std::string& path);

}  // namespace gssr
