#pragma once

#include "gssr/core/image.hpp"
#include "gssr/geometry/camera.hpp"
#include "gssr/io/point_ply.hpp"
#include "gssr/synth/scene.hpp"

#include <string>
#include <vector>

namespace gssr {

/// One reference view: camera, observed RGB, and the exact depth (camera z,
/// 0 where no surface) and camera-frame camera-facing normal maps.
struct ViewRecord {
    CameraIntrinsics intr;
    CameraPose pose;
    Image<float> image;      ///< H×W×3 in [0,1]
    Image<float> gt_depth;   ///< H×W
    Image<float> gt_normal;  ///< H×W×3
};

/// An in-memory dataset: all views plus the GT surface samples.
struct Dataset {
    std::string name;
    std::uint64_t seed = 0;
    std::vector<ViewRecord> views;
    PointCloud gt_samples;
};

/// Renders every rig camera and draws `gt_sample_count` surface samples.
Dataset build_dataset(const GroundTruthScene& scene, size_t gt_sample_count = 20000);

/// Builds the dataset and persists it under out_dir: scene.txt, per-view
/// PNGs, raw-float GT depth/normal dumps, and the GT sample PLY. Identical
/// scenes produce byte-identical directories.
void generate_dataset(const GroundTruthScene& scene, const std::string& out_dir, size_t gt_sample_count = 20000);

/// Loads a dataset persisted by generate_dataset from its scene.txt path.
Dataset load_dataset(const std::string& scene_txt_path);

}  // namespace gssr
