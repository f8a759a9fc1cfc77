#include "gssr/synth/dataset.hpp"

#include "gssr/core/log.hpp"
#include "gssr/io/png_io.hpp"
#include "gssr/io/raw_io.hpp"
#include "gssr/io/scene_txt.hpp"
#include "gssr/synth/raytrace.hpp"

#include <cstdio>
#include <filesystem>

namespace gssr {

Dataset build_dataset(const GroundTruthScene& scene, size_t gt_sample_count) {
    Dataset ds;
    ds.name = scene.name;
    ds.seed = scene.seed;
    const std::vector<CameraView> cameras = rig_cameras(scene.rig);
    ds.views.reserve(cameras.size());
    for (const CameraView& cam : cameras) ds.views.push_back(render_reference(scene, cam));
    ds.gt_samples = sample_gt_points(scene, gt_sample_count, scene.seed);
    return ds;
}

namespace {

std::string view_file(const char* dir, const char* stem, size_t index, const char* ext) {
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%s/%s_%03zu.%s", dir, stem, index, ext);
    return buf;
}

}  // namespace

void generate_dataset(const GroundTruthScene& scene, const std::string& out_dir, size_t gt_sample_count) {
    namespace fs = std::filesystem;
    const Dataset ds = build_dataset(scene, gt_sample_count);

    fs::create_directories(fs::path(out_dir) / "images");
    fs::create_directories(fs::path(out_dir) / "gt");

    SceneFile file;
    file.name = ds.name;
    file.seed = ds.seed;
    file.gt_points = "gt/points.ply";
    point_ply_write(ds.gt_samples, (fs::path(out_dir) / file.gt_points).string());

    for (size_t i = 0; i < ds.views.size(); ++i) {
        const ViewRecord& view = ds.views[i];
        SceneViewEntry entry;
        entry.intr = view.intr;
        entry.pose = view.pose;
        entry.image = view_file("images", "view", i, "png");
        entry.depth = view_file("gt", "depth", i, "raw");
        entry.normal = view_file("gt", "normal", i, "raw");
        png_write(view.image, (fs::path(out_dir) / entry.image).string());
        raw_write(view.gt_depth, (fs::path(out_dir) / entry.depth).string());
        raw_write(view.gt_normal, (fs::path(out_dir) / entry.normal).string());
        file.views.push_back(entry);
    }

    scene_txt_write(file, (fs::path(out_dir) / "scene.txt").string());
    log_info("generate_dataset: wrote %zu views to %s", ds.views.size(), out_dir.c_str());
}

Dataset load_dataset(const std::string& scene_txt_path) {
    namespace fs = std::filesystem;
    const fs::path root = fs::path(scene_txt_path).parent_path();
    const SceneFile file = scene_txt_read(scene_txt_path);

    Dataset ds;
    ds.name = file.name;
    ds.seed = file.seed;
    if (!file.gt_points.empty()) ds.gt_samples = point_ply_read((root / file.gt_points).string());
    ds.views.reserve(file.views.size());
    for (const SceneViewEntry& entry : file.views) {
        ViewRecord view;
        view.intr = entry.intr;
        view.pose = entry.pose;
        if (!entry.image.empty()) view.image = png_read((root / entry.image).string());
        if (!entry.depth.empty()) view.gt_depth = raw_read((root / entry.depth).string());
        if (!entry.normal.empty()) view.gt_normal = raw_read((root / entry.normal).string());
        ds.views.push_back(std::move(view));
    }
    return ds;
}

}  // namespace gssr
