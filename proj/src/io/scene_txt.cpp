#include "gssr/io/scene_txt.hpp"

#include "gssr/core/types.hpp"

#include <charconv>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace gssr {

namespace {

std::string fmt_double(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& tok, const std::string& path) {
    try {
        size_t used = 0;
        const double v = std::stod(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        return v;
    } catch (const std::exception&) {
        throw IoError("scene_txt_read: bad number '" + tok + "' in " + path);
    }
}

}  // namespace

void scene_txt_write(const SceneFile& scene, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw IoError("scene_txt_write: cannot open " + path);
    out << "gssr-scene 1\n";
    out << "name " << scene.name << "\n";
    out << "seed " << scene.seed << "\n";
    if (!scene.gt_points.empty()) out << "gt_points " << scene.gt_points << "\n";
    for (const SceneViewEntry& v : scene.views) {
        out << "view\n";
        out << "intrinsics " << fmt_double(v.intr.fx) << " " << fmt_double(v.intr.fy) << " " << fmt_double(v.intr.cx)
            << " " << fmt_double(v.intr.cy) << " " << v.intr.width << " " << v.intr.height << "\n";
        out << "rotation";
        for (int r = 0; r < 3; ++r)
            for (int c = 0; c < 3; ++c) out << " " << fmt_double(v.pose.rotation(r, c));
        out << "\n";
        out << "center " << fmt_double(v.pose.center.x()) << " " << fmt_double(v.pose.center.y()) << " "
            << fmt_double(v.pose.center.z()) << "\n";
        out << "image " << v.image << "\n";
        if (!v.depth.empty()) out << "depth " << v.depth << "\n";
        if (!v.normal.empty()) out << "normal " << v.normal << "\n";
        out << "end\n";
    }
    if (!out) throw IoError("scene_txt_write: write failed for " + path);
}

SceneFile scene_txt_read(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("scene_txt_read: cannot open " + path);

    SceneFile scene;
    bool saw_header = false;
    bool in_view = false;
    SceneViewEntry current;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key.empty()) continue;

        if (!saw_header) {
            int version = 0;
            if (key != "gssr-scene" || !(ls >> version))
                throw IoError("scene_txt_read: missing gssr-scene header in " + path);
            if (version != 1)
                throw IoError("scene_txt_read: unsupported scene file version " + std::to_string(version) + " in " +
                              path);
            saw_header = true;
            continue;
        }
        if (key == "view") {
            if (in_view) throw IoError("scene_txt_read: nested view block in " + path);
            in_view = true;
            current = SceneViewEntry{};
            continue;
        }
        if (key == "end") {
            if (!in_view) throw IoError("scene_txt_read: stray 'end' in " + path);
            current.intr.validate();
            if (current.image.empty()) throw IoError("scene_txt_read: view without image path in " + path);
            scene.views.push_back(current);
            in_view = false;
            continue;
        }

        std::string tok;
        if (!in_view) {
            if (key == "name") {
                ls >> scene.name;
            } else if (key == "seed") {
                ls >> scene.seed;
                if (ls.fail()) throw IoError("scene_txt_read: bad seed in " + path);
            } else if (key == "gt_points") {
                ls >> scene.gt_points;
            } else {
                throw IoError("scene_txt_read: unknown key '" + key + "' in " + path);
            }
            continue;
        }

        if (key == "intrinsics") {
            std::string fx, fy, cx, cy;
            ls >> fx >> fy >> cx >> cy >> current.intr.width >> current.intr.height;
            if (ls.fail()) throw IoError("scene_txt_read: bad intrinsics line in " + path);
            current.intr.fx = parse_double(fx, path);
            current.intr.fy = parse_double(fy, path);
            current.intr.cx = parse_double(cx, path);
            current.intr.cy = parse_double(cy, path);
        } else if (key == "rotation") {
            for (int r = 0; r < 3; ++r)
                for (int c = 0; c < 3; ++c) {
                    if (!(ls >> tok)) throw IoError("scene_txt_read: short rotation line in " + path);
                    current.pose.rotation(r, c) = parse_double(tok, path);
                }
        } else if (key == "center") {
            for (int k = 0; k < 3; ++k) {
                if (!(ls >> tok)) throw IoError("scene_txt_read: short center line in " + path);
                current.pose.center[k] = parse_double(tok, path);
            }
        } else if (key == "image") {
            ls >> current.image;
        } else if (key == "depth") {
            ls >> current.depth;
        } else if (key == "normal") {
            ls >> current.normal;
        } else {
            throw IoError("scene_txt_read: unknown view key '" + key + "' in " + path);
        }
    }
    if (in_view) throw IoError("scene_txt_read: unterminated view block in " + path);
    if (!saw_header) throw IoError("scene_txt_read: empty scene file " + path);
    return scene;
}

}  // namespace gssr
