#include "gssr/io/point_ply.hpp"

#include <fstream>
#include <sstream>
#include <vector>

namespace gssr {

void point_ply_write(const PointCloud& cloud, const std::string& path) {
    if (cloud.points.empty()) throw GssrError("point_ply_write: refusing to write an empty cloud");
    const bool with_normals = !cloud.normals.empty();
    const bool with_colors = !cloud.colors.empty();
    if ((with_normals && cloud.normals.size() != cloud.points.size()) ||
        (with_colors && cloud.colors.size() != cloud.points.size()))
        throw DimensionMismatch("point_ply_write: auxiliary array lengths differ from points");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");

    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << cloud.points.size() << "\n";
    for (const char* f : {"x", "y", "z"}) header << "property float " << f << "\n";
    if (with_normals)
        for (const char* f : {"nx", "ny", "nz"}) header << "property float " << f << "\n";
    if (with_colors)
        for (const char* f : {"red", "green", "blue"}) header << "property uchar " << f << "\n";
    header << "end_header\n";
    out << header.str();

    for (size_t i = 0; i < cloud.points.size(); ++i) {
        float xyz[3] = {float(cloud.points[i].x()), float(cloud.points[i].y()), float(cloud.points[i].z())};
        out.write(reinterpret_cast<const char*>(xyz), sizeof(xyz));
        if (with_normals) {
            float n[3] = {float(cloud.normals[i].x()), float(cloud.normals[i].y()), float(cloud.normals[i].z())};
            out.write(reinterpret_cast<const char*>(n), sizeof(n));
        }
        if (with_colors) out.write(reinterpret_cast<const char*>(cloud.colors[i].data()), 3);
    }
    if (!out) throw IoError("point_ply_write: write failed for " + path);
}

PointCloud point_ply_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path);

    std::string line;
    if (!std::getline(in, line) || line != "ply") throw IoError("point_ply_read: not a PLY file: " + path);

    size_t count = 0;
    std::vector<std::string> props;
    bool binary_le = false;
    while (std::getline(in, line)) {
        std::istringstream ls(line);
        std::string key;
        ls >> key;
        if (key == "format") {
            std::string fmt;
            ls >> fmt;
            binary_le = fmt == "binary_little_endian";
        } else if (key == "element") {
            std::string what;
            ls >> what >> count;
            if (what != "vertex") throw IoError("point_ply_read: unsupported element in " + path);
        } else if (key == "property") {
            std::string type, name;
            ls >> type >> name;
            if ((name == "x" || name == "y" || name == "z" || name == "nx" || name == "ny" || name == "nz") &&
                type != "float" && type != "float32")
                throw IoError("point_ply_read: " + name + " must be float32 in " + path);
            if ((name == "red" || name == "green" || name == "blue") && type != "uchar" && type != "uint8")
                throw IoError("point_ply_read: colors must be uchar in " + path);
            props.push_back(name);
        } else if (key == "end_header") {
            break;
        } else if (key == "comment" || key == "ply") {
            continue;
        } else {
            throw IoError("point_ply_read: unsupported header line '" + line + "' in " + path);
        }
    }
    if (!binary_le) throw IoError("point_ply_read: only binary little-endian supported: " + path);
    if (count == 0) throw IoError("point_ply_read: empty vertex element in " + path);

    auto has = [&](const char* n) {
        for (const auto& p : props)
            if (p == n) return true;
        return false;
    };
    if (!has("x") || !has("y") || !has("z")) throw IoError("point_ply_read: missing coordinates in " + path);
    const bool with_normals = has("nx") && has("ny") && has("nz");
    const bool with_colors = has("red") && has("green") && has("blue");

    PointCloud cloud;
    cloud.points.resize(count);
    if (with_normals) cloud.normals.resize(count);
    if (with_colors) cloud.colors.resize(count);

    for (size_t i = 0; i < count; ++i) {
        double xyz[3] = {0, 0, 0}, nrm[3] = {0, 0, 0};
        std::array<std::uint8_t, 3> rgb = {0, 0, 0};
        for (const std::string& p : props) {
            if (p == "red" || p == "green" || p == "blue") {
                char b;
                if (!in.read(&b, 1)) throw IoError("point_ply_read: truncated payload in " + path);
                rgb[p == "red" ? 0 : (p == "green" ? 1 : 2)] = std::uint8_t(b);
            } else {
                float v;
                if (!in.read(reinterpret_cast<char*>(&v), sizeof(v)))
                    throw IoError("point_ply_read: truncated payload in " + path);
                if (p == "x") xyz[0] = v;
                else if (p == "y") xyz[1] = v;
                else if (p == "z") xyz[2] = v;
                else if (p == "nx") nrm[0] = v;
                else if (p == "ny") nrm[1] = v;
                else if (p == "nz") nrm[2] = v;
            }
        }
        cloud.points[i] = Vec3d(xyz[0], xyz[1], xyz[2]);
        if (with_normals) cloud.normals[i] = Vec3d(nrm[0], nrm[1], nrm[2]);
        if (with_colors) cloud.colors[i] = rgb;
    }
    return cloud;
}

}  // namespace gssr
