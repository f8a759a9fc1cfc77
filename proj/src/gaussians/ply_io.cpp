#include "gssr/gaussians/ply_io.hpp"

#include <cstring>
#include <fstream>
#include <map>
#include <sstream>
#include <vector>

namespace gssr {

namespace {

int ply_type_size(const std::string& type) {
    if (type == "char" || type == "uchar" || type == "int8" || type == "uint8") return 1;
    if (type == "short" || type == "ushort" || type == "int16" || type == "uint16") return 2;
    if (type == "int" || type == "uint" || type == "int32" || type == "uint32" || type == "float" ||
        type == "float32")
        return 4;
    if (type == "double" || type == "float64") return 8;
    return 0;
}

bool is_float32(const std::string& type) { return type == "float" || type == "float32"; }

}  // namespace

void ply_write(const GaussianSet<float>& set, const std::string& path) {
    if (set.size() == 0) throw GssrError("ply_write: refusing to write an empty set");
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path + " for writing");

    const int B = set.basis_count();
    const int rest = (B - 1) * 3;
    std::ostringstream header;
    header << "ply\nformat binary_little_endian 1.0\n";
    header << "element vertex " << set.size() << "\n";
    for (const char* f : {"x", "y", "z", "nx", "ny", "nz", "f_dc_0", "f_dc_1", "f_dc_2"})
        header << "property float " << f << "\n";
    for (int k = 0; k < rest; ++k) header << "property float f_rest_" << k << "\n";
    header << "property float opacity\n";
    for (int k = 0; k < 3; ++k) header << "property float scale_" << k << "\n";
    for (int k = 0; k < 4; ++k) header << "property float rot_" << k << "\n";
    header << "end_header\n";
    out << header.str();

    std::vector<float> row(17 + rest);
    for (size_t i = 0; i < set.size(); ++i) {
        Vec4<float> q = set.rotation(i);
        const float qn = q.norm();
        const Vec3<float> n =
            qn > 0 ? Vec3<float>(quat_rotmat<float>(q / qn).col(min_scale_axis(set.scale(i)))) : Vec3<float>(0, 0, 1);
        size_t k = 0;
        for (int c = 0; c < 3; ++c) row[k++] = set.centers[i * 3 + c];
        for (int c = 0; c < 3; ++c) row[k++] = n[c];
        for (int c = 0; c < 3; ++c) row[k++] = set.sh[i * size_t(B) * 3 + c];
        // f_rest is channel-major: all R coefficients, then G, then B.
        for (int c = 0; c < 3; ++c)
            for (int b = 1; b < B; ++b) row[k++] = set.sh[(i * size_t(B) + b) * 3 + c];
        row[k++] = set.opacity_logits[i];
        for (int c = 0; c < 3; ++c) row[k++] = set.log_scales[i * 3 + c];
        for (int c = 0; c < 4; ++c) row[k++] = set.rotations[i * 4 + c];
        out.write(reinterpret_cast<const char*>(row.data()), std::streamsize(row.size() * sizeof(float)));
    }
    if (!out) throw IoError("short write to " + path);
}

GaussianSet<float> ply_read(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path + " for reading");

    std::string line;
    if (!std::getline(in, line)) throw MalformedPly(path + ": empty file");
    if (line == "ply\r") line = "ply";
    if (line != "ply") throw MalformedPly(path + ": missing ply magic");

    struct Property {
        std::string name;
        int size = 0;
        bool f32 = false;
    };
    std::vector<Property> props;
    size_t vertex_count = 0;
    bool is_binary_le = false;
    bool saw_vertex_element = false;
    bool in_vertex_element = false;
    bool saw_end = false;
    int line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        std::istringstream ls(line);
        std::string tok;
        ls >> tok;
        if (tok == "comment" || tok == "obj_info" || tok.empty()) continue;
        if (tok == "format") {
            std::string fmt;
            ls >> fmt;
            is_binary_le = (fmt == "binary_little_endian");
            if (!is_binary_le)
                throw MalformedPly(path + ": line " + std::to_string(line_no) + ": only binary_little_endian supported");
        } else if (tok == "element") {
            std::string name;
            size_t count = 0;
            ls >> name >> count;
            in_vertex_element = (name == "vertex");
            if (in_vertex_element) {
                saw_vertex_element = true;
                vertex_count = count;
            }
        } else if (tok == "property") {
            std::string type, name;
            ls >> type >> name;
            if (type == "list")
                throw MalformedPly(path + ": line " + std::to_string(line_no) + ": list properties not supported");
            if (in_vertex_element) {
                Property p;
                p.name = name;
                p.size = ply_type_size(type);
                p.f32 = is_float32(type);
                if (p.size == 0)
                    throw MalformedPly(path + ": line " + std::to_string(line_no) + ": unknown type " + type);
                props.push_back(p);
            }
        } else if (tok == "end_header") {
            saw_end = true;
            break;
        } else {
            throw MalformedPly(path + ": line " + std::to_string(line_no) + ": unexpected token " + tok);
        }
    }
    if (!saw_end) throw MalformedPly(path + ": missing end_header");
    if (!saw_vertex_element) throw MalformedPly(path + ": no vertex element");
    if (vertex_count == 0) throw MalformedPly(path + ": vertex element is empty");

    // Index recognized fields and determine the SH degree from f_rest count.
    std::map<std::string, int> index;
    size_t stride = 0;
    int rest_count = 0;
    for (size_t k = 0; k < props.size(); ++k) {
        index[props[k].name] = int(k);
        stride += size_t(props[k].size);
        if (props[k].name.rfind("f_rest_", 0) == 0) ++rest_count;
    }
    const char* required[] = {"x",       "y",       "z",       "f_dc_0",  "f_dc_1", "f_dc_2", "opacity",
                              "scale_0", "scale_1", "scale_2", "rot_0",   "rot_1",  "rot_2",  "rot_3"};
    for (const char* name : required) {
        auto it = index.find(name);
        if (it == index.end()) throw MalformedPly(path + ": missing property " + name);
        if (!props[size_t(it->second)].f32) throw MalformedPly(path + ": property " + std::string(name) + " must be float");
    }
    if (rest_count % 3 != 0) throw MalformedPly(path + ": f_rest count not divisible by 3");
    const int B = rest_count / 3 + 1;
    int degree = -1;
    for (int d = 0; d <= 3; ++d)
        if ((d + 1) * (d + 1) == B) degree = d;
    if (degree < 0) throw MalformedPly(path + ": unsupported SH basis count " + std::to_string(B));
    for (int k = 0; k < rest_count; ++k) {
        const std::string name = "f_rest_" + std::to_string(k);
        auto it = index.find(name);
        if (it == index.end()) throw MalformedPly(path + ": missing property " + name);
        if (!props[size_t(it->second)].f32) throw MalformedPly(path + ": property " + name + " must be float");
    }

    // Byte offset of each property within a vertex record.
    std::vector<size_t> offsets(props.size());
    size_t off = 0;
    for (size_t k = 0; k < props.size(); ++k) {
        offsets[k] = off;
        off += size_t(props[k].size);
    }

    GaussianSet<float> set;
    set.sh_degree = degree;
    set.resize(vertex_count);
    std::vector<char> record(stride);
    auto field = [&](const char* name) -> float {
        float v;
        std::memcpy(&v, record.data() + offsets[size_t(index.at(name))], sizeof(float));
        return v;
    };
    for (size_t i = 0; i < vertex_count; ++i) {
        in.read(record.data(), std::streamsize(stride));
        if (!in) throw MalformedPly(path + ": unexpected end of file in vertex " + std::to_string(i));
        set.centers[i * 3 + 0] = field("x");
        set.centers[i * 3 + 1] = field("y");
        set.centers[i * 3 + 2] = field("z");
        for (int c = 0; c < 3; ++c)
            set.sh[i * size_t(B) * 3 + c] = field(("f_dc_" + std::to_string(c)).c_str());
        for (int c = 0; c < 3; ++c)
            for (int b = 1; b < B; ++b)
                set.sh[(i * size_t(B) + b) * 3 + c] = field(("f_rest_" + std::to_string(c * (B - 1) + b - 1)).c_str());
        set.opacity_logits[i] = field("opacity");
        for (int c = 0; c < 3; ++c) set.log_scales[i * 3 + c] = field(("scale_" + std::to_string(c)).c_str());
        for (int c = 0; c < 4; ++c) set.rotations[i * 4 + c] = field(("rot_" + std::to_string(c)).c_str());
    }
    return set;
}

}  // namespace gssr
