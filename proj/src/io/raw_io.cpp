#include "gssr/io/raw_io.hpp"

#include "gssr/core/types.hpp"

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <memory>

namespace gssr {

namespace {

constexpr char kMagic[4] = {'G', 'S', 'R', 'F'};

struct FileCloser {
    void operator()(std::FILE* f) const {
        if (f) std::fclose(f);
    }
};
using FilePtr = std::unique_ptr<std::FILE, FileCloser>;

void put_u32(std::uint8_t* dst, std::uint32_t v) {
    dst[0] = std::uint8_t(v);
    dst[1] = std::uint8_t(v >> 8);
    dst[2] = std::uint8_t(v >> 16);
    dst[3] = std::uint8_t(v >> 24);
}

std::uint32_t get_u32(const std::uint8_t* src) {
    return std::uint32_t(src[0]) | std::uint32_t(src[1]) << 8 | std::uint32_t(src[2]) << 16 |
           std::uint32_t(src[3]) << 24;
}

}  // namespace

void raw_write(const Image<float>& img, const std::string& path) {
    if (img.width <= 0 || img.height <= 0 || img.channels <= 0)
        throw IoError("raw_write: empty image for " + path);
    FilePtr file(std::fopen(path.c_str(), "wb"));
    if (!file) throw IoError("raw_write: cannot open " + path);

    std::uint8_t header[16];
    std::memcpy(header, kMagic, 4);
    put_u32(header + 4, std::uint32_t(img.height));
    put_u32(header + 8, std::uint32_t(img.width));
    put_u32(header + 12, std::uint32_t(img.channels));
    if (std::fwrite(header, 1, sizeof(header), file.get()) != sizeof(header))
        throw IoError("raw_write: header write failed for " + path);

    static_assert(sizeof(float) == 4, "float32 layout required");
    if (std::fwrite(img.data.data(), sizeof(float), img.data.size(), file.get()) != img.data.size())
        throw IoError("raw_write: payload write failed for " + path);
}

Image<float> raw_read(const std::string& path) {
    FilePtr file(std::fopen(path.c_str(), "rb"));
    if (!file) throw IoError("raw_read: cannot open " + path);

    std::uint8_t header[16];
    if (std::fread(header, 1, sizeof(header), file.get()) != sizeof(header))
        throw IoError("raw_read: truncated header in " + path);
    if (std::memcmp(header, kMagic, 4) != 0) throw IoError("raw_read: bad magic in " + path);

    const std::uint32_t height = get_u32(header + 4);
    const std::uint32_t width = get_u32(header + 8);
    const std::uint32_t channels = get_u32(header + 12);
    if (width == 0 || height == 0 || channels == 0 || channels > 16)
        throw IoError("raw_read: implausible dimensions in " + path);

    Image<float> out{int(width), int(height), int(channels)};
    if (std::fread(out.data.data(), sizeof(float), out.data.size(), file.get()) != out.data.size())
        throw IoError("raw_read: truncated payload in " + path);
    return out;
}

}  // namespace gssr
