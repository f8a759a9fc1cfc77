#include "gssr/synth/texture.hpp"

#include <cmath>

namespace gssr {

double lattice_hash(std::int64_t ix, std::int64_t iy, std::uint64_t seed) {
    std::uint64_t x = std::uint64_t(ix) * 0x9e3779b97f4a7c15ULL ^ std::uint64_t(iy) * 0xc2b2ae3d27d4eb4fULL ^ seed;
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ULL;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebULL;
    x ^= x >> 31;
    return double(x >> 11) * 0x1.0p-53;
}

namespace {

double smoothstep(double t) { return t * t * (3.0 - 2.0 * t); }

/// One octave of smooth value noise on the unit lattice.
double value_noise(double u, double v, std::uint64_t seed) {
    const double fu = std::floor(u), fv = std::floor(v);
    const auto ix = std::int64_t(fu), iy = std::int64_t(fv);
    const double tu = smoothstep(u - fu), tv = smoothstep(v - fv);
    const double v00 = lattice_hash(ix, iy, seed);
    const double v10 = lattice_hash(ix + 1, iy, seed);
    const double v01 = lattice_hash(ix, iy + 1, seed);
    const double v11 = lattice_hash(ix + 1, iy + 1, seed);
    return (1.0 - tv) * ((1.0 - tu) * v00 + tu * v10) + tv * ((1.0 - tu) * v01 + tu * v11);
}

}  // namespace

Vec3d texture_sample(const TextureSpec& spec, double u, double v) {
    if (spec.kind == TextureSpec::Kind::kCheckerboard) {
        const auto iu = std::int64_t(std::floor(u * spec.scale));
        const auto iv = std::int64_t(std::floor(v * spec.scale));
        return ((iu + iv) & 1) == 0 ? spec.color_a : spec.color_b;
    }
    double amp = 1.0, freq = spec.scale, sum = 0.0, norm = 0.0;
    for (int o = 0; o < spec.octaves; ++o) {
        sum += amp * value_noise(u * freq, v * freq, spec.seed + std::uint64_t(o) * 0x9e3779b9ULL);
        norm += amp;
        amp *= 0.5;
        freq *= 2.0;
    }
    const double t = norm > 0.0 ? sum / norm : 0.0;
    return spec.color_a + t * (spec.color_b - spec.color_a);
}

}  // namespace gssr
