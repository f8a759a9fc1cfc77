#pragma once

#include "gssr/core/types.hpp"

#include <cstdint>

namespace gssr {

/// Procedural surface texture over a 2D parameterization. Both kinds are
/// pure functions of (u, v) and the spec, so sampling is deterministic.
struct TextureSpec {
    enum class Kind { kCheckerboard, kValueNoise };

    Kind kind = Kind::kCheckerboard;
    double scale = 2.0;  ///< cells (checker) / base lattice frequency (noise) per unit
    Vec3d color_a{0.85, 0.85, 0.85};
    Vec3d color_b{0.15, 0.15, 0.15};
    std::uint64_t seed = 0;  ///< value-noise lattice seed
    int octaves = 3;         ///< value-noise octave count (lacunarity 2, gain 0.5)
};

/// Albedo at surface coordinates (u, v).
Vec3d texture_sample(const TextureSpec& spec, double u, double v);

/// Hash of an integer lattice point to [0, 1); the value-noise primitive,
/// exposed for tests.
double lattice_hash(std::int64_t ix, std::int64_t iy, std::uint64_t seed);

}  // namespace gssr
