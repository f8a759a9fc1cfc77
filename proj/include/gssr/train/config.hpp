#pragma once

#include "gssr/core/types.hpp"
#include "gssr/losses/losses.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace gssr {

class InvalidConfig : public GssrError {
  public:
    explicit InvalidConfig(const std::string& msg) : GssrError("invalid config: " + msg) {}
};

/// Every knob of a training run. All fields are addressable by name through
/// train_config_set/get, the flat key=value config file, and CLI overrides.
struct TrainConfig {
    long total_iterations = 30000;
    std::uint64_t rng_seed = 0;

    // Learning rates. lr_centers is multiplied by the scene extent and
    // decays exponentially to lr_centers_final_mult of its start over the
    // run; the other groups are constant.
    double lr_centers = 1.6e-4;
    double lr_centers_final_mult = 0.01;
    double lr_rotations = 1e-3;
    double lr_log_scales = 5e-3;
    double lr_opacity = 5e-2;
    double lr_sh = 2.5e-3;

    // Loss schedule: multi-view terms join at mv_from, per-Gaussian
    // (instance-level) terms at instance_from.
    long mv_from = 1000;
    long instance_from = 3000;

    // Density control.
    long densify_from = 500;
    long densify_until = 15000;
    long densify_interval = 100;
    double grad_threshold = 2e-4;
    double prune_opacity = 0.005;
    double max_screen_size = 0.0;  ///< screen-size prune in px; <= 0 disables

    // Opacity-guided reinitialization.
    std::vector<long> reinit_iterations{5000, 10000};
    int n_per_view = 10000;
    double resample_radius_px = 2.0;
    double filter_spatial_sigma = 2.0;  ///< bilateral filter, pixels
    double filter_range_sigma = 0.1;    ///< bilateral filter, depth units

    // Initialization when no seed cloud is provided.
    long init_count = 5000;
    double init_opacity = 0.1;
    int sh_degree = 2;

    // Loss machinery.
    LossWeights weights;
    int ncc_patch = 7;
    int mv_stride = 2;
    double mask_alpha = 0.5;
    double depth_tolerance_mult = 0.01;  ///< front tolerance = mult * scene_extent

    // Run plumbing.
    long checkpoint_interval = 5000;
    long log_every = 1;
    std::string out_dir = "out";
    std::string resume;  ///< checkpoint stem to continue from; empty = fresh run

    /// Throws InvalidConfig when a field is unusable (non-positive lr or
    /// interval, negative schedule point, bad fractions). Schedule points
    /// beyond total_iterations are legal and simply never fire.
    void validate() const;
};

/// Assigns one field by name from its text form; throws InvalidConfig for
/// unknown keys or unparseable values.
void train_config_set(TrainConfig& cfg, const std::string& key, const std::string& value);

/// Text form of one field by name; throws InvalidConfig for unknown keys.
std::string train_config_get(const TrainConfig& cfg, const std::string& key);

/// All addressable field names, sorted.
std::vector<std::string> train_config_keys();

/// Applies a flat key = value file ('#' comments, blank lines ignored).
void train_config_apply_file(TrainConfig& cfg, const std::string& path);

/// Canonical "key = value" dump, one line per field, sorted by key.
std::string train_config_serialize(const TrainConfig& cfg);

/// FNV-1a hash of the canonical serialization; stable across runs and
/// stored in checkpoints so resumed runs can detect config drift.
std::uint64_t train_config_hash(const TrainConfig& cfg);

}  // namespace gssr
