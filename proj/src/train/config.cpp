#include "gssr/train/config.hpp"

#include <algorithm>
#include <cinttypes>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>

namespace gssr {

namespace {

std::string fmt_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

double parse_double(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0')
        throw InvalidConfig("field '" + key + "' expects a number, got '" + text + "'");
    return v;
}

long parse_long(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const long v = std::strtol(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0')
        throw InvalidConfig("field '" + key + "' expects an integer, got '" + text + "'");
    return v;
}

std::uint64_t parse_u64(const std::string& key, const std::string& text) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(text.c_str(), &end, 10);
    if (end == text.c_str() || *end != '\0' || text.find('-') != std::string::npos)
        throw InvalidConfig("field '" + key + "' expects a non-negative integer, got '" + text + "'");
    return v;
}

struct Field {
    const char* name;
    std::function<std::string(const TrainConfig&)> get;
    std::function<void(TrainConfig&, const std::string&)> set;
    bool hashed = true;  ///< run plumbing (out_dir, resume, ...) never enters the hash
};

std::vector<Field> make_fields() {
    std::vector<Field> f;
    auto add_double = [&](const char* name, double TrainConfig::*member) {
        f.push_back({name, [member](const TrainConfig& c) { return fmt_double(c.*member); },
                     [member, name](TrainConfig& c, const std::string& v) { c.*member = parse_double(name, v); }});
    };
    auto add_long = [&](const char* name, long TrainConfig::*member) {
        f.push_back({name, [member](const TrainConfig& c) { return std::to_string(c.*member); },
                     [member, name](TrainConfig& c, const std::string& v) { c.*member = parse_long(name, v); }});
    };
    auto add_int = [&](const char* name, int TrainConfig::*member) {
        f.push_back({name, [member](const TrainConfig& c) { return std::to_string(c.*member); },
                     [member, name](TrainConfig& c, const std::string& v) {
                         c.*member = int(parse_long(name, v));
                     }});
    };
    auto add_string = [&](const char* name, std::string TrainConfig::*member) {
        f.push_back({name, [member](const TrainConfig& c) { return c.*member; },
                     [member](TrainConfig& c, const std::string& v) { c.*member = v; }});
    };
    auto add_weight = [&](const char* name, double LossWeights::*member) {
        f.push_back({name, [member](const TrainConfig& c) { return fmt_double(c.weights.*member); },
                     [member, name](TrainConfig& c, const std::string& v) {
                         c.weights.*member = parse_double(name, v);
                     }});
    };

    add_long("total_iterations", &TrainConfig::total_iterations);
    f.push_back({"rng_seed", [](const TrainConfig& c) { return std::to_string(c.rng_seed); },
                 [](TrainConfig& c, const std::string& v) { c.rng_seed = parse_u64("rng_seed", v); }});

    add_double("lr_centers", &TrainConfig::lr_centers);
    add_double("lr_centers_final_mult", &TrainConfig::lr_centers_final_mult);
    add_double("lr_rotations", &TrainConfig::lr_rotations);
    add_double("lr_log_scales", &TrainConfig::lr_log_scales);
    add_double("lr_opacity", &TrainConfig::lr_opacity);
    add_double("lr_sh", &TrainConfig::lr_sh);

    add_long("mv_from", &TrainConfig::mv_from);
    add_long("instance_from", &TrainConfig::instance_from);

    add_long("densify_from", &TrainConfig::densify_from);
    add_long("densify_until", &TrainConfig::densify_until);
    add_long("densify_interval", &TrainConfig::densify_interval);
    add_double("grad_threshold", &TrainConfig::grad_threshold);
    add_double("prune_opacity", &TrainConfig::prune_opacity);
    add_double("max_screen_size", &TrainConfig::max_screen_size);

    f.push_back({"reinit_iterations",
                 [](const TrainConfig& c) {
                     std::string out;
                     for (size_t i = 0; i < c.reinit_iterations.size(); ++i) {
                         if (i) out += ",";
                         out += std::to_string(c.reinit_iterations[i]);
                     }
                     return out;
                 },
                 [](TrainConfig& c, const std::string& v) {
                     c.reinit_iterations.clear();
                     std::stringstream ss(v);
                     std::string item;
                     while (std::getline(ss, item, ','))
                         if (!item.empty()) c.reinit_iterations.push_back(parse_long("reinit_iterations", item));
                 }});
    add_int("n_per_view", &TrainConfig::n_per_view);
    add_double("resample_radius_px", &TrainConfig::resample_radius_px);
    add_double("filter_spatial_sigma", &TrainConfig::filter_spatial_sigma);
    add_double("filter_range_sigma", &TrainConfig::filter_range_sigma);

    add_long("init_count", &TrainConfig::init_count);
    add_double("init_opacity", &TrainConfig::init_opacity);
    add_int("sh_degree", &TrainConfig::sh_degree);

    add_weight("lambda_normal", &LossWeights::lambda_normal);
    add_weight("lambda_normal_g", &LossWeights::lambda_normal_g);
    add_weight("lambda_opacity", &LossWeights::lambda_opacity);
    add_weight("lambda_mv", &LossWeights::lambda_mv);
    add_weight("lambda_mv_g", &LossWeights::lambda_mv_g);
    add_weight("lambda_scale", &LossWeights::lambda_scale);
    add_weight("rgb_dssim_mix", &LossWeights::rgb_dssim_mix);
    add_int("ncc_patch", &TrainConfig::ncc_patch);
    add_int("mv_stride", &TrainConfig::mv_stride);
    add_double("mask_alpha", &TrainConfig::mask_alpha);
    add_double("depth_tolerance_mult", &TrainConfig::depth_tolerance_mult);

    add_long("checkpoint_interval", &TrainConfig::checkpoint_interval);
    add_long("log_every", &TrainConfig::log_every);
    add_string("out_dir", &TrainConfig::out_dir);
    add_string("resume", &TrainConfig::resume);
    for (Field& field : f)
        for (const char* plumbing : {"checkpoint_interval", "log_every", "out_dir", "resume"})
            if (std::string(field.name) == plumbing) field.hashed = false;

    std::sort(f.begin(), f.end(), [](const Field& a, const Field& b) { return std::string(a.name) < b.name; });
    return f;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> f = make_fields();
    return f;
}

const Field& find_field(const std::string& key) {
    for (const Field& f : fields())
        if (key == f.name) return f;
    throw InvalidConfig("unknown field '" + key + "'");
}

}  // namespace

void TrainConfig::validate() const {
    if (total_iterations < 0) throw InvalidConfig("total_iterations must be >= 0");
    for (auto [lr, name] : {std::pair{lr_centers, "lr_centers"}, {lr_rotations, "lr_rotations"},
                            {lr_log_scales, "lr_log_scales"}, {lr_opacity, "lr_opacity"}, {lr_sh, "lr_sh"}})
        if (!(lr > 0.0)) throw InvalidConfig(std::string(name) + " must be positive");
    if (!(lr_centers_final_mult > 0.0) || lr_centers_final_mult > 1.0)
        throw InvalidConfig("lr_centers_final_mult must be in (0, 1]");
    for (auto [it, name] : {std::pair{mv_from, "mv_from"}, {instance_from, "instance_from"},
                            {densify_from, "densify_from"}, {densify_until, "densify_until"}})
        if (it < 0) throw InvalidConfig(std::string(name) + " must be >= 0");
    for (long it : reinit_iterations)
        if (it < 0) throw InvalidConfig("reinit_iterations entries must be >= 0");
    if (densify_interval <= 0) throw InvalidConfig("densify_interval must be positive");
    if (checkpoint_interval <= 0) throw InvalidConfig("checkpoint_interval must be positive");
    if (log_every <= 0) throw InvalidConfig("log_every must be positive");
    if (n_per_view < 0) throw InvalidConfig("n_per_view must be >= 0");
    if (init_count <= 0) throw InvalidConfig("init_count must be positive");
    if (!(init_opacity > 0.0) || !(init_opacity < 1.0)) throw InvalidConfig("init_opacity must be in (0, 1)");
    if (sh_degree < 0 || sh_degree > 3) throw InvalidConfig("sh_degree must be in [0, 3]");
    if (ncc_patch < 3 || ncc_patch % 2 == 0) throw InvalidConfig("ncc_patch must be an odd number >= 3");
    if (mv_stride <= 0) throw InvalidConfig("mv_stride must be positive");
    if (!(mask_alpha >= 0.0) || mask_alpha > 1.0) throw InvalidConfig("mask_alpha must be in [0, 1]");
    if (!(depth_tolerance_mult > 0.0)) throw InvalidConfig("depth_tolerance_mult must be positive");
    if (!(resample_radius_px > 0.0)) throw InvalidConfig("resample_radius_px must be positive");
    if (!(filter_spatial_sigma > 0.0) || !(filter_range_sigma > 0.0))
        throw InvalidConfig("bilateral filter sigmas must be positive");
    if (!(weights.rgb_dssim_mix >= 0.0) || weights.rgb_dssim_mix > 1.0)
        throw InvalidConfig("rgb_dssim_mix must be in [0, 1]");
    for (auto [w, name] :
         {std::pair{weights.lambda_normal, "lambda_normal"}, {weights.lambda_normal_g, "lambda_normal_g"},
          {weights.lambda_opacity, "lambda_opacity"}, {weights.lambda_mv, "lambda_mv"},
          {weights.lambda_mv_g, "lambda_mv_g"}, {weights.lambda_scale, "lambda_scale"}})
        if (w < 0.0) throw InvalidConfig(std::string(name) + " must be >= 0");
    if (out_dir.empty()) throw InvalidConfig("out_dir must not be empty");
}

void train_config_set(TrainConfig& cfg, const std::string& key, const std::string& value) {
    find_field(key).set(cfg, value);
}

std::string train_config_get(const TrainConfig& cfg, const std::string& key) { return find_field(key).get(cfg); }

std::vector<std::string> train_config_keys() {
    std::vector<std::string> keys;
    for (const Field& f : fields()) keys.push_back(f.name);
    return keys;
}

void train_config_apply_file(TrainConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IoError("cannot open config file " + path);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto strip = [](std::string s) {
            const size_t a = s.find_first_not_of(" \t\r");
            if (a == std::string::npos) return std::string();
            const size_t b = s.find_last_not_of(" \t\r");
            return s.substr(a, b - a + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw InvalidConfig(path + ":" + std::to_string(lineno) + ": expected 'key = value'");
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (key.empty()) throw InvalidConfig(path + ":" + std::to_string(lineno) + ": empty key");
        train_config_set(cfg, key, value);
    }
}

std::string train_config_serialize(const TrainConfig& cfg) {
    std::string out;
    for (const Field& f : fields()) {
        out += f.name;
        out += " = ";
        out += f.get(cfg);
        out += "\n";
    }
    return out;
}

std::uint64_t train_config_hash(const TrainConfig& cfg) {
    std::string text;
    for (const Field& f : fields()) {
        if (!f.hashed) continue;
        text += f.name;
        text += " = ";
        text += f.get(cfg);
        text += "\n";
    }
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

}  // namespace gssr
