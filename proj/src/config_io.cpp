#include "banditreg/config_io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace banditreg {

namespace {

// Shortest text that parses back to the same double.
std::string format_double(double v) {
    char buf[40];
    const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_dims(const std::vector<int>& dims) {
    std::string out;
    for (std::size_t i = 0; i < dims.size(); ++i) {
        if (i) out += ',';
        out += std::to_string(dims[i]);
    }
    return out;
}

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

// Locale-independent full-string numeric parses; throw ConfigError naming the key.
double parse_double(const std::string& key, const std::string& value, int line) {
    double out = 0.0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid number for key '" + key + "': '" + value + "'", line);
    }
    return out;
}

long long parse_int(const std::string& key, const std::string& value, int line) {
    long long out = 0;
    const auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
    if (ec != std::errc{} || ptr != value.data() + value.size()) {
        throw ConfigError("invalid integer for key '" + key + "': '" + value + "'", line);
    }
    return out;
}

bool parse_bool(const std::string& key, const std::string& value, int line) {
    if (value == "true" || value == "1") return true;
    if (value == "false" || value == "0") return false;
    throw ConfigError("invalid boolean for key '" + key + "': '" + value + "'", line);
}

std::vector<int> parse_dims(const std::string& key, const std::string& value, int line) {
    std::vector<int> dims;
    std::stringstream ss(value);
    std::string item;
    while (std::getline(ss, item, ',')) {
        dims.push_back(static_cast<int>(parse_int(key, trim(item), line)));
    }
    if (dims.empty()) {
        throw ConfigError("empty dimension list for key '" + key + "'", line);
    }
    return dims;
}

void apply_key(StageConfig& c, const std::string& key, const std::string& value, int line) {
    if (key == "stage") {
        return; // handled in the preset-selection pass
    } else if (key == "train_lo") {
        c.train_lo = parse_double(key, value, line);
    } else if (key == "train_hi") {
        c.train_hi = parse_double(key, value, line);
    } else if (key == "eval_lo") {
        c.eval_lo = parse_double(key, value, line);
    } else if (key == "eval_hi") {
        c.eval_hi = parse_double(key, value, line);
    } else if (key == "n_samples") {
        c.n_samples = static_cast<int>(parse_int(key, value, line));
    } else if (key == "noise_std") {
        c.noise_std = parse_double(key, value, line);
    } else if (key == "featurizer") {
        if (value == "raw") {
            c.featurizer.mode = FeatureMode::Raw;
        } else if (value == "pe") {
            c.featurizer.mode = FeatureMode::PositionalEncoding;
        } else {
            throw ConfigError("featurizer must be 'raw' or 'pe', got '" + value + "'", line);
        }
    } else if (key == "pe_dim") {
        c.featurizer.pe_dim = static_cast<int>(parse_int(key, value, line));
    } else if (key == "actor_hidden") {
        c.actor_hidden = parse_dims(key, value, line);
    } else if (key == "critic_hidden") {
        c.critic_hidden = parse_dims(key, value, line);
    } else if (key == "actor_lr") {
        c.actor_lr = parse_double(key, value, line);
    } else if (key == "critic_lr") {
        c.critic_lr = parse_double(key, value, line);
    } else if (key == "batch_size") {
        c.batch_size = static_cast<int>(parse_int(key, value, line));
    } else if (key == "epochs") {
        c.epochs = static_cast<int>(parse_int(key, value, line));
    } else if (key == "sigma_reward") {
        c.sigma_reward = parse_double(key, value, line);
    } else if (key == "exploration_noise_std") {
        c.exploration_noise_std = parse_double(key, value, line);
    } else if (key == "per_enabled") {
        c.per_enabled = parse_bool(key, value, line);
    } else if (key == "per_alpha") {
        c.per.alpha = parse_double(key, value, line);
    } else if (key == "per_beta_start") {
        c.per.beta_start = parse_double(key, value, line);
    } else if (key == "per_beta_end") {
        c.per.beta_end = parse_double(key, value, line);
    } else if (key == "per_epsilon_priority") {
        c.per.epsilon_priority = parse_double(key, value, line);
    } else if (key == "per_capacity") {
        c.per.capacity = static_cast<std::size_t>(parse_int(key, value, line));
    } else if (key == "per_weighted_is") {
        c.per_weighted_is = parse_bool(key, value, line);
    } else if (key == "train_batches_per_step") {
        c.train_batches_per_step = static_cast<int>(parse_int(key, value, line));
    } else if (key == "eval_points") {
        c.eval_points = static_cast<int>(parse_int(key, value, line));
    } else if (key == "seed") {
        c.seed = static_cast<std::uint64_t>(parse_int(key, value, line));
    } else {
        throw ConfigError("unknown key '" + key + "'", line);
    }
}

} // namespace

std::vector<std::pair<std::string, std::string>> config_to_keyvalues(const StageConfig& c) {
    std::vector<std::pair<std::string, std::string>> kv;
    kv.emplace_back("stage", c.stage_id >= 1 ? std::to_string(c.stage_id) : "custom");
    kv.emplace_back("train_lo", format_double(c.train_lo));
    kv.emplace_back("train_hi", format_double(c.train_hi));
    kv.emplace_back("eval_lo", format_double(c.eval_lo));
    kv.emplace_back("eval_hi", format_double(c.eval_hi));
    kv.emplace_back("n_samples", std::to_string(c.n_samples));
    kv.emplace_back("noise_std", format_double(c.noise_std));
    kv.emplace_back("featurizer",
                    c.featurizer.mode == FeatureMode::Raw ? "raw" : "pe");
    kv.emplace_back("pe_dim", std::to_string(c.featurizer.pe_dim));
    kv.emplace_back("actor_hidden", format_dims(c.actor_hidden));
    kv.emplace_back("critic_hidden", format_dims(c.critic_hidden));
    kv.emplace_back("actor_lr", format_double(c.actor_lr));
    kv.emplace_back("critic_lr", format_double(c.critic_lr));
    kv.emplace_back("batch_size", std::to_string(c.batch_size));
    kv.emplace_back("epochs", std::to_string(c.epochs));
    kv.emplace_back("sigma_reward", format_double(c.sigma_reward));
    kv.emplace_back("exploration_noise_std", format_double(c.exploration_noise_std));
    kv.emplace_back("per_enabled", c.per_enabled ? "true" : "false");
    kv.emplace_back("per_alpha", format_double(c.per.alpha));
    kv.emplace_back("per_beta_start", format_double(c.per.beta_start));
    kv.emplace_back("per_beta_end", format_double(c.per.beta_end));
    kv.emplace_back("per_epsilon_priority", format_double(c.per.epsilon_priority));
    kv.emplace_back("per_capacity", std::to_string(c.per.capacity));
    kv.emplace_back("per_weighted_is", c.per_weighted_is ? "true" : "false");
    kv.emplace_back("train_batches_per_step", std::to_string(c.train_batches_per_step));
    kv.emplace_back("eval_points", std::to_string(c.eval_points));
    kv.emplace_back("seed", std::to_string(c.seed));
    return kv;
}

void write_config_snapshot(const StageConfig& config, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_config_snapshot: cannot open " + path);
    for (const auto& [key, value] : config_to_keyvalues(config)) {
        out << key << '=' << value << '\n';
    }
}

StageConfig parse_config_text(std::istream& in) {
    struct Entry {
        std::string key;
        std::string value;
        int line;
    };
    std::vector<Entry> entries;
    std::string raw;
    int lineno = 0;
    while (std::getline(in, raw)) {
        ++lineno;
        const std::string line = trim(raw);
        if (line.empty() || line[0] == '#') continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(lineno) + ": expected key=value, got '" +
                                  line + "'",
                              lineno);
        }
        entries.push_back({trim(line.substr(0, eq)), trim(line.substr(eq + 1)), lineno});
    }

    // Select the base preset first so every other key overrides it.
    StageConfig config = stage_preset(4);
    config.stage_id = 0;
    for (const auto& e : entries) {
        if (e.key == "stage") {
            if (e.value == "custom") {
                config.stage_id = 0;
            } else {
                const int id = static_cast<int>(parse_int(e.key, e.value, e.line));
                if (id < 1 || id > 4) {
                    throw ConfigError("stage must be 1..4 or 'custom', got '" + e.value + "'",
                                      e.line);
                }
                config = stage_preset(id);
            }
        }
    }
    for (const auto& e : entries) {
        apply_key(config, e.key, e.value, e.line);
    }
    return config;
}

StageConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file " + path);
    return parse_config_text(in);
}

} // namespace banditreg
