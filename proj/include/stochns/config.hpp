#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "stochns/ensemble.hpp"

namespace stochns {

struct RunConfig {
    EnsembleSpec ensemble;
    std::filesystem::path out_dir = "out";
};

/// Every problem found while reading a config, not just the first.
class ConfigErrors : public ConfigError {
public:
    explicit ConfigErrors(std::vector<std::string> errors);
    const std::vector<std::string>& errors() const { return errors_; }

private:
    std::vector<std::string> errors_;
};

/// Defaults: n = 256, N_b = 9, R = 32, viscosities {0.05, 0.1, 0.2}/n, n_rect = 10000.
/// forcing.sigma has no default.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig parse_config_text(std::string_view text);
RunConfig parse_config(const std::filesystem::path& path);

/// Inverse of config_from_json for a resolved config (viscosities as numbers).
nlohmann::json config_to_json(const RunConfig& cfg);

/// A number, or a string "c/N" (also "c/n") resolved against the grid size.
double resolve_viscosity(const nlohmann::json& value, int n);

}  // namespace stochns
