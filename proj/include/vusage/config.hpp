#pragma once

#include <cstddef>
#include <filesystem>
#include <optional>
#include <string>

#include <json.hpp>

#include "vusage/scoring.hpp"
#include "vusage/simulator.hpp"

namespace vusage {

struct ServiceSettings {
    int port = 8080;
    std::size_t max_batch = 1000;
    std::string cors_origin = "*";
    double rate_limit_per_s = 50.0;  // sustained requests per source address
    double rate_limit_burst = 200.0;
    std::string tz = "UTC";
    std::optional<std::filesystem::path> static_dir;

    bool operator==(const ServiceSettings&) const = default;
};

/// Everything a config file can set. Every section and key is optional;
/// omitted values keep their defaults, which reproduce the reference scoring
/// strategy exactly.
///
///     {
///       "scoring":   { "increments": { "play_focus": 1.0, ... },
///                      "decay_slope": 0.1,
///                      "epoch_policy": "first_event_date",
///                      "fixed_epoch": "2021-02-01",
///                      "skip_band_scope": "literal_bands",
///                      "rate_bracket_bounds": [1.25, 1.75] },
///       "simulator": { "students": 131, "days": 30, "seed": 1, "start_date": "2021-02-01",
///                      "sessions_per_student_day": 0.15, "mean_videos_per_session": 1.5,
///                      "mix": { "linear": 0.4, "skimmer": 0.15, ... } },
///       "service":   { "port": 8080, "max_batch": 1000, "cors_origin": "*", "tz": "UTC",
///                      "rate_limit_per_s": 50, "rate_limit_burst": 200, "static_dir": "ui/dist" }
///     }
struct AppConfig {
    ScoringConfig scoring;
    SimulationParams simulation;
    ServiceSettings service;
};

nlohmann::json scoring_to_json(const ScoringConfig& cfg);
/// Missing keys take defaults. Throws std::invalid_argument.
ScoringConfig scoring_from_json(const nlohmann::json& j);

AppConfig app_config_from_json(const nlohmann::json& j);
/// Throws std::runtime_error when the file cannot be read or parsed.
AppConfig load_app_config(const std::filesystem::path& path);

}  // namespace vusage
