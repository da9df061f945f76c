#include "vusage/config.hpp"

#include <fstream>
#include <stdexcept>

namespace vusage {

using nlohmann::json;

namespace {

std::string_view to_string(EpochPolicy p) {
    switch (p) {
        case EpochPolicy::first_event_date: return "first_event_date";
        case EpochPolicy::video_published_at: return "video_published_at";
        case EpochPolicy::fixed_date: return "fixed_date";
    }
    return "first_event_date";
}

EpochPolicy parse_epoch_policy(const std::string& s) {
    if (s == "first_event_date") return EpochPolicy::first_event_date;
    if (s == "video_published_at") return EpochPolicy::video_published_at;
    if (s == "fixed_date") return EpochPolicy::fixed_date;
    throw std::invalid_argument("unknown epoch_policy '" + s + "'");
}

std::string_view to_string(SkipBandScope s) {
    return s == SkipBandScope::literal_bands ? "literal_bands" : "skipped_region_only";
}

SkipBandScope parse_skip_scope(const std::string& s) {
    if (s == "literal_bands") return SkipBandScope::literal_bands;
    if (s == "skipped_region_only") return SkipBandScope::skipped_region_only;
    throw std::invalid_argument("unknown skip_band_scope '" + s + "'");
}

template <typename T>
void read(const json& j, const char* key, T& into) {
    if (j.contains(key) && !j[key].is_null()) into = j[key].get<T>();
}

}  // namespace

json scoring_to_json(const ScoringConfig& cfg) {
    const IncrementTable& t = cfg.table;
    json j{{"increments",
            {{"play_focus", t.play_focus},
             {"play_unfocus", t.play_unfocus},
             {"replay", t.replay},
             {"play2x_focus", t.play2x_focus},
             {"play2x_unfocus", t.play2x_unfocus},
             {"play15_focus", t.play15_focus},
             {"play15_unfocus", t.play15_unfocus},
             {"skip_band1", t.skip_band1},
             {"skip_band2", t.skip_band2},
             {"skip_band3", t.skip_band3}}},
           {"decay_slope", cfg.decay_slope},
           {"epoch_policy", to_string(cfg.epoch_policy)},
           {"skip_band_scope", to_string(cfg.skip_band_scope)},
           {"rate_bracket_bounds", {cfg.rate_bracket_bounds.first, cfg.rate_bracket_bounds.second}}};
    j["fixed_epoch"] = cfg.fixed_epoch ? json(format_date(*cfg.fixed_epoch)) : json(nullptr);
    return j;
}

ScoringConfig scoring_from_json(const json& j) {
    ScoringConfig cfg;
    if (!j.is_object()) throw std::invalid_argument("scoring config must be an object");
    try {
        if (j.contains("increments")) {
            const json& inc = j["increments"];
            IncrementTable& t = cfg.table;
            read(inc, "play_focus", t.play_focus);
            read(inc, "play_unfocus", t.play_unfocus);
            read(inc, "replay", t.replay);
            read(inc, "play2x_focus", t.play2x_focus);
            read(inc, "play2x_unfocus", t.play2x_unfocus);
            read(inc, "play15_focus", t.play15_focus);
            read(inc, "play15_unfocus", t.play15_unfocus);
            read(inc, "skip_band1", t.skip_band1);
            read(inc, "skip_band2", t.skip_band2);
            read(inc, "skip_band3", t.skip_band3);
        }
        read(j, "decay_slope", cfg.decay_slope);
        if (j.contains("epoch_policy")) cfg.epoch_policy = parse_epoch_policy(j["epoch_policy"].get<std::string>());
        if (j.contains("fixed_epoch") && !j["fixed_epoch"].is_null()) {
            cfg.fixed_epoch = parse_date(j["fixed_epoch"].get<std::string>());
        }
        if (j.contains("skip_band_scope")) {
            cfg.skip_band_scope = parse_skip_scope(j["skip_band_scope"].get<std::string>());
        }
        if (j.contains("rate_bracket_bounds")) {
            const auto b = j["rate_bracket_bounds"].get<std::vector<double>>();
            if (b.size() != 2) throw std::invalid_argument("rate_bracket_bounds needs two values");
            cfg.rate_bracket_bounds = {b[0], b[1]};
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("scoring config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

AppConfig app_config_from_json(const json& j) {
    AppConfig cfg;
    if (!j.is_object()) throw std::invalid_argument("config root must be an object");
    try {
        if (j.contains("scoring")) cfg.scoring = scoring_from_json(j["scoring"]);

        if (j.contains("simulator")) {
            const json& s = j["simulator"];
            SimulationParams& p = cfg.simulation;
            read(s, "students", p.students);
            read(s, "days", p.days);
            read(s, "seed", p.seed);
            if (s.contains("start_date")) p.start_date = parse_date(s["start_date"].get<std::string>());
            read(s, "sessions_per_student_day", p.sessions_per_student_day);
            read(s, "mean_videos_per_session", p.mean_videos_per_session);
            if (s.contains("mix")) {
                const json& m = s["mix"];
                read(m, "linear", p.mix.linear);
                read(m, "skimmer", p.mix.skimmer);
                read(m, "reviser", p.mix.reviser);
                read(m, "speed", p.mix.speed);
                read(m, "background", p.mix.background);
            }
        }

        if (j.contains("service")) {
            const json& s = j["service"];
            ServiceSettings& svc = cfg.service;
            read(s, "port", svc.port);
            read(s, "max_batch", svc.max_batch);
            read(s, "cors_origin", svc.cors_origin);
            read(s, "rate_limit_per_s", svc.rate_limit_per_s);
            read(s, "rate_limit_burst", svc.rate_limit_burst);
            read(s, "tz", svc.tz);
            if (s.contains("static_dir") && !s["static_dir"].is_null()) {
                svc.static_dir = s["static_dir"].get<std::string>();
            }
        }
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

AppConfig load_app_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file " + path.string());
    json j = json::parse(in, nullptr, /*allow_exceptions=*/false, /*ignore_comments=*/true);
    if (j.is_discarded()) throw std::runtime_error("config file " + path.string() + " is not valid JSON");
    try {
        return app_config_from_json(j);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(path.string() + ": " + e.what());
    }
}

}  // namespace vusage
