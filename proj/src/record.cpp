#include "vusage/record.hpp"

#include <stdexcept>

namespace vusage {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* name) {
    const auto it = j.find(name);
    if (it == j.end() || it->is_null()) throw ValidationError(ValidationReason::missing_field, name);
    return *it;
}

double number_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_number()) throw ValidationError(ValidationReason::malformed_field, name);
    return v.get<double>();
}

std::string string_field(const json& j, const char* name) {
    const json& v = field(j, name);
    if (!v.is_string()) throw ValidationError(ValidationReason::malformed_field, name);
    return v.get<std::string>();
}

std::optional<double> optional_number(const json& j, const char* name) {
    if (!j.contains(name) || j[name].is_null()) return std::nullopt;
    return number_field(j, name);
}

}  // namespace

json encode_event(const PlaybackEvent& ev) {
    json j;
    j["v"] = ev.schema_version;
    j["session"] = ev.session_id;
    j["video"] = ev.video_id;
    j["type"] = to_string(ev.kind);
    j["t"] = format_rfc3339(ev.timestamp);
    if (ev.pos_s) j["pos"] = *ev.pos_s;
    if (ev.to_s) j["to"] = *ev.to_s;
    if (ev.rate) j["rate"] = *ev.rate;
    if (ev.in_focus) j["focus"] = *ev.in_focus;
    return j;
}

PlaybackEvent decode_event(const json& j) {
    if (!j.is_object()) throw ValidationError(ValidationReason::malformed_field, "record is not an object");
    PlaybackEvent ev;
    const json& v = field(j, "v");
    if (!v.is_number_integer()) throw ValidationError(ValidationReason::malformed_field, "v");
    ev.schema_version = v.get<int>();
    ev.session_id = string_field(j, "session");
    ev.video_id = string_field(j, "video");
    const std::string type = string_field(j, "type");
    const auto kind = parse_event_kind(type);
    if (!kind) throw ValidationError(ValidationReason::unknown_kind, type);
    ev.kind = *kind;
    try {
        ev.timestamp = parse_rfc3339(string_field(j, "t"));
    } catch (const std::invalid_argument& e) {
        throw ValidationError(ValidationReason::malformed_field, e.what());
    }
    ev.pos_s = optional_number(j, "pos");
    ev.to_s = optional_number(j, "to");
    ev.rate = optional_number(j, "rate");
    if (j.contains("focus") && !j["focus"].is_null()) {
        if (!j["focus"].is_boolean()) throw ValidationError(ValidationReason::malformed_field, "focus");
        ev.in_focus = j["focus"].get<bool>();
    }
    return ev;
}

std::string encode_event_line(const PlaybackEvent& ev) { return encode_event(ev).dump(); }

PlaybackEvent decode_event_line(std::string_view line) {
    json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
    if (j.is_discarded()) throw ValidationError(ValidationReason::malformed_field, "not a JSON record");
    return decode_event(j);
}

json encode_meta(const VideoMeta& meta) {
    return json{{"video_id", meta.video_id},     {"duration_s", meta.duration_s},
                {"title", meta.title},           {"course_code", meta.course_code},
                {"week_label", meta.week_label}, {"kind", to_string(meta.kind)},
                {"published_at", format_date(meta.published_at)}};
}

VideoMeta decode_meta(const json& j) {
    if (!j.is_object()) throw std::invalid_argument("catalog record is not an object");
    VideoMeta meta;
    meta.video_id = j.at("video_id").get<std::string>();
    meta.duration_s = j.at("duration_s").get<std::int64_t>();
    meta.title = j.value("title", "");
    meta.course_code = j.value("course_code", "");
    meta.week_label = j.value("week_label", "");
    const auto kind = parse_video_kind(j.value("kind", "asynchronous_screencast"));
    if (!kind) throw std::invalid_argument("unknown video kind for " + meta.video_id);
    meta.kind = *kind;
    meta.published_at = parse_date(j.at("published_at").get<std::string>());
    if (meta.video_id.empty()) throw std::invalid_argument("empty video_id");
    if (meta.duration_s < 1) throw std::invalid_argument("duration_s must be >= 1 for " + meta.video_id);
    return meta;
}

}  // namespace vusage
