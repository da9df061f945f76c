#include "vusage/domain.hpp"

#include <algorithm>
#include <cmath>

namespace vusage {

std::string_view to_string(VideoKind kind) {
    switch (kind) {
        case VideoKind::synchronous_recording: return "synchronous_recording";
        case VideoKind::asynchronous_screencast: return "asynchronous_screencast";
    }
    return "asynchronous_screencast";
}

std::optional<VideoKind> parse_video_kind(std::string_view text) {
    if (text == "synchronous_recording") return VideoKind::synchronous_recording;
    if (text == "asynchronous_screencast") return VideoKind::asynchronous_screencast;
    return std::nullopt;
}

std::string_view to_string(EventKind kind) {
    switch (kind) {
        case EventKind::play: return "play";
        case EventKind::pause: return "pause";
        case EventKind::seek: return "seek";
        case EventKind::rate: return "rate";
        case EventKind::focus: return "focus";
        case EventKind::end: return "end";
    }
    return "play";
}

std::optional<EventKind> parse_event_kind(std::string_view text) {
    if (text == "play") return EventKind::play;
    if (text == "pause") return EventKind::pause;
    if (text == "seek") return EventKind::seek;
    if (text == "rate") return EventKind::rate;
    if (text == "focus") return EventKind::focus;
    if (text == "end") return EventKind::end;
    return std::nullopt;
}

std::string_view to_string(ValidationReason reason) {
    switch (reason) {
        case ValidationReason::unknown_kind: return "unknown_kind";
        case ValidationReason::missing_field: return "missing_field";
        case ValidationReason::negative_rate: return "negative_rate";
        case ValidationReason::unknown_video: return "unknown_video";
        case ValidationReason::malformed_field: return "malformed_field";
    }
    return "malformed_field";
}

ValidationError::ValidationError(ValidationReason reason, const std::string& detail)
    : std::runtime_error(std::string(to_string(reason)) + ": " + detail), reason_(reason) {}

bool is_valid_session_token(std::string_view token) {
    if (token.size() < 8 || token.size() > 64) return false;
    return std::all_of(token.begin(), token.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_' ||
               c == '-';
    });
}

namespace {

double clamp_position(double value, std::int64_t duration, const char* field) {
    if (!std::isfinite(value)) {
        throw ValidationError(ValidationReason::malformed_field, std::string(field) + " is not finite");
    }
    return std::clamp(value, 0.0, static_cast<double>(duration));
}

}  // namespace

PlaybackEvent validate_event(PlaybackEvent ev, const VideoMeta& meta) {
    if (ev.video_id != meta.video_id) {
        throw ValidationError(ValidationReason::unknown_video, "event for '" + ev.video_id + "'");
    }
    if (!is_valid_session_token(ev.session_id)) {
        throw ValidationError(ValidationReason::malformed_field, "session token");
    }
    if (ev.schema_version < 1) {
        throw ValidationError(ValidationReason::malformed_field, "schema version");
    }

    auto require = [](bool present, const char* field) {
        if (!present) throw ValidationError(ValidationReason::missing_field, field);
    };

    switch (ev.kind) {
        case EventKind::play:
        case EventKind::pause:
        case EventKind::end:
            require(ev.pos_s.has_value(), "pos");
            ev.pos_s = clamp_position(*ev.pos_s, meta.duration_s, "pos");
            ev.to_s.reset();
            ev.rate.reset();
            ev.in_focus.reset();
            break;
        case EventKind::seek:
            require(ev.pos_s.has_value(), "pos");
            require(ev.to_s.has_value(), "to");
            ev.pos_s = clamp_position(*ev.pos_s, meta.duration_s, "pos");
            ev.to_s = clamp_position(*ev.to_s, meta.duration_s, "to");
            ev.rate.reset();
            ev.in_focus.reset();
            break;
        case EventKind::rate:
            require(ev.rate.has_value(), "rate");
            if (!std::isfinite(*ev.rate) || *ev.rate <= 0.0) {
                throw ValidationError(ValidationReason::negative_rate, "rate must be > 0");
            }
            ev.pos_s.reset();
            ev.to_s.reset();
            ev.in_focus.reset();
            break;
        case EventKind::focus:
            require(ev.in_focus.has_value(), "focus");
            ev.pos_s.reset();
            ev.to_s.reset();
            ev.rate.reset();
            break;
    }
    return ev;
}

}  // namespace vusage
