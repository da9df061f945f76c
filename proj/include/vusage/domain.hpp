#pragma once

// Shared value types for the usage-heatmap pipeline: the catalog entry, the
// anonymous playback event, the reconstructed pass/skip units and the
// per-window score vector.

#include <array>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "vusage/time.hpp"

namespace vusage {

enum class VideoKind { synchronous_recording, asynchronous_screencast };

std::string_view to_string(VideoKind kind);
std::optional<VideoKind> parse_video_kind(std::string_view text);

struct VideoMeta {
    std::string video_id;
    std::int64_t duration_s = 1;
    std::string title;
    std::string course_code;
    std::string week_label;
    VideoKind kind = VideoKind::asynchronous_screencast;
    Date published_at{};

    bool operator==(const VideoMeta&) const = default;
};

enum class EventKind { play, pause, seek, rate, focus, end };

std::string_view to_string(EventKind kind);
std::optional<EventKind> parse_event_kind(std::string_view text);

inline constexpr int kSchemaVersion = 1;

/// One player interaction. There is deliberately no user field: the session
/// token is generated client-side and is the only grouping key.
struct PlaybackEvent {
    int schema_version = kSchemaVersion;
    std::string session_id;
    std::string video_id;
    EventKind kind = EventKind::play;
    Timestamp timestamp{};
    std::optional<double> pos_s;    // play, pause, seek, end
    std::optional<double> to_s;     // seek
    std::optional<double> rate;     // rate
    std::optional<bool> in_focus;   // focus

    bool operator==(const PlaybackEvent&) const = default;
};

/// A contiguous stretch of media played at one rate and one focus state.
struct PlaybackPass {
    std::string session_id;
    std::string video_id;
    double media_start_s = 0.0;
    double media_end_s = 0.0;  // exclusive
    double rate = 1.0;
    bool in_focus = true;
    std::int64_t event_day = 0;
    Timestamp wall_start{};

    double length() const { return media_end_s - media_start_s; }
    bool operator==(const PlaybackPass&) const = default;
};

/// A forward seek; backward seeks never produce one.
struct SkipEvent {
    std::string session_id;
    std::string video_id;
    double source_s = 0.0;
    double dest_s = 0.0;
    std::int64_t event_day = 0;

    bool operator==(const SkipEvent&) const = default;
};

/// Per-window score increments, in table order.
struct IncrementTable {
    double play_focus = 1.0;
    double play_unfocus = 0.25;
    double replay = 2.0;
    double play2x_focus = 0.6;
    double play2x_unfocus = 0.2;
    double play15_focus = 1.5;
    double play15_unfocus = 0.5;
    double skip_band1 = -0.3;
    double skip_band2 = -0.2;
    double skip_band3 = -0.1;

    std::array<double, 10> as_tuple() const {
        return {play_focus,   play_unfocus,  replay,         play2x_focus, play2x_unfocus,
                play15_focus, play15_unfocus, skip_band1,    skip_band2,   skip_band3};
    }

    bool operator==(const IncrementTable&) const = default;
};

inline constexpr std::array<double, 10> kBaseIncrements{1.0, 0.25, 2.0, 0.6, 0.2,
                                                        1.5, 0.5,  -0.3, -0.2, -0.1};

/// Scores for one video, one entry per 1-second window: index w covers media
/// time [w, w+1).
struct ScoreVector {
    std::string video_id;
    Date as_of{};
    std::vector<double> raw;
    std::vector<double> normalized;

    bool operator==(const ScoreVector&) const = default;
};

enum class ValidationReason { unknown_kind, missing_field, negative_rate, unknown_video, malformed_field };

std::string_view to_string(ValidationReason reason);

class ValidationError : public std::runtime_error {
public:
    ValidationError(ValidationReason reason, const std::string& detail);
    ValidationReason reason() const noexcept { return reason_; }

private:
    ValidationReason reason_;
};

/// Session tokens are opaque: 8-64 characters of [A-Za-z0-9_-].
bool is_valid_session_token(std::string_view token);

/// Checks `ev` against the schema and the catalog entry for its video.
/// Positions are clamped into [0, duration_s]; fields that do not belong to
/// the event kind are dropped.
PlaybackEvent validate_event(PlaybackEvent ev, const VideoMeta& meta);

}  // namespace vusage
