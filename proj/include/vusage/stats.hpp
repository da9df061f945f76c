#pragma once

#include <cstddef>
#include <span>

#include <json.hpp>

#include "vusage/domain.hpp"

namespace vusage {

/// Cohort usage summary over an event log.
///
/// A (session, video) pair counts as one viewing if the session logged any
/// event for that video. Over viewings:
///   fraction_viewed = windows covered for at least half a second / duration_s
/// and over sessions:
///   seconds = wall-clock seconds spent playing (media length / rate).
/// hours_streamed is total played media time / 3600. The standard deviation
/// is the population deviation over viewings.
struct UsageReport {
    std::size_t distinct_sessions = 0;
    double hours_streamed = 0.0;
    double mean_videos_per_session = 0.0;
    double mean_seconds_per_session = 0.0;
    double mean_fraction_viewed = 0.0;
    double stddev_fraction_viewed = 0.0;

    bool operator==(const UsageReport&) const = default;
};

/// Events may arrive in any order across videos; events of unknown videos are
/// ignored.
UsageReport compute_stats(std::span<const PlaybackEvent> events, std::span<const VideoMeta> catalog);

nlohmann::json stats_to_json(const UsageReport& report);

}  // namespace vusage
