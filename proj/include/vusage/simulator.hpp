#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <span>
#include <vector>

#include "vusage/domain.hpp"

namespace vusage {

/// Relative weights of the synthetic viewing behaviours.
struct BehaviorMix {
    double linear = 0.40;      // watch a stretch start to finish
    double skimmer = 0.15;     // frequent forward skips
    double reviser = 0.15;     // rewind and replay clusters
    double speed = 0.15;       // 1.5x / 2x playback
    double background = 0.15;  // playback window out of focus

    bool operator==(const BehaviorMix&) const = default;
};

enum class Behavior { linear, skimmer, reviser, speed, background };

struct SimulationParams {
    int students = 131;
    int days = 30;
    std::uint64_t seed = 1;
    Date start_date = std::chrono::sys_days{std::chrono::year{2021} / 2 / 1};
    BehaviorMix mix;
    double sessions_per_student_day = 0.15;
    double mean_videos_per_session = 1.5;

    /// Throws std::invalid_argument.
    void validate() const;

    bool operator==(const SimulationParams&) const = default;
};

/// Synthetic event log for a cohort. Each student draws from an independent
/// seeded stream, so output depends only on (catalog, params). Events are
/// schema-valid and returned grouped by student, in wall-clock order within
/// each session.
std::vector<PlaybackEvent> simulate(std::span<const VideoMeta> catalog, const SimulationParams& params);

/// Events of one session watching one video with a fixed behaviour, starting
/// at `start`. Exposed for behaviour-contract tests.
std::vector<PlaybackEvent> simulate_viewing(std::mt19937_64& rng, Behavior behavior, const VideoMeta& video,
                                            const std::string& session, Timestamp start);

/// Catalog shaped like one course: `sync_count` lecture recordings of 80
/// minutes and `async_count` 10-minute screencasts.
std::vector<VideoMeta> course_catalog(int sync_count, int async_count, Date published_at);

}  // namespace vusage
