#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "vusage/domain.hpp"
#include "vusage/time.hpp"

namespace vusage {

/// Maps wall-clock instants to day indices relative to a scoring epoch.
struct DayClock {
    Date epoch{};
    ReportingZone zone;

    std::int64_t day_of(Timestamp t) const { return (zone.local_date(t) - epoch).count(); }
};

struct Reconstruction {
    std::vector<PlaybackPass> passes;
    std::vector<SkipEvent> skips;

    bool operator==(const Reconstruction&) const = default;
};

/// Stable sort by timestamp; ties keep arrival order.
void sort_events(std::vector<PlaybackEvent>& events);

/// Replays one (session, video) event stream against a player model and
/// returns the contiguous passes and forward skips it implies.
///
/// The player starts paused at position 0, rate 1.0, in focus. While playing,
/// media position advances by wall-clock delta times rate and stops at the end
/// of the video. A rate or focus change splits the current pass. A seek while
/// playing closes the pass at the current position and continues from the
/// destination. A stream that never pauses is cut at its last event.
/// A `play` received while already playing resynchronises to its position.
/// Events that change neither position, rate nor focus do not split a pass.
/// Positions are kept at 1 ns resolution.
Reconstruction reconstruct(std::span<const PlaybackEvent> events, const VideoMeta& meta,
                           const DayClock& clock);

/// Half-open range of integer window indices.
struct WindowRange {
    std::int64_t begin = 0;
    std::int64_t end = 0;

    bool empty() const { return end <= begin; }
    std::int64_t size() const { return empty() ? 0 : end - begin; }
    bool operator==(const WindowRange&) const = default;
};

/// Minimum share of a window a pass must play for the window to count.
inline constexpr double kWindowCoverageThreshold = 0.5;

/// Windows w for which the pass plays at least half of [w, w+1).
WindowRange covered_windows(const PlaybackPass& pass);

enum class PlayClass { first_play, replay };

struct ClassifiedSpan {
    std::size_t pass = 0;  // index into the input pass list
    WindowRange windows;
    PlayClass cls = PlayClass::first_play;

    bool operator==(const ClassifiedSpan&) const = default;
};

/// Classifies each covered window of each pass of one session: the first pass
/// to cover a window plays it, every later one replays it. Spans are emitted in
/// pass order and, within a pass, in window order.
std::vector<ClassifiedSpan> mark_replays(std::span<const PlaybackPass> passes);

}  // namespace vusage
