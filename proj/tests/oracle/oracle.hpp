#pragma once

// Reference implementations used only by the tests. Everything here works in
// exact integer units (nanoseconds of media time, milliseconds of wall time,
// quarter steps of playback rate) and favours obviousness over speed.

#include <cstdint>
#include <span>
#include <string>
#include <tuple>
#include <vector>

#include "vusage/domain.hpp"
#include "vusage/scoring.hpp"
#include "vusage/sessionizer.hpp"

namespace oracle {

constexpr std::int64_t kNsPerSecond = 1'000'000'000;
constexpr std::int64_t kMsPerDay = 86'400'000;

struct Pass {
    std::int64_t start_ns = 0;
    std::int64_t end_ns = 0;
    int rate_q = 4;  // rate * 4
    bool focus = true;
    std::int64_t day = 0;

    bool operator==(const Pass&) const = default;
};

struct Skip {
    std::int64_t source_ns = 0;
    std::int64_t dest_ns = 0;
    std::int64_t day = 0;

    bool operator==(const Skip&) const = default;
};

struct Session {
    std::string id;
    std::vector<Pass> passes;
    std::vector<Skip> skips;
};

/// Seconds to nanoseconds; the value must sit on the nanosecond grid.
std::int64_t to_ns(double seconds);
/// Rates must be multiples of 0.25.
int rate_quarters(double rate);
std::int64_t wall_ms(vusage::Timestamp t);
std::int64_t floor_div(std::int64_t a, std::int64_t b);

/// Day number (days since 1970-01-01, UTC) of the earliest event.
std::int64_t epoch_day_of(std::span<const vusage::PlaybackEvent> events);

/// Player simulation driven event to event. `events` is one session, sorted.
Session reconstruct_exact(std::span<const vusage::PlaybackEvent> events, std::int64_t duration_s,
                          std::int64_t epoch_day);

/// The same player stepped one wall-clock millisecond at a time.
Session reconstruct_ticks(std::span<const vusage::PlaybackEvent> events, std::int64_t duration_s,
                          std::int64_t epoch_day);

/// Groups an arbitrarily ordered log by session, sorts each session by
/// timestamp (ties by arrival) and reconstructs it.
std::vector<Session> sessions_of(std::span<const vusage::PlaybackEvent> events, std::int64_t duration_s,
                                 std::int64_t epoch_day);

/// Per-window totals: for every window, walk every session's passes and skips
/// and add whatever applies. Only the default rate brackets are modelled.
std::vector<double> brute_force_scores(const std::vector<Session>& sessions, std::int64_t duration_s,
                                       const vusage::ScoringConfig& cfg);

/// Log to raw scores with the epoch at the first event's UTC date.
std::vector<double> brute_force_scores(std::span<const vusage::PlaybackEvent> events,
                                       const vusage::VideoMeta& meta, const vusage::ScoringConfig& cfg);

/// (pass index, window, class) for every window each pass covers by at least
/// half a second, found by counting prior covering passes window by window.
std::vector<std::tuple<std::size_t, std::int64_t, vusage::PlayClass>> classify_windows(
    std::span<const vusage::PlaybackPass> passes, std::int64_t duration_s);

/// Expands engine spans to the same (pass, window, class) form.
std::vector<std::tuple<std::size_t, std::int64_t, vusage::PlayClass>> expand_spans(
    std::span<const vusage::ClassifiedSpan> spans);

}  // namespace oracle
