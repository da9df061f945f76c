#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "vusage/domain.hpp"
#include "vusage/sessionizer.hpp"

namespace vusage {

__extension__ typedef __int128 int128_t;
__extension__ typedef unsigned __int128 uint128_t;

class ContractViolation : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

enum class EpochPolicy { first_event_date, video_published_at, fixed_date };
enum class SkipBandScope { literal_bands, skipped_region_only };

struct ScoringConfig {
    IncrementTable table;
    double decay_slope = 0.1;  // added weight per day since the epoch
    EpochPolicy epoch_policy = EpochPolicy::first_event_date;
    std::optional<Date> fixed_epoch;  // required for EpochPolicy::fixed_date
    SkipBandScope skip_band_scope = SkipBandScope::literal_bands;
    std::pair<double, double> rate_bracket_bounds{1.25, 1.75};

    /// Throws std::invalid_argument.
    void validate() const;

    bool operator==(const ScoringConfig&) const = default;
};

/// Each skip band is one minute long; three bands follow the skip source.
inline constexpr double kSkipBandSeconds = 60.0;
inline constexpr int kSkipBandCount = 3;

enum class RateBracket { normal, one_and_half, double_speed };

/// rate < lo -> normal, lo <= rate < hi -> one_and_half, rate >= hi -> double.
RateBracket rate_bracket(double rate, std::pair<double, double> bounds = {1.25, 1.75});

/// Per-window increment for one classified pass. An in-focus replay scores
/// the flat replay increment at any speed; an unfocused replay falls back to
/// the unfocused first-play cell for its bracket.
double increment_for_pass(PlayClass cls, bool in_focus, RateBracket bracket, const IncrementTable& table);

struct SkipPenalty {
    WindowRange windows;
    double delta = 0.0;

    bool operator==(const SkipPenalty&) const = default;
};

/// Penalty bands after a forward skip: windows whose start lies in
/// [source + 60k, source + 60(k+1)) for k = 0, 1, 2, truncated at the end of
/// the video (and at the destination under skipped_region_only). Empty bands
/// are omitted.
std::vector<SkipPenalty> skip_penalties(const SkipEvent& skip, const VideoMeta& meta, const ScoringConfig& cfg);

/// 1 + decay_slope * event_day. Throws ContractViolation for negative days.
double day_weight(std::int64_t event_day, const ScoringConfig& cfg);

/// Day 0 for a video under the configured policy. `first_event` is the
/// earliest logged event instant, if any; without one the publication date is
/// used.
Date resolve_epoch(const ScoringConfig& cfg, const VideoMeta& meta, std::optional<Timestamp> first_event,
                   const ReportingZone& zone);

/// Exact per-window accumulator.
///
/// Every contribution is a double; it is converted to a signed fixed-point
/// integer with 60 fractional bits (exact for magnitudes >= 2^-8) and summed
/// in 128-bit arithmetic, so totals do not depend on summation order and
/// repeating a contribution k times multiplies the total by exactly k.
class ScoreAccumulator {
public:
    using Fixed = int128_t;

    explicit ScoreAccumulator(std::int64_t windows);

    std::int64_t windows() const { return static_cast<std::int64_t>(diff_.size()) - 1; }

    /// Adds `delta` to every window in `range` (clipped to the video).
    void add(WindowRange range, double delta);

    /// Per-window exact totals.
    std::vector<Fixed> totals() const;

    static Fixed to_fixed(double value);
    static double to_double(Fixed value);

private:
    std::vector<Fixed> diff_;
};

/// Correctly rounded num / den for 0 <= num <= den, den > 0.
double exact_ratio(uint128_t num, uint128_t den);

/// Scores one video from the reconstructed sessions of every viewer. `raw` is
/// the exact total per window rounded once to double; `normalized` is derived
/// from the exact totals (clamped at 0, divided by the maximum).
ScoreVector score_video(std::span<const Reconstruction> sessions, const VideoMeta& meta, const ScoringConfig& cfg,
                        Date as_of);

/// Display-time normalisation: clamp below at 0 and divide by the maximum.
/// All-zero (or all-negative) input maps to all zeros.
std::vector<double> normalize(std::span<const double> raw);

}  // namespace vusage
