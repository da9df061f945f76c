#include "vusage/scoring.hpp"

#include <array>
#include <algorithm>
#include <cmath>
#include <string>

namespace vusage {

namespace {

constexpr int kFractionBits = 60;
constexpr uint128_t kExactDoubleLimit = uint128_t{1} << 53;

}  // namespace

void ScoringConfig::validate() const {
    if (!(decay_slope >= 0.0) || !std::isfinite(decay_slope)) {
        throw std::invalid_argument("decay_slope must be finite and >= 0");
    }
    if (!(rate_bracket_bounds.first > 0.0 && rate_bracket_bounds.first < rate_bracket_bounds.second)) {
        throw std::invalid_argument("rate_bracket_bounds must be positive and strictly increasing");
    }
    for (double v : table.as_tuple()) {
        if (!std::isfinite(v)) throw std::invalid_argument("increment table entries must be finite");
    }
    if (epoch_policy == EpochPolicy::fixed_date && !fixed_epoch) {
        throw std::invalid_argument("epoch_policy fixed_date needs fixed_epoch");
    }
}

RateBracket rate_bracket(double rate, std::pair<double, double> bounds) {
    if (rate < bounds.first) return RateBracket::normal;
    if (rate < bounds.second) return RateBracket::one_and_half;
    return RateBracket::double_speed;
}

double increment_for_pass(PlayClass cls, bool in_focus, RateBracket bracket, const IncrementTable& table) {
    if (cls == PlayClass::replay && in_focus) return table.replay;
    switch (bracket) {
        case RateBracket::normal: return in_focus ? table.play_focus : table.play_unfocus;
        case RateBracket::one_and_half: return in_focus ? table.play15_focus : table.play15_unfocus;
        case RateBracket::double_speed: return in_focus ? table.play2x_focus : table.play2x_unfocus;
    }
    return 0.0;
}

std::vector<SkipPenalty> skip_penalties(const SkipEvent& skip, const VideoMeta& meta, const ScoringConfig& cfg) {
    if (!(skip.dest_s > skip.source_s)) throw ContractViolation("skip destination must lie after its source");
    const std::array<double, kSkipBandCount> deltas{cfg.table.skip_band1, cfg.table.skip_band2,
                                                    cfg.table.skip_band3};
    std::int64_t limit = meta.duration_s;
    if (cfg.skip_band_scope == SkipBandScope::skipped_region_only) {
        limit = std::min(limit, static_cast<std::int64_t>(std::ceil(skip.dest_s)));
    }

    std::vector<SkipPenalty> out;
    for (int band = 0; band < kSkipBandCount; ++band) {
        const double lo = skip.source_s + kSkipBandSeconds * band;
        const double hi = skip.source_s + kSkipBandSeconds * (band + 1);
        WindowRange r{static_cast<std::int64_t>(std::ceil(lo)), static_cast<std::int64_t>(std::ceil(hi))};
        r.begin = std::max<std::int64_t>(r.begin, 0);
        r.end = std::min(r.end, limit);
        if (!r.empty() && deltas[band] != 0.0) out.push_back({r, deltas[band]});
    }
    return out;
}

double day_weight(std::int64_t event_day, const ScoringConfig& cfg) {
    if (event_day < 0) {
        throw ContractViolation("event day " + std::to_string(event_day) + " precedes the scoring epoch");
    }
    return 1.0 + cfg.decay_slope * static_cast<double>(event_day);
}

Date resolve_epoch(const ScoringConfig& cfg, const VideoMeta& meta, std::optional<Timestamp> first_event,
                   const ReportingZone& zone) {
    switch (cfg.epoch_policy) {
        case EpochPolicy::first_event_date:
            return first_event ? zone.local_date(*first_event) : meta.published_at;
        case EpochPolicy::video_published_at:
            return meta.published_at;
        case EpochPolicy::fixed_date:
            if (!cfg.fixed_epoch) throw std::invalid_argument("epoch_policy fixed_date needs fixed_epoch");
            return *cfg.fixed_epoch;
    }
    return meta.published_at;
}

ScoreAccumulator::ScoreAccumulator(std::int64_t windows)
    : diff_(static_cast<std::size_t>(std::max<std::int64_t>(windows, 0)) + 1, Fixed{0}) {}

void ScoreAccumulator::add(WindowRange range, double delta) {
    range.begin = std::max<std::int64_t>(range.begin, 0);
    range.end = std::min(range.end, windows());
    if (range.empty() || delta == 0.0) return;
    const Fixed f = to_fixed(delta);
    diff_[static_cast<std::size_t>(range.begin)] += f;
    diff_[static_cast<std::size_t>(range.end)] -= f;
}

std::vector<ScoreAccumulator::Fixed> ScoreAccumulator::totals() const {
    std::vector<Fixed> out(diff_.size() - 1);
    Fixed running = 0;
    for (std::size_t w = 0; w < out.size(); ++w) {
        running += diff_[w];
        out[w] = running;
    }
    return out;
}

ScoreAccumulator::Fixed ScoreAccumulator::to_fixed(double value) {
    const double scaled = std::ldexp(value, kFractionBits);
    if (!std::isfinite(scaled) || std::fabs(scaled) >= std::ldexp(1.0, 120)) {
        throw std::overflow_error("score contribution out of fixed-point range");
    }
    return static_cast<Fixed>(std::nearbyint(scaled));
}

double ScoreAccumulator::to_double(Fixed value) {
    return std::ldexp(static_cast<double>(value), -kFractionBits);
}

double exact_ratio(uint128_t num, uint128_t den) {
    if (den == 0) throw ContractViolation("ratio with zero denominator");
    if (num > den) throw ContractViolation("ratio above one");
    if (num == 0) return 0.0;
    if (num == den) return 1.0;
    if (den < kExactDoubleLimit) {
        // Both operands exact; IEEE division is correctly rounded.
        return static_cast<double>(num) / static_cast<double>(den);
    }

    // Long division: leading quotient bit, 52 further mantissa bits, one
    // rounding bit, then the remainder as sticky bit.
    uint128_t rem = num;
    int exponent = 0;
    while (rem < den) {
        rem <<= 1;
        ++exponent;
    }
    rem -= den;
    std::uint64_t bits = 1;
    for (int i = 0; i < 53; ++i) {
        rem <<= 1;
        const bool bit = rem >= den;
        if (bit) rem -= den;
        bits = (bits << 1) | (bit ? 1u : 0u);
    }
    std::uint64_t mantissa = bits >> 1;
    const bool round_bit = (bits & 1u) != 0;
    if (round_bit && (rem != 0 || (mantissa & 1u) != 0)) ++mantissa;
    return std::ldexp(static_cast<double>(mantissa), -(exponent + 52));
}

ScoreVector score_video(std::span<const Reconstruction> sessions, const VideoMeta& meta, const ScoringConfig& cfg,
                        Date as_of) {
    ScoreAccumulator acc(meta.duration_s);

    for (const Reconstruction& session : sessions) {
        for (const ClassifiedSpan& span : mark_replays(session.passes)) {
            const PlaybackPass& pass = session.passes[span.pass];
            const double inc = increment_for_pass(span.cls, pass.in_focus,
                                                  rate_bracket(pass.rate, cfg.rate_bracket_bounds), cfg.table);
            acc.add(span.windows, inc * day_weight(pass.event_day, cfg));
        }
        for (const SkipEvent& skip : session.skips) {
            const double weight = day_weight(skip.event_day, cfg);
            for (const SkipPenalty& p : skip_penalties(skip, meta, cfg)) acc.add(p.windows, p.delta * weight);
        }
    }

    const auto totals = acc.totals();
    ScoreVector out;
    out.video_id = meta.video_id;
    out.as_of = as_of;
    out.raw.reserve(totals.size());
    for (const auto t : totals) out.raw.push_back(ScoreAccumulator::to_double(t));

    ScoreAccumulator::Fixed peak = 0;
    for (const auto t : totals) peak = std::max(peak, t);
    out.normalized.assign(totals.size(), 0.0);
    if (peak > 0) {
        for (std::size_t w = 0; w < totals.size(); ++w) {
            if (totals[w] > 0) {
                out.normalized[w] = exact_ratio(static_cast<uint128_t>(totals[w]), static_cast<uint128_t>(peak));
            }
        }
    }
    return out;
}

std::vector<double> normalize(std::span<const double> raw) {
    double peak = 0.0;
    for (double v : raw) peak = std::max(peak, v);
    std::vector<double> out(raw.size(), 0.0);
    if (!(peak > 0.0)) return out;
    for (std::size_t i = 0; i < raw.size(); ++i) {
        out[i] = raw[i] > 0.0 ? std::min(1.0, raw[i] / peak) : 0.0;
    }
    return out;
}

}  // namespace vusage
