#include "vusage/sessionizer.hpp"

#include <algorithm>
#include <cmath>

namespace vusage {

void sort_events(std::vector<PlaybackEvent>& events) {
    std::stable_sort(events.begin(), events.end(),
                     [](const PlaybackEvent& a, const PlaybackEvent& b) { return a.timestamp < b.timestamp; });
}

namespace {

class PlayerModel {
public:
    PlayerModel(std::string session, const VideoMeta& meta, const DayClock& clock, Reconstruction& out)
        : session_(std::move(session)),
          meta_(meta),
          clock_(clock),
          out_(out),
          duration_(static_cast<double>(meta.duration_s)) {}

    void apply(const PlaybackEvent& ev) {
        advance_to(ev.timestamp);
        switch (ev.kind) {
            case EventKind::play: {
                const double pos = clamp(ev.pos_s.value_or(position_));
                if (playing_ && pos == position_) break;
                if (playing_) close_pass();
                position_ = pos;
                start_pass(ev.timestamp);
                break;
            }
            case EventKind::pause:
                if (playing_) close_pass();
                playing_ = false;
                position_ = clamp(ev.pos_s.value_or(position_));
                break;
            case EventKind::end:
                if (playing_) close_pass();
                playing_ = false;
                position_ = clamp(ev.pos_s.value_or(position_));
                break;
            case EventKind::seek: {
                const double source = position_;
                const double dest = clamp(ev.to_s.value_or(position_));
                if (dest > source) {
                    out_.skips.push_back(SkipEvent{session_, meta_.video_id, source, dest,
                                                   clock_.day_of(ev.timestamp)});
                }
                if (dest == source) break;
                if (playing_) close_pass();
                position_ = dest;
                if (playing_) start_pass(ev.timestamp);
                break;
            }
            case EventKind::rate:
                if (ev.rate && *ev.rate > 0.0 && *ev.rate != rate_) change_state(ev.timestamp, [&] {
                    rate_ = *ev.rate;
                });
                break;
            case EventKind::focus:
                if (ev.in_focus && *ev.in_focus != in_focus_) change_state(ev.timestamp, [&] {
                    in_focus_ = *ev.in_focus;
                });
                break;
        }
    }

    // Truncate at the last reported instant.
    void finish() {
        if (playing_) close_pass();
        playing_ = false;
    }

private:
    // Positions live on a 1 ns grid. Wall-clock deltas pick up rounding error
    // on conversion; snapping keeps x.5 boundaries and integer skip sources
    // exact for the window and band tests downstream.
    static double snap(double pos) { return std::round(pos * 1e9) / 1e9; }
    double clamp(double pos) const { return std::clamp(snap(pos), 0.0, duration_); }

    void advance_to(Timestamp t) {
        if (playing_ && t > last_t_) {
            const double wall = std::chrono::duration<double>(t - last_t_).count();
            position_ = clamp(position_ + wall * rate_);
        }
        last_t_ = std::max(last_t_, t);
    }

    void start_pass(Timestamp t) {
        playing_ = true;
        pass_start_ = position_;
        pass_wall_ = t;
    }

    void close_pass() {
        if (position_ > pass_start_) {
            out_.passes.push_back(PlaybackPass{session_, meta_.video_id, pass_start_, position_, rate_,
                                               in_focus_, clock_.day_of(pass_wall_), pass_wall_});
        }
    }

    template <typename F>
    void change_state(Timestamp t, F&& mutate) {
        if (playing_) close_pass();
        mutate();
        if (playing_) start_pass(t);
    }

    std::string session_;
    const VideoMeta& meta_;
    const DayClock& clock_;
    Reconstruction& out_;
    double duration_;

    bool playing_ = false;
    double position_ = 0.0;
    double rate_ = 1.0;
    bool in_focus_ = true;
    Timestamp last_t_{};

    double pass_start_ = 0.0;
    Timestamp pass_wall_{};
};

}  // namespace

Reconstruction reconstruct(std::span<const PlaybackEvent> events, const VideoMeta& meta, const DayClock& clock) {
    Reconstruction out;
    if (events.empty()) return out;
    PlayerModel model(events.front().session_id, meta, clock, out);
    for (const auto& ev : events) model.apply(ev);
    model.finish();
    return out;
}

WindowRange covered_windows(const PlaybackPass& pass) {
    const double a = pass.media_start_s;
    const double b = pass.media_end_s;
    if (!(b > a)) return {};
    auto coverage = [&](std::int64_t w) {
        const auto wd = static_cast<double>(w);
        return std::min(b, wd + 1.0) - std::max(a, wd);
    };
    const auto first = static_cast<std::int64_t>(std::floor(a));
    const auto last = static_cast<std::int64_t>(std::ceil(b)) - 1;
    WindowRange r{first, last + 1};
    if (coverage(first) < kWindowCoverageThreshold) r.begin = first + 1;
    if (last != first && coverage(last) < kWindowCoverageThreshold) r.end = last;
    if (r.empty()) return {};
    return r;
}

std::vector<ClassifiedSpan> mark_replays(std::span<const PlaybackPass> passes) {
    std::vector<ClassifiedSpan> spans;
    // Disjoint, sorted, non-adjacent union of windows already played.
    std::vector<WindowRange> seen;

    for (std::size_t i = 0; i < passes.size(); ++i) {
        const WindowRange r = covered_windows(passes[i]);
        if (r.empty()) continue;

        std::int64_t cursor = r.begin;
        auto it = std::lower_bound(seen.begin(), seen.end(), r.begin,
                                   [](const WindowRange& s, std::int64_t v) { return s.end <= v; });
        for (; it != seen.end() && it->begin < r.end; ++it) {
            const std::int64_t ov_begin = std::max(it->begin, r.begin);
            const std::int64_t ov_end = std::min(it->end, r.end);
            if (ov_begin > cursor) spans.push_back({i, {cursor, ov_begin}, PlayClass::first_play});
            spans.push_back({i, {ov_begin, ov_end}, PlayClass::replay});
            cursor = ov_end;
        }
        if (cursor < r.end) spans.push_back({i, {cursor, r.end}, PlayClass::first_play});

        // Merge r into the union.
        auto lo = std::lower_bound(seen.begin(), seen.end(), r.begin,
                                   [](const WindowRange& s, std::int64_t v) { return s.end < v; });
        auto hi = lo;
        WindowRange merged = r;
        while (hi != seen.end() && hi->begin <= r.end) {
            merged.begin = std::min(merged.begin, hi->begin);
            merged.end = std::max(merged.end, hi->end);
            ++hi;
        }
        lo = seen.erase(lo, hi);
        seen.insert(lo, merged);
    }
    return spans;
}

}  // namespace vusage
