#include "vusage/simulator.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

namespace vusage {

void SimulationParams::validate() const {
    if (students < 1) throw std::invalid_argument("students must be >= 1");
    if (days < 1) throw std::invalid_argument("days must be >= 1");
    const std::array<double, 5> w{mix.linear, mix.skimmer, mix.reviser, mix.speed, mix.background};
    double total = 0.0;
    for (double x : w) {
        if (!(x >= 0.0) || !std::isfinite(x)) throw std::invalid_argument("behaviour weights must be >= 0");
        total += x;
    }
    if (!(total > 0.0)) throw std::invalid_argument("behaviour weights must not all be zero");
    if (!(sessions_per_student_day >= 0.0)) throw std::invalid_argument("sessions_per_student_day must be >= 0");
    if (!(mean_videos_per_session >= 1.0)) throw std::invalid_argument("mean_videos_per_session must be >= 1");
}

namespace {

using std::chrono::milliseconds;

double uniform(std::mt19937_64& rng, double lo, double hi) {
    if (hi <= lo) return lo;
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

bool chance(std::mt19937_64& rng, double p) { return std::bernoulli_distribution(p)(rng); }

// Emits events while tracking the player state the sessionizer will infer.
class ViewingScript {
public:
    ViewingScript(const VideoMeta& video, const std::string& session, Timestamp start)
        : video_(video), session_(session), now_(start), duration_(static_cast<double>(video.duration_s)) {}

    double pos() const { return pos_; }
    double remaining() const { return duration_ - pos_; }
    bool ended() const { return ended_; }
    Timestamp now() const { return now_; }

    void play(double at) {
        pos_ = std::clamp(at, 0.0, duration_);
        ended_ = false;
        PlaybackEvent& ev = emit(EventKind::play);
        ev.pos_s = pos_;
        playing_ = true;
    }

    void pause() {
        if (!playing_) return;
        PlaybackEvent& ev = emit(EventKind::pause);
        ev.pos_s = pos_;
        playing_ = false;
    }

    void seek(double to) {
        PlaybackEvent& ev = emit(EventKind::seek);
        ev.pos_s = pos_;
        ev.to_s = std::clamp(to, 0.0, duration_);
        pos_ = *ev.to_s;
    }

    void set_rate(double rate) {
        PlaybackEvent& ev = emit(EventKind::rate);
        ev.rate = rate;
        rate_ = rate;
    }

    void set_focus(bool focus) {
        PlaybackEvent& ev = emit(EventKind::focus);
        ev.in_focus = focus;
    }

    // Plays `media_s` seconds of media (less at the end of the video, where an
    // `end` event closes playback).
    void watch(double media_s) {
        if (!playing_ || media_s <= 0.0) return;
        const bool reaches_end = media_s >= remaining();
        const double target = reaches_end ? remaining() : media_s;
        auto wall = milliseconds{static_cast<std::int64_t>(std::ceil(target / rate_ * 1000.0))};
        if (wall.count() < 1) wall = milliseconds{1};
        now_ += wall;
        pos_ = std::min(duration_, pos_ + std::chrono::duration<double>(wall).count() * rate_);
        if (reaches_end || pos_ >= duration_) {
            PlaybackEvent& ev = emit(EventKind::end);
            ev.pos_s = pos_;
            playing_ = false;
            ended_ = true;
        }
    }

    void idle(double wall_s) { now_ += milliseconds{static_cast<std::int64_t>(wall_s * 1000.0)}; }

    std::vector<PlaybackEvent> take() { return std::move(events_); }

private:
    PlaybackEvent& emit(EventKind kind) {
        PlaybackEvent ev;
        ev.session_id = session_;
        ev.video_id = video_.video_id;
        ev.kind = kind;
        ev.timestamp = now_;
        events_.push_back(std::move(ev));
        return events_.back();
    }

    const VideoMeta& video_;
    std::string session_;
    Timestamp now_;
    double duration_;
    double pos_ = 0.0;
    double rate_ = 1.0;
    bool playing_ = false;
    bool ended_ = false;
    std::vector<PlaybackEvent> events_;
};

void linear_viewing(std::mt19937_64& rng, ViewingScript& s, double duration) {
    const double start = chance(rng, 0.25) ? uniform(rng, 0.0, 0.7 * duration) : 0.0;
    s.play(start);
    s.watch(uniform(rng, 0.2, 1.0) * s.remaining());
    s.pause();
}

std::string session_token(std::mt19937_64& rng) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string token(16, '0');
    std::uint64_t bits = rng();
    for (char& c : token) {
        c = kHex[bits & 0xF];
        bits >>= 4;
    }
    return token;
}

Behavior draw_behavior(std::mt19937_64& rng, const BehaviorMix& mix) {
    std::discrete_distribution<int> pick({mix.linear, mix.skimmer, mix.reviser, mix.speed, mix.background});
    return static_cast<Behavior>(pick(rng));
}

}  // namespace

std::vector<PlaybackEvent> simulate_viewing(std::mt19937_64& rng, Behavior behavior, const VideoMeta& video,
                                            const std::string& session, Timestamp start) {
    ViewingScript s(video, session, start);
    const auto duration = static_cast<double>(video.duration_s);

    switch (behavior) {
        case Behavior::linear:
            linear_viewing(rng, s, duration);
            break;

        case Behavior::skimmer: {
            s.play(0.0);
            const int hops = std::uniform_int_distribution<int>(2, 5)(rng);
            for (int i = 0; i < hops && !s.ended(); ++i) {
                s.watch(uniform(rng, 5.0, 60.0));
                if (s.ended()) break;
                const double jump = uniform(rng, 20.0, 180.0);
                if (s.pos() + jump >= duration - 1.0) break;
                s.seek(s.pos() + jump);
            }
            s.watch(uniform(rng, 5.0, 60.0));
            s.pause();
            break;
        }

        case Behavior::reviser: {
            if (duration < 8.0) {
                linear_viewing(rng, s, duration);
                break;
            }
            const double origin = chance(rng, 0.5) ? 0.0 : uniform(rng, 0.0, std::max(0.0, duration - 40.0));
            s.play(origin);
            // Leave room after the first stretch so the replay is never cut short by the end.
            s.watch(std::min(uniform(rng, 20.0, 120.0), s.remaining() - 5.0));
            const int rewinds = std::uniform_int_distribution<int>(1, 3)(rng);
            for (int i = 0; i < rewinds; ++i) {
                const double played = s.pos() - origin;
                if (played < 3.0) break;
                const double back = uniform(rng, 2.5, std::max(2.5, played));
                s.seek(std::max(origin, s.pos() - back));
                s.watch(std::min(uniform(rng, 3.0, 30.0), s.remaining() - 1.0));
                if (s.remaining() <= 1.0) break;
            }
            s.pause();
            break;
        }

        case Behavior::speed: {
            static constexpr std::array<double, 4> kRates{1.5, 2.0, 1.5, 1.25};
            s.set_rate(kRates[std::uniform_int_distribution<std::size_t>(0, kRates.size() - 1)(rng)]);
            linear_viewing(rng, s, duration);
            break;
        }

        case Behavior::background: {
            s.set_focus(false);
            s.play(chance(rng, 0.25) ? uniform(rng, 0.0, 0.5 * duration) : 0.0);
            s.watch(uniform(rng, 0.1, 0.6) * s.remaining());
            if (!s.ended() && chance(rng, 0.5)) {
                s.set_focus(true);
                s.watch(uniform(rng, 0.1, 0.8) * s.remaining());
            }
            s.pause();
            break;
        }
    }
    return s.take();
}

std::vector<PlaybackEvent> simulate(std::span<const VideoMeta> catalog, const SimulationParams& params) {
    params.validate();
    if (catalog.empty()) throw std::invalid_argument("catalog is empty");

    std::vector<PlaybackEvent> events;
    for (int student = 0; student < params.students; ++student) {
        std::seed_seq seq{static_cast<std::uint32_t>(params.seed), static_cast<std::uint32_t>(params.seed >> 32),
                          static_cast<std::uint32_t>(student)};
        std::mt19937_64 rng(seq);
        std::poisson_distribution<int> sessions_per_day(params.sessions_per_student_day);
        std::geometric_distribution<int> extra_videos(1.0 / params.mean_videos_per_session);
        std::uniform_int_distribution<std::size_t> pick_video(0, catalog.size() - 1);

        for (int day = 0; day < params.days; ++day) {
            const int sessions = params.sessions_per_student_day > 0.0 ? sessions_per_day(rng) : 0;
            const Timestamp day_start{(params.start_date + std::chrono::days{day}).time_since_epoch()};
            // Spread sessions over the waking day without overlapping.
            Timestamp clock = day_start + std::chrono::hours{8};
            for (int k = 0; k < sessions; ++k) {
                clock += std::chrono::milliseconds{
                    static_cast<std::int64_t>(uniform(rng, 0.0, 14.0 * 3600.0 / std::max(1, sessions)) * 1000.0)};
                const std::string session = session_token(rng);
                const int videos = 1 + extra_videos(rng);
                for (int v = 0; v < videos; ++v) {
                    const VideoMeta& video = catalog[pick_video(rng)];
                    auto viewing = simulate_viewing(rng, draw_behavior(rng, params.mix), video, session, clock);
                    if (!viewing.empty()) clock = viewing.back().timestamp;
                    clock += std::chrono::milliseconds{
                        static_cast<std::int64_t>(uniform(rng, 5.0, 60.0) * 1000.0)};
                    std::move(viewing.begin(), viewing.end(), std::back_inserter(events));
                }
            }
        }
    }
    return events;
}

std::vector<VideoMeta> course_catalog(int sync_count, int async_count, Date published_at) {
    std::vector<VideoMeta> out;
    char id[32];
    for (int i = 0; i < sync_count; ++i) {
        std::snprintf(id, sizeof id, "lecture-%02d", i + 1);
        out.push_back(VideoMeta{id, 80 * 60, "Class recording " + std::to_string(i + 1), "CA259",
                                "week " + std::to_string(i + 1), VideoKind::synchronous_recording,
                                published_at + std::chrono::days{7 * i}});
    }
    for (int i = 0; i < async_count; ++i) {
        std::snprintf(id, sizeof id, "screencast-%02d", i + 1);
        out.push_back(VideoMeta{id, 10 * 60, "Screencast " + std::to_string(i + 1), "CA259",
                                "week " + std::to_string(i / 5 + 1), VideoKind::asynchronous_screencast,
                                published_at + std::chrono::days{7 * (i / 5)}});
    }
    return out;
}

}  // namespace vusage
