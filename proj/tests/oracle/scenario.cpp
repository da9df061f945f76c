#include "oracle/scenario.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>

#include <unistd.h>

namespace oracle {

using namespace std::chrono;
using vusage::EventKind;
using vusage::PlaybackEvent;

vusage::Timestamp EventFactory::at(double t) const {
    return origin + milliseconds(std::llround(t * 1000.0));
}

PlaybackEvent EventFactory::play(double t, double pos) const {
    PlaybackEvent ev{.session_id = session, .video_id = video, .kind = EventKind::play, .timestamp = at(t)};
    ev.pos_s = pos;
    return ev;
}

PlaybackEvent EventFactory::pause(double t, double pos) const {
    PlaybackEvent ev = play(t, pos);
    ev.kind = EventKind::pause;
    return ev;
}

PlaybackEvent EventFactory::end(double t, double pos) const {
    PlaybackEvent ev = play(t, pos);
    ev.kind = EventKind::end;
    return ev;
}

PlaybackEvent EventFactory::seek(double t, double pos, double to) const {
    PlaybackEvent ev = play(t, pos);
    ev.kind = EventKind::seek;
    ev.to_s = to;
    return ev;
}

PlaybackEvent EventFactory::rate(double t, double r) const {
    PlaybackEvent ev{.session_id = session, .video_id = video, .kind = EventKind::rate, .timestamp = at(t)};
    ev.rate = r;
    return ev;
}

PlaybackEvent EventFactory::focus(double t, bool in_focus) const {
    PlaybackEvent ev{.session_id = session, .video_id = video, .kind = EventKind::focus, .timestamp = at(t)};
    ev.in_focus = in_focus;
    return ev;
}

vusage::Timestamp midnight(int y, unsigned m, unsigned d) {
    return vusage::Timestamp{sys_days{year{y} / month{m} / day{d}}};
}

vusage::VideoMeta make_video(const std::string& id, std::int64_t duration_s, vusage::Date published) {
    vusage::VideoMeta meta;
    meta.video_id = id;
    meta.duration_s = duration_s;
    meta.title = id;
    meta.course_code = "CA259";
    meta.week_label = "week 1";
    meta.published_at = published;
    return meta;
}

std::string random_session_id(std::mt19937_64& rng) {
    static constexpr char kHex[] = "0123456789abcdef";
    std::string id(16, '0');
    const std::uint64_t bits = rng();
    for (int i = 0; i < 16; ++i) id[static_cast<std::size_t>(i)] = kHex[(bits >> (4 * i)) & 0xf];
    return id;
}

namespace {

// Milliseconds-grid position, biased toward whole and half seconds so that
// window and band boundaries are hit often.
double random_position(std::mt19937_64& rng, std::int64_t duration_s) {
    const std::int64_t span_ms = (duration_s + 5) * 1000;
    const std::int64_t ms = std::uniform_int_distribution<std::int64_t>(0, span_ms)(rng);
    switch (std::uniform_int_distribution<int>(0, 4)(rng)) {
        case 0:
        case 1: return static_cast<double>(ms / 1000);
        case 2: return static_cast<double>(ms / 1000) + 0.5;
        default: return static_cast<double>(ms) / 1000.0;
    }
}

}  // namespace

std::vector<PlaybackEvent> random_session(std::mt19937_64& rng, const vusage::VideoMeta& video,
                                          const std::string& session, const StreamShape& shape) {
    static constexpr std::array<double, 7> kRates{0.5, 0.75, 1.0, 1.25, 1.5, 1.75, 2.0};
    auto uniform = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };

    const std::int64_t day = uniform(0, shape.max_start_day);
    std::int64_t now_ms = day * 86'400'000 + uniform(0, 86'399'999);
    EventFactory f{video.video_id, session, midnight(2021, 2, 1)};

    const int count = static_cast<int>(uniform(1, shape.max_events));
    std::vector<PlaybackEvent> out;
    for (int i = 0; i < count; ++i) {
        if (i > 0) {
            const int g = static_cast<int>(uniform(0, 9));
            const std::int64_t gap = g == 0 ? 0 : g == 9 ? uniform(0, shape.max_gap_ms * 10) : uniform(1, shape.max_gap_ms);
            now_ms += gap;
        }
        const double t = static_cast<double>(now_ms) / 1000.0;
        const int roll = static_cast<int>(uniform(0, 99));
        PlaybackEvent ev;
        if (i == 0 ? roll < 80 : roll < 28) {
            ev = f.play(t, random_position(rng, video.duration_s));
        } else if (roll < 48) {
            ev = f.pause(t, random_position(rng, video.duration_s));
        } else if (roll < 68) {
            ev = f.seek(t, random_position(rng, video.duration_s), random_position(rng, video.duration_s));
        } else if (roll < 82) {
            ev = f.rate(t, kRates[static_cast<std::size_t>(uniform(0, kRates.size() - 1))]);
        } else if (roll < 95) {
            ev = f.focus(t, uniform(0, 1) == 1);
        } else {
            ev = f.end(t, random_position(rng, video.duration_s));
        }
        ev.timestamp = f.origin + milliseconds(now_ms);
        out.push_back(vusage::validate_event(std::move(ev), video));
    }
    return out;
}

Scenario random_scenario(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    auto uniform = [&](std::int64_t lo, std::int64_t hi) {
        return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng);
    };
    Scenario sc;
    sc.video = make_video("v" + std::to_string(seed), uniform(1, 300), sys_days{year{2021} / 1 / 25});
    const int sessions = static_cast<int>(uniform(0, 50));
    for (int s = 0; s < sessions; ++s) {
        auto evs = random_session(rng, sc.video, random_session_id(rng), StreamShape{sc.video.duration_s});
        sc.events.insert(sc.events.end(), evs.begin(), evs.end());
    }
    std::shuffle(sc.events.begin(), sc.events.end(), rng);
    return sc;
}

TempDir::TempDir(const std::string& tag) {
    static std::atomic<int> counter{0};
    path_ = std::filesystem::temp_directory_path() /
            ("vusage_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(path_);
    std::filesystem::create_directories(path_);
}

TempDir::~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path_, ec);
}

}  // namespace oracle
