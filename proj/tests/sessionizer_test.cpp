#include <gtest/gtest.h>

#include <random>

#include "oracle/oracle.hpp"
#include "oracle/scenario.hpp"
#include "vusage/sessionizer.hpp"

using namespace vusage;

namespace {

const VideoMeta kVideo = oracle::make_video("intro", 600);
const oracle::EventFactory kAt{"intro", "a1b2c3d4e5f60718", oracle::midnight(2021, 2, 1) + std::chrono::hours{9}};
const DayClock kClock{parse_date("2021-02-01"), ReportingZone{}};

Reconstruction run(std::vector<PlaybackEvent> events, const VideoMeta& meta = kVideo) {
    sort_events(events);
    return reconstruct(events, meta, kClock);
}

PlaybackPass pass(double a, double b, double rate = 1.0, bool focus = true) {
    PlaybackPass p;
    p.media_start_s = a;
    p.media_end_s = b;
    p.rate = rate;
    p.in_focus = focus;
    return p;
}

const std::int64_t kEpochDay = parse_date("2021-02-01").time_since_epoch().count();

// Engine output in oracle units; both count days from kClock.epoch.
oracle::Session as_oracle(const Reconstruction& r) {
    oracle::Session s;
    for (const auto& p : r.passes) {
        s.passes.push_back({oracle::to_ns(p.media_start_s), oracle::to_ns(p.media_end_s),
                            oracle::rate_quarters(p.rate), p.in_focus, p.event_day});
    }
    for (const auto& k : r.skips) s.skips.push_back({oracle::to_ns(k.source_s), oracle::to_ns(k.dest_s), k.event_day});
    return s;
}

void expect_same(const oracle::Session& a, const oracle::Session& b) {
    EXPECT_EQ(a.passes, b.passes);
    EXPECT_EQ(a.skips, b.skips);
}

}  // namespace

TEST(Reconstruct, SingleUninterruptedPlay) {
    const auto r = run({kAt.play(0, 0), kAt.pause(10, 10)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_start_s, 0.0);
    EXPECT_EQ(r.passes[0].media_end_s, 10.0);
    EXPECT_EQ(r.passes[0].rate, 1.0);
    EXPECT_TRUE(r.passes[0].in_focus);
    EXPECT_EQ(r.passes[0].session_id, kAt.session);
    EXPECT_EQ(r.passes[0].wall_start, kAt.at(0));
    EXPECT_TRUE(r.skips.empty());
}

TEST(Reconstruct, DoubleSpeedCoversTwiceTheWallTime) {
    const std::vector<PlaybackEvent> evs{kAt.play(0, 0), kAt.rate(0, 2.0), kAt.pause(5, 10)};
    const auto r = run(evs);
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_start_s, 0.0);
    EXPECT_EQ(r.passes[0].media_end_s, 10.0);
    EXPECT_EQ(r.passes[0].rate, 2.0);
    expect_same(as_oracle(r), oracle::reconstruct_ticks(evs, kVideo.duration_s, kEpochDay));
}

TEST(Reconstruct, ForwardSeekWhilePlaying) {
    const std::vector<PlaybackEvent> evs{kAt.play(0, 0), kAt.seek(10, 10, 70), kAt.pause(15, 75)};
    const auto r = run(evs);
    ASSERT_EQ(r.passes.size(), 2u);
    EXPECT_EQ(r.passes[0].media_start_s, 0.0);
    EXPECT_EQ(r.passes[0].media_end_s, 10.0);
    EXPECT_EQ(r.passes[1].media_start_s, 70.0);
    EXPECT_EQ(r.passes[1].media_end_s, 75.0);
    ASSERT_EQ(r.skips.size(), 1u);
    EXPECT_EQ(r.skips[0].source_s, 10.0);
    EXPECT_EQ(r.skips[0].dest_s, 70.0);
    expect_same(as_oracle(r), oracle::reconstruct_ticks(evs, kVideo.duration_s, kEpochDay));
}

TEST(Reconstruct, EmptyStream) {
    const auto r = run({});
    EXPECT_TRUE(r.passes.empty());
    EXPECT_TRUE(r.skips.empty());
}

TEST(Reconstruct, BackwardSeekEmitsNoSkip) {
    const auto r = run({kAt.play(0, 0), kAt.seek(20, 20, 5), kAt.pause(30, 15)});
    ASSERT_EQ(r.passes.size(), 2u);
    EXPECT_EQ(r.passes[1].media_start_s, 5.0);
    EXPECT_EQ(r.passes[1].media_end_s, 15.0);
    EXPECT_TRUE(r.skips.empty());
}

TEST(Reconstruct, SkipSourceIsTheSimulatedPosition) {
    // The client's reported pos (12) lags; the player is at 10.
    const auto r = run({kAt.play(0, 0), kAt.seek(10, 12, 40), kAt.pause(11, 41)});
    ASSERT_EQ(r.skips.size(), 1u);
    EXPECT_EQ(r.skips[0].source_s, 10.0);
}

TEST(Reconstruct, SeekWhilePausedMovesWithoutPlaying) {
    const auto r = run({kAt.seek(0, 0, 100), kAt.play(5, 100), kAt.pause(8, 103)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_start_s, 100.0);
    EXPECT_EQ(r.passes[0].media_end_s, 103.0);
    ASSERT_EQ(r.skips.size(), 1u);
    EXPECT_EQ(r.skips[0].source_s, 0.0);
}

TEST(Reconstruct, PlayWhilePlayingResynchronises) {
    const auto r = run({kAt.play(0, 0), kAt.play(10, 30), kAt.pause(15, 35)});
    ASSERT_EQ(r.passes.size(), 2u);
    EXPECT_EQ(r.passes[0].media_end_s, 10.0);
    EXPECT_EQ(r.passes[1].media_start_s, 30.0);
    EXPECT_EQ(r.passes[1].media_end_s, 35.0);
    EXPECT_TRUE(r.skips.empty());
}

TEST(Reconstruct, RedundantPlayDoesNotSplit) {
    const auto r = run({kAt.play(0, 0), kAt.play(10, 10), kAt.pause(15, 15)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_end_s, 15.0);
}

TEST(Reconstruct, MissingPauseTruncatesAtLastEvent) {
    const auto r = run({kAt.play(0, 0), kAt.focus(12, true)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_end_s, 12.0);

    const auto only_play = run({kAt.play(0, 0)});
    EXPECT_TRUE(only_play.passes.empty());
}

TEST(Reconstruct, StopsAtVideoEnd) {
    const auto r = run({kAt.play(0, 590), kAt.pause(60, 600)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_end_s, 600.0);
}

TEST(Reconstruct, EndEventClosesThePass) {
    const auto r = run({kAt.play(0, 0), kAt.end(8, 8), kAt.focus(100, false)});
    ASSERT_EQ(r.passes.size(), 1u);
    EXPECT_EQ(r.passes[0].media_end_s, 8.0);
}

TEST(Reconstruct, FocusAndRateChangesSplitPasses) {
    const auto r = run({kAt.play(0, 0), kAt.focus(4, false), kAt.rate(6, 1.5), kAt.focus(8, true), kAt.pause(10, 13)});
    ASSERT_EQ(r.passes.size(), 4u);
    EXPECT_EQ(r.passes[0], (PlaybackPass{kAt.session, "intro", 0, 4, 1.0, true, 0, kAt.at(0)}));
    EXPECT_EQ(r.passes[1], (PlaybackPass{kAt.session, "intro", 4, 6, 1.0, false, 0, kAt.at(4)}));
    EXPECT_EQ(r.passes[2], (PlaybackPass{kAt.session, "intro", 6, 9, 1.5, false, 0, kAt.at(6)}));
    EXPECT_EQ(r.passes[3], (PlaybackPass{kAt.session, "intro", 9, 12, 1.5, true, 0, kAt.at(8)}));
}

TEST(Reconstruct, RepeatedStateDoesNotSplit) {
    const auto r = run({kAt.play(0, 0), kAt.rate(2, 1.0), kAt.focus(3, true), kAt.pause(6, 6)});
    EXPECT_EQ(r.passes.size(), 1u);
}

TEST(Reconstruct, TiesKeepArrivalOrder) {
    // Same instant: seek then play. The other order would leave a pass at 0.
    const auto r = run({kAt.play(0, 0), kAt.pause(5, 5), kAt.seek(5, 5, 50), kAt.play(5, 50), kAt.pause(7, 52)});
    ASSERT_EQ(r.passes.size(), 2u);
    EXPECT_EQ(r.passes[1].media_start_s, 50.0);
}

TEST(Reconstruct, DayIndexFollowsTheReportingZone) {
    const VideoMeta lecture = oracle::make_video("lecture", 6000);
    const oracle::EventFactory late{"lecture", "a1b2c3d4e5f60718", oracle::midnight(2021, 2, 3) + std::chrono::hours{23}};
    std::vector<PlaybackEvent> evs{late.play(0, 0), late.seek(1800, 1800, 1900), late.pause(7200, 6000)};
    const auto utc = reconstruct(evs, lecture, kClock);
    ASSERT_EQ(utc.passes.size(), 2u);
    EXPECT_EQ(utc.passes[0].event_day, 2);
    EXPECT_EQ(utc.passes[1].event_day, 2);
    EXPECT_EQ(utc.skips[0].event_day, 2);

    const DayClock plus_two{parse_date("2021-02-01"), ReportingZone::parse("+02:00")};
    const auto shifted = reconstruct(evs, lecture, plus_two);
    EXPECT_EQ(shifted.passes[0].event_day, 3);
}

TEST(Reconstruct, MatchesTickOracleOnRandomStreams) {
    std::mt19937_64 rng(20210201);
    const oracle::StreamShape shape{.duration_s = 120, .max_events = 20, .max_gap_ms = 2000, .max_start_day = 3};
    for (int i = 0; i < 300; ++i) {
        const VideoMeta video = oracle::make_video("intro", 1 + static_cast<std::int64_t>(rng() % 120));
        auto evs = oracle::random_session(rng, video, oracle::random_session_id(rng), shape);
        const auto engine = reconstruct(evs, video, kClock);
        const auto ticks = oracle::reconstruct_ticks(evs, video.duration_s, kEpochDay);
        const auto exact = oracle::reconstruct_exact(evs, video.duration_s, kEpochDay);
        expect_same(as_oracle(engine), ticks);
        expect_same(exact, ticks);

        // Coverage conservation.
        double engine_len = 0.0;
        for (const auto& p : engine.passes) engine_len += p.length();
        std::int64_t tick_len = 0;
        for (const auto& p : ticks.passes) tick_len += p.end_ns - p.start_ns;
        EXPECT_NEAR(engine_len, static_cast<double>(tick_len) / 1e9, 1e-6);
        if (HasFailure()) {
            ADD_FAILURE() << "stream " << i;
            return;
        }
    }
}

TEST(Reconstruct, OnlyForwardSeeksProduceSkips) {
    std::mt19937_64 rng(99);
    for (int i = 0; i < 500; ++i) {
        auto evs = oracle::random_session(rng, kVideo, oracle::random_session_id(rng), {.duration_s = 600});
        const auto r = reconstruct(evs, kVideo, kClock);
        std::size_t seeks = 0;
        for (const auto& ev : evs) seeks += ev.kind == EventKind::seek;
        EXPECT_LE(r.skips.size(), seeks);
        for (const auto& k : r.skips) EXPECT_GT(k.dest_s, k.source_s);
        for (const auto& p : r.passes) {
            EXPECT_GT(p.media_end_s, p.media_start_s);
            EXPECT_GE(p.media_start_s, 0.0);
            EXPECT_LE(p.media_end_s, 600.0);
        }
        EXPECT_EQ(reconstruct(evs, kVideo, kClock), r);
    }
}

TEST(CoveredWindows, HalfSecondThreshold) {
    EXPECT_EQ(covered_windows(pass(0, 10)), (WindowRange{0, 10}));
    EXPECT_EQ(covered_windows(pass(0, 10.5)), (WindowRange{0, 11}));
    EXPECT_EQ(covered_windows(pass(0, 10.49)), (WindowRange{0, 10}));
    EXPECT_EQ(covered_windows(pass(0.5, 1.4)), (WindowRange{0, 1}));
    EXPECT_EQ(covered_windows(pass(0.51, 1.4)), (WindowRange{}));
    EXPECT_EQ(covered_windows(pass(3.2, 3.7)), (WindowRange{3, 4}));
    EXPECT_EQ(covered_windows(pass(3.2, 3.6)), (WindowRange{}));
    EXPECT_EQ(covered_windows(pass(7, 7)), (WindowRange{}));
}

TEST(MarkReplays, RewatchedMiddle) {
    const std::vector<PlaybackPass> passes{pass(0, 10), pass(3, 6)};
    const auto spans = mark_replays(passes);
    ASSERT_EQ(spans.size(), 2u);
    EXPECT_EQ(spans[0], (ClassifiedSpan{0, {0, 10}, PlayClass::first_play}));
    EXPECT_EQ(spans[1], (ClassifiedSpan{1, {3, 6}, PlayClass::replay}));
}

TEST(MarkReplays, SinglePassHasNoReplays) {
    const std::vector<PlaybackPass> passes{pass(0, 10)};
    const auto spans = mark_replays(passes);
    ASSERT_EQ(spans.size(), 1u);
    EXPECT_EQ(spans[0].cls, PlayClass::first_play);
    EXPECT_EQ(spans[0].windows, (WindowRange{0, 10}));
}

TEST(MarkReplays, TwoReplaysOfTheSameWindows) {
    const std::vector<PlaybackPass> passes{pass(0, 10), pass(3, 6), pass(3, 6)};
    const auto got = oracle::expand_spans(mark_replays(passes));
    for (std::int64_t w = 3; w < 6; ++w) {
        int first = 0, replay = 0;
        for (const auto& [i, win, cls] : got) {
            if (win != w) continue;
            (cls == PlayClass::first_play ? first : replay)++;
        }
        EXPECT_EQ(first, 1);
        EXPECT_EQ(replay, 2);
    }
    EXPECT_EQ(got, oracle::classify_windows(passes, 10));
}

TEST(MarkReplays, BackwardSeekIntoUnplayedRegionIsFirstPlay) {
    const std::vector<PlaybackPass> passes{pass(50, 60), pass(10, 55)};
    const auto spans = mark_replays(passes);
    ASSERT_EQ(spans.size(), 3u);
    EXPECT_EQ(spans[1], (ClassifiedSpan{1, {10, 50}, PlayClass::first_play}));
    EXPECT_EQ(spans[2], (ClassifiedSpan{1, {50, 55}, PlayClass::replay}));
}

TEST(MarkReplays, MatchesWindowCountingOnRandomPasses) {
    std::mt19937_64 rng(3);
    std::uniform_int_distribution<int> pos(0, 400);
    for (int trial = 0; trial < 500; ++trial) {
        std::vector<PlaybackPass> passes;
        const int n = 1 + static_cast<int>(rng() % 12);
        for (int i = 0; i < n; ++i) {
            double a = pos(rng) / 4.0, b = pos(rng) / 4.0;
            if (a > b) std::swap(a, b);
            if (a == b) b += 0.25;
            passes.push_back(pass(a, b));
        }
        const auto got = oracle::expand_spans(mark_replays(passes));
        ASSERT_EQ(got, oracle::classify_windows(passes, 101)) << "trial " << trial;
        // No replay without an earlier cover.
        for (const auto& [i, w, cls] : got) {
            if (cls != PlayClass::replay) continue;
            bool earlier = false;
            for (const auto& [j, w2, c2] : got) earlier |= (j < i && w2 == w);
            EXPECT_TRUE(earlier);
        }
    }
}
