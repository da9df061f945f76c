#include <gtest/gtest.h>

#include <random>
#include <set>

#include "oracle/scenario.hpp"
#include "vusage/record.hpp"

using namespace vusage;
using nlohmann::json;

namespace {

const oracle::EventFactory kAt{"intro", "a1b2c3d4e5f60718", oracle::midnight(2021, 2, 1)};

ValidationReason decode_reason(const json& j) {
    try {
        decode_event(j);
    } catch (const ValidationError& e) {
        return e.reason();
    }
    ADD_FAILURE() << "decoded " << j.dump();
    return ValidationReason::malformed_field;
}

}  // namespace

TEST(EventRecord, ExactFieldNames) {
    const json seek = encode_event(kAt.seek(12.5, 10, 70));
    std::set<std::string> keys;
    for (const auto& [k, v] : seek.items()) keys.insert(k);
    EXPECT_EQ(keys, (std::set<std::string>{"v", "session", "video", "type", "t", "pos", "to"}));
    EXPECT_EQ(seek["type"], "seek");
    EXPECT_EQ(seek["t"], "2021-02-01T00:00:12.500Z");
    EXPECT_EQ(seek["v"], 1);

    EXPECT_TRUE(encode_event(kAt.rate(0, 1.5)).contains("rate"));
    EXPECT_EQ(encode_event(kAt.focus(0, false))["focus"], false);
}

TEST(EventRecord, LineIsSingleLine) {
    const std::string line = encode_event_line(kAt.play(1, 2.25));
    EXPECT_EQ(line.find('\n'), std::string::npos);
    EXPECT_EQ(decode_event_line(line), kAt.play(1, 2.25));
}

TEST(EventRecord, RoundTripRandomEvents) {
    std::mt19937_64 rng(7);
    const auto video = oracle::make_video("v7", 300);
    for (int s = 0; s < 200; ++s) {
        for (const auto& ev : oracle::random_session(rng, video, oracle::random_session_id(rng), {})) {
            const std::string line = encode_event_line(ev);
            const PlaybackEvent back = decode_event_line(line);
            EXPECT_EQ(back, ev);
            EXPECT_EQ(encode_event_line(back), line);
        }
    }
}

TEST(EventRecord, AwkwardDoublesSurvive) {
    auto ev = kAt.play(0, 0.1 + 0.2);
    EXPECT_EQ(decode_event_line(encode_event_line(ev)).pos_s, 0.1 + 0.2);
    ev.pos_s = 5e-324;
    EXPECT_EQ(decode_event_line(encode_event_line(ev)).pos_s, 5e-324);
}

TEST(EventRecord, DecodeErrors) {
    json base = encode_event(kAt.play(0, 1));
    json j = base;
    j["type"] = "rewind";
    EXPECT_EQ(decode_reason(j), ValidationReason::unknown_kind);

    for (const char* field : {"v", "session", "video", "type", "t"}) {
        j = base;
        j.erase(field);
        EXPECT_EQ(decode_reason(j), ValidationReason::missing_field) << field;
    }

    j = base;
    j["pos"] = "12";
    EXPECT_EQ(decode_reason(j), ValidationReason::malformed_field);
    j = base;
    j["t"] = "yesterday";
    EXPECT_EQ(decode_reason(j), ValidationReason::malformed_field);
    j = base;
    j["v"] = 1.5;
    EXPECT_EQ(decode_reason(j), ValidationReason::malformed_field);
    j = base;
    j["focus"] = "yes";
    EXPECT_EQ(decode_reason(j), ValidationReason::malformed_field);
    EXPECT_EQ(decode_reason(json::array()), ValidationReason::malformed_field);
    EXPECT_THROW(decode_event_line("{\"v\":1,"), ValidationError);
}

TEST(EventRecord, NullOptionalFieldsAreAbsent) {
    json j = encode_event(kAt.play(0, 1));
    j["to"] = nullptr;
    EXPECT_FALSE(decode_event(j).to_s);
}

TEST(MetaRecord, RoundTrip) {
    VideoMeta m = oracle::make_video("lecture-01", 4800, parse_date("2021-02-01"));
    m.kind = VideoKind::synchronous_recording;
    m.title = "Lecture \"1\"";
    const json j = encode_meta(m);
    EXPECT_EQ(j["kind"], "synchronous_recording");
    EXPECT_EQ(j["published_at"], "2021-02-01");
    EXPECT_EQ(decode_meta(j), m);
}

TEST(MetaRecord, RejectsBadDuration) {
    json j = encode_meta(oracle::make_video("x", 10));
    j["duration_s"] = 0;
    EXPECT_THROW(decode_meta(j), std::invalid_argument);
    j["duration_s"] = 10;
    j["kind"] = "podcast";
    EXPECT_THROW(decode_meta(j), std::invalid_argument);
}
