#include "vusage/time.hpp"

#include <algorithm>
#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <stdexcept>

namespace vusage {

namespace {

using namespace std::chrono;

[[noreturn]] void bad(std::string_view what, std::string_view text) {
    throw std::invalid_argument(std::string(what) + ": '" + std::string(text) + "'");
}

int digits(std::string_view text, std::size_t pos, std::size_t count, std::string_view whole) {
    if (pos + count > text.size()) bad("truncated date-time", whole);
    int value = 0;
    for (std::size_t i = pos; i < pos + count; ++i) {
        const char c = text[i];
        if (c < '0' || c > '9') bad("expected digit", whole);
        value = value * 10 + (c - '0');
    }
    return value;
}

void expect(std::string_view text, std::size_t pos, char c, std::string_view whole) {
    if (pos >= text.size() || text[pos] != c) bad("malformed date-time", whole);
}

Date checked_date(int y, int m, int d, std::string_view whole) {
    const year_month_day ymd{year{y}, month{static_cast<unsigned>(m)}, day{static_cast<unsigned>(d)}};
    if (!ymd.ok()) bad("invalid calendar date", whole);
    return sys_days{ymd};
}

std::uint32_t be32(const std::string& buf, std::size_t at) {
    if (at + 4 > buf.size()) throw std::runtime_error("truncated TZif data");
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v = (v << 8) | static_cast<unsigned char>(buf[at + i]);
    return v;
}

std::int64_t be64(const std::string& buf, std::size_t at) {
    const std::uint64_t hi = be32(buf, at);
    const std::uint64_t lo = be32(buf, at + 4);
    return static_cast<std::int64_t>((hi << 32) | lo);
}

}  // namespace

Timestamp parse_rfc3339(std::string_view text) {
    const Date date = parse_date(text.substr(0, std::min<std::size_t>(10, text.size())));
    if (text.size() < 20) bad("truncated date-time", text);
    if (text[10] != 'T' && text[10] != 't' && text[10] != ' ') bad("malformed date-time", text);
    const int hh = digits(text, 11, 2, text);
    expect(text, 13, ':', text);
    const int mi = digits(text, 14, 2, text);
    expect(text, 16, ':', text);
    const int ss = digits(text, 17, 2, text);
    if (hh > 23 || mi > 59 || ss > 60) bad("time out of range", text);

    std::size_t pos = 19;
    std::int64_t millis = 0;
    if (pos < text.size() && text[pos] == '.') {
        ++pos;
        const std::size_t start = pos;
        int scale = 100;
        while (pos < text.size() && text[pos] >= '0' && text[pos] <= '9') {
            millis += (text[pos] - '0') * scale;
            scale /= 10;
            ++pos;
        }
        if (pos == start) bad("empty fraction", text);
    }

    if (pos >= text.size()) bad("missing zone designator", text);
    seconds offset{0};
    if (text[pos] == 'Z' || text[pos] == 'z') {
        ++pos;
    } else if (text[pos] == '+' || text[pos] == '-') {
        const int sign = text[pos] == '-' ? -1 : 1;
        const int oh = digits(text, pos + 1, 2, text);
        expect(text, pos + 3, ':', text);
        const int om = digits(text, pos + 4, 2, text);
        if (oh > 23 || om > 59) bad("offset out of range", text);
        offset = seconds{sign * (oh * 3600 + om * 60)};
        pos += 6;
    } else {
        bad("malformed zone designator", text);
    }
    if (pos != text.size()) bad("trailing characters", text);

    const auto local = date + hours{hh} + minutes{mi} + seconds{ss} + milliseconds{millis};
    return time_point_cast<milliseconds>(local - offset);
}

std::string format_rfc3339(Timestamp t) {
    const auto day = floor<days>(t);
    const year_month_day ymd{day};
    const hh_mm_ss<milliseconds> tod{t - day};
    char buf[32];
    const int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02d.%03dZ",
                                static_cast<int>(ymd.year()), static_cast<unsigned>(ymd.month()),
                                static_cast<unsigned>(ymd.day()), static_cast<int>(tod.hours().count()),
                                static_cast<int>(tod.minutes().count()),
                                static_cast<int>(tod.seconds().count()),
                                static_cast<int>(tod.subseconds().count()));
    return std::string(buf, static_cast<std::size_t>(n));
}

Date parse_date(std::string_view text) {
    if (text.size() != 10) bad("expected YYYY-MM-DD", text);
    const int y = digits(text, 0, 4, text);
    expect(text, 4, '-', text);
    const int m = digits(text, 5, 2, text);
    expect(text, 7, '-', text);
    const int d = digits(text, 8, 2, text);
    return checked_date(y, m, d, text);
}

std::string format_date(Date d) {
    const year_month_day ymd{d};
    char buf[16];
    const int n = std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", static_cast<int>(ymd.year()),
                                static_cast<unsigned>(ymd.month()), static_cast<unsigned>(ymd.day()));
    return std::string(buf, static_cast<std::size_t>(n));
}

ReportingZone::ReportingZone() : name_("UTC") {}

ReportingZone ReportingZone::parse(std::string_view spec) {
    ReportingZone zone;
    if (spec.empty() || spec == "UTC" || spec == "Z" || spec == "utc") return zone;

    if (spec.front() == '+' || spec.front() == '-') {
        if (spec.size() != 6 || spec[3] != ':') bad("expected fixed offset like +01:00", spec);
        const int oh = digits(spec, 1, 2, spec);
        const int om = digits(spec, 4, 2, spec);
        if (oh > 23 || om > 59) bad("offset out of range", spec);
        zone.name_ = std::string(spec);
        zone.initial_offset_ = (spec.front() == '-' ? -1 : 1) * (oh * 3600 + om * 60);
        return zone;
    }

    if (spec.find("..") != std::string_view::npos || spec.front() == '/') bad("invalid zone name", spec);
    const char* env_dir = std::getenv("TZDIR");
    const std::filesystem::path dir = env_dir ? env_dir : "/usr/share/zoneinfo";
    std::ifstream in(dir / std::string(spec), std::ios::binary);
    if (!in) bad("unknown time zone", spec);
    const std::string buf{std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
    if (buf.size() < 44 || buf.compare(0, 4, "TZif") != 0) bad("not a TZif file", spec);

    auto block_counts = [&](std::size_t at) {
        return std::array<std::uint32_t, 6>{be32(buf, at + 20), be32(buf, at + 24), be32(buf, at + 28),
                                            be32(buf, at + 32), be32(buf, at + 36), be32(buf, at + 40)};
    };
    // isutcnt, isstdcnt, leapcnt, timecnt, typecnt, charcnt
    auto counts = block_counts(0);
    std::size_t at = 44;
    std::size_t time_size = 4;
    if (buf[4] >= '2') {
        const std::size_t v1_len = counts[3] * 5 + counts[4] * 6 + counts[5] + counts[2] * 8 +
                                   counts[1] + counts[0];
        const std::size_t v2_header = 44 + v1_len;
        counts = block_counts(v2_header);
        at = v2_header + 44;
        time_size = 8;
    }
    const std::uint32_t timecnt = counts[3];
    const std::uint32_t typecnt = counts[4];
    if (typecnt == 0) bad("TZif file has no local time types", spec);

    std::vector<std::int64_t> times(timecnt);
    for (std::uint32_t i = 0; i < timecnt; ++i) {
        times[i] = time_size == 8 ? be64(buf, at + i * 8)
                                  : static_cast<std::int32_t>(be32(buf, at + i * 4));
    }
    at += timecnt * time_size;
    std::vector<std::uint8_t> idx(timecnt);
    for (std::uint32_t i = 0; i < timecnt; ++i) {
        if (at + i >= buf.size()) bad("truncated TZif data", spec);
        idx[i] = static_cast<std::uint8_t>(buf[at + i]);
    }
    at += timecnt;
    std::vector<std::int32_t> type_offsets(typecnt);
    for (std::uint32_t i = 0; i < typecnt; ++i) {
        type_offsets[i] = static_cast<std::int32_t>(be32(buf, at + i * 6));
    }

    zone.name_ = std::string(spec);
    zone.initial_offset_ = type_offsets[0];
    zone.transitions_ = std::move(times);
    zone.offsets_.reserve(timecnt);
    for (auto i : idx) {
        if (i >= typecnt) bad("corrupt TZif type index", spec);
        zone.offsets_.push_back(type_offsets[i]);
    }
    return zone;
}

// TODO: evaluate the TZif footer rule for instants past the last recorded
// transition; until then the final offset is held.
std::chrono::seconds ReportingZone::offset_at(Timestamp t) const {
    const std::int64_t unix_s = floor<seconds>(t).time_since_epoch().count();
    const auto it = std::upper_bound(transitions_.begin(), transitions_.end(), unix_s);
    if (it == transitions_.begin()) return seconds{initial_offset_};
    return seconds{offsets_[static_cast<std::size_t>(std::distance(transitions_.begin(), it) - 1)]};
}

Date ReportingZone::local_date(Timestamp t) const {
    return floor<days>(t + offset_at(t));
}

Timestamp ReportingZone::start_of_day(Date d) const {
    // Binary search for the first instant whose local date reaches d; offsets
    // never exceed a day, so the bracket always contains it.
    auto lo = Timestamp{(d - days{2}).time_since_epoch()};
    auto hi = Timestamp{(d + days{2}).time_since_epoch()};
    while (hi - lo > milliseconds{1}) {
        const auto mid = lo + (hi - lo) / 2;
        if (local_date(mid) >= d) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

}  // namespace vusage
