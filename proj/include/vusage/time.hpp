#pragma once

#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

namespace vusage {

/// Wall-clock instant at millisecond resolution (UTC).
using Timestamp = std::chrono::sys_time<std::chrono::milliseconds>;

/// Calendar date.
using Date = std::chrono::sys_days;

/// Parses an RFC 3339 date-time such as `2021-03-01T14:05:09.250Z` or
/// `2021-03-01T15:05:09+01:00`. Sub-millisecond digits are truncated.
/// Throws std::invalid_argument on malformed input.
Timestamp parse_rfc3339(std::string_view text);

/// Always emits UTC with exactly three fractional digits.
std::string format_rfc3339(Timestamp t);

/// `YYYY-MM-DD`. Throws std::invalid_argument.
Date parse_date(std::string_view text);
std::string format_date(Date d);

/// The zone in which calendar days (and therefore midnights) are reckoned.
///
/// Accepts `UTC`, a fixed offset such as `+01:00` / `-05:30`, or an IANA zone
/// name resolved from the system TZif database (`$TZDIR` or
/// /usr/share/zoneinfo).
class ReportingZone {
public:
    ReportingZone();  // UTC

    static ReportingZone utc() { return {}; }
    static ReportingZone parse(std::string_view spec);

    const std::string& name() const { return name_; }

    std::chrono::seconds offset_at(Timestamp t) const;
    Date local_date(Timestamp t) const;
    /// First instant whose local date is `d`.
    Timestamp start_of_day(Date d) const;

private:
    std::string name_;
    std::int32_t initial_offset_ = 0;
    // Offset offsets_[i] is in force from transitions_[i] (unix seconds).
    std::vector<std::int64_t> transitions_;
    std::vector<std::int32_t> offsets_;
};

}  // namespace vusage
