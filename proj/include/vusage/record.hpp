#pragma once

// Line-oriented JSON records shared by the on-disk logs, the catalog file and
// the HTTP ingestion body. Event field names are fixed:
//   v, session, video, type, t, pos, to, rate, focus

#include <string>
#include <string_view>

#include <json.hpp>

#include "vusage/domain.hpp"

namespace vusage {

nlohmann::json encode_event(const PlaybackEvent& ev);

/// Throws ValidationError: unknown_kind for an unrecognised `type`,
/// missing_field for absent `session`/`video`/`type`/`t`, malformed_field for
/// wrongly typed values.
PlaybackEvent decode_event(const nlohmann::json& j);

/// Single-line form without the trailing newline.
std::string encode_event_line(const PlaybackEvent& ev);
PlaybackEvent decode_event_line(std::string_view line);

nlohmann::json encode_meta(const VideoMeta& meta);
VideoMeta decode_meta(const nlohmann::json& j);

}  // namespace vusage
