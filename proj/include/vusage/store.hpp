#pragma once

// File-backed persistence. Layout under the data directory:
//
//   catalog.meta                       one VideoMeta record per line
//   <video_id>.events.log              append-only event records, one per line
//   <video_id>.scores.<as_of>.snap     score snapshot for one recompute date

#include <cstddef>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "vusage/domain.hpp"
#include "vusage/scoring.hpp"

namespace vusage {

class UnknownVideo : public std::runtime_error {
public:
    explicit UnknownVideo(const std::string& id) : std::runtime_error("unknown video '" + id + "'") {}
};

class NoSnapshot : public std::runtime_error {
public:
    explicit NoSnapshot(const std::string& id) : std::runtime_error("no snapshot for video '" + id + "'") {}
};

class StorageFull : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A complete log line that does not decode to a valid event.
class CorruptLog : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A persisted score vector together with everything needed to reproduce it.
struct Snapshot {
    ScoreVector scores;
    ScoringConfig config;
    Date epoch{};
    std::string zone = "UTC";

    bool operator==(const Snapshot&) const = default;
};

struct LogScan {
    std::size_t lines = 0;
    std::size_t torn_lines = 0;  // unparseable fragments left by interrupted writes
};

/// Video ids double as file-name stems: [A-Za-z0-9._-]+, not starting with '.'.
bool is_valid_video_id(std::string_view id);

class Store {
public:
    /// Creates the directory if needed.
    explicit Store(std::filesystem::path data_dir);

    const std::filesystem::path& data_dir() const { return dir_; }

    /// Sorted by video_id.
    std::vector<VideoMeta> catalog() const;
    std::optional<VideoMeta> find_video(const std::string& video_id) const;
    /// Adds or replaces catalog entries; the catalog file is rewritten atomically.
    void put_videos(std::span<const VideoMeta> videos);

    /// Appends events (already validated) to their videos' logs, in order, and
    /// syncs before returning. Writers to the same log are serialised.
    /// Throws UnknownVideo, StorageFull.
    std::size_t append_events(std::span<const PlaybackEvent> batch);

    /// Events whose local date (in `zone`) is on or before `up_to`, stably
    /// sorted by timestamp. Torn lines are skipped with a warning.
    /// Throws UnknownVideo, CorruptLog.
    std::vector<PlaybackEvent> load_events(const std::string& video_id, std::optional<Date> up_to,
                                           const ReportingZone& zone = {}, LogScan* scan = nullptr) const;

    void save_snapshot(const Snapshot& snapshot);
    /// Latest snapshot by as_of. Throws NoSnapshot.
    Snapshot load_snapshot(const std::string& video_id) const;
    std::vector<Date> snapshot_dates(const std::string& video_id) const;

    std::filesystem::path log_path(const std::string& video_id) const;
    std::filesystem::path snapshot_path(const std::string& video_id, Date as_of) const;
    std::filesystem::path catalog_path() const;

private:
    std::mutex& log_mutex(const std::string& video_id) const;
    void load_catalog_locked() const;

    std::filesystem::path dir_;

    mutable std::mutex catalog_mutex_;
    mutable bool catalog_loaded_ = false;
    mutable std::map<std::string, VideoMeta> catalog_;

    mutable std::mutex locks_mutex_;
    mutable std::map<std::string, std::unique_ptr<std::mutex>> log_locks_;
};

nlohmann::json snapshot_to_json(const Snapshot& snapshot);
Snapshot snapshot_from_json(const nlohmann::json& j);

}  // namespace vusage
