#include "vusage/store.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <fstream>
#include <iterator>
#include <system_error>

#include <spdlog/spdlog.h>

#include "vusage/config.hpp"
#include "vusage/record.hpp"
#include "vusage/sessionizer.hpp"

namespace vusage {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr std::string_view kLogSuffix = ".events.log";
constexpr std::string_view kSnapInfix = ".scores.";
constexpr std::string_view kSnapSuffix = ".snap";

class FileHandle {
public:
    FileHandle(const fs::path& path, int flags) : fd_(::open(path.c_str(), flags | O_CLOEXEC, 0644)) {
        if (fd_ < 0) throw std::system_error(errno, std::generic_category(), "open " + path.string());
    }
    ~FileHandle() {
        if (fd_ >= 0) ::close(fd_);
    }
    FileHandle(const FileHandle&) = delete;
    FileHandle& operator=(const FileHandle&) = delete;

    int fd() const { return fd_; }

private:
    int fd_;
};

[[noreturn]] void throw_write_error(int err, const fs::path& path) {
    if (err == ENOSPC || err == EDQUOT) throw StorageFull("no space left writing " + path.string());
    throw std::system_error(err, std::generic_category(), "write " + path.string());
}

void write_all(int fd, std::string_view data, const fs::path& path) {
    while (!data.empty()) {
        const ssize_t n = ::write(fd, data.data(), data.size());
        if (n < 0) {
            if (errno == EINTR) continue;
            throw_write_error(errno, path);
        }
        data.remove_prefix(static_cast<std::size_t>(n));
    }
}

void sync_fd(int fd, const fs::path& path) {
    if (::fsync(fd) != 0) throw_write_error(errno, path);
}

void sync_dir(const fs::path& dir) {
    const int fd = ::open(dir.c_str(), O_RDONLY | O_DIRECTORY | O_CLOEXEC);
    if (fd < 0) return;
    ::fsync(fd);
    ::close(fd);
}

// Write to a sibling temp file, sync, then rename over the target.
void write_atomically(const fs::path& path, std::string_view contents) {
    fs::path tmp = path;
    tmp += ".tmp";
    {
        FileHandle f(tmp, O_WRONLY | O_CREAT | O_TRUNC);
        write_all(f.fd(), contents, tmp);
        sync_fd(f.fd(), tmp);
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec) throw std::system_error(ec, "rename " + tmp.string());
    sync_dir(path.parent_path());
}

std::string read_file(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::system_error(errno, std::generic_category(), "read " + path.string());
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

bool is_valid_video_id(std::string_view id) {
    if (id.empty() || id.size() > 128 || id.front() == '.') return false;
    if (id.find(kSnapInfix) != std::string_view::npos) return false;
    return std::all_of(id.begin(), id.end(), [](char c) {
        return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '.' ||
               c == '_' || c == '-';
    });
}

Store::Store(fs::path data_dir) : dir_(std::move(data_dir)) { fs::create_directories(dir_); }

fs::path Store::catalog_path() const { return dir_ / "catalog.meta"; }

fs::path Store::log_path(const std::string& video_id) const {
    return dir_ / (video_id + std::string(kLogSuffix));
}

fs::path Store::snapshot_path(const std::string& video_id, Date as_of) const {
    return dir_ / (video_id + std::string(kSnapInfix) + format_date(as_of) + std::string(kSnapSuffix));
}

void Store::load_catalog_locked() const {
    if (catalog_loaded_) return;
    catalog_.clear();
    if (fs::exists(catalog_path())) {
        const std::string text = read_file(catalog_path());
        std::size_t start = 0;
        int line_no = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            if (end == std::string::npos) end = text.size();
            const std::string_view line(text.data() + start, end - start);
            ++line_no;
            start = end + 1;
            if (line.find_first_not_of(" \t\r") == std::string_view::npos) continue;
            json j = json::parse(line.begin(), line.end(), nullptr, false);
            if (j.is_discarded()) {
                throw std::runtime_error(catalog_path().string() + ":" + std::to_string(line_no) + ": not JSON");
            }
            VideoMeta meta = decode_meta(j);
            if (!is_valid_video_id(meta.video_id)) {
                throw std::runtime_error("catalog: invalid video id '" + meta.video_id + "'");
            }
            catalog_[meta.video_id] = std::move(meta);
        }
    }
    catalog_loaded_ = true;
}

std::vector<VideoMeta> Store::catalog() const {
    std::lock_guard lock(catalog_mutex_);
    load_catalog_locked();
    std::vector<VideoMeta> out;
    out.reserve(catalog_.size());
    for (const auto& [id, meta] : catalog_) out.push_back(meta);
    return out;
}

std::optional<VideoMeta> Store::find_video(const std::string& video_id) const {
    std::lock_guard lock(catalog_mutex_);
    load_catalog_locked();
    const auto it = catalog_.find(video_id);
    if (it == catalog_.end()) return std::nullopt;
    return it->second;
}

void Store::put_videos(std::span<const VideoMeta> videos) {
    std::lock_guard lock(catalog_mutex_);
    load_catalog_locked();
    auto updated = catalog_;
    for (const auto& meta : videos) {
        if (!is_valid_video_id(meta.video_id)) {
            throw std::invalid_argument("invalid video id '" + meta.video_id + "'");
        }
        if (meta.duration_s < 1) throw std::invalid_argument("duration_s must be >= 1");
        updated[meta.video_id] = meta;
    }
    std::string text;
    for (const auto& [id, meta] : updated) {
        text += encode_meta(meta).dump();
        text += '\n';
    }
    write_atomically(catalog_path(), text);
    catalog_ = std::move(updated);
}

std::mutex& Store::log_mutex(const std::string& video_id) const {
    std::lock_guard lock(locks_mutex_);
    auto& slot = log_locks_[video_id];
    if (!slot) slot = std::make_unique<std::mutex>();
    return *slot;
}

std::size_t Store::append_events(std::span<const PlaybackEvent> batch) {
    if (batch.empty()) return 0;

    // Group by video, keeping arrival order within each log.
    std::map<std::string, std::string> lines;
    for (const auto& ev : batch) {
        if (!find_video(ev.video_id)) throw UnknownVideo(ev.video_id);
        auto& buf = lines[ev.video_id];
        buf += encode_event_line(ev);
        buf += '\n';
    }

    for (auto& [video_id, buf] : lines) {
        std::lock_guard lock(log_mutex(video_id));
        const fs::path path = log_path(video_id);
        FileHandle f(path, O_RDWR | O_CREAT | O_APPEND);

        struct stat st {};
        if (::fstat(f.fd(), &st) == 0 && st.st_size > 0) {
            char last = '\n';
            if (::pread(f.fd(), &last, 1, st.st_size - 1) == 1 && last != '\n') {
                // An interrupted write left a partial record; terminate it so it
                // stays an isolated, skippable line.
                spdlog::warn("{}: sealing torn final line before append", path.string());
                buf.insert(buf.begin(), '\n');
            }
        }
        write_all(f.fd(), buf, path);
        sync_fd(f.fd(), path);
    }
    return batch.size();
}

std::vector<PlaybackEvent> Store::load_events(const std::string& video_id, std::optional<Date> up_to,
                                              const ReportingZone& zone, LogScan* scan) const {
    if (!find_video(video_id)) throw UnknownVideo(video_id);
    std::vector<PlaybackEvent> events;
    LogScan local;
    const fs::path path = log_path(video_id);
    if (fs::exists(path)) {
        std::string text;
        {
            std::lock_guard lock(log_mutex(video_id));
            text = read_file(path);
        }
        std::size_t start = 0;
        std::size_t line_no = 0;
        while (start < text.size()) {
            std::size_t end = text.find('\n', start);
            const bool terminated = end != std::string::npos;
            if (!terminated) end = text.size();
            const std::string_view line(text.data() + start, end - start);
            start = end + 1;
            ++line_no;
            if (line.empty()) continue;
            ++local.lines;

            json j = json::parse(line.begin(), line.end(), nullptr, /*allow_exceptions=*/false);
            if (j.is_discarded()) {
                ++local.torn_lines;
                spdlog::warn("{}:{}: skipping torn record{}", path.string(), line_no,
                             terminated ? "" : " at end of log");
                continue;
            }
            PlaybackEvent ev;
            try {
                ev = decode_event(j);
            } catch (const ValidationError& e) {
                throw CorruptLog(path.string() + ":" + std::to_string(line_no) + ": " + e.what());
            }
            if (ev.video_id != video_id) {
                throw CorruptLog(path.string() + ":" + std::to_string(line_no) + ": record for another video");
            }
            if (up_to && zone.local_date(ev.timestamp) > *up_to) continue;
            events.push_back(std::move(ev));
        }
    }
    sort_events(events);
    if (scan) *scan = local;
    return events;
}

json snapshot_to_json(const Snapshot& s) {
    return json{{"video_id", s.scores.video_id},
                {"as_of", format_date(s.scores.as_of)},
                {"epoch", format_date(s.epoch)},
                {"zone", s.zone},
                {"duration_s", s.scores.raw.size()},
                {"config", scoring_to_json(s.config)},
                {"raw", s.scores.raw},
                {"normalized", s.scores.normalized}};
}

Snapshot snapshot_from_json(const json& j) {
    Snapshot s;
    s.scores.video_id = j.at("video_id").get<std::string>();
    s.scores.as_of = parse_date(j.at("as_of").get<std::string>());
    s.epoch = parse_date(j.at("epoch").get<std::string>());
    s.zone = j.value("zone", "UTC");
    s.config = scoring_from_json(j.at("config"));
    s.scores.raw = j.at("raw").get<std::vector<double>>();
    s.scores.normalized = j.at("normalized").get<std::vector<double>>();
    if (s.scores.raw.size() != s.scores.normalized.size()) {
        throw std::runtime_error("snapshot vectors differ in length");
    }
    return s;
}

void Store::save_snapshot(const Snapshot& snapshot) {
    if (!is_valid_video_id(snapshot.scores.video_id)) {
        throw std::invalid_argument("invalid video id '" + snapshot.scores.video_id + "'");
    }
    write_atomically(snapshot_path(snapshot.scores.video_id, snapshot.scores.as_of),
                     snapshot_to_json(snapshot).dump() + "\n");
}

std::vector<Date> Store::snapshot_dates(const std::string& video_id) const {
    std::vector<Date> dates;
    const std::string prefix = video_id + std::string(kSnapInfix);
    for (const auto& entry : fs::directory_iterator(dir_)) {
        const std::string name = entry.path().filename().string();
        if (name.size() != prefix.size() + 10 + kSnapSuffix.size()) continue;
        if (name.compare(0, prefix.size(), prefix) != 0) continue;
        if (!name.ends_with(kSnapSuffix)) continue;
        try {
            dates.push_back(parse_date(std::string_view(name).substr(prefix.size(), 10)));
        } catch (const std::invalid_argument&) {
            continue;
        }
    }
    std::sort(dates.begin(), dates.end());
    return dates;
}

Snapshot Store::load_snapshot(const std::string& video_id) const {
    const auto dates = snapshot_dates(video_id);
    if (dates.empty()) throw NoSnapshot(video_id);
    const fs::path path = snapshot_path(video_id, dates.back());
    json j = json::parse(read_file(path), nullptr, false);
    if (j.is_discarded()) throw std::runtime_error(path.string() + ": snapshot is not valid JSON");
    return snapshot_from_json(j);
}

}  // namespace vusage
