#include "vusage/service.hpp"

#include <algorithm>

#include <spdlog/spdlog.h>

#include "vusage/record.hpp"

namespace vusage {

using nlohmann::json;

namespace {

ApiResponse error_response(int status, const std::string& message) {
    return {status, json{{"error", message}}};
}

}  // namespace

HeatmapService::HeatmapService(Store& store, ScoringConfig cfg, ReportingZone zone, std::size_t max_batch)
    : store_(store), cfg_(std::move(cfg)), zone_(std::move(zone)), max_batch_(max_batch) {
    cfg_.validate();
    for (const auto& meta : store_.catalog()) {
        try {
            snapshots_[meta.video_id] = std::make_shared<const Snapshot>(store_.load_snapshot(meta.video_id));
        } catch (const NoSnapshot&) {
        } catch (const std::exception& e) {
            spdlog::warn("ignoring unreadable snapshot for '{}': {}", meta.video_id, e.what());
        }
    }
}

ApiResponse HeatmapService::ingest(const std::string& video_id, std::string_view body) {
    const auto meta = store_.find_video(video_id);
    if (!meta) return error_response(404, "unknown video '" + video_id + "'");

    json parsed = json::parse(body.begin(), body.end(), nullptr, /*allow_exceptions=*/false);
    if (parsed.is_discarded()) return error_response(400, "body is not valid JSON");
    if (parsed.is_object() && parsed.contains("events")) parsed = parsed["events"];
    if (!parsed.is_array()) return error_response(400, "body must be an array of event records");
    if (parsed.size() > max_batch_) {
        return error_response(413, "batch of " + std::to_string(parsed.size()) + " exceeds limit of " +
                                       std::to_string(max_batch_));
    }

    std::vector<PlaybackEvent> accepted;
    accepted.reserve(parsed.size());
    json rejected = json::array();
    for (std::size_t i = 0; i < parsed.size(); ++i) {
        json& record = parsed[i];
        try {
            if (record.is_object() && !record.contains("video")) record["video"] = video_id;
            accepted.push_back(validate_event(decode_event(record), *meta));
        } catch (const ValidationError& e) {
            rejected.push_back({{"index", i}, {"reason", to_string(e.reason())}, {"detail", e.what()}});
        }
    }

    try {
        store_.append_events(accepted);
    } catch (const StorageFull& e) {
        spdlog::error("ingest for '{}': {}", video_id, e.what());
        return error_response(507, "storage full");
    }
    return {202, json{{"accepted", accepted.size()}, {"rejected", rejected}}};
}

std::shared_ptr<const Snapshot> HeatmapService::current_snapshot(const std::string& video_id) const {
    std::lock_guard lock(snapshots_mutex_);
    const auto it = snapshots_.find(video_id);
    return it == snapshots_.end() ? nullptr : it->second;
}

ApiResponse HeatmapService::heatmap(const std::string& video_id) const {
    const auto meta = store_.find_video(video_id);
    if (!meta) return error_response(404, "unknown video '" + video_id + "'");

    const auto snap = current_snapshot(video_id);
    std::vector<double> scores(static_cast<std::size_t>(meta->duration_s), 0.0);
    json as_of = nullptr;
    if (snap) {
        const auto& normalized = snap->scores.normalized;
        std::copy_n(normalized.begin(), std::min(normalized.size(), scores.size()), scores.begin());
        as_of = format_date(snap->scores.as_of);
    }
    return {200, json{{"video", video_id}, {"duration_s", meta->duration_s}, {"as_of", as_of}, {"scores", scores}}};
}

ApiResponse HeatmapService::list_videos() const {
    json out = json::array();
    for (const auto& meta : store_.catalog()) out.push_back(encode_meta(meta));
    return {200, out};
}

void HeatmapService::publish(std::shared_ptr<const Snapshot> snap) {
    std::lock_guard lock(snapshots_mutex_);
    snapshots_[snap->scores.video_id] = std::move(snap);
}

std::vector<RecomputeOutcome> HeatmapService::nightly_recompute(Date as_of) {
    std::lock_guard lock(recompute_mutex_);
    spdlog::info("recomputing all videos as of {}", format_date(as_of));
    return recompute_all(store_, cfg_, zone_, as_of,
                         [this](const Snapshot& snap) { publish(std::make_shared<const Snapshot>(snap)); });
}

RateLimiter::RateLimiter(double per_second, double burst) : per_second_(per_second), burst_(burst) {}

bool RateLimiter::allow(const std::string& source, Clock::time_point now) {
    if (per_second_ <= 0.0) return true;
    std::lock_guard lock(mutex_);
    auto [it, inserted] = buckets_.try_emplace(source, Bucket{burst_, now});
    Bucket& b = it->second;
    if (!inserted) {
        const double elapsed = std::chrono::duration<double>(now - b.last).count();
        b.tokens = std::min(burst_, b.tokens + std::max(0.0, elapsed) * per_second_);
        b.last = now;
    }
    if (b.tokens < 1.0) return false;
    b.tokens -= 1.0;
    return true;
}

}  // namespace vusage
