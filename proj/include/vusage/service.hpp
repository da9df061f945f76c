#pragma once

#include <chrono>
#include <cstddef>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "vusage/recompute.hpp"
#include "vusage/scoring.hpp"
#include "vusage/store.hpp"

namespace vusage {

struct ApiResponse {
    int status = 200;
    nlohmann::json body;
};

/// Request handling independent of the HTTP transport.
///
/// Heatmaps are served from an in-memory table of immutable snapshots. A
/// recompute builds and persists each new snapshot before swapping the
/// pointer, so readers only ever take a short lock to copy a shared_ptr.
class HeatmapService {
public:
    HeatmapService(Store& store, ScoringConfig cfg, ReportingZone zone, std::size_t max_batch = 1000);

    /// POST /api/v1/videos/{id}/events. The body is a JSON array of event
    /// records (or an object with an `events` array). Records may omit
    /// `video`; it defaults to the path id.
    ApiResponse ingest(const std::string& video_id, std::string_view body);

    /// GET /api/v1/videos/{id}/heatmap
    ApiResponse heatmap(const std::string& video_id) const;

    /// GET /api/v1/videos
    ApiResponse list_videos() const;

    /// Recomputes every video for `as_of` and publishes the new snapshots.
    /// Concurrent calls are serialised.
    std::vector<RecomputeOutcome> nightly_recompute(Date as_of);

    std::shared_ptr<const Snapshot> current_snapshot(const std::string& video_id) const;

    const ReportingZone& zone() const { return zone_; }
    const ScoringConfig& config() const { return cfg_; }
    Store& store() { return store_; }

private:
    void publish(std::shared_ptr<const Snapshot> snap);

    Store& store_;
    ScoringConfig cfg_;
    ReportingZone zone_;
    std::size_t max_batch_;

    mutable std::mutex snapshots_mutex_;
    std::map<std::string, std::shared_ptr<const Snapshot>> snapshots_;
    std::mutex recompute_mutex_;
};

/// Token bucket per source address.
class RateLimiter {
public:
    using Clock = std::chrono::steady_clock;

    RateLimiter(double per_second, double burst);

    /// Non-positive rate disables limiting.
    bool allow(const std::string& source, Clock::time_point now = Clock::now());

private:
    struct Bucket {
        double tokens = 0.0;
        Clock::time_point last{};
    };

    double per_second_;
    double burst_;
    std::mutex mutex_;
    std::map<std::string, Bucket> buckets_;
};

}  // namespace vusage
