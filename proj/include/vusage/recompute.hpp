#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "vusage/scoring.hpp"
#include "vusage/sessionizer.hpp"
#include "vusage/store.hpp"

namespace vusage {

/// Splits a timestamp-sorted event list of one video by session (ordered by
/// session id) and reconstructs each session.
std::vector<Reconstruction> sessionize(std::span<const PlaybackEvent> events, const VideoMeta& meta,
                                       const DayClock& clock);

/// Full recomputation of one video's scores from its log: resolve the epoch,
/// sessionize, score, normalise.
Snapshot score_log(std::span<const PlaybackEvent> events, const VideoMeta& meta, const ScoringConfig& cfg,
                   const ReportingZone& zone, Date as_of);

struct RecomputeOutcome {
    std::string video_id;
    bool ok = false;
    std::size_t events = 0;
    std::string error;
};

/// Recomputes and persists a snapshot for every catalog video. A failing video
/// is logged and skipped. `on_saved` runs after each durable save.
std::vector<RecomputeOutcome> recompute_all(Store& store, const ScoringConfig& cfg, const ReportingZone& zone,
                                            Date as_of,
                                            const std::function<void(const Snapshot&)>& on_saved = {});

}  // namespace vusage
