#include "vusage/recompute.hpp"

#include <map>
#include <optional>

#include <spdlog/spdlog.h>

namespace vusage {

std::vector<Reconstruction> sessionize(std::span<const PlaybackEvent> events, const VideoMeta& meta,
                                       const DayClock& clock) {
    std::map<std::string_view, std::vector<PlaybackEvent>> by_session;
    for (const auto& ev : events) by_session[ev.session_id].push_back(ev);

    std::vector<Reconstruction> out;
    out.reserve(by_session.size());
    for (const auto& [session, session_events] : by_session) {
        out.push_back(reconstruct(session_events, meta, clock));
    }
    return out;
}

Snapshot score_log(std::span<const PlaybackEvent> events, const VideoMeta& meta, const ScoringConfig& cfg,
                   const ReportingZone& zone, Date as_of) {
    std::optional<Timestamp> first;
    if (!events.empty()) first = events.front().timestamp;
    const DayClock clock{resolve_epoch(cfg, meta, first, zone), zone};

    const auto sessions = sessionize(events, meta, clock);
    Snapshot snap;
    snap.scores = score_video(sessions, meta, cfg, as_of);
    snap.config = cfg;
    snap.epoch = clock.epoch;
    snap.zone = zone.name();
    return snap;
}

std::vector<RecomputeOutcome> recompute_all(Store& store, const ScoringConfig& cfg, const ReportingZone& zone,
                                            Date as_of, const std::function<void(const Snapshot&)>& on_saved) {
    std::vector<RecomputeOutcome> outcomes;
    for (const VideoMeta& meta : store.catalog()) {
        RecomputeOutcome outcome;
        outcome.video_id = meta.video_id;
        try {
            const auto events = store.load_events(meta.video_id, as_of, zone);
            outcome.events = events.size();
            const Snapshot snap = score_log(events, meta, cfg, zone, as_of);
            store.save_snapshot(snap);
            if (on_saved) on_saved(snap);
            outcome.ok = true;
        } catch (const std::exception& e) {
            outcome.error = e.what();
            spdlog::error("recompute of '{}' failed: {}", meta.video_id, e.what());
        }
        outcomes.push_back(std::move(outcome));
    }
    return outcomes;
}

}  // namespace vusage
