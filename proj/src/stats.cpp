#include "vusage/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>
#include <utility>

#include "vusage/sessionizer.hpp"

namespace vusage {

UsageReport compute_stats(std::span<const PlaybackEvent> events, std::span<const VideoMeta> catalog) {
    std::map<std::string, const VideoMeta*> videos;
    for (const auto& meta : catalog) videos[meta.video_id] = &meta;

    std::map<std::pair<std::string, std::string>, std::vector<PlaybackEvent>> viewings;
    for (const auto& ev : events) {
        if (videos.count(ev.video_id) == 0) continue;
        viewings[{ev.session_id, ev.video_id}].push_back(ev);
    }

    UsageReport report;
    if (viewings.empty()) return report;

    const DayClock clock{};
    std::set<std::string> sessions;
    double media_seconds = 0.0;
    double wall_seconds = 0.0;
    std::vector<double> fractions;
    fractions.reserve(viewings.size());

    for (auto& [key, stream] : viewings) {
        sessions.insert(key.first);
        const VideoMeta& meta = *videos.at(key.second);
        sort_events(stream);
        const Reconstruction r = reconstruct(stream, meta, clock);

        std::vector<WindowRange> covered;
        for (const auto& pass : r.passes) {
            media_seconds += pass.length();
            wall_seconds += pass.length() / pass.rate;
            if (const auto w = covered_windows(pass); !w.empty()) covered.push_back(w);
        }
        std::sort(covered.begin(), covered.end(),
                  [](const WindowRange& a, const WindowRange& b) { return a.begin < b.begin; });
        std::int64_t distinct = 0;
        std::int64_t reach = std::numeric_limits<std::int64_t>::min();
        for (const auto& w : covered) {
            const std::int64_t from = std::max(w.begin, reach);
            if (w.end > from) distinct += w.end - from;
            reach = std::max(reach, w.end);
        }
        fractions.push_back(static_cast<double>(distinct) / static_cast<double>(meta.duration_s));
    }

    const auto n_sessions = static_cast<double>(sessions.size());
    const auto n_viewings = static_cast<double>(fractions.size());
    report.distinct_sessions = sessions.size();
    report.hours_streamed = media_seconds / 3600.0;
    report.mean_videos_per_session = n_viewings / n_sessions;
    report.mean_seconds_per_session = wall_seconds / n_sessions;

    double sum = 0.0;
    for (double f : fractions) sum += f;
    report.mean_fraction_viewed = sum / n_viewings;
    double sq = 0.0;
    for (double f : fractions) sq += (f - report.mean_fraction_viewed) * (f - report.mean_fraction_viewed);
    report.stddev_fraction_viewed = std::sqrt(sq / n_viewings);
    return report;
}

nlohmann::json stats_to_json(const UsageReport& r) {
    return nlohmann::json{{"distinct_sessions", r.distinct_sessions},
                          {"hours_streamed", r.hours_streamed},
                          {"mean_videos_per_session", r.mean_videos_per_session},
                          {"mean_seconds_per_session", r.mean_seconds_per_session},
                          {"mean_fraction_viewed", r.mean_fraction_viewed},
                          {"stddev_fraction_viewed", r.stddev_fraction_viewed}};
}

}  // namespace vusage
