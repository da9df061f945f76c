#include "vusage/export.hpp"

#include <charconv>
#include <stdexcept>

#include <json.hpp>

namespace vusage {

std::string export_scores(const Snapshot& snapshot, ExportFormat format, ScoreSeries series) {
    const auto& values = series == ScoreSeries::raw ? snapshot.scores.raw : snapshot.scores.normalized;

    if (format == ExportFormat::json) {
        nlohmann::json rows = nlohmann::json::array();
        for (std::size_t w = 0; w < values.size(); ++w) rows.push_back({{"window", w}, {"score", values[w]}});
        return nlohmann::json{{"video", snapshot.scores.video_id},
                              {"as_of", format_date(snapshot.scores.as_of)},
                              {"series", series == ScoreSeries::raw ? "raw" : "normalized"},
                              {"rows", rows}}
                   .dump(2) +
               "\n";
    }

    std::string out = "window,score\n";
    char buf[64];
    for (std::size_t w = 0; w < values.size(); ++w) {
        out += std::to_string(w);
        out += ',';
        const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, values[w]);
        if (ec != std::errc{}) throw std::runtime_error("score formatting failed");
        out.append(buf, end);
        out += '\n';
    }
    return out;
}

}  // namespace vusage
