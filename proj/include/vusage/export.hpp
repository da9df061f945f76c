#pragma once

#include <string>

#include "vusage/store.hpp"

namespace vusage {

enum class ExportFormat { csv, json };
enum class ScoreSeries { raw, normalized };

/// Per-window rows (index, score) in window order. CSV has the header
/// `window,score`; JSON is {video, as_of, series, rows: [{window, score}...]}.
/// Scores are written in shortest round-trip form in both formats.
std::string export_scores(const Snapshot& snapshot, ExportFormat format, ScoreSeries series);

}  // namespace vusage
