#pragma once

#include <string>
#include <vector>

#include "codesurvey/analysis.hpp"

namespace codesurvey::chart {

// Sweep angle in degrees per share; shares are normalized over their sum so
// a full pie always closes.
std::vector<double> pie_angles(const std::vector<double>& shares);

// All renderers produce self-contained static SVG with title, axes/legend,
// and deterministic bytes for fixed input. They throw on empty input.
std::string render_line(const std::vector<TimelineSeries>& series, const std::string& title);
std::string render_pie(const std::vector<DistributionEntry>& entries, const std::string& title);
std::string render_bar(const std::vector<RankedCount>& ranking, const std::string& title);
std::string render_heatmap(const FeatureComponentMatrix& matrix, const std::string& title);

void write_svg(const std::string& path, const std::string& svg);

}  // namespace codesurvey::chart
