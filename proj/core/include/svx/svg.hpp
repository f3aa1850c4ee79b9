#pragma once

#include <string>
#include <vector>

namespace svx {

/// One plotted series: a polyline, or discrete point markers.
struct SvgSeries {
  std::vector<double> x;
  std::vector<double> y;
  std::string color = "#1f77b4";
  bool points = false;  // circles instead of a line
  std::string label;
};

/// A single panel with its own axes and data ranges.
struct SvgPanel {
  std::string title;
  std::vector<SvgSeries> series;
};

/// Renders side-by-side panels as a static SVG 1.1 document: axes, tick
/// labels, series, and a legend. Output is deterministic (fixed float
/// formatting, no timestamps).
std::string render_svg(const std::vector<SvgPanel>& panels, int width = 960,
                       int height = 420);

void write_svg(const std::string& path, const std::vector<SvgPanel>& panels,
               int width = 960, int height = 420);

}  // namespace svx
