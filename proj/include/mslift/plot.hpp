#pragma once

#include <string>
#include <vector>

#include "mslift/currents.hpp"

namespace mslift::plot {

struct Panel {
  std::string title;
  GraphCombination t;
};

/// Static SVG with the panels side by side on a shared value axis. Each term
/// is drawn in its own colour with stroke width growing with its weight;
/// vertical jump segments are dashed.
std::string render_svg(const std::vector<Panel>& panels);

void write_svg(const std::string& path, const std::vector<Panel>& panels);

}  // namespace mslift::plot
