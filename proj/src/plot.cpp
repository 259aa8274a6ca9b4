#include "mslift/plot.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mslift::plot {
namespace {

constexpr double kPanelWidth = 320.0;
constexpr double kPanelHeight = 260.0;
constexpr double kMargin = 30.0;
constexpr const char* kColours[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

}  // namespace

std::string render_svg(const std::vector<Panel>& panels) {
  double lo = 0.0, hi = 1.0, wmax = 0.0;
  bool first = true;
  for (const auto& p : panels) {
    for (const auto& term : p.t.terms()) {
      wmax = std::max(wmax, term.weight);
      for (const auto& pc : term.func.pieces()) {
        for (double v : pc.values) {
          lo = first ? v : std::min(lo, v);
          hi = first ? v : std::max(hi, v);
          first = false;
        }
      }
    }
  }
  if (hi - lo < 1e-9) {
    lo -= 0.5;
    hi += 0.5;
  }
  const double pad = 0.08 * (hi - lo);
  lo -= pad;
  hi += pad;

  std::ostringstream os;
  const double width = kPanelWidth * static_cast<double>(std::max<std::size_t>(panels.size(), 1));
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << num(width) << "\" height=\"" << num(kPanelHeight)
     << "\" font-family=\"sans-serif\" font-size=\"11\">\n";
  os << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  for (std::size_t k = 0; k < panels.size(); ++k) {
    const auto& p = panels[k];
    const Interval iv = p.t.interval();
    const double x0 = kPanelWidth * static_cast<double>(k) + kMargin;
    const double inner_w = kPanelWidth - 2 * kMargin;
    const double inner_h = kPanelHeight - 2 * kMargin;
    const auto sx = [&](double x) { return x0 + inner_w * (x - iv.a) / (iv.b - iv.a); };
    const auto sy = [&](double v) { return kMargin + inner_h * (hi - v) / (hi - lo); };

    os << "<text x=\"" << num(x0) << "\" y=\"" << num(kMargin - 10) << "\">" << escape(p.title) << "</text>\n";
    os << "<rect x=\"" << num(x0) << "\" y=\"" << num(kMargin) << "\" width=\"" << num(inner_w) << "\" height=\""
       << num(inner_h) << "\" fill=\"none\" stroke=\"#999\"/>\n";
    os << "<text x=\"" << num(x0) << "\" y=\"" << num(kPanelHeight - 10) << "\">" << num(iv.a) << "</text>\n";
    os << "<text x=\"" << num(x0 + inner_w - 20) << "\" y=\"" << num(kPanelHeight - 10) << "\">" << num(iv.b)
       << "</text>\n";
    for (std::size_t i = 0; i < p.t.size(); ++i) {
      const auto& term = p.t.terms()[i];
      const char* colour = kColours[i % std::size(kColours)];
      const double sw = 1.0 + 3.0 * term.weight / (wmax > 0 ? wmax : 1.0);
      for (const auto& pc : term.func.pieces()) {
        os << "<polyline fill=\"none\" stroke=\"" << colour << "\" stroke-width=\"" << num(sw) << "\" points=\"";
        for (std::size_t n = 0; n < pc.nodes.size(); ++n) {
          os << (n ? " " : "") << num(sx(pc.nodes[n])) << ',' << num(sy(pc.values[n]));
        }
        os << "\"/>\n";
      }
      for (const Jump& j : term.func.jumps()) {
        os << "<line x1=\"" << num(sx(j.x)) << "\" y1=\"" << num(sy(j.left)) << "\" x2=\"" << num(sx(j.x))
           << "\" y2=\"" << num(sy(j.right)) << "\" stroke=\"" << colour << "\" stroke-width=\"" << num(sw)
           << "\" stroke-dasharray=\"4 3\"/>\n";
      }
      os << "<text x=\"" << num(x0 + 4) << "\" y=\"" << num(kMargin + 14 + 13 * static_cast<double>(i))
         << "\" fill=\"" << colour << "\">w=" << num(term.weight) << "</text>\n";
    }
  }
  os << "</svg>\n";
  return os.str();
}

void write_svg(const std::string& path, const std::vector<Panel>& panels) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error(path + ": cannot write file");
  out << render_svg(panels);
}

}  // namespace mslift::plot
