#include "svx/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>

#include "svx/errors.hpp"

namespace svx {

namespace {

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += c;
    }
  }
  return out;
}

struct Range {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  void add(double v) {
    if (std::isfinite(v)) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  void finish() {
    if (!(lo < hi)) {
      lo = lo - 1.0;
      hi = hi + 1.0;
    }
    double pad = 0.04 * (hi - lo);
    lo -= pad;
    hi += pad;
  }
};

}  // namespace

std::string render_svg(const std::vector<SvgPanel>& panels, int width,
                       int height) {
  if (panels.empty()) throw ConfigError("render_svg: no panels");
  const int panel_w = width / static_cast<int>(panels.size());
  const double ml = 52, mr = 16, mt = 34, mb = 40;

  std::ostringstream out;
  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" "
      << "width=\"" << width << "\" height=\"" << height << "\" viewBox=\"0 0 "
      << width << " " << height << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << width << "\" height=\"" << height
      << "\" fill=\"white\"/>\n";

  for (std::size_t p = 0; p < panels.size(); ++p) {
    const SvgPanel& panel = panels[p];
    double x0 = p * panel_w + ml, x1 = (p + 1.0) * panel_w - mr;
    double y0 = height - mb, y1 = mt;  // y grows downward in SVG

    Range rx, ry;
    for (const auto& s : panel.series) {
      for (double v : s.x) rx.add(v);
      for (double v : s.y) ry.add(v);
    }
    rx.finish();
    ry.finish();
    auto px = [&](double v) {
      return x0 + (v - rx.lo) / (rx.hi - rx.lo) * (x1 - x0);
    };
    auto py = [&](double v) {
      return y0 + (v - ry.lo) / (ry.hi - ry.lo) * (y1 - y0);
    };

    out << "<g>\n";
    out << "<text x=\"" << num((x0 + x1) / 2) << "\" y=\"" << num(mt - 12)
        << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
           "font-size=\"14\">"
        << escape(panel.title) << "</text>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\""
        << num(x1) << "\" y2=\"" << num(y0)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    out << "<line x1=\"" << num(x0) << "\" y1=\"" << num(y0) << "\" x2=\""
        << num(x0) << "\" y2=\"" << num(y1)
        << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    for (int t = 0; t <= 4; ++t) {
      double fx = rx.lo + t * (rx.hi - rx.lo) / 4.0;
      double fy = ry.lo + t * (ry.hi - ry.lo) / 4.0;
      out << "<line x1=\"" << num(px(fx)) << "\" y1=\"" << num(y0) << "\" x2=\""
          << num(px(fx)) << "\" y2=\"" << num(y0 + 4)
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << num(px(fx)) << "\" y=\"" << num(y0 + 16)
          << "\" text-anchor=\"middle\" font-family=\"sans-serif\" "
             "font-size=\"10\">"
          << num(fx) << "</text>\n";
      out << "<line x1=\"" << num(x0 - 4) << "\" y1=\"" << num(py(fy))
          << "\" x2=\"" << num(x0) << "\" y2=\"" << num(py(fy))
          << "\" stroke=\"black\" stroke-width=\"1\"/>\n";
      out << "<text x=\"" << num(x0 - 7) << "\" y=\"" << num(py(fy) + 3)
          << "\" text-anchor=\"end\" font-family=\"sans-serif\" "
             "font-size=\"10\">"
          << num(fy) << "</text>\n";
    }

    double ly = y1 + 8;
    for (const auto& s : panel.series) {
      if (s.x.size() != s.y.size())
        throw ConfigError("render_svg: series x/y size mismatch");
      if (s.points) {
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
          out << "<circle cx=\"" << num(px(s.x[i])) << "\" cy=\""
              << num(py(s.y[i])) << "\" r=\"2\" fill=\"" << s.color
              << "\"/>\n";
        }
      } else {
        out << "<polyline fill=\"none\" stroke=\"" << s.color
            << "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < s.x.size(); ++i) {
          if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
          out << num(px(s.x[i])) << "," << num(py(s.y[i])) << " ";
        }
        out << "\"/>\n";
      }
      if (!s.label.empty()) {
        out << "<rect x=\"" << num(x0 + 8) << "\" y=\"" << num(ly)
            << "\" width=\"10\" height=\"10\" fill=\"" << s.color << "\"/>\n";
        out << "<text x=\"" << num(x0 + 22) << "\" y=\"" << num(ly + 9)
            << "\" font-family=\"sans-serif\" font-size=\"11\">"
            << escape(s.label) << "</text>\n";
        ly += 16;
      }
    }
    out << "</g>\n";
  }
  out << "</svg>\n";
  return out.str();
}

void write_svg(const std::string& path, const std::vector<SvgPanel>& panels,
               int width, int height) {
  std::ofstream out(path);
  if (!out) throw InputError("cannot open output file: " + path);
  out << render_svg(panels, width, height);
  if (!out) throw InputError("write failed: " + path);
}

}  // namespace svx
