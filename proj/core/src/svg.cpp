#include "ecd/svg.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "ecd/error.hpp"

namespace ecd::svg {

namespace {

constexpr double kMarginLeft = 70, kMarginRight = 20, kMarginTop = 40, kMarginBottom = 50;

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '&': out += "&amp;"; break;
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
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  void settle() {
    if (!(lo <= hi)) lo = 0, hi = 1;
    if (lo == hi) lo -= 0.5, hi += 0.5;
  }
};

std::string num(double v) {
  std::ostringstream s;
  s.precision(6);
  s << v;
  return s.str();
}

}  // namespace

std::string render(const std::vector<Series>& series, const PlotOptions& options) {
  const double w = options.width, h = options.height;
  const double pw = w - kMarginLeft - kMarginRight, ph = h - kMarginTop - kMarginBottom;
  auto ty = [&](double y) { return options.log_y ? std::log10(y) : y; };
  auto usable = [&](double x, double y) { return std::isfinite(x) && std::isfinite(y) && (!options.log_y || y > 0); };

  Range xr, yr;
  for (const auto& s : series) {
    for (std::size_t k = 0; k < std::min(s.x.size(), s.y.size()); ++k) {
      if (!usable(s.x[k], s.y[k])) continue;
      xr.add(s.x[k]);
      yr.add(ty(s.y[k]));
    }
  }
  xr.settle();
  yr.settle();
  auto px = [&](double x) { return kMarginLeft + (x - xr.lo) / (xr.hi - xr.lo) * pw; };
  auto py = [&](double y) { return kMarginTop + (1.0 - (ty(y) - yr.lo) / (yr.hi - yr.lo)) * ph; };

  std::ostringstream out;
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 "
      << w << ' ' << h << "\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<rect x=\"" << kMarginLeft << "\" y=\"" << kMarginTop << "\" width=\"" << pw << "\" height=\"" << ph
      << "\" fill=\"none\" stroke=\"black\"/>\n";
  if (!options.title.empty()) {
    out << "<text x=\"" << w / 2 << "\" y=\"24\" text-anchor=\"middle\" font-size=\"16\">" << escape(options.title)
        << "</text>\n";
  }
  out << "<text x=\"" << kMarginLeft + pw / 2 << "\" y=\"" << h - 12 << "\" text-anchor=\"middle\" font-size=\"13\">"
      << escape(options.x_label) << "</text>\n";
  out << "<text x=\"16\" y=\"" << kMarginTop + ph / 2 << "\" text-anchor=\"middle\" font-size=\"13\" "
      << "transform=\"rotate(-90 16 " << kMarginTop + ph / 2 << ")\">" << escape(options.y_label) << "</text>\n";

  for (int k = 0; k <= 4; ++k) {
    const double fx = xr.lo + (xr.hi - xr.lo) * k / 4.0;
    const double fy = yr.lo + (yr.hi - yr.lo) * k / 4.0;
    const double sx = kMarginLeft + pw * k / 4.0;
    const double sy = kMarginTop + ph * (1.0 - k / 4.0);
    out << "<text x=\"" << sx << "\" y=\"" << kMarginTop + ph + 18 << "\" text-anchor=\"middle\" font-size=\"11\">"
        << num(fx) << "</text>\n";
    out << "<text x=\"" << kMarginLeft - 6 << "\" y=\"" << sy + 4 << "\" text-anchor=\"end\" font-size=\"11\">"
        << (options.log_y ? "1e" + num(fy) : num(fy)) << "</text>\n";
  }

  int legend = 0;
  for (const auto& s : series) {
    const std::size_t count = std::min(s.x.size(), s.y.size());
    if (s.scatter) {
      out << "<g fill=\"" << s.color << "\">\n";
      for (std::size_t k = 0; k < count; ++k) {
        if (!usable(s.x[k], s.y[k])) continue;
        out << "<circle cx=\"" << num(px(s.x[k])) << "\" cy=\"" << num(py(s.y[k])) << "\" r=\"0.8\"/>\n";
      }
      out << "</g>\n";
    } else {
      std::string points;
      auto flush = [&] {
        if (!points.empty()) {
          out << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"1.2\" points=\"" << points
              << "\"/>\n";
        }
        points.clear();
      };
      for (std::size_t k = 0; k < count; ++k) {
        if (!usable(s.x[k], s.y[k])) {
          flush();
          continue;
        }
        points += num(px(s.x[k])) + "," + num(py(s.y[k])) + " ";
      }
      flush();
    }
    if (!s.label.empty()) {
      const double ly = kMarginTop + 16 + 16 * legend++;
      out << "<text x=\"" << kMarginLeft + pw - 8 << "\" y=\"" << ly << "\" text-anchor=\"end\" font-size=\"12\" fill=\""
          << s.color << "\">" << escape(s.label) << "</text>\n";
    }
  }
  out << "</svg>\n";
  return out.str();
}

void write(const std::filesystem::path& path, const std::vector<Series>& series, const PlotOptions& options) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::IoError, "cannot open '" + path.string() + "' for writing");
  out << render(series, options);
}

}  // namespace ecd::svg
