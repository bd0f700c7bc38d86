#pragma once

// Minimal SVG line and scatter plots for sweep and decay output.

#include <filesystem>
#include <string>
#include <vector>

namespace ecd::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  /// Dots instead of a polyline.
  bool scatter = false;
  std::string color = "#1f77b4";
};

struct PlotOptions {
  std::string title;
  std::string x_label;
  std::string y_label;
  /// Log-scale y axis; non-positive values are dropped.
  bool log_y = false;
  int width = 800;
  int height = 500;
};

/// Non-finite points are skipped; a polyline is broken at each gap.
std::string render(const std::vector<Series>& series, const PlotOptions& options);
void write(const std::filesystem::path& path, const std::vector<Series>& series, const PlotOptions& options);

}  // namespace ecd::svg
