#pragma once

#include <string>
#include <vector>

#include "kpp/field.hpp"

namespace kpp::svg {

struct Series {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  std::string color;  ///< empty picks from the default palette
};

struct LinePlot {
  std::string title;
  std::string x_label;
  std::string y_label;
  std::vector<Series> series;
  bool log_y = false;
  int width = 640;
  int height = 420;
};

/// Axes with ticks, one polyline per series and a legend.
std::string render(const LinePlot& plot);

/// Field values as grid-aligned rectangles on a grayscale-to-blue ramp; at most max_cells per axis.
std::string render_heatmap(const Field2D& field, const std::string& title, int max_cells = 120, int width = 640,
                           int height = 420);

}  // namespace kpp::svg
