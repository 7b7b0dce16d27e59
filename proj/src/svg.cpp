#include "kpp/svg.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

namespace kpp::svg {

namespace {

constexpr int kMarginL = 64, kMarginR = 16, kMarginT = 32, kMarginB = 48;
const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf", "#8c564b"};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string tick_label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.4g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
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

std::vector<double> nice_ticks(double lo, double hi, int target = 6) {
  if (!(hi > lo)) return {lo};
  const double raw = (hi - lo) / target;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  const double r = raw / mag;
  const double step = (r < 1.5 ? 1.0 : r < 3.0 ? 2.0 : r < 7.0 ? 5.0 : 10.0) * mag;
  std::vector<double> t;
  for (double v = std::ceil(lo / step) * step; v <= hi + 1e-9 * step; v += step) t.push_back(std::abs(v) < 1e-12 * step ? 0.0 : v);
  return t;
}

struct Frame {
  double x0, x1, y0, y1;
  int w, h;
  double px(double x) const { return kMarginL + (x - x0) / (x1 - x0) * (w - kMarginL - kMarginR); }
  double py(double y) const { return h - kMarginB - (y - y0) / (y1 - y0) * (h - kMarginT - kMarginB); }
};

void axes(std::ostringstream& os, const Frame& f, const std::string& title, const std::string& xl,
          const std::string& yl, bool log_y) {
  os << "<rect x=\"" << kMarginL << "\" y=\"" << kMarginT << "\" width=\"" << f.w - kMarginL - kMarginR
     << "\" height=\"" << f.h - kMarginT - kMarginB << "\" fill=\"none\" stroke=\"#000\"/>\n";
  for (double t : nice_ticks(f.x0, f.x1)) {
    os << "<line x1=\"" << num(f.px(t)) << "\" y1=\"" << f.h - kMarginB << "\" x2=\"" << num(f.px(t)) << "\" y2=\""
       << f.h - kMarginB + 4 << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << num(f.px(t)) << "\" y=\"" << f.h - kMarginB + 16
       << "\" font-size=\"11\" text-anchor=\"middle\">" << tick_label(t) << "</text>\n";
  }
  for (double t : nice_ticks(f.y0, f.y1)) {
    os << "<line x1=\"" << kMarginL - 4 << "\" y1=\"" << num(f.py(t)) << "\" x2=\"" << kMarginL << "\" y2=\""
       << num(f.py(t)) << "\" stroke=\"#000\"/>\n";
    os << "<text x=\"" << kMarginL - 6 << "\" y=\"" << num(f.py(t) + 4)
       << "\" font-size=\"11\" text-anchor=\"end\">" << (log_y ? "1e" : "") << tick_label(t) << "</text>\n";
  }
  os << "<text x=\"" << f.w / 2 << "\" y=\"20\" font-size=\"14\" text-anchor=\"middle\">" << escape(title)
     << "</text>\n";
  os << "<text x=\"" << f.w / 2 << "\" y=\"" << f.h - 10 << "\" font-size=\"12\" text-anchor=\"middle\">"
     << escape(xl) << "</text>\n";
  os << "<text x=\"14\" y=\"" << f.h / 2 << "\" font-size=\"12\" text-anchor=\"middle\" transform=\"rotate(-90 14 "
     << f.h / 2 << ")\">" << escape(yl) << "</text>\n";
}

std::string header(int w, int h) {
  std::ostringstream os;
  os << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << w << "\" height=\"" << h << "\" viewBox=\"0 0 " << w
     << ' ' << h << "\">\n<rect width=\"100%\" height=\"100%\" fill=\"#fff\"/>\n";
  return os.str();
}

}  // namespace

std::string render(const LinePlot& plot) {
  double x0 = std::numeric_limits<double>::infinity(), x1 = -x0, y0 = x0, y1 = -x0;
  auto tr = [&](double y) { return plot.log_y ? std::log10(y) : y; };
  for (const auto& s : plot.series) {
    if (s.x.size() != s.y.size()) throw std::invalid_argument("svg::render: series size mismatch");
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = tr(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, y);
      y1 = std::max(y1, y);
    }
  }
  if (!(x1 >= x0)) x0 = 0.0, x1 = 1.0, y0 = 0.0, y1 = 1.0;
  if (x1 == x0) x0 -= 0.5, x1 += 0.5;
  if (y1 == y0) y0 -= 0.5, y1 += 0.5;
  const double pad = 0.04 * (y1 - y0);
  Frame f{x0, x1, y0 - pad, y1 + pad, plot.width, plot.height};
  std::ostringstream os;
  os << header(plot.width, plot.height);
  axes(os, f, plot.title, plot.x_label, plot.y_label, plot.log_y);
  for (std::size_t k = 0; k < plot.series.size(); ++k) {
    const auto& s = plot.series[k];
    const std::string color = s.color.empty() ? kPalette[k % std::size(kPalette)] : s.color;
    os << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    bool first = true;
    for (std::size_t i = 0; i < s.x.size(); ++i) {
      const double y = tr(s.y[i]);
      if (!std::isfinite(s.x[i]) || !std::isfinite(y)) continue;
      os << (first ? "" : " ") << num(f.px(s.x[i])) << ',' << num(f.py(y));
      first = false;
    }
    os << "\"/>\n";
    const int ly = kMarginT + 14 + 16 * static_cast<int>(k);
    os << "<line x1=\"" << plot.width - kMarginR - 150 << "\" y1=\"" << ly - 4 << "\" x2=\""
       << plot.width - kMarginR - 130 << "\" y2=\"" << ly - 4 << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    os << "<text x=\"" << plot.width - kMarginR - 125 << "\" y=\"" << ly << "\" font-size=\"11\">" << escape(s.label)
       << "</text>\n";
  }
  os << "</svg>\n";
  return os.str();
}

std::string render_heatmap(const Field2D& field, const std::string& title, int max_cells, int width, int height) {
  if (field.nx < 2 || field.ny < 2) throw std::invalid_argument("svg::render_heatmap: empty field");
  Frame f{field.x_lo, field.x_hi(), 0.0, field.y_hi(), width, height};
  const int si = std::max(1, (field.nx + max_cells - 1) / max_cells);
  const int sj = std::max(1, (field.ny + max_cells - 1) / max_cells);
  std::ostringstream os;
  os << header(width, height);
  for (int j = 0; j < field.ny - 1; j += sj)
    for (int i = 0; i < field.nx - 1; i += si) {
      const int i1 = std::min(i + si, field.nx - 1), j1 = std::min(j + sj, field.ny - 1);
      const double v = std::clamp(field.values(j, i), 0.0, 1.0);
      const int r = static_cast<int>(std::lround(255 * (1.0 - v)));
      const int g = static_cast<int>(std::lround(255 * (1.0 - 0.6 * v)));
      char col[8];
      std::snprintf(col, sizeof col, "#%02x%02x%02x", r, g, 255);
      const double X0 = f.px(field.x(i)), X1 = f.px(field.x(i1));
      const double Y0 = f.py(field.y(j1)), Y1 = f.py(field.y(j));
      os << "<rect x=\"" << num(X0) << "\" y=\"" << num(Y0) << "\" width=\"" << num(X1 - X0 + 0.3) << "\" height=\""
         << num(Y1 - Y0 + 0.3) << "\" fill=\"" << col << "\"/>\n";
    }
  axes(os, f, title, "x", "y", false);
  os << "</svg>\n";
  return os.str();
}

}  // namespace kpp::svg
