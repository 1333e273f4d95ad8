#include "eop/svg.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace eop {

namespace {

constexpr double kWidth = 720.0;
constexpr double kHeight = 480.0;
constexpr double kMarginLeft = 72.0;
constexpr double kMarginRight = 24.0;
constexpr double kMarginTop = 24.0;
constexpr double kMarginBottom = 56.0;

const char* kPalette[] = {
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
};
constexpr std::size_t kPaletteSize = sizeof(kPalette) / sizeof(kPalette[0]);

// fixed two-decimal coordinates keep the byte stream deterministic
std::string coord(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::fixed, 2);
  return std::string(buf, res.ptr);
}

std::string tick_label(double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value,
                                 std::chars_format::general, 6);
  return std::string(buf, res.ptr);
}

std::string escape(const std::string& text) {
  std::string out;
  for (char c : text) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      default: out += c;
    }
  }
  return out;
}

double nice_step(double span, int target_ticks) {
  const double raw = span / target_ticks;
  const double mag = std::pow(10.0, std::floor(std::log10(raw)));
  for (double m : {1.0, 2.0, 5.0, 10.0}) {
    if (m * mag >= raw) return m * mag;
  }
  return 10.0 * mag;
}

}  // namespace

void emit_figure(const std::vector<LabeledCurve>& curves, std::ostream& out) {
  if (curves.empty()) throw std::invalid_argument("empty curve set");
  for (const LabeledCurve& lc : curves) {
    if (lc.curve.budgets() == 0) throw std::invalid_argument("empty curve set");
  }

  int max_budget = 0;
  double y_lo = std::numeric_limits<double>::infinity();
  double y_hi = -std::numeric_limits<double>::infinity();
  for (const LabeledCurve& lc : curves) {
    max_budget = std::max(max_budget, lc.curve.budgets());
    y_lo = std::min(y_lo, (lc.curve.means - lc.curve.stds).minCoeff());
    y_hi = std::max(y_hi, (lc.curve.means + lc.curve.stds).maxCoeff());
  }
  if (y_hi == y_lo) {
    y_hi += 0.5;
    y_lo -= 0.5;
  }
  const double pad = 0.05 * (y_hi - y_lo);
  y_lo -= pad;
  y_hi += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  const double x_span = std::max(1, max_budget - 1);
  const auto x_of = [&](double budget) {
    return kMarginLeft + (budget - 1.0) / x_span * plot_w;
  };
  const auto y_of = [&](double value) {
    return kMarginTop + (y_hi - value) / (y_hi - y_lo) * plot_h;
  };

  out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << coord(kWidth)
      << "\" height=\"" << coord(kHeight) << "\" viewBox=\"0 0 "
      << coord(kWidth) << " " << coord(kHeight) << "\">\n";
  out << "<rect width=\"" << coord(kWidth) << "\" height=\"" << coord(kHeight)
      << "\" fill=\"white\"/>\n";

  // axes
  out << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\"" << coord(kMarginTop)
      << "\" x2=\"" << coord(kMarginLeft) << "\" y2=\""
      << coord(kMarginTop + plot_h) << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << coord(kMarginLeft) << "\" y1=\""
      << coord(kMarginTop + plot_h) << "\" x2=\"" << coord(kMarginLeft + plot_w)
      << "\" y2=\"" << coord(kMarginTop + plot_h) << "\" stroke=\"black\"/>\n";

  // x ticks at integer budgets, thinned to at most ~12 labels
  const int x_step = std::max(1, (max_budget + 11) / 12);
  for (int b = 1; b <= max_budget; b += x_step) {
    const double x = x_of(b);
    out << "<line x1=\"" << coord(x) << "\" y1=\"" << coord(kMarginTop + plot_h)
        << "\" x2=\"" << coord(x) << "\" y2=\"" << coord(kMarginTop + plot_h + 5)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(x) << "\" y=\"" << coord(kMarginTop + plot_h + 18)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"middle\">"
        << b << "</text>\n";
  }

  // y ticks on a nice grid
  const double step = nice_step(y_hi - y_lo, 6);
  for (double v = std::ceil(y_lo / step) * step; v <= y_hi + 1e-12 * step; v += step) {
    const double y = y_of(v);
    out << "<line x1=\"" << coord(kMarginLeft - 5) << "\" y1=\"" << coord(y)
        << "\" x2=\"" << coord(kMarginLeft) << "\" y2=\"" << coord(y)
        << "\" stroke=\"black\"/>\n";
    out << "<text x=\"" << coord(kMarginLeft - 8) << "\" y=\"" << coord(y + 4)
        << "\" font-family=\"sans-serif\" font-size=\"11\" text-anchor=\"end\">"
        << tick_label(v) << "</text>\n";
  }

  // axis labels
  out << "<text x=\"" << coord(kMarginLeft + plot_w / 2) << "\" y=\""
      << coord(kHeight - 14)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\">"
         "Number of policies deployed online</text>\n";
  out << "<text x=\"" << coord(18.0) << "\" y=\"" << coord(kMarginTop + plot_h / 2)
      << "\" font-family=\"sans-serif\" font-size=\"13\" text-anchor=\"middle\" "
         "transform=\"rotate(-90 " << coord(18.0) << " "
      << coord(kMarginTop + plot_h / 2) << ")\">Normalized performance</text>\n";

  // one band + one polyline per curve
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const EopCurve& c = curves[i].curve;
    const char* color = kPalette[i % kPaletteSize];

    out << "<polygon class=\"band\" fill=\"" << color
        << "\" fill-opacity=\"0.2\" stroke=\"none\" points=\"";
    for (int b = 1; b <= c.budgets(); ++b) {
      out << coord(x_of(b)) << ',' << coord(y_of(c.means[b - 1] + c.stds[b - 1]))
          << ' ';
    }
    for (int b = c.budgets(); b >= 1; --b) {
      out << coord(x_of(b)) << ',' << coord(y_of(c.means[b - 1] - c.stds[b - 1]));
      if (b > 1) out << ' ';
    }
    out << "\"/>\n";

    out << "<polyline class=\"mean\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"1.8\" points=\"";
    for (int b = 1; b <= c.budgets(); ++b) {
      out << coord(x_of(b)) << ',' << coord(y_of(c.means[b - 1]));
      if (b < c.budgets()) out << ' ';
    }
    out << "\"/>\n";
  }

  // legend, top-left inside the plot area
  for (std::size_t i = 0; i < curves.size(); ++i) {
    const double y = kMarginTop + 14.0 + 16.0 * static_cast<double>(i);
    out << "<line x1=\"" << coord(kMarginLeft + 10) << "\" y1=\"" << coord(y - 4)
        << "\" x2=\"" << coord(kMarginLeft + 34) << "\" y2=\"" << coord(y - 4)
        << "\" stroke=\"" << kPalette[i % kPaletteSize]
        << "\" stroke-width=\"1.8\"/>\n";
    out << "<text class=\"legend\" x=\"" << coord(kMarginLeft + 40) << "\" y=\""
        << coord(y) << "\" font-family=\"sans-serif\" font-size=\"12\">"
        << escape(curves[i].label) << "</text>\n";
  }

  out << "</svg>\n";
}

void emit_figure(const std::vector<LabeledCurve>& curves, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file: " + path);
  emit_figure(curves, out);
  if (!out) throw std::runtime_error("failed writing file: " + path);
}

}  // namespace eop
