#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <vector>

#include "genbo/runner.hpp"

namespace genbo {

namespace {

constexpr double kWidth = 800.0;
constexpr double kHeight = 500.0;
constexpr double kMarginLeft = 70.0;
constexpr double kMarginRight = 20.0;
constexpr double kMarginTop = 30.0;
constexpr double kMarginBottom = 50.0;

const char* kPalette[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                          "#ff7f0e", "#8c564b", "#17becf", "#7f7f7f"};

struct MethodCurve {
  std::string name;
  std::vector<int> rounds;
  std::vector<double> mean;
  std::vector<double> stddev;
};

std::string fmt(double v) {
  std::ostringstream out;
  out.precision(6);
  out << v;
  return out.str();
}

}  // namespace

std::string render_regret_svg(const std::vector<CsvRow>& rows) {
  // round -> regret values per method
  std::map<std::string, std::map<int, std::vector<double>>> grouped;
  for (const auto& row : rows) grouped[row.method][row.round].push_back(row.simple_regret);

  std::vector<MethodCurve> curves;
  for (const auto& [method, by_round] : grouped) {
    MethodCurve c;
    c.name = method;
    for (const auto& [round, values] : by_round) {
      double sum = 0.0;
      for (double v : values) sum += v;
      const double mean = sum / static_cast<double>(values.size());
      double sq = 0.0;
      for (double v : values) sq += (v - mean) * (v - mean);
      const double sd =
          values.size() > 1 ? std::sqrt(sq / static_cast<double>(values.size() - 1)) : 0.0;
      c.rounds.push_back(round);
      c.mean.push_back(mean);
      c.stddev.push_back(sd);
    }
    curves.push_back(std::move(c));
  }
  // Legend order: final mean regret, descending.
  std::stable_sort(curves.begin(), curves.end(), [](const MethodCurve& a, const MethodCurve& b) {
    return a.mean.back() > b.mean.back();
  });

  int round_min = curves.front().rounds.front();
  int round_max = curves.front().rounds.back();
  double y_min = 0.0, y_max = 0.0;
  bool first = true;
  for (const auto& c : curves) {
    round_min = std::min(round_min, c.rounds.front());
    round_max = std::max(round_max, c.rounds.back());
    for (std::size_t i = 0; i < c.mean.size(); ++i) {
      const double lo = c.mean[i] - c.stddev[i];
      const double hi = c.mean[i] + c.stddev[i];
      if (first) {
        y_min = lo;
        y_max = hi;
        first = false;
      } else {
        y_min = std::min(y_min, lo);
        y_max = std::max(y_max, hi);
      }
    }
  }
  if (y_max - y_min < 1e-12) y_max = y_min + 1.0;
  const double pad = 0.05 * (y_max - y_min);
  y_min -= pad;
  y_max += pad;

  const double plot_w = kWidth - kMarginLeft - kMarginRight;
  const double plot_h = kHeight - kMarginTop - kMarginBottom;
  auto sx = [&](double round) {
    const double span = std::max(1.0, static_cast<double>(round_max - round_min));
    return kMarginLeft + plot_w * (round - round_min) / span;
  };
  auto sy = [&](double value) {
    return kMarginTop + plot_h * (1.0 - (value - y_min) / (y_max - y_min));
  };

  std::ostringstream svg;
  svg << "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"0 0 " << kWidth << " " << kHeight
      << "\" font-family=\"sans-serif\" font-size=\"13\">\n";
  svg << "<rect width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n";

  // axes
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop << "\" x2=\"" << kMarginLeft
      << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";
  svg << "<line x1=\"" << kMarginLeft << "\" y1=\"" << kMarginTop + plot_h << "\" x2=\""
      << kMarginLeft + plot_w << "\" y2=\"" << kMarginTop + plot_h << "\" stroke=\"black\"/>\n";

  // x ticks at integer rounds (thinned when many)
  const int tick_step = std::max(1, (round_max - round_min) / 10);
  for (int r = round_min; r <= round_max; r += tick_step) {
    svg << "<line x1=\"" << fmt(sx(r)) << "\" y1=\"" << fmt(kMarginTop + plot_h) << "\" x2=\""
        << fmt(sx(r)) << "\" y2=\"" << fmt(kMarginTop + plot_h + 5) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(sx(r)) << "\" y=\"" << fmt(kMarginTop + plot_h + 20)
        << "\" text-anchor=\"middle\">" << r << "</text>\n";
  }
  svg << "<text x=\"" << fmt(kMarginLeft + plot_w / 2) << "\" y=\"" << fmt(kHeight - 10)
      << "\" text-anchor=\"middle\">round</text>\n";

  // y ticks
  for (int i = 0; i <= 5; ++i) {
    const double value = y_min + (y_max - y_min) * i / 5.0;
    svg << "<line x1=\"" << fmt(kMarginLeft - 5) << "\" y1=\"" << fmt(sy(value)) << "\" x2=\""
        << fmt(kMarginLeft) << "\" y2=\"" << fmt(sy(value)) << "\" stroke=\"black\"/>\n";
    svg << "<text x=\"" << fmt(kMarginLeft - 10) << "\" y=\"" << fmt(sy(value) + 4)
        << "\" text-anchor=\"end\">" << fmt(value) << "</text>\n";
  }
  svg << "<text x=\"15\" y=\"" << fmt(kMarginTop + plot_h / 2)
      << "\" text-anchor=\"middle\" transform=\"rotate(-90 15 " << fmt(kMarginTop + plot_h / 2)
      << ")\">simple regret</text>\n";

  // bands then lines
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream band;
    for (std::size_t i = 0; i < curve.rounds.size(); ++i) {
      band << fmt(sx(curve.rounds[i])) << "," << fmt(sy(curve.mean[i] + curve.stddev[i])) << " ";
    }
    for (std::size_t i = curve.rounds.size(); i-- > 0;) {
      band << fmt(sx(curve.rounds[i])) << "," << fmt(sy(curve.mean[i] - curve.stddev[i])) << " ";
    }
    svg << "<polygon points=\"" << band.str() << "\" fill=\"" << color
        << "\" fill-opacity=\"0.15\" stroke=\"none\"/>\n";
  }
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const auto& curve = curves[c];
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    std::ostringstream line;
    for (std::size_t i = 0; i < curve.rounds.size(); ++i) {
      line << fmt(sx(curve.rounds[i])) << "," << fmt(sy(curve.mean[i])) << " ";
    }
    svg << "<polyline points=\"" << line.str() << "\" fill=\"none\" stroke=\"" << color
        << "\" stroke-width=\"2\"/>\n";
  }

  // legend
  double ly = kMarginTop + 10;
  for (std::size_t c = 0; c < curves.size(); ++c) {
    const char* color = kPalette[c % (sizeof(kPalette) / sizeof(kPalette[0]))];
    const double lx = kMarginLeft + plot_w - 240;
    svg << "<line x1=\"" << fmt(lx) << "\" y1=\"" << fmt(ly) << "\" x2=\"" << fmt(lx + 25)
        << "\" y2=\"" << fmt(ly) << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    svg << "<text x=\"" << fmt(lx + 32) << "\" y=\"" << fmt(ly + 4) << "\">" << curves[c].name
        << "</text>\n";
    ly += 18;
  }

  svg << "</svg>\n";
  return svg.str();
}

}  // namespace genbo
