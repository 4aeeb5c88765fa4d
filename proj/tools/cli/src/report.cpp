#include "iterboot/cli/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "iterboot/experiments.hpp"

namespace iterboot::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 480.0;
constexpr double kLeft = 80.0;
constexpr double kRight = 30.0;
constexpr double kTop = 40.0;
constexpr double kBottom = 60.0;

std::string fixed(double x, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, x);
  std::string s(buf);
  if (s == "-0.00") s = "0.00";
  return s;
}

std::string sci(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3g", x);
  return buf;
}

}  // namespace

std::string render_rate_svg(const std::vector<RatePoint>& points) {
  if (points.size() < 2) throw std::invalid_argument("report: need at least 2 data rows");
  std::vector<double> ns, rmses;
  for (const auto& p : points) {
    ns.push_back(p.n);
    rmses.push_back(p.rmse);
  }
  const auto fit = experiments::log_log_fit(ns, rmses);

  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < points.size(); ++i) {
    lx.push_back(std::log10(ns[i]));
    ly.push_back(std::log10(rmses[i]));
  }
  auto [xmin_it, xmax_it] = std::minmax_element(lx.begin(), lx.end());
  auto [ymin_it, ymax_it] = std::minmax_element(ly.begin(), ly.end());
  double xmin = *xmin_it, xmax = *xmax_it, ymin = *ymin_it, ymax = *ymax_it;
  if (xmax - xmin < 1e-12) { xmin -= 0.5; xmax += 0.5; }
  if (ymax - ymin < 1e-12) { ymin -= 0.5; ymax += 0.5; }
  const double xpad = 0.05 * (xmax - xmin), ypad = 0.05 * (ymax - ymin);
  xmin -= xpad; xmax += xpad; ymin -= ypad; ymax += ypad;

  const double plot_w = kWidth - kLeft - kRight;
  const double plot_h = kHeight - kTop - kBottom;
  auto px = [&](double v) { return kLeft + (v - xmin) / (xmax - xmin) * plot_w; };
  auto py = [&](double v) { return kTop + (ymax - v) / (ymax - ymin) * plot_h; };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kWidth << "\" height=\"" << kHeight
      << "\" viewBox=\"0 0 " << kWidth << ' ' << kHeight << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << kWidth << "\" height=\"" << kHeight << "\" fill=\"white\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kHeight - kBottom << "\" x2=\"" << kWidth - kRight << "\" y2=\""
      << kHeight - kBottom << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\"" << kHeight - kBottom
      << "\" stroke=\"black\"/>\n";

  for (std::size_t i = 0; i < points.size(); ++i) {
    svg << "<text x=\"" << fixed(px(lx[i]), 2) << "\" y=\"" << kHeight - kBottom + 18
        << "\" font-size=\"11\" text-anchor=\"middle\">" << sci(ns[i]) << "</text>\n";
  }
  svg << "<text x=\"" << kLeft + plot_w / 2 << "\" y=\"" << kHeight - 12
      << "\" font-size=\"13\" text-anchor=\"middle\">n (log scale)</text>\n"
      << "<text x=\"18\" y=\"" << kTop + plot_h / 2 << "\" font-size=\"13\" text-anchor=\"middle\" transform=\"rotate(-90 18 "
      << kTop + plot_h / 2 << ")\">RMSE (log scale)</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(*ymax_it), 2) << "\" font-size=\"11\" text-anchor=\"end\">"
      << sci(std::pow(10.0, *ymax_it)) << "</text>\n"
      << "<text x=\"" << kLeft - 6 << "\" y=\"" << fixed(py(*ymin_it), 2) << "\" font-size=\"11\" text-anchor=\"end\">"
      << sci(std::pow(10.0, *ymin_it)) << "</text>\n";

  // Fitted line: log10 rmse = slope * log10 n + intercept / ln 10.
  const double b10 = fit.intercept / std::log(10.0);
  const double fx0 = *xmin_it, fx1 = *xmax_it;
  svg << "<line id=\"fit\" x1=\"" << fixed(px(fx0), 2) << "\" y1=\"" << fixed(py(fit.slope * fx0 + b10), 2)
      << "\" x2=\"" << fixed(px(fx1), 2) << "\" y2=\"" << fixed(py(fit.slope * fx1 + b10), 2)
      << "\" stroke=\"gray\" stroke-dasharray=\"4 3\"/>\n";

  svg << "<polyline fill=\"none\" stroke=\"steelblue\" stroke-width=\"2\" points=\"";
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (i) svg << ' ';
    svg << fixed(px(lx[i]), 2) << ',' << fixed(py(ly[i]), 2);
  }
  svg << "\"/>\n";
  svg << "<text id=\"slope\" x=\"" << kWidth - kRight - 4 << "\" y=\"" << kTop + 16
      << "\" font-size=\"14\" text-anchor=\"end\">slope = " << fixed(fit.slope, 2) << "</text>\n"
      << "</svg>\n";
  return svg.str();
}

}  // namespace iterboot::cli
