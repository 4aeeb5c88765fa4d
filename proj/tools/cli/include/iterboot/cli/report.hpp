#pragma once

#include <string>
#include <vector>

namespace iterboot::cli {

struct RatePoint {
  double n;
  double rmse;
};

/// Log-log chart of RMSE against n: one polyline through the points, the
/// least-squares line, and a "slope = X.XX" label. Byte-identical output for
/// identical input. Needs >= 2 points with positive values.
std::string render_rate_svg(const std::vector<RatePoint>& points);

}  // namespace iterboot::cli
