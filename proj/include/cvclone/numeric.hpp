#pragma once

// Derivative-free 1-D maximization used by the direct-search optimizer.

#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>

#include <boost/math/tools/minima.hpp>

namespace cvclone::numeric {

/// Brent maximization of a 1-D function on [lo, hi]; returns (argmax, max).
/// The endpoints are compared explicitly since the optimum often sits on one.
inline std::pair<double, double> brent_maximize(const std::function<double(double)>& f, double lo,
                                                double hi) {
  if (hi <= lo) return {lo, f(lo)};
  std::uintmax_t iters = 500;
  const auto [x, negv] =
      boost::math::tools::brent_find_minima([&](double t) { return -f(t); }, lo, hi, 52, iters);
  std::pair<double, double> best{x, -negv};
  for (double edge : {lo, hi}) {
    const double v = f(edge);
    if (v >= best.second) best = {edge, v};
  }
  return best;
}

}  // namespace cvclone::numeric
