#pragma once

// Adaptive panel integration with an embedded Gauss 7 / Kronrod 15 rule.
// Panels are refined worst-error-first until the summed error estimate
// drops below the absolute tolerance or the panel budget runs out.

#include <cstdint>
#include <functional>

namespace modsum::quad {

struct QuadResult {
  double value = 0.0;
  double error_estimate = 0.0;
  std::int64_t evaluations = 0;
  bool converged = false;
};

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_panels = 20000);

// Tensor-product rule over an axis-aligned rectangle, refined by bisecting
// the longer side of the worst panel.
QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax,
                        double bx, double ay, double by, double abs_tol,
                        int max_panels = 60000);

}  // namespace modsum::quad
