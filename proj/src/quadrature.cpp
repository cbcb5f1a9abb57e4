#include "modsum/quadrature.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace modsum::quad {

namespace {

// Kronrod 15 abscissae on [-1, 1] (symmetric; index 0 is the center).
constexpr double kNodes[8] = {
    0.0,
    0.207784955007898468,
    0.405845151377397167,
    0.586087235467691130,
    0.741531185599394440,
    0.864864423359769073,
    0.949107912342758525,
    0.991455371120812639,
};

constexpr double kKronrodW[8] = {
    0.209482141084727828,
    0.204432940075298892,
    0.190350578064785410,
    0.169004726639267903,
    0.140653259715525919,
    0.104790010322250184,
    0.063092092629978553,
    0.022935322010529225,
};

// Gauss 7 weights for the even-index nodes (0, 2, 4, 6).
constexpr double kGaussW[4] = {
    0.417959183673469388,
    0.381830050505118945,
    0.279705391489276668,
    0.129484966168869693,
};

struct Panel {
  double a, b;
  double value;   // Kronrod estimate
  double error;   // |Kronrod - Gauss|
  bool operator<(const Panel& o) const { return error < o.error; }
};

Panel eval_panel(const std::function<double(double)>& f, double a, double b) {
  const double mid = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  double fk[15];
  fk[0] = f(mid);
  for (int i = 1; i < 8; ++i) {
    const double dx = half * kNodes[i];
    fk[2 * i - 1] = f(mid - dx);
    fk[2 * i] = f(mid + dx);
  }
  double kron = kKronrodW[0] * fk[0];
  double gauss = kGaussW[0] * fk[0];
  for (int i = 1; i < 8; ++i) {
    const double pair = fk[2 * i - 1] + fk[2 * i];
    kron += kKronrodW[i] * pair;
    if (i % 2 == 0) gauss += kGaussW[i / 2] * pair;
  }
  kron *= half;
  gauss *= half;
  return {a, b, kron, std::abs(kron - gauss)};
}

struct Panel2 {
  double ax, bx, ay, by;
  double value;
  double error;
  bool operator<(const Panel2& o) const { return error < o.error; }
};

Panel2 eval_panel_2d(const std::function<double(double, double)>& f, double ax, double bx,
                     double ay, double by) {
  const double mx = 0.5 * (ax + bx), hx = 0.5 * (bx - ax);
  const double my = 0.5 * (ay + by), hy = 0.5 * (by - ay);
  double xs[15], ys[15], wxk[15], wyk[15], wxg[15], wyg[15];
  xs[0] = mx;
  ys[0] = my;
  wxk[0] = kKronrodW[0];
  wyk[0] = kKronrodW[0];
  wxg[0] = kGaussW[0];
  wyg[0] = kGaussW[0];
  for (int i = 1; i < 8; ++i) {
    xs[2 * i - 1] = mx - hx * kNodes[i];
    xs[2 * i] = mx + hx * kNodes[i];
    ys[2 * i - 1] = my - hy * kNodes[i];
    ys[2 * i] = my + hy * kNodes[i];
    wxk[2 * i - 1] = wxk[2 * i] = kKronrodW[i];
    wyk[2 * i - 1] = wyk[2 * i] = kKronrodW[i];
    const double g = (i % 2 == 0) ? kGaussW[i / 2] : 0.0;
    wxg[2 * i - 1] = wxg[2 * i] = g;
    wyg[2 * i - 1] = wyg[2 * i] = g;
  }
  double kron = 0.0, gauss = 0.0;
  for (int i = 0; i < 15; ++i) {
    double row_k = 0.0, row_g = 0.0;
    for (int j = 0; j < 15; ++j) {
      const double v = f(xs[i], ys[j]);
      row_k += wyk[j] * v;
      row_g += wyg[j] * v;
    }
    kron += wxk[i] * row_k;
    gauss += wxg[i] * row_g;
  }
  kron *= hx * hy;
  gauss *= hx * hy;
  return {ax, bx, ay, by, kron, std::abs(kron - gauss)};
}

}  // namespace

QuadResult integrate(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int max_panels) {
  QuadResult res;
  if (!(a < b)) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Panel> heap;
  // Seed with a few panels so widely separated features are not missed by
  // a single coarse rule.
  const int seed_panels = 8;
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < seed_panels; ++i) {
    const double pa = a + (b - a) * i / seed_panels;
    const double pb = a + (b - a) * (i + 1) / seed_panels;
    Panel p = eval_panel(f, pa, pb);
    total += p.value;
    total_err += p.error;
    heap.push(p);
  }
  res.evaluations = 15 * seed_panels;
  int panels = seed_panels;
  while (total_err > abs_tol && panels < max_panels) {
    Panel worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;
    const double mid = 0.5 * (worst.a + worst.b);
    Panel left = eval_panel(f, worst.a, mid);
    Panel right = eval_panel(f, mid, worst.b);
    res.evaluations += 30;
    total += left.value + right.value;
    total_err += left.error + right.error;
    heap.push(left);
    heap.push(right);
    ++panels;
  }
  res.value = total;
  res.error_estimate = total_err;
  res.converged = total_err <= abs_tol;
  return res;
}

QuadResult integrate_2d(const std::function<double(double, double)>& f, double ax,
                        double bx, double ay, double by, double abs_tol,
                        int max_panels) {
  QuadResult res;
  if (!(ax < bx) || !(ay < by)) {
    res.converged = true;
    return res;
  }
  std::priority_queue<Panel2> heap;
  const int seed = 4;
  double total = 0.0, total_err = 0.0;
  for (int i = 0; i < seed; ++i) {
    for (int j = 0; j < seed; ++j) {
      const double pax = ax + (bx - ax) * i / seed;
      const double pbx = ax + (bx - ax) * (i + 1) / seed;
      const double pay = ay + (by - ay) * j / seed;
      const double pby = ay + (by - ay) * (j + 1) / seed;
      Panel2 p = eval_panel_2d(f, pax, pbx, pay, pby);
      total += p.value;
      total_err += p.error;
      heap.push(p);
    }
  }
  res.evaluations = 225 * seed * seed;
  int panels = seed * seed;
  while (total_err > abs_tol && panels < max_panels) {
    Panel2 worst = heap.top();
    heap.pop();
    total -= worst.value;
    total_err -= worst.error;
    Panel2 first, second;
    if (worst.bx - worst.ax >= worst.by - worst.ay) {
      const double mid = 0.5 * (worst.ax + worst.bx);
      first = eval_panel_2d(f, worst.ax, mid, worst.ay, worst.by);
      second = eval_panel_2d(f, mid, worst.bx, worst.ay, worst.by);
    } else {
      const double mid = 0.5 * (worst.ay + worst.by);
      first = eval_panel_2d(f, worst.ax, worst.bx, worst.ay, mid);
      second = eval_panel_2d(f, worst.ax, worst.bx, mid, worst.by);
    }
    res.evaluations += 450;
    total += first.value + second.value;
    total_err += first.error + second.error;
    heap.push(first);
    heap.push(second);
    ++panels;
  }
  res.value = total;
  res.error_estimate = total_err;
  res.converged = total_err <= abs_tol;
  return res;
}

}  // namespace modsum::quad
