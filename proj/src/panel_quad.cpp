#include "panel_quad.hpp"

#include <algorithm>
#include <cmath>

namespace kkwin::detail {

double panel_value(const TabView& t, std::size_t i, double omega) {
  const double wa = (*t.w)[i], wb = (*t.w)[i + 1];
  const double va = (*t.v)[i], vb = (*t.v)[i + 1];
  if (va > 0.0 && vb > 0.0) {
    const double p = std::log(vb / va) / std::log(wb / wa);
    return va * std::pow(omega / wa, p);
  }
  const double s = (omega - wa) / (wb - wa);
  return va + s * (vb - va);
}

namespace {

// Adaptive GL over one mapped panel; tolerance relative to the panel value.
double panel_adaptive(const std::function<double(double)>& f, double a, double b,
                      const QuadratureConfig& quad) {
  if (!(b > a)) return 0.0;
  return integrate_adaptive(f, a, b, quad.rel_tol, quad.subdiv_limit);
}

template <typename Fn>
void for_each_clipped_panel(const TabView& t, double lo, double hi, Fn&& fn) {
  const auto& w = *t.w;
  for (std::size_t i = 0; i + 1 < w.size(); ++i) {
    const double a = std::max(w[i], lo);
    const double b = std::min(w[i + 1], hi);
    if (b > a) fn(i, a, b);
    if (w[i + 1] >= hi) break;
  }
}

}  // namespace

double kk_kernel_integral(const TabView& t, double lo, double hi, double xi,
                          const QuadratureConfig& quad, MinTracker* mt) {
  double total = 0.0;
  const double xi2 = xi * xi;
  for_each_clipped_panel(t, lo, hi, [&](std::size_t i, double a, double b) {
    // integrate in u = ln w: dw = w du
    auto f = [&](double u) {
      const double w = std::exp(u);
      const double val = panel_value(t, i, w) * w * w / (w * w + xi2);
      if (mt) mt->update(val);
      return val;
    };
    total += panel_adaptive(f, std::log(a), std::log(b), quad);
  });
  return total;
}

double kk_kernel_tail(double wmax, double v_end, double xi,
                      const QuadratureConfig& quad) {
  if (v_end <= 0.0) return 0.0;
  const double s = quad.tail_exponent;
  auto f = [&](double w) {
    return v_end * std::pow(wmax / w, s) * w / (w * w + xi * xi);
  };
  return integrate_tail(f, wmax, quad.rel_tol, quad.subdiv_limit);
}

double sqrtwin_eps2_integral(const TabView& t, double b, double lo, double hi,
                             double xi, const QuadratureConfig& quad,
                             MinTracker* mt) {
  double total = 0.0;
  const double c2 = (xi / b) * (xi / b);
  for_each_clipped_panel(t, std::max(lo, b), hi, [&](std::size_t i, double a2,
                                                     double b2) {
    const double ya = std::acosh(std::max(1.0, a2 / b));
    const double yb = std::acosh(b2 / b);
    auto f = [&](double y) {
      const double ch = std::cosh(y);
      const double w = b * ch;
      const double val = ch * ch / (ch * ch + c2) * panel_value(t, i, w);
      if (mt) mt->update(val);
      return val;
    };
    total += panel_adaptive(f, ya, yb, quad);
  });
  return total;
}

double sqrtwin_eps2_tail(double wmax, double v_end, double b, double xi,
                         const QuadratureConfig& quad) {
  if (v_end <= 0.0) return 0.0;
  const double s = quad.tail_exponent;
  auto f = [&](double w) {
    const double kern = w * w / ((w * w + xi * xi) * std::sqrt(w * w - b * b));
    return kern * v_end * std::pow(wmax / w, s);
  };
  return integrate_tail(f, wmax, quad.rel_tol, quad.subdiv_limit);
}

double sqrtwin_eps1_integral(const std::function<double(double)>& g, double b,
                             double lo, double hi, double xi,
                             const QuadratureConfig& quad, MinTracker* mt) {
  if (!(hi > lo)) return 0.0;
  const double c2 = (xi / b) * (xi / b);
  const double ya = std::asin(std::min(1.0, lo / b));
  const double yb = std::asin(std::min(1.0, hi / b));
  auto f = [&](double y) {
    const double sn = std::sin(y);
    const double w = b * sn;
    const double val = sn * sn / (sn * sn + c2) * g(w);
    if (mt) mt->update(val);
    return val;
  };
  return panel_adaptive(f, ya, yb, quad);
}

}  // namespace kkwin::detail
