#pragma once

// Internal: quadrature of tabulated optical data against dispersion kernels.
// Panels between data nodes carry a log-log linear (power-law) interpolant,
// with a linear fallback where a node value is non-positive; integration is
// panel-aligned adaptive Gauss-Legendre in the substituted variable.

#include <cstddef>
#include <functional>
#include <vector>

#include "kkwin/quadrature.hpp"

namespace kkwin::detail {

struct TabView {
  const std::vector<double>* w;  // strictly increasing node frequencies (eV)
  const std::vector<double>* v;  // node values
  std::size_t size() const { return w->size(); }
};

/// Interpolated value inside panel i at frequency omega.
double panel_value(const TabView& t, std::size_t i, double omega);

/// Minimum-integrand tracker (kernel-positivity diagnostic); pass nullptr to
/// skip.
struct MinTracker {
  double min = 0.0;
  bool seen = false;
  void update(double x) {
    if (!seen || x < min) min = x;
    seen = true;
  }
};

/// Int_{[lo,hi] ∩ data} w v(w) / (w^2 + xi^2) dw, panel-aligned.
double kk_kernel_integral(const TabView& t, double lo, double hi, double xi,
                          const QuadratureConfig& quad, MinTracker* mt = nullptr);

/// Power-law tail: Int_{wmax}^inf w v_end (wmax/w)^s / (w^2 + xi^2) dw.
double kk_kernel_tail(double wmax, double v_end, double xi,
                      const QuadratureConfig& quad);

/// Int_{[max(b,lo),hi] ∩ data} w^2 v(w) / ((w^2 + xi^2) sqrt(w^2 - b^2)) dw
/// via w = b cosh y (singularity-free).
double sqrtwin_eps2_integral(const TabView& t, double b, double lo, double hi,
                             double xi, const QuadratureConfig& quad,
                             MinTracker* mt = nullptr);

/// Tail of the same kernel above wmax with v = v_end (wmax/w)^s.
double sqrtwin_eps2_tail(double wmax, double v_end, double b, double xi,
                         const QuadratureConfig& quad);

/// Int_lo^hi w^2 g(w) / ((w^2 + xi^2) sqrt(b^2 - w^2)) dw via w = b sin y,
/// for [lo, hi] within [0, b]; g is any evaluator (model or panel
/// interpolant), typically g = 1 - eps'.
double sqrtwin_eps1_integral(const std::function<double(double)>& g, double b,
                             double lo, double hi, double xi,
                             const QuadratureConfig& quad,
                             MinTracker* mt = nullptr);

}  // namespace kkwin::detail
