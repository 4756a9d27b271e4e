#pragma once

#include <functional>
#include <vector>

namespace kkwin {

/// Controls for all quadratures over tabulated data and model integrands.
struct QuadratureConfig {
  double rel_tol = 1e-6;     // target relative accuracy per integral
  int subdiv_limit = 12;     // max bisection depth per panel/interval
  double tail_exponent = 3.0;  // eps'' ~ eps''(w_max) (w_max/w)^tail above w_max
  enum class Interp { kLogLogLinear } interp = Interp::kLogLogLinear;

  void validate() const;
};

/// Gauss-Legendre nodes/weights on [-1, 1], cached per order.
struct GaussRule {
  std::vector<double> x;
  std::vector<double> w;
};
const GaussRule& gauss_rule(int order);

/// Fixed-order Gauss-Legendre on [a, b].
double gl_fixed(const std::function<double(double)>& f, double a, double b,
                int order);

/// Adaptive Gauss-Legendre (GL16 with embedded GL8 error estimate, bisection
/// refinement). Tolerance is relative to the running whole-interval estimate.
double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int subdiv_limit);

/// Integral over [w0, infinity) via the substitution w = w0/u, u in (0, 1].
/// The integrand must decay fast enough that f(w0/u) * w0/u^2 stays bounded
/// as u -> 0 (power-law tails with exponent > 1 qualify).
double integrate_tail(const std::function<double(double)>& f, double w0,
                      double rel_tol, int subdiv_limit);

}  // namespace kkwin
