#include "kkwin/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>

#include "kkwin/core.hpp"

namespace kkwin {

void QuadratureConfig::validate() const {
  if (!(rel_tol > 0.0)) throw ValidationError("QuadratureConfig: rel_tol must be > 0");
  if (subdiv_limit < 0)
    throw ValidationError("QuadratureConfig: subdiv_limit must be >= 0");
  if (!(tail_exponent > 1.0))
    throw ValidationError("QuadratureConfig: tail_exponent must be > 1 (integrability)");
}

namespace {

GaussRule build_rule(int order) {
  // Newton iteration on Legendre P_n; nodes symmetric about 0.
  GaussRule r;
  r.x.resize(static_cast<std::size_t>(order));
  r.w.resize(static_cast<std::size_t>(order));
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int j = 2; j <= order; ++j) {
        const double p2 = ((2.0 * j - 1.0) * x * p1 - (j - 1.0) * p0) / j;
        p0 = p1;
        p1 = p2;
      }
      pp = order * (x * p1 - p0) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    const double w = 2.0 / ((1.0 - x * x) * pp * pp);
    r.x[static_cast<std::size_t>(i)] = -x;
    r.w[static_cast<std::size_t>(i)] = w;
    r.x[static_cast<std::size_t>(order - 1 - i)] = x;
    r.w[static_cast<std::size_t>(order - 1 - i)] = w;
  }
  return r;
}

}  // namespace

const GaussRule& gauss_rule(int order) {
  static std::mutex mu;
  static std::map<int, GaussRule> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto it = cache.find(order);
  if (it == cache.end()) it = cache.emplace(order, build_rule(order)).first;
  return it->second;
}

double gl_fixed(const std::function<double(double)>& f, double a, double b,
                int order) {
  const GaussRule& r = gauss_rule(order);
  const double mid = 0.5 * (a + b), half = 0.5 * (b - a);
  double sum = 0.0;
  for (std::size_t i = 0; i < r.x.size(); ++i)
    sum += r.w[i] * f(mid + half * r.x[i]);
  return half * sum;
}

namespace {

double adapt_segment(const std::function<double(double)>& f, double a, double b,
                     double abs_tol, int depth, int subdiv_limit) {
  const double coarse = gl_fixed(f, a, b, 8);
  const double fine = gl_fixed(f, a, b, 16);
  if (std::abs(fine - coarse) <= abs_tol || depth >= subdiv_limit) return fine;
  const double mid = 0.5 * (a + b);
  return adapt_segment(f, a, mid, 0.5 * abs_tol, depth + 1, subdiv_limit) +
         adapt_segment(f, mid, b, 0.5 * abs_tol, depth + 1, subdiv_limit);
}

}  // namespace

double integrate_adaptive(const std::function<double(double)>& f, double a,
                          double b, double rel_tol, int subdiv_limit) {
  if (a == b) return 0.0;
  const double whole = gl_fixed(f, a, b, 16);
  const double scale = std::max(std::abs(whole), 1e-300);
  return adapt_segment(f, a, b, rel_tol * scale, 0, subdiv_limit);
}

double integrate_tail(const std::function<double(double)>& f, double w0,
                      double rel_tol, int subdiv_limit) {
  // w = w0/u maps [w0, inf) to u in (0, 1]; du weight w0/u^2.
  auto g = [&](double u) {
    const double w = w0 / u;
    return f(w) * w0 / (u * u);
  };
  return integrate_adaptive(g, 0.0, 1.0, rel_tol, subdiv_limit);
}

}  // namespace kkwin
