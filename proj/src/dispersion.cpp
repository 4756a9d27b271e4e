#include "kkwin/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "panel_quad.hpp"

namespace kkwin {

namespace {

std::complex<double> ipow(std::complex<double> z, int n) {
  std::complex<double> r{1.0, 0.0};
  while (n > 0) {
    if (n & 1) r *= z;
    z *= z;
    n >>= 1;
  }
  return r;
}

std::string format_compact(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%g", x);
  std::string s = buf;
  for (auto& c : s) {
    if (c == '.') c = 'p';
    if (c == '-') c = 'm';
  }
  return s;
}

void validate_old_rational(const OldRationalWindow& w) {
  if (w.p < 0 || w.q < w.p)
    throw ValidationError("OldRationalWindow: need 0 <= p <= q");
  if (!(w.w.imag() < 0.0))
    throw ValidationError("OldRationalWindow: Im(w) must be < 0 (analyticity)");
  if (!(w.zero_rel_tol > 0.0))
    throw ValidationError("OldRationalWindow: zero_rel_tol must be > 0");
}

}  // namespace

std::string window_tag(const WindowSpec& w) {
  if (std::holds_alternative<IdentityWindow>(w)) return "kk";
  if (const auto* s = std::get_if<SqrtWindow>(&w)) {
    if (s->b.ev == 0.0) return "kk";
    return "win_b" + format_compact(s->b.ev);
  }
  const auto& o = std::get<OldRationalWindow>(w);
  return "old_p" + std::to_string(o.p) + "_q" + std::to_string(o.q);
}

std::complex<double> window_eval_complex(const WindowSpec& w,
                                         std::complex<double> z) {
  if (std::holds_alternative<IdentityWindow>(w)) return {1.0, 0.0};
  if (const auto* s = std::get_if<SqrtWindow>(&w)) {
    const double b = s->b.ev;
    if (b == 0.0) return {1.0, 0.0};
    // sqrt(z-b) sqrt(z+b): analytic in the upper half plane, unlike the
    // principal sqrt(z^2-b^2) whose cut crosses the imaginary axis.
    return z / (std::sqrt(z - b) * std::sqrt(z + b));
  }
  const auto& o = std::get<OldRationalWindow>(w);
  validate_old_rational(o);
  const std::complex<double> a = ipow(z - o.w, 2 * o.q + 1);
  const std::complex<double> bb = ipow(z + std::conj(o.w), 2 * o.q + 1);
  return ipow(z, 2 * o.p + 1) * (1.0 / a + 1.0 / bb);
}

std::complex<double> window_eval_real(const WindowSpec& w, Frequency omega) {
  if (!(omega.ev > 0.0))
    throw ValidationError("window_eval_real: omega must be > 0");
  if (const auto* s = std::get_if<SqrtWindow>(&w)) {
    const double b = s->b.ev;
    if (b == 0.0) return {1.0, 0.0};
    if (omega.ev == b)
      throw WindowZeroError(
          "window_eval_real: pole at omega = b; use the substituted form");
    if (omega.ev > b)
      return {omega.ev / std::sqrt(omega.ev * omega.ev - b * b), 0.0};
    return {0.0, -omega.ev / std::sqrt(b * b - omega.ev * omega.ev)};
  }
  return window_eval_complex(w, {omega.ev, 0.0});
}

double window_eval_imag(const WindowSpec& w, Frequency xi) {
  if (!(xi.ev > 0.0))
    throw ValidationError("window_eval_imag: xi must be > 0");
  if (std::holds_alternative<IdentityWindow>(w)) return 1.0;
  if (const auto* s = std::get_if<SqrtWindow>(&w)) {
    const double b = s->b.ev;
    return xi.ev / std::sqrt(xi.ev * xi.ev + b * b);
  }
  const auto& o = std::get<OldRationalWindow>(w);
  const std::complex<double> v = window_eval_complex(w, {0.0, xi.ev});
  // Structural envelope of |f(i xi)|: the magnitude absent the cancellation
  // between the two pole terms. The ratio is O(1) away from sign-change
  // zeros of f on the imaginary axis, so it isolates them from the
  // legitimate xi^(2p+1) falloff at the origin.
  const double envelope =
      2.0 * std::pow(xi.ev, 2 * o.p + 1) /
      std::pow(std::abs(std::complex<double>(0.0, xi.ev) - o.w), 2 * o.q + 1);
  if (std::abs(v) < o.zero_rel_tol * envelope)
    throw WindowZeroError(
        "window_eval_imag: |f(i xi)| = " + std::to_string(std::abs(v)) +
        " at xi = " + std::to_string(xi.ev) +
        " eV is below the near-zero threshold (window zero nearby)");
  return v.real();
}

// ---------------------------------------------------------------------------
// Shared transform plumbing
// ---------------------------------------------------------------------------
namespace {

struct DataTabs {
  std::vector<double> w;             // node frequencies
  std::vector<double> e2;            // eps''
  std::vector<double> one_minus_e1;  // 1 - eps'
};

DataTabs make_tabs(const OpticalDataset& d) {
  DataTabs t;
  t.w.reserve(d.size());
  t.e2.reserve(d.size());
  t.one_minus_e1.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    t.w.push_back(d[i].omega.ev);
    t.e2.push_back(d.eps2(i));
    t.one_minus_e1.push_back(1.0 - d.eps1(i));
  }
  return t;
}

void validate_transform_args(const std::vector<Frequency>& xi_grid,
                             const QuadratureConfig& quad) {
  quad.validate();
  if (xi_grid.empty())
    throw ValidationError("dispersion transform: empty xi grid");
  for (const Frequency xi : xi_grid)
    if (!(xi.ev > 0.0))
      throw ValidationError("dispersion transform: xi grid values must be > 0");
}

// Analytic Drude piece of the standard KK integral over [0, W]:
// (2/pi) wp^2 g Int_0^W dw / ((w^2+g^2)(w^2+xi^2)).
double drude_cut_standard(const DrudeParams& p, double W, double xi) {
  const double wp = p.omega_p.ev, g = p.gamma.ev;
  if (wp == 0.0 || g == 0.0) return 0.0;
  double J;
  if (std::abs(xi - g) > 1e-8 * g) {
    J = (std::atan(W / g) / g - std::atan(W / xi) / xi) / (xi * xi - g * g);
  } else {
    J = W / (2.0 * g * g * (W * W + g * g)) + std::atan(W / g) / (2.0 * g * g * g);
  }
  return (2.0 / M_PI) * wp * wp * g * J;
}

double drude_one_minus_eps1(const DrudeParams& p, double w) {
  const double wp = p.omega_p.ev, g = p.gamma.ev;
  return wp * wp / (w * w + g * g);
}

double drude_eps2(const DrudeParams& p, double w) {
  const double wp = p.omega_p.ev, g = p.gamma.ev;
  return wp * wp * g / (w * (w * w + g * g));
}

std::complex<double> drude_eps_minus_one(const DrudeParams& p, double w) {
  const double wp = p.omega_p.ev, g = p.gamma.ev;
  if (wp == 0.0) return {0.0, 0.0};
  return -wp * wp /
         (std::complex<double>(w, 0.0) * std::complex<double>(w, g));
}

ImagAxisResult make_result(const OpticalDataset&, const DrudeParams& extrap,
                           const WindowSpec& window,
                           const std::vector<Frequency>& xi_grid) {
  ImagAxisResult r;
  r.xi_grid = xi_grid;
  const std::size_t n = xi_grid.size();
  r.eps_total.assign(n, 0.0);
  r.eps_cut.assign(n, 0.0);
  r.eps_expt.assign(n, 0.0);
  r.negative_flag.assign(n, 0);
  r.window = window;
  r.drude_params = extrap;
  return r;
}

void finalize_point(ImagAxisResult& r, std::size_t i, double cut, double expt) {
  r.eps_cut[i] = cut;
  r.eps_expt[i] = expt;
  r.eps_total[i] = 1.0 + cut + expt;
  if (r.eps_total[i] < 0.0) r.negative_flag[i] = 1;
}

void fold_diagnostics(ImagAxisResult& r,
                      const std::vector<detail::MinTracker>& m1,
                      const std::vector<detail::MinTracker>& m2) {
  detail::MinTracker t1, t2;
  for (const auto& m : m1)
    if (m.seen) t1.update(m.min);
  for (const auto& m : m2)
    if (m.seen) t2.update(m.min);
  r.min_kernel_eps1 = t1.seen ? t1.min : 0.0;
  r.min_kernel_eps2 = t2.seen ? t2.min : 0.0;
  std::size_t negatives = 0;
  for (auto f : r.negative_flag) negatives += f;
  if (negatives)
    r.warnings.push_back("eps(i xi) < 0 at " + std::to_string(negatives) +
                         " grid point(s): unacceptable for a causal medium, "
                         "check data consistency");
}

}  // namespace

ImagAxisResult kk_standard(const OpticalDataset& data, const DrudeParams& extrap,
                           const std::vector<Frequency>& xi_grid,
                           const QuadratureConfig& quad, int threads) {
  validate_transform_args(xi_grid, quad);
  const DataTabs tabs = make_tabs(data);
  const detail::TabView e2view{&tabs.w, &tabs.e2};
  const double wmin = tabs.w.front(), wmax = tabs.w.back();

  ImagAxisResult r = make_result(data, extrap, IdentityWindow{}, xi_grid);
  std::vector<detail::MinTracker> m2(xi_grid.size());
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    const double xi = xi_grid[i].ev;
    const double cut = drude_cut_standard(extrap, wmin, xi);
    double expt = detail::kk_kernel_integral(e2view, wmin, wmax, xi, quad, &m2[i]);
    expt += detail::kk_kernel_tail(wmax, tabs.e2.back(), xi, quad);
    finalize_point(r, i, cut, (2.0 / M_PI) * expt);
  });
  fold_diagnostics(r, {}, m2);
  return r;
}

namespace {

// Windowed transform, SqrtWindow with 0 < b < wmax: the substituted
// singularity-free form. eps' enters below b, eps'' above b; everything
// below omega_min comes from the Drude extrapolation and lands in eps_cut.
ImagAxisResult kk_sqrt_window(const OpticalDataset& data,
                              const DrudeParams& extrap, const SqrtWindow& win,
                              const std::vector<Frequency>& xi_grid,
                              const QuadratureConfig& quad, int threads) {
  const DataTabs tabs = make_tabs(data);
  const detail::TabView e2view{&tabs.w, &tabs.e2};
  const detail::TabView e1view{&tabs.w, &tabs.one_minus_e1};
  const double wmin = tabs.w.front(), wmax = tabs.w.back();
  const double b = win.b.ev;
  if (b >= wmax)
    throw ValidationError("kk_windowed: b must lie below the data maximum");

  ImagAxisResult r = make_result(data, extrap, win, xi_grid);

  std::size_t bad_eps1 = 0;
  for (std::size_t i = 0; i < tabs.w.size() && tabs.w[i] < b; ++i)
    if (tabs.one_minus_e1[i] <= 0.0) ++bad_eps1;
  if (bad_eps1)
    r.warnings.push_back("eps' >= 1 at " + std::to_string(bad_eps1) +
                         " data node(s) below b; the eps' kernel is not "
                         "guaranteed positive there");

  std::vector<detail::MinTracker> m1(xi_grid.size()), m2(xi_grid.size());
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    const double xi = xi_grid[i].ev;
    const double pref = std::sqrt(1.0 + (b / xi) * (b / xi));

    // --- cut: [0, omega_min] from the Drude extrapolation
    double cut = 0.0;
    if (extrap.omega_p.ev > 0.0) {
      auto g = [&](double w) { return drude_one_minus_eps1(extrap, w); };
      cut += detail::sqrtwin_eps1_integral(g, b, 0.0, std::min(wmin, b), xi,
                                           quad, &m1[i]);
      if (b < wmin) {
        // Drude absorption between b and the data edge.
        const double ya = 0.0, yb = std::acosh(wmin / b);
        const double c2 = (xi / b) * (xi / b);
        auto f = [&](double y) {
          const double ch = std::cosh(y);
          const double w = b * ch;
          const double val = ch * ch / (ch * ch + c2) * drude_eps2(extrap, w);
          m2[i].update(val);
          return val;
        };
        cut += integrate_adaptive(f, ya, yb, quad.rel_tol, quad.subdiv_limit);
      }
    }

    // --- expt: data eps' on [omega_min, b), panel-aligned
    double expt = 0.0;
    if (b > wmin) {
      for (std::size_t j = 0; j + 1 < tabs.w.size(); ++j) {
        const double lo = std::max(tabs.w[j], wmin);
        const double hi = std::min(tabs.w[j + 1], b);
        if (hi <= lo) {
          if (tabs.w[j] >= b) break;
          continue;
        }
        auto g = [&](double w) { return detail::panel_value(e1view, j, w); };
        expt += detail::sqrtwin_eps1_integral(g, b, lo, hi, xi, quad, &m1[i]);
      }
    }
    // --- expt: data eps'' on [max(b, omega_min), omega_max] plus tail
    expt += detail::sqrtwin_eps2_integral(e2view, b, wmin, wmax, xi, quad, &m2[i]);
    expt += detail::sqrtwin_eps2_tail(wmax, tabs.e2.back(), b, xi, quad);

    finalize_point(r, i, pref * (2.0 / M_PI) * cut, pref * (2.0 / M_PI) * expt);
  });
  fold_diagnostics(r, m1, m2);
  return r;
}

// Generic weighted transform (OldRational): integrates
// K(w) Im[f(w)(eps(w)-1)] in the original variable. Kept for the
// instability study; no positive-kernel guarantee.
ImagAxisResult kk_generic_window(const OpticalDataset& data,
                                 const DrudeParams& extrap,
                                 const WindowSpec& window,
                                 const std::vector<Frequency>& xi_grid,
                                 const QuadratureConfig& quad, int threads) {
  const DataTabs tabs = make_tabs(data);
  const detail::TabView e2view{&tabs.w, &tabs.e2};
  const detail::TabView e1view{&tabs.w, &tabs.one_minus_e1};
  const double wmin = tabs.w.front(), wmax = tabs.w.back();

  // Fail fast on any grid point near a window zero (precondition).
  std::vector<double> f_imag(xi_grid.size());
  for (std::size_t i = 0; i < xi_grid.size(); ++i)
    f_imag[i] = window_eval_imag(window, xi_grid[i]);

  ImagAxisResult r = make_result(data, extrap, window, xi_grid);
  std::vector<detail::MinTracker> mk(xi_grid.size());
  parallel_for(xi_grid.size(), threads, [&](std::size_t i) {
    const double xi = xi_grid[i].ev;
    const double xi2 = xi * xi;
    auto kernel = [&](double w, std::complex<double> eps_minus_one) {
      const std::complex<double> f = window_eval_complex(window, {w, 0.0});
      const double val =
          w / (w * w + xi2) * std::imag(f * eps_minus_one);
      mk[i].update(val);
      return val;
    };

    double cut = 0.0;
    if (extrap.omega_p.ev > 0.0) {
      auto fc = [&](double w) { return kernel(w, drude_eps_minus_one(extrap, w)); };
      cut = integrate_adaptive(fc, 0.0, wmin, quad.rel_tol, quad.subdiv_limit);
    }

    double expt = 0.0;
    for (std::size_t j = 0; j + 1 < tabs.w.size(); ++j) {
      auto fd = [&](double w) {
        const double e2 = detail::panel_value(e2view, j, w);
        const double om1 = detail::panel_value(e1view, j, w);
        return kernel(w, {-om1, e2});
      };
      expt += integrate_adaptive(fd, tabs.w[j], tabs.w[j + 1], quad.rel_tol,
                                 quad.subdiv_limit);
    }
    // Tail: eps'' by the power-law rule, eps'-1 by the plasma asymptotic
    // (old windows weight the real part too).
    const double e2_end = tabs.e2.back();
    const double wp2 = extrap.omega_p.ev * extrap.omega_p.ev;
    auto ft = [&](double w) {
      const std::complex<double> em1(-wp2 / (w * w),
                                     e2_end * std::pow(wmax / w, quad.tail_exponent));
      return kernel(w, em1);
    };
    expt += integrate_tail(ft, wmax, quad.rel_tol, quad.subdiv_limit);

    const double norm = 2.0 / (M_PI * f_imag[i]);
    finalize_point(r, i, norm * cut, norm * expt);
  });
  fold_diagnostics(r, {}, mk);
  return r;
}

}  // namespace

ImagAxisResult kk_windowed(const OpticalDataset& data, const DrudeParams& extrap,
                           const WindowSpec& window,
                           const std::vector<Frequency>& xi_grid,
                           const QuadratureConfig& quad, int threads) {
  validate_transform_args(xi_grid, quad);
  if (std::holds_alternative<IdentityWindow>(window))
    return kk_standard(data, extrap, xi_grid, quad, threads);
  if (const auto* s = std::get_if<SqrtWindow>(&window)) {
    if (s->b.ev < 0.0) throw ValidationError("kk_windowed: b must be >= 0");
    if (s->b.ev == 0.0) {
      ImagAxisResult r = kk_standard(data, extrap, xi_grid, quad, threads);
      r.window = window;
      return r;
    }
    return kk_sqrt_window(data, extrap, *s, xi_grid, quad, threads);
  }
  validate_old_rational(std::get<OldRationalWindow>(window));
  return kk_generic_window(data, extrap, window, xi_grid, quad, threads);
}

std::vector<std::pair<Frequency, double>> g_diagnostic(const OpticalDataset& data,
                                                       const WindowSpec& window,
                                                       Frequency xi) {
  if (!(xi.ev > 0.0)) throw ValidationError("g_diagnostic: xi must be > 0");
  const double f_ix = window_eval_imag(window, xi);
  std::vector<std::pair<Frequency, double>> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = data[i].omega.ev;
    const std::complex<double> f = window_eval_real(window, data[i].omega);
    const std::complex<double> em1(data.eps1(i) - 1.0, data.eps2(i));
    const double g = 2.0 / (M_PI * f_ix) * w / (w * w + xi.ev * xi.ev) *
                     std::imag(f * em1);
    out.emplace_back(data[i].omega, g);
  }
  return out;
}

CutFractionTable cut_fraction(const ImagAxisResult& result) {
  CutFractionTable t;
  t.raw.reserve(result.eps_total.size());
  t.clamped.reserve(result.eps_total.size());
  for (std::size_t i = 0; i < result.eps_total.size(); ++i) {
    const double raw = result.eps_cut[i] / result.eps_total[i];
    t.raw.push_back(raw);
    t.clamped.push_back(std::isfinite(raw) ? std::clamp(raw, 0.0, 1.0) : 0.0);
  }
  return t;
}

}  // namespace kkwin
