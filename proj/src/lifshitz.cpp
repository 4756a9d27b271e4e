#include "kkwin/lifshitz.hpp"

#include <algorithm>
#include <cmath>
#include <memory>

namespace kkwin {

void CasimirConfig::validate() const {
  if (!(separation_m > 0.0))
    throw ValidationError("CasimirConfig: separation must be > 0");
  if (!(temperature_k > 0.0))
    throw ValidationError("CasimirConfig: temperature must be > 0");
  if (!(n_max_factor > 0.0))
    throw ValidationError("CasimirConfig: n_max_factor must be > 0");
  if (!(matsubara_tail_tol > 0.0))
    throw ValidationError("CasimirConfig: matsubara_tail_tol must be > 0");
  kperp_quad.validate();
  if (prescription == Prescription::kGeneralizedPlasma &&
      !(plasma_omega_p.ev > 0.0))
    throw ValidationError(
        "CasimirConfig: the generalized-plasma prescription needs plasma_omega_p");
}

std::vector<Frequency> matsubara_freqs(double temperature_k, int n_max) {
  if (!(temperature_k > 0.0))
    throw ValidationError("matsubara_freqs: temperature must be > 0");
  if (n_max < 0) throw ValidationError("matsubara_freqs: n_max must be >= 0");
  const double xi1 = matsubara_first(temperature_k).ev;
  std::vector<Frequency> out(static_cast<std::size_t>(n_max) + 1);
  for (int n = 0; n <= n_max; ++n)
    out[static_cast<std::size_t>(n)] = Frequency{n * xi1};
  return out;
}

FresnelPair fresnel_imag(double eps_ixi, Frequency xi, double kperp_per_m) {
  if (!(eps_ixi >= 1.0))
    throw ValidationError("fresnel_imag: eps(i xi) < 1 is unphysical");
  if (xi.ev < 0.0) throw ValidationError("fresnel_imag: xi must be >= 0");
  if (xi.ev == 0.0 && !(kperp_per_m > 0.0))
    throw ValidationError("fresnel_imag: kperp must be > 0 when xi = 0");
  const double xc = xi.rad_per_s() / kSpeedOfLightMs;  // xi/c in 1/m
  const double q = std::sqrt(kperp_per_m * kperp_per_m + xc * xc);
  const double k = std::sqrt(kperp_per_m * kperp_per_m + eps_ixi * xc * xc);
  return {(q - k) / (q + k), (eps_ixi * q - k) / (eps_ixi * q + k)};
}

namespace {

// Summand of the mode integrand: x/(1-x) with x = r^2 e^{-y}, stable for all y.
inline double geometric_term(double r2, double y) {
  if (r2 == 0.0) return 0.0;
  const double x = r2 * std::exp(-y);
  return x / (1.0 - x);
}

// One Matsubara mode in the variable y = 2 a q_n: returns
// Int_{t}^{inf} dy y^2 sum_pol x/(1-x), with t = 2 a xi_n / c.
double mode_integral(double eps, double t, const QuadratureConfig& quad) {
  auto f = [&](double y) {
    const double s = std::sqrt(y * y + (eps - 1.0) * t * t);
    const double r_te = (y - s) / (y + s);
    const double r_tm = (eps * y - s) / (eps * y + s);
    if (!(r_te * r_te <= 1.0 + 1e-12) || !(r_tm * r_tm <= 1.0 + 1e-12))
      throw ComputationError("mode_integral: reflection coefficient out of range");
    return y * y * (geometric_term(r_te * r_te, y) + geometric_term(r_tm * r_tm, y));
  };
  // The integrand decays like y^2 e^{-y}; 80 units past the lower edge is
  // below double precision relative to the peak.
  return integrate_adaptive(f, t, t + 80.0, quad.rel_tol, quad.subdiv_limit);
}

double n0_term(const CasimirConfig& cfg) {
  const QuadratureConfig& quad = cfg.kperp_quad;
  // TM with r = 1 under both prescriptions (ideal-conductor limit of the
  // TM coefficient as xi -> 0 with diverging eps).
  auto f_tm = [&](double y) { return y * y * geometric_term(1.0, y); };
  double total = integrate_adaptive(f_tm, 0.0, 80.0, quad.rel_tol,
                                    quad.subdiv_limit);
  if (cfg.prescription == Prescription::kGeneralizedPlasma) {
    // eps ~ wp^2/xi^2 keeps (eps-1) xi^2/c^2 finite: the TE reflection
    // survives at n = 0.
    const double tp =
        2.0 * cfg.separation_m * cfg.plasma_omega_p.rad_per_s() / kSpeedOfLightMs;
    auto f_te = [&](double y) {
      const double s = std::sqrt(y * y + tp * tp);
      const double r_te = (y - s) / (y + s);
      return y * y * geometric_term(r_te * r_te, y);
    };
    total += integrate_adaptive(f_te, 0.0, 80.0, quad.rel_tol, quad.subdiv_limit);
  }
  return 0.5 * total;  // the primed sum: n = 0 with weight one half
}

}  // namespace

double pressure(const EpsProvider& eps, const CasimirConfig& cfg,
                WarningLog* warnings, int threads) {
  cfg.validate();
  const double a = cfg.separation_m;
  const double T = cfg.temperature_k;
  const double xi1_ev = matsubara_first(T).ev;
  // omega_c = c/(2a) in eV.
  const double omega_c_ev = kHbarJs * kSpeedOfLightMs / (2.0 * a) / kElectronVoltJ;
  const int n_max =
      std::max(1, static_cast<int>(std::floor(cfg.n_max_factor * omega_c_ev / xi1_ev)));

  std::vector<double> terms(static_cast<std::size_t>(n_max) + 1, 0.0);
  terms[0] = n0_term(cfg);
  const double dy = 2.0 * a * Frequency{xi1_ev}.rad_per_s() / kSpeedOfLightMs;
  parallel_for(static_cast<std::size_t>(n_max), threads, [&](std::size_t i) {
    const int n = static_cast<int>(i) + 1;
    const Frequency xi{n * xi1_ev};
    const double e = eps(xi);
    if (!(e >= 1.0))
      throw ComputationError("pressure: eps(i xi) = " + std::to_string(e) +
                             " < 1 at xi = " + std::to_string(xi.ev) + " eV");
    terms[static_cast<std::size_t>(n)] = mode_integral(e, n * dy, cfg.kperp_quad);
  });

  // Deterministic ordered reduction, ascending n.
  double sum = 0.0;
  for (const double t : terms) sum += t;

  // Geometric estimate of the dropped tail; modes decay at least as e^{-dy}.
  const double rho = std::exp(-dy);
  const double tail = terms.back() * rho / (1.0 - rho);
  if (tail > cfg.matsubara_tail_tol * sum)
    throw ComputationError(
        "pressure: Matsubara sum not converged at n_max = " + std::to_string(n_max) +
        " (estimated tail fraction " + std::to_string(tail / sum) +
        "); increase n_max_factor");
  if (warnings && tail > 0.1 * cfg.matsubara_tail_tol * sum)
    warnings->push_back("pressure: Matsubara tail fraction " +
                        std::to_string(tail / sum));

  return -kBoltzmannJK * T / (8.0 * M_PI * a * a * a) * sum;
}

// ---------------------------------------------------------------------------
// eps(i xi) providers from dispersion results: monotone cubic (Fritsch-
// Carlson) interpolation of log(eps-1) versus log(xi), no extrapolation.
// ---------------------------------------------------------------------------
namespace {

struct Pchip {
  std::vector<double> x, y, d;  // abscissae, values, node derivatives

  static Pchip build(std::vector<double> xs, std::vector<double> ys) {
    const std::size_t n = xs.size();
    Pchip p;
    p.x = std::move(xs);
    p.y = std::move(ys);
    p.d.assign(n, 0.0);
    if (n == 2) {
      const double s = (p.y[1] - p.y[0]) / (p.x[1] - p.x[0]);
      p.d[0] = p.d[1] = s;
      return p;
    }
    std::vector<double> h(n - 1), del(n - 1);
    for (std::size_t i = 0; i + 1 < n; ++i) {
      h[i] = p.x[i + 1] - p.x[i];
      del[i] = (p.y[i + 1] - p.y[i]) / h[i];
    }
    for (std::size_t i = 1; i + 1 < n; ++i) {
      if (del[i - 1] * del[i] <= 0.0) {
        p.d[i] = 0.0;
      } else {
        const double w1 = 2.0 * h[i] + h[i - 1];
        const double w2 = h[i] + 2.0 * h[i - 1];
        p.d[i] = (w1 + w2) / (w1 / del[i - 1] + w2 / del[i]);
      }
    }
    auto endpoint = [](double h0, double h1, double d0, double d1) {
      double d = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
      if (d * d0 <= 0.0)
        d = 0.0;
      else if (d0 * d1 < 0.0 && std::abs(d) > 3.0 * std::abs(d0))
        d = 3.0 * d0;
      return d;
    };
    p.d[0] = endpoint(h[0], h[1], del[0], del[1]);
    p.d[n - 1] = endpoint(h[n - 2], h[n - 3], del[n - 2], del[n - 3]);
    return p;
  }

  double eval(double xq) const {
    if (xq < x.front() || xq > x.back())
      throw ComputationError(
          "eps provider: requested xi outside the dispersion grid; extend the "
          "grid to cover all Matsubara modes");
    auto it = std::upper_bound(x.begin(), x.end(), xq);
    std::size_t i = static_cast<std::size_t>(it - x.begin());
    i = (i == 0) ? 0 : i - 1;
    if (i + 1 >= x.size()) i = x.size() - 2;
    const double h = x[i + 1] - x[i];
    const double t = (xq - x[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * y[i] + h * h10 * d[i] + h01 * y[i + 1] + h * h11 * d[i + 1];
  }
};

EpsProvider make_provider(const std::vector<Frequency>& grid,
                          const std::vector<double>& eps) {
  if (grid.size() < 2)
    throw ValidationError("eps provider: need at least 2 grid points");
  std::vector<double> lx(grid.size()), ly(grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(eps[i] > 1.0))
      throw ValidationError(
          "eps provider: eps(i xi) <= 1 at xi = " + std::to_string(grid[i].ev) +
          " eV; result unusable for the Lifshitz formula");
    lx[i] = std::log(grid[i].ev);
    ly[i] = std::log(eps[i] - 1.0);
  }
  auto pchip = std::make_shared<Pchip>(Pchip::build(std::move(lx), std::move(ly)));
  return [pchip](Frequency xi) {
    return 1.0 + std::exp(pchip->eval(std::log(xi.ev)));
  };
}

}  // namespace

EpsProvider eps_provider_from_result(const ImagAxisResult& result) {
  return make_provider(result.xi_grid, result.eps_total);
}

EpsProvider eps_provider_drop_cut(const ImagAxisResult& result) {
  std::vector<double> eps(result.eps_expt.size());
  for (std::size_t i = 0; i < eps.size(); ++i) eps[i] = 1.0 + result.eps_expt[i];
  return make_provider(result.xi_grid, eps);
}

std::vector<PressureDiffRow> pressure_diff_report(
    const ImagAxisResult& res_a, const ImagAxisResult& res_b, CasimirConfig cfg,
    const std::vector<double>& separations_m) {
  const EpsProvider ea = eps_provider_from_result(res_a);
  const EpsProvider eb = eps_provider_from_result(res_b);
  std::vector<PressureDiffRow> rows;
  rows.reserve(separations_m.size());
  for (const double a : separations_m) {
    cfg.separation_m = a;
    const double pa = pressure(ea, cfg);
    const double pb = pressure(eb, cfg);
    rows.push_back({a, pa, pb, 100.0 * (pa - pb) / pb});
  }
  return rows;
}

}  // namespace kkwin
