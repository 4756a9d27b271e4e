#include "kkwin/fitting.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace kkwin {

PlasmaFit fit_plasma_frequency(const OpticalDataset& data, Frequency range_lo,
                               Frequency range_hi,
                               std::optional<double> eps_inter_fixed,
                               WarningLog* warnings) {
  if (!(range_lo.ev > 0.0) || !(range_hi.ev > range_lo.ev))
    throw ValidationError("fit_plasma_frequency: bad fit range");

  std::vector<double> x, y;  // lambda^2 [um^2], eps'
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = data[i].omega.ev;
    if (w < range_lo.ev || w > range_hi.ev) continue;
    const double lam = kEvMicron / w;
    x.push_back(lam * lam);
    y.push_back(data.eps1(i));
  }
  if (x.size() < 3)
    throw ValidationError("fit_plasma_frequency: fewer than 3 samples in range [" +
                          std::to_string(range_lo.ev) + ", " +
                          std::to_string(range_hi.ev) + "] eV");

  const std::size_t n = x.size();
  double slope, intercept;
  if (eps_inter_fixed) {
    intercept = 1.0 + *eps_inter_fixed;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += x[i] * x[i];
      sxy += x[i] * (y[i] - intercept);
    }
    slope = sxy / sxx;
  } else {
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      mx += x[i];
      my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      sxx += (x[i] - mx) * (x[i] - mx);
      sxy += (x[i] - mx) * (y[i] - my);
    }
    slope = sxy / sxx;
    intercept = my - slope * mx;
  }
  if (!(slope < 0.0))
    throw ValidationError(
        "fit_plasma_frequency: non-negative slope of eps' vs lambda^2 (no "
        "metallic behavior in the chosen range)");

  double ss = 0.0, mean_abs = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - (intercept + slope * x[i]);
    ss += r * r;
    mean_abs += std::abs(y[i]);
  }
  mean_abs /= n;

  PlasmaFit fit;
  // eps' = 1 + eps_inter - (omega_p[eV] lambda[um] / kEvMicron)^2
  fit.omega_p = Frequency{kEvMicron * std::sqrt(-slope)};
  fit.eps_inter = eps_inter_fixed ? *eps_inter_fixed : intercept - 1.0;
  fit.eps_inter_was_fitted = !eps_inter_fixed.has_value();
  fit.lambda2_min_um2 = *std::min_element(x.begin(), x.end());
  fit.lambda2_max_um2 = *std::max_element(x.begin(), x.end());
  fit.residual_rms = std::sqrt(ss / n);
  fit.n_points = n;
  if (fit.residual_rms > 0.01 * mean_abs)
    warn(warnings, "fit_plasma_frequency['" + data.label() + "']: residual rms " +
                       std::to_string(fit.residual_rms) + " exceeds 1% of mean |eps'|");
  return fit;
}

double interband_constant(const OpticalDataset& data, Frequency omega_inter,
                          const QuadratureConfig& quad, WarningLog* warnings) {
  quad.validate();
  if (!(omega_inter.ev > 0.0))
    throw ValidationError("interband_constant: omega_inter must be > 0");
  if (!(data.omega_max().ev > omega_inter.ev))
    throw ValidationError("interband_constant: data does not extend above omega_inter");

  // Closed form per power-law panel: with v = va (w/wa)^p,
  // Int v/w dw = va ((hi/wa)^p - (lo/wa)^p)/p  (va ln(hi/lo) as p -> 0).
  double integral = 0.0;
  const auto& s = data.samples();
  for (std::size_t i = 0; i + 1 < s.size(); ++i) {
    const double wa = s[i].omega.ev, wb = s[i + 1].omega.ev;
    const double lo = std::max(wa, omega_inter.ev), hi = wb;
    if (hi <= lo) continue;
    const double va = data.eps2(i), vb = data.eps2(i + 1);
    if (va > 0.0 && vb > 0.0) {
      const double p = std::log(vb / va) / std::log(wb / wa);
      if (std::abs(p) > 1e-10)
        integral += va * (std::pow(hi / wa, p) - std::pow(lo / wa, p)) / p;
      else
        integral += va * std::log(hi / lo);
    } else {
      // linear panel: v = va + m (w - wa)
      const double m = (vb - va) / (wb - wa);
      integral += (va - m * wa) * std::log(hi / lo) + m * (hi - lo);
    }
  }
  // Tail: v_end (wmax/w)^s / w integrates to v_end / s.
  const double tail = data.eps2(data.size() - 1) / quad.tail_exponent;
  const double result = (2.0 / M_PI) * (integral + tail);
  if (result > 0.0 && tail / (integral + tail) > 0.1)
    warn(warnings, "interband_constant: the high-frequency tail contributes " +
                       std::to_string(100.0 * tail / (integral + tail)) +
                       "% of the result; extend the data or check tail_exponent");
  return result;
}

ConsistencyReport consistency_report(const std::vector<OpticalDataset>& sets,
                                     const std::vector<Frequency>& overlap_probe,
                                     WarningLog* warnings) {
  if (sets.size() < 2)
    throw ValidationError("consistency_report: need at least 2 datasets");

  ConsistencyReport rep;
  for (const auto& d : sets) rep.labels.push_back(d.label());

  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const Frequency probe : overlap_probe) {
    ConsistencyProbeRow row;
    row.omega = probe;
    for (const auto& d : sets) {
      if (probe.ev < d.omega_min().ev || probe.ev > d.omega_max().ev)
        row.eps.emplace_back(nan, nan);
      else
        row.eps.push_back(interpolate_eps(d, probe));
    }
    for (std::size_t i = 0; i < sets.size(); ++i)
      for (std::size_t j = i + 1; j < sets.size(); ++j) {
        const auto ei = row.eps[i], ej = row.eps[j];
        if (std::isnan(ei.real()) || std::isnan(ej.real()))
          row.pair_diff_percent.push_back(nan);
        else
          row.pair_diff_percent.push_back(100.0 * std::abs(ei - ej) / std::abs(ej));
      }
    rep.probes.push_back(std::move(row));
  }

  // Per-set plasma-frequency fit over the IR-to-red coverage (< 1.6 eV),
  // free intercept.
  for (const auto& d : sets) {
    const Frequency lo = d.omega_min();
    const Frequency hi{std::min(1.6, d.omega_max().ev)};
    try {
      rep.fits.push_back(fit_plasma_frequency(d, lo, hi, {}, warnings));
      rep.fit_errors.emplace_back();
    } catch (const Error& e) {
      PlasmaFit bad;
      bad.omega_p = Frequency{nan};
      rep.fits.push_back(bad);
      rep.fit_errors.emplace_back(e.what());
    }
  }
  for (std::size_t i = 0; i < sets.size(); ++i)
    for (std::size_t j = i + 1; j < sets.size(); ++j) {
      const double wi = rep.fits[i].omega_p.ev, wj = rep.fits[j].omega_p.ev;
      if (std::isnan(wi) || std::isnan(wj)) continue;
      const double diff = 100.0 * std::abs(wi - wj) / std::min(wi, wj);
      if (diff > 5.0) rep.flagged_pairs.push_back({i, j, diff});
    }
  return rep;
}

}  // namespace kkwin
