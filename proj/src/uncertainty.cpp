#include "kkwin/uncertainty.hpp"

#include <cmath>

namespace kkwin {

void NoiseSpec::validate() const {
  if (!(delta_exp > 0.0 && delta_exp < 0.5))
    throw ValidationError("NoiseSpec: delta_exp must be in (0, 0.5)");
  if (n_resamples < 2)
    throw ValidationError("NoiseSpec: n_resamples must be >= 2");
}

namespace {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

// Standard-normal draw keyed by (seed, stream, node, component): independent
// of evaluation order and thread count.
double gaussian_draw(std::uint64_t seed, std::uint64_t stream, std::uint64_t node,
                     std::uint64_t component) {
  std::uint64_t h = splitmix64(seed ^ 0x6A09E667F3BCC909ull);
  h = splitmix64(h ^ stream);
  h = splitmix64(h ^ (node * 0x9E3779B97F4A7C15ull + 1));
  h = splitmix64(h ^ (component + 0xBB67AE8584CAA73Bull));
  const std::uint64_t u1_bits = splitmix64(h);
  const std::uint64_t u2_bits = splitmix64(h ^ 0x3C6EF372FE94F82Bull);
  // u1 in (0, 1], u2 in [0, 1); Box-Muller.
  const double u1 = (static_cast<double>(u1_bits >> 11) + 1.0) * 0x1.0p-53;
  const double u2 = static_cast<double>(u2_bits >> 11) * 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

}  // namespace

OpticalDataset resample_dataset(const OpticalDataset& data, const NoiseSpec& noise,
                                std::uint64_t stream_index, ResampleStats* stats) {
  noise.validate();
  std::vector<OpticalSample> samples;
  samples.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) {
    const OpticalSample& s = data[i];
    double n = s.n * (1.0 + noise.delta_exp * gaussian_draw(noise.seed, stream_index, i, 0));
    double k = s.k * (1.0 + noise.delta_exp * gaussian_draw(noise.seed, stream_index, i, 1));
    if (k < 0.0) {
      k = 0.0;
      if (stats) ++stats->clamped_k;
    }
    if (!(n > 0.0)) {
      n = 1e-12;
      if (stats) ++stats->clamped_n;
    }
    samples.push_back({s.omega, n, k});
  }
  return OpticalDataset::create(std::move(samples), data.label() + "#resample",
                                data.source_meta());
}

UncertaintyResult mc_uncertainty(const OpticalDataset& data,
                                 const DrudeParams& extrap,
                                 const WindowSpec& window,
                                 const std::vector<Frequency>& xi_grid,
                                 const NoiseSpec& noise,
                                 const QuadratureConfig& quad, int threads) {
  noise.validate();
  const std::size_t nxi = xi_grid.size();
  const std::size_t m = static_cast<std::size_t>(noise.n_resamples);

  UncertaintyResult out;
  out.xi_grid = xi_grid;
  out.reference = kk_windowed(data, extrap, window, xi_grid, quad, threads);
  out.eps_kk_reference = kk_standard(data, extrap, xi_grid, quad, threads).eps_total;

  std::vector<std::vector<double>> expt(m);
  std::vector<std::uint8_t> went_negative(m, 0);
  std::vector<ResampleStats> stats(m);
  parallel_for(m, threads, [&](std::size_t alpha) {
    const OpticalDataset resampled =
        resample_dataset(data, noise, alpha, &stats[alpha]);
    const ImagAxisResult res =
        kk_windowed(resampled, extrap, window, xi_grid, quad, 1);
    expt[alpha] = res.eps_expt;
    for (auto f : res.negative_flag)
      if (f) went_negative[alpha] = 1;
  });

  // Ordered folds over resample index.
  out.delta_eps_abs.assign(nxi, 0.0);
  for (std::size_t alpha = 0; alpha < m; ++alpha) {
    out.negative_eps_resamples += went_negative[alpha];
    out.resample_stats.clamped_k += stats[alpha].clamped_k;
    out.resample_stats.clamped_n += stats[alpha].clamped_n;
    for (std::size_t i = 0; i < nxi; ++i) {
      const double dev = expt[alpha][i] - out.reference.eps_expt[i];
      out.delta_eps_abs[i] += dev * dev;
    }
  }
  out.delta_eps_rel.assign(nxi, 0.0);
  for (std::size_t i = 0; i < nxi; ++i) {
    out.delta_eps_abs[i] = std::sqrt(out.delta_eps_abs[i] / (m - 1));
    out.delta_eps_rel[i] = out.delta_eps_abs[i] / out.eps_kk_reference[i];
  }
  return out;
}

std::vector<SensitivityRow> drude_sensitivity(const OpticalDataset& data,
                                              const DrudeParams& extrap,
                                              const WindowSpec& window,
                                              const std::vector<Frequency>& xi_grid,
                                              double d_omega_p, double d_gamma,
                                              const QuadratureConfig& quad) {
  const DrudeParams pert_wp{Frequency{extrap.omega_p.ev * (1.0 + d_omega_p)},
                            extrap.gamma};
  const DrudeParams pert_ga{extrap.omega_p,
                            Frequency{extrap.gamma.ev * (1.0 + d_gamma)}};
  const ImagAxisResult base = kk_windowed(data, extrap, window, xi_grid, quad);
  const ImagAxisResult rwp = kk_windowed(data, pert_wp, window, xi_grid, quad);
  const ImagAxisResult rga = kk_windowed(data, pert_ga, window, xi_grid, quad);
  std::vector<SensitivityRow> rows;
  rows.reserve(xi_grid.size());
  for (std::size_t i = 0; i < xi_grid.size(); ++i) {
    rows.push_back({xi_grid[i],
                    100.0 * (rwp.eps_total[i] - base.eps_total[i]) / base.eps_total[i],
                    100.0 * (rga.eps_total[i] - base.eps_total[i]) / base.eps_total[i]});
  }
  return rows;
}

std::vector<PressureSensitivityRow> drude_sensitivity_pressure(
    const OpticalDataset& data, const DrudeParams& extrap,
    const WindowSpec& window, const std::vector<Frequency>& xi_grid,
    double d_omega_p, double d_gamma, CasimirConfig cfg,
    const std::vector<double>& separations_m, const QuadratureConfig& quad) {
  const DrudeParams pert_wp{Frequency{extrap.omega_p.ev * (1.0 + d_omega_p)},
                            extrap.gamma};
  const DrudeParams pert_ga{extrap.omega_p,
                            Frequency{extrap.gamma.ev * (1.0 + d_gamma)}};
  const EpsProvider base =
      eps_provider_from_result(kk_windowed(data, extrap, window, xi_grid, quad));
  const EpsProvider pwp =
      eps_provider_from_result(kk_windowed(data, pert_wp, window, xi_grid, quad));
  const EpsProvider pga =
      eps_provider_from_result(kk_windowed(data, pert_ga, window, xi_grid, quad));
  std::vector<PressureSensitivityRow> rows;
  rows.reserve(separations_m.size());
  for (const double a : separations_m) {
    cfg.separation_m = a;
    const double p0 = pressure(base, cfg);
    const double p1 = pressure(pwp, cfg);
    const double p2 = pressure(pga, cfg);
    rows.push_back({a, 100.0 * (p1 - p0) / p0, 100.0 * (p2 - p0) / p0});
  }
  return rows;
}

}  // namespace kkwin
