#pragma once

#include <cstdint>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/dispersion.hpp"
#include "kkwin/lifshitz.hpp"

namespace kkwin {

/// Common relative Gaussian error applied independently to every tabulated
/// n and k value.
struct NoiseSpec {
  double delta_exp = 0.03;
  int n_resamples = 1000;  // M
  std::uint64_t seed = 0;

  void validate() const;
};

struct ResampleStats {
  std::uint64_t clamped_k = 0;  // negative k draws clamped to 0
  std::uint64_t clamped_n = 0;  // non-positive n draws clamped to a floor
};

/// One synthetic replica of the dataset: n_i, k_i drawn from independent
/// Gaussians with mean = measured value and sd = measured * delta_exp.
/// Counter-based RNG: (seed, stream_index, node, component) fully determine
/// each draw, independent of evaluation order and thread count.
OpticalDataset resample_dataset(const OpticalDataset& data, const NoiseSpec& noise,
                                std::uint64_t stream_index,
                                ResampleStats* stats = nullptr);

struct UncertaintyResult {
  std::vector<Frequency> xi_grid;
  std::vector<double> delta_eps_abs;  // sigma estimate per xi
  std::vector<double> delta_eps_rel;  // sigma / eps_KK(i xi) of unperturbed data
  ImagAxisResult reference;           // unperturbed transform, requested window
  std::vector<double> eps_kk_reference;  // standard-KK normalization denominators
  int negative_eps_resamples = 0;  // resamples with eps_total < 0 somewhere
  ResampleStats resample_stats;
};

/// Monte Carlo propagation of optical-data errors through the windowed
/// transform: M resamples, per-xi spread with the (M-1)-denominator
/// estimator around the unperturbed estimate. Resamples producing negative
/// eps(i xi) are counted, not discarded.
UncertaintyResult mc_uncertainty(const OpticalDataset& data,
                                 const DrudeParams& extrap,
                                 const WindowSpec& window,
                                 const std::vector<Frequency>& xi_grid,
                                 const NoiseSpec& noise,
                                 const QuadratureConfig& quad = {},
                                 int threads = 1);

/// Percent change of eps(i xi) when omega_p -> omega_p (1 + d_omega_p) and,
/// separately, gamma -> gamma (1 + d_gamma). Only the extrapolation
/// parameters move; the dataset is fixed.
struct SensitivityRow {
  Frequency xi;
  double d_eps_omega_p_percent;
  double d_eps_gamma_percent;
};
std::vector<SensitivityRow> drude_sensitivity(const OpticalDataset& data,
                                              const DrudeParams& extrap,
                                              const WindowSpec& window,
                                              const std::vector<Frequency>& xi_grid,
                                              double d_omega_p, double d_gamma,
                                              const QuadratureConfig& quad = {});

/// Same perturbations chained through the Lifshitz formula: percent change
/// of the Casimir pressure per separation.
struct PressureSensitivityRow {
  double separation_m;
  double dp_omega_p_percent;
  double dp_gamma_percent;
};
std::vector<PressureSensitivityRow> drude_sensitivity_pressure(
    const OpticalDataset& data, const DrudeParams& extrap,
    const WindowSpec& window, const std::vector<Frequency>& xi_grid,
    double d_omega_p, double d_gamma, CasimirConfig cfg,
    const std::vector<double>& separations_m,
    const QuadratureConfig& quad = {});

}  // namespace kkwin
