#pragma once

#include <optional>
#include <string>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/quadrature.hpp"

namespace kkwin {

/// Result of the eps' versus lambda^2 linear fit:
/// eps' = 1 + eps_inter - (omega_p lambda / (2 pi c))^2.
struct PlasmaFit {
  Frequency omega_p{0.0};
  double eps_inter = 0.0;
  double lambda2_min_um2 = 0.0;
  double lambda2_max_um2 = 0.0;
  double residual_rms = 0.0;
  /// true when the intercept was a free fit parameter, false when
  /// eps_inter was supplied (Theye-style, from the dispersion integral).
  bool eps_inter_was_fitted = true;
  std::size_t n_points = 0;
};

/// Ordinary least squares of eps' against lambda^2 over the samples with
/// range_lo <= omega <= range_hi (>= 3 required). The slope gives omega_p;
/// the intercept gives 1 + eps_inter unless eps_inter_fixed pins it.
/// Rejects a non-negative slope (no metallic behavior); warns when the
/// residual rms exceeds 1% of the mean |eps'|.
PlasmaFit fit_plasma_frequency(const OpticalDataset& data, Frequency range_lo,
                               Frequency range_hi,
                               std::optional<double> eps_inter_fixed = {},
                               WarningLog* warnings = nullptr);

/// eps_inter = (2/pi) Int_{omega_inter}^{inf} eps''(omega)/omega domega,
/// closed-form per power-law panel plus the analytic tail. Warns when the
/// tail contributes more than 10% of the result.
double interband_constant(const OpticalDataset& data, Frequency omega_inter,
                          const QuadratureConfig& quad = {},
                          WarningLog* warnings = nullptr);

// ---------------------------------------------------------------------------
// Cross-dataset consistency
// ---------------------------------------------------------------------------
struct ConsistencyProbeRow {
  Frequency omega;
  std::vector<std::complex<double>> eps;  // one per dataset; NaN if out of range
  /// |eps_i - eps_j| / |eps_j| * 100 for i < j, row-major over pairs.
  std::vector<double> pair_diff_percent;
};

struct ConsistencyReport {
  std::vector<std::string> labels;
  std::vector<ConsistencyProbeRow> probes;
  std::vector<PlasmaFit> fits;          // one per dataset (omega_p NaN on failure)
  std::vector<std::string> fit_errors;  // empty string where the fit succeeded
  /// Pairs (i, j, percent difference of fitted omega_p) exceeding 5%.
  struct Flag {
    std::size_t i, j;
    double omega_p_diff_percent;
  };
  std::vector<Flag> flagged_pairs;
};

/// Compares >= 2 datasets at the probe frequencies and through their fitted
/// plasma frequencies (fit over each dataset's coverage below 1.6 eV/hbar,
/// free intercept). Pairs whose omega_p differ by more than 5% are flagged.
ConsistencyReport consistency_report(const std::vector<OpticalDataset>& sets,
                                     const std::vector<Frequency>& overlap_probe,
                                     WarningLog* warnings = nullptr);

}  // namespace kkwin
