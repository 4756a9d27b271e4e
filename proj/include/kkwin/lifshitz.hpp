#pragma once

#include <functional>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/dispersion.hpp"
#include "kkwin/quadrature.hpp"

namespace kkwin {

/// Conduction-electron prescription for the Matsubara n = 0 term.
enum class Prescription { kDrude, kGeneralizedPlasma };

struct CasimirConfig {
  double separation_m = 100e-9;
  double temperature_k = 300.0;
  Prescription prescription = Prescription::kDrude;
  /// Matsubara truncation: include n with xi_n <= n_max_factor * omega_c,
  /// omega_c = c/(2a).
  double n_max_factor = 10.0;
  QuadratureConfig kperp_quad;
  /// Plasma frequency entering the generalized-plasma n = 0 TE term.
  Frequency plasma_omega_p{0.0};
  /// Signal non-convergence when the geometric estimate of the dropped
  /// Matsubara tail exceeds this fraction of the sum.
  double matsubara_tail_tol = 1e-2;

  void validate() const;
};

/// xi_n = 2 pi n k_B T / hbar for n = 0..n_max (xi_0 = 0).
std::vector<Frequency> matsubara_freqs(double temperature_k, int n_max);

/// Fresnel reflection coefficients at imaginary frequency i xi for a plane
/// vacuum/metal interface: r_TE = (q - k)/(q + k), r_TM = (e q - k)/(e q + k)
/// with q = sqrt(kperp^2 + xi^2/c^2), k = sqrt(kperp^2 + e xi^2/c^2).
/// Rejects eps_ixi < 1 (unphysical on the imaginary axis).
struct FresnelPair {
  double r_te;
  double r_tm;
};
FresnelPair fresnel_imag(double eps_ixi, Frequency xi, double kperp_per_m);

/// eps(i xi) source for the Lifshitz formula; must be defined on every
/// Matsubara frequency xi_n > 0 required by the config.
using EpsProvider = std::function<double(Frequency)>;

/// Casimir pressure between two identical parallel plates (Pa, negative =
/// attraction), by the Lifshitz formula with the n = 0 term handled per the
/// configured prescription. The k_perp integral is evaluated in the variable
/// y = 2 a q_n; modes evaluate independently (the provider must be safe to
/// call concurrently when threads > 1) and the mode sum is a deterministic
/// ordered reduction, ascending n, so results are bit-stable across thread
/// counts.
double pressure(const EpsProvider& eps, const CasimirConfig& cfg,
                WarningLog* warnings = nullptr, int threads = 1);

/// Monotone cubic interpolation of log(eps - 1) versus log(xi) over the
/// result grid. Never extrapolates: the grid must cover every requested
/// frequency. Rejects results with eps_total <= 1 anywhere.
EpsProvider eps_provider_from_result(const ImagAxisResult& result);

/// Same, with the Drude-extrapolation contribution zeroed
/// (eps = 1 + eps_expt).
EpsProvider eps_provider_drop_cut(const ImagAxisResult& result);

struct PressureDiffRow {
  double separation_m;
  double pressure_a_pa;
  double pressure_b_pa;
  double diff_percent;  // 100 (P_a - P_b) / P_b
};

/// Per-separation percent difference between the pressures obtained from two
/// imaginary-axis results (same xi machinery assumed).
std::vector<PressureDiffRow> pressure_diff_report(
    const ImagAxisResult& res_a, const ImagAxisResult& res_b, CasimirConfig cfg,
    const std::vector<double>& separations_m);

}  // namespace kkwin
