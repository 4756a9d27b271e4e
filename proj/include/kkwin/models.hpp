#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/quadrature.hpp"

namespace kkwin {

/// Drude parameters. gamma = 0 is permitted only for the plasma model
/// (imaginary-axis evaluation); the real-axis form requires gamma > 0.
struct DrudeParams {
  Frequency omega_p{0.0};
  Frequency gamma{0.0};
};

/// eps_Dr(omega) = 1 - omega_p^2 / (omega (omega + i gamma)). Rejects
/// omega = 0 (pole).
std::complex<double> drude_eps_real_axis(const DrudeParams& p, Frequency omega);

/// Analytic continuation to z = i xi:
/// eps(i xi) = 1 + omega_p^2 / (xi (xi + gamma)). Strictly > 1 and strictly
/// decreasing in xi. Rejects xi = 0.
double drude_eps_imag_axis(const DrudeParams& p, Frequency xi);

/// Bound-electron resonance contributing
/// strength * omega_0^2 / (omega_0^2 - omega^2 - i omega width) to eps(omega).
struct LorentzOscillator {
  double strength = 0.0;  // dimensionless, >= 0
  Frequency omega_0{0.0};
  Frequency width{0.0};
};

std::complex<double> lorentz_eps_contrib(const LorentzOscillator& o,
                                         Frequency omega);
double lorentz_eps_imag_axis(const LorentzOscillator& o, Frequency xi);

/// Model permittivity eps(omega) = eps_Drude + sum of oscillators on the
/// real axis, and its imaginary-axis continuation.
std::complex<double> model_eps_real_axis(const DrudeParams& p,
                                         const std::vector<LorentzOscillator>& osc,
                                         Frequency omega);
double model_eps_imag_axis(const DrudeParams& p,
                           const std::vector<LorentzOscillator>& osc,
                           Frequency xi);

/// Tabulates the model on the given grid and converts to (n, k). The result
/// is KK-consistent by construction, which is what makes it usable as an
/// oracle fixture for the dispersion transforms.
OpticalDataset synthetic_dataset(const DrudeParams& p,
                                 const std::vector<LorentzOscillator>& osc,
                                 const std::vector<Frequency>& grid,
                                 std::string label = "synthetic");

// ---------------------------------------------------------------------------
// Generalized plasma model: undamped plasma conduction term plus the
// core-electron (interband) dispersion term.
// ---------------------------------------------------------------------------
struct GeneralizedPlasmaSpec {
  Frequency omega_p{0.0};
  /// Core-electron absorption, tabulated for omega >= omega_inter. Absent
  /// means a pure plasma model.
  std::optional<OpticalDataset> core_data;
  /// Static interband contribution; eps'_core is treated as this constant
  /// below the window frequency b in the windowed form.
  double eps_core_bar = 0.0;
  Frequency omega_inter{0.0};

  void validate() const;
};

/// eps_gp(i xi) = 1 + omega_p^2/xi^2
///              + (2/pi) Int_0^inf dw w eps''_core(w) / (w^2 + xi^2).
double gp_eps_imag_axis_direct(const GeneralizedPlasmaSpec& spec, Frequency xi,
                               const QuadratureConfig& quad = {});

/// Windowed equivalent: the eps'_core piece below b collapses to
/// eps_core_bar [1 - sqrt(1 + (b/xi)^2)] and only the w > b absorption
/// integral remains. Requires 0 <= b < omega_inter; b = 0 reduces to the
/// direct form.
double gp_eps_imag_axis_windowed(const GeneralizedPlasmaSpec& spec,
                                 Frequency xi, Frequency b,
                                 const QuadratureConfig& quad = {});

// ---------------------------------------------------------------------------
// Named presets for synthetic fixtures (see ingest::synthetic_preset for the
// string-keyed lookup used by the CLI).
// ---------------------------------------------------------------------------

/// omega_p = 9 eV/hbar, gamma = 35 meV/hbar.
DrudeParams gold_drude_params();

/// Two oscillators standing in for the interband absorption of gold. The
/// parameters are fixture conveniences, not a fit to measured data.
std::vector<LorentzOscillator> gold_interband_oscillators();

}  // namespace kkwin
