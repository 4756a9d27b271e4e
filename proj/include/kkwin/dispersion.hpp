#pragma once

#include <complex>
#include <cstdint>
#include <utility>
#include <variant>
#include <vector>

#include "kkwin/core.hpp"
#include "kkwin/models.hpp"
#include "kkwin/quadrature.hpp"

namespace kkwin {

// ---------------------------------------------------------------------------
// Window functions f(z): analytic in the upper half plane, f(-z*) = f*(z).
// ---------------------------------------------------------------------------

/// f = 1: the standard Kramers-Kronig relation.
struct IdentityWindow {};

/// f(z) = z^(2p+1) [ (z-w)^-(2q+1) + (z+w*)^-(2q+1) ], Im(w) < 0, 0 <= p <= q.
/// Deprecated: has zeros on the imaginary axis and a sign-indefinite kernel
/// that amplifies data errors; retained only for the instability study.
struct OldRationalWindow {
  int p = 1;
  int q = 3;
  std::complex<double> w{1.0, -2.0};  // eV/hbar
  /// |f(i xi)| below zero_rel_tol times the structural envelope
  /// 2 xi^(2p+1) / |i xi - w|^(2q+1) is treated as a window zero and
  /// reported instead of divided by.
  double zero_rel_tol = 0.02;
};

/// f(z; b) = z / sqrt(z^2 - b^2), principal branch on the physical sheet:
/// Im f < 0 for omega < b, f real positive for omega > b, f(i xi) real.
/// b = 0 reduces exactly to IdentityWindow.
struct SqrtWindow {
  Frequency b{0.0};
};

using WindowSpec = std::variant<IdentityWindow, OldRationalWindow, SqrtWindow>;

/// Short tag for file names and report columns ("kk", "win_b1p5", ...).
std::string window_tag(const WindowSpec& w);

/// f(z) for Im(z) >= 0. Does not check for poles.
std::complex<double> window_eval_complex(const WindowSpec& w,
                                         std::complex<double> z);

/// f(omega) on the positive real axis. Throws WindowZeroError at the
/// integrable pole omega = b of SqrtWindow (use the substituted form).
std::complex<double> window_eval_real(const WindowSpec& w, Frequency omega);

/// f(i xi), real by the symmetry condition. Throws WindowZeroError when
/// |f(i xi)| falls below the configured near-zero threshold (OldRational
/// windows have zeros on the imaginary axis).
double window_eval_imag(const WindowSpec& w, Frequency xi);

// ---------------------------------------------------------------------------
// Imaginary-axis results
// ---------------------------------------------------------------------------

/// eps(i xi) on a grid, decomposed as eps_total = 1 + eps_cut + eps_expt
/// (exact by construction). eps_cut carries everything supplied by the
/// low-frequency Drude extrapolation, eps_expt everything from the data
/// (plus the high-frequency power-law tail).
struct ImagAxisResult {
  std::vector<Frequency> xi_grid;
  std::vector<double> eps_total;
  std::vector<double> eps_cut;
  std::vector<double> eps_expt;
  WindowSpec window;
  DrudeParams drude_params;

  /// Per-point flag: eps_total < 0 (the "absolutely unacceptable" outcome);
  /// recorded as a diagnostic, the batch continues.
  std::vector<std::uint8_t> negative_flag;
  /// Smallest integrand values seen while integrating the eps' and eps''
  /// kernels; non-negative for SqrtWindow on compliant data.
  double min_kernel_eps1 = 0.0;
  double min_kernel_eps2 = 0.0;
  WarningLog warnings;
};

/// Standard KK transform: eps_cut from the analytic Drude integral over
/// [0, omega_min], eps_expt from the tabulated eps'' over
/// [omega_min, omega_max] plus the power-law tail.
ImagAxisResult kk_standard(const OpticalDataset& data, const DrudeParams& extrap,
                           const std::vector<Frequency>& xi_grid,
                           const QuadratureConfig& quad = {}, int threads = 1);

/// Weighted transform for any window. SqrtWindow uses the substituted
/// singularity-free form (omega = b sin y below b, omega = b cosh y above);
/// Identity and SqrtWindow b = 0 delegate to kk_standard.
ImagAxisResult kk_windowed(const OpticalDataset& data, const DrudeParams& extrap,
                           const WindowSpec& window,
                           const std::vector<Frequency>& xi_grid,
                           const QuadratureConfig& quad = {}, int threads = 1);

/// Kernel diagnostic g(omega) tabulated on the data grid: the integrand whose
/// integral over (0, inf) reproduces eps(i xi) - 1. Sign-indefinite g flags
/// error-amplifying windows.
std::vector<std::pair<Frequency, double>> g_diagnostic(const OpticalDataset& data,
                                                       const WindowSpec& window,
                                                       Frequency xi);

/// eps_cut / eps_total per grid point; raw, plus a [0, 1]-clamped copy for
/// reporting.
struct CutFractionTable {
  std::vector<double> raw;
  std::vector<double> clamped;
};
CutFractionTable cut_fraction(const ImagAxisResult& result);

}  // namespace kkwin
