#pragma once

#include <complex>
#include <cstdint>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

namespace kkwin {

// ---------------------------------------------------------------------------
// Physical constants (SI 2019 exact values where applicable, CODATA otherwise).
// All internal frequencies are photon energies in eV (i.e. frequencies in
// units of eV/hbar). Conversions to SI live here and at the I/O boundary only.
// ---------------------------------------------------------------------------
inline constexpr double kHbarJs = 1.054571817e-34;        // J s
inline constexpr double kSpeedOfLightMs = 299792458.0;    // m/s (exact)
inline constexpr double kBoltzmannJK = 1.380649e-23;      // J/K (exact)
inline constexpr double kElectronVoltJ = 1.602176634e-19; // J (exact)
// 1 eV/hbar in rad/s: 1.5192674488e15
inline constexpr double kEvToRadPerS = kElectronVoltJ / kHbarJs;
// photon energy [eV] * vacuum wavelength [um]
inline constexpr double kEvMicron = 1.239841984;

/// Frequency (or imaginary frequency) as a photon energy in eV.
struct Frequency {
  double ev = 0.0;

  constexpr double rad_per_s() const { return ev * kEvToRadPerS; }
  constexpr double wavelength_um() const { return kEvMicron / ev; }

  friend constexpr bool operator==(Frequency a, Frequency b) { return a.ev == b.ev; }
  friend constexpr bool operator<(Frequency a, Frequency b) { return a.ev < b.ev; }
};

inline constexpr Frequency from_wavelength_um(double lambda_um) {
  return Frequency{kEvMicron / lambda_um};
}

inline constexpr Frequency matsubara_first(double temperature_k) {
  // xi_1 = 2 pi k_B T / hbar, expressed in eV.
  return Frequency{2.0 * 3.14159265358979323846 * kBoltzmannJK * temperature_k /
                   kElectronVoltJ};
}

// ---------------------------------------------------------------------------
// Errors. The CLI maps these onto distinct exit codes.
// ---------------------------------------------------------------------------
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Invalid arguments or violated data invariants.
class ValidationError : public Error {
 public:
  using Error::Error;
};

/// File I/O and parse failures; messages carry the path and line number.
class ParseError : public Error {
 public:
  using Error::Error;
};

/// Window function unusable at the requested point (pole on the real axis,
/// or |f(i xi)| below the near-zero threshold).
class WindowZeroError : public Error {
 public:
  using Error::Error;
};

/// Non-convergence or an unusable intermediate result.
class ComputationError : public Error {
 public:
  using Error::Error;
};

using WarningLog = std::vector<std::string>;

inline void warn(WarningLog* log, std::string msg) {
  if (log) log->push_back(std::move(msg));
}

// ---------------------------------------------------------------------------
// Optical data model
// ---------------------------------------------------------------------------

/// One tabulated optical sample: refraction index n and extinction
/// coefficient k at frequency omega, with n + i k = sqrt(eps).
struct OpticalSample {
  Frequency omega;
  double n = 1.0;
  double k = 0.0;
};

/// eps = (n + i k)^2. Rejects non-physical n <= 0.
std::complex<double> eps_from_nk(double n, double k);

/// Inverse of eps_from_nk via the principal square root (Re >= 0, and
/// Im >= 0 whenever eps'' >= 0).
void nk_from_eps(std::complex<double> eps, double& n, double& k);

/// Tabulated optical data over [omega_min, omega_max], strictly increasing
/// in omega. Immutable after construction.
class OpticalDataset {
 public:
  /// Validates and sorts nothing: samples must already be strictly
  /// increasing. Throws ValidationError on any violated invariant
  /// (< 4 samples, non-increasing omega, n <= 0, k < 0).
  static OpticalDataset create(std::vector<OpticalSample> samples,
                               std::string label = "",
                               std::string source_meta = "");

  const std::vector<OpticalSample>& samples() const { return samples_; }
  std::size_t size() const { return samples_.size(); }
  const OpticalSample& operator[](std::size_t i) const { return samples_[i]; }

  Frequency omega_min() const { return samples_.front().omega; }
  Frequency omega_max() const { return samples_.back().omega; }

  double eps1(std::size_t i) const {
    const auto& s = samples_[i];
    return s.n * s.n - s.k * s.k;
  }
  double eps2(std::size_t i) const {
    const auto& s = samples_[i];
    return 2.0 * s.n * s.k;
  }

  const std::string& label() const { return label_; }
  const std::string& source_meta() const { return source_meta_; }

 private:
  OpticalDataset() = default;
  std::vector<OpticalSample> samples_;
  std::string label_;
  std::string source_meta_;
};

/// Complex permittivity at an arbitrary frequency inside the data range,
/// interpolated per the dispersion module's scheme: log-log linear in
/// eps'' and in (1 - eps'), falling back to linear interpolation on panels
/// where the log-log form is undefined. Throws ValidationError outside
/// the tabulated range.
std::complex<double> interpolate_eps(const OpticalDataset& data, Frequency omega);

// ---------------------------------------------------------------------------
// Grids
// ---------------------------------------------------------------------------

/// Logarithmically spaced grid including both endpoints; neighbor ratio is
/// (stop/start)^(1/(n-1)) with n = ceil(points_per_decade * decades) + 1.
/// Deterministic: identical inputs give bitwise-identical grids.
std::vector<Frequency> make_log_grid(Frequency start, Frequency stop,
                                     int points_per_decade);

// ---------------------------------------------------------------------------
// Parallel helper: static chunking over [0, n). fn must be safe to call
// concurrently for distinct indices. threads <= 1 runs serially.
// ---------------------------------------------------------------------------
void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn);

}  // namespace kkwin
