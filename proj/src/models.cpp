#include "kkwin/models.hpp"

#include <cmath>

#include "panel_quad.hpp"

namespace kkwin {

std::complex<double> drude_eps_real_axis(const DrudeParams& p, Frequency omega) {
  if (!(p.omega_p.ev > 0.0))
    throw ValidationError("drude_eps_real_axis: omega_p must be > 0");
  if (!(p.gamma.ev > 0.0))
    throw ValidationError("drude_eps_real_axis: gamma must be > 0 on the real axis");
  if (!(omega.ev > 0.0))
    throw ValidationError("drude_eps_real_axis: omega = 0 is a pole");
  const std::complex<double> den =
      std::complex<double>(omega.ev, 0.0) * std::complex<double>(omega.ev, p.gamma.ev);
  return 1.0 - p.omega_p.ev * p.omega_p.ev / den;
}

double drude_eps_imag_axis(const DrudeParams& p, Frequency xi) {
  if (!(p.omega_p.ev > 0.0))
    throw ValidationError("drude_eps_imag_axis: omega_p must be > 0");
  if (!(p.gamma.ev >= 0.0))
    throw ValidationError("drude_eps_imag_axis: gamma must be >= 0");
  if (!(xi.ev > 0.0))
    throw ValidationError("drude_eps_imag_axis: xi must be > 0");
  return 1.0 + p.omega_p.ev * p.omega_p.ev / (xi.ev * (xi.ev + p.gamma.ev));
}

namespace {

void validate_oscillator(const LorentzOscillator& o) {
  if (o.strength < 0.0)
    throw ValidationError("LorentzOscillator: strength must be >= 0");
  if (o.strength > 0.0 && !(o.omega_0.ev > 0.0 && o.width.ev > 0.0))
    throw ValidationError("LorentzOscillator: omega_0 and width must be > 0");
}

}  // namespace

std::complex<double> lorentz_eps_contrib(const LorentzOscillator& o,
                                         Frequency omega) {
  validate_oscillator(o);
  if (o.strength == 0.0) return {0.0, 0.0};
  const double w0sq = o.omega_0.ev * o.omega_0.ev;
  const std::complex<double> den(w0sq - omega.ev * omega.ev,
                                 -omega.ev * o.width.ev);
  return o.strength * w0sq / den;
}

double lorentz_eps_imag_axis(const LorentzOscillator& o, Frequency xi) {
  validate_oscillator(o);
  if (o.strength == 0.0) return 0.0;
  const double w0sq = o.omega_0.ev * o.omega_0.ev;
  return o.strength * w0sq / (w0sq + xi.ev * xi.ev + xi.ev * o.width.ev);
}

std::complex<double> model_eps_real_axis(const DrudeParams& p,
                                         const std::vector<LorentzOscillator>& osc,
                                         Frequency omega) {
  std::complex<double> eps = drude_eps_real_axis(p, omega);
  for (const auto& o : osc) eps += lorentz_eps_contrib(o, omega);
  return eps;
}

double model_eps_imag_axis(const DrudeParams& p,
                           const std::vector<LorentzOscillator>& osc,
                           Frequency xi) {
  double eps = drude_eps_imag_axis(p, xi);
  for (const auto& o : osc) eps += lorentz_eps_imag_axis(o, xi);
  return eps;
}

OpticalDataset synthetic_dataset(const DrudeParams& p,
                                 const std::vector<LorentzOscillator>& osc,
                                 const std::vector<Frequency>& grid,
                                 std::string label) {
  std::vector<OpticalSample> samples;
  samples.reserve(grid.size());
  for (const Frequency w : grid) {
    const std::complex<double> eps = model_eps_real_axis(p, osc, w);
    double n, k;
    nk_from_eps(eps, n, k);
    samples.push_back({w, n, k});
  }
  return OpticalDataset::create(std::move(samples), std::move(label),
                                "synthetic model tabulation");
}

void GeneralizedPlasmaSpec::validate() const {
  if (!(omega_p.ev > 0.0))
    throw ValidationError("GeneralizedPlasmaSpec: omega_p must be > 0");
  if (!(omega_inter.ev > 0.0))
    throw ValidationError("GeneralizedPlasmaSpec: omega_inter must be > 0");
  if (!(eps_core_bar >= 0.0))
    throw ValidationError("GeneralizedPlasmaSpec: eps_core_bar must be >= 0");
}

namespace {

struct CoreTab {
  std::vector<double> w, v;
};

CoreTab core_eps2(const OpticalDataset& d) {
  CoreTab t;
  t.w.reserve(d.size());
  t.v.reserve(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) {
    t.w.push_back(d[i].omega.ev);
    t.v.push_back(d.eps2(i));
  }
  return t;
}

}  // namespace

double gp_eps_imag_axis_direct(const GeneralizedPlasmaSpec& spec, Frequency xi,
                               const QuadratureConfig& quad) {
  spec.validate();
  quad.validate();
  if (!(xi.ev > 0.0))
    throw ValidationError("gp_eps_imag_axis_direct: xi must be > 0");
  const double plasma = spec.omega_p.ev * spec.omega_p.ev / (xi.ev * xi.ev);
  if (!spec.core_data) return 1.0 + plasma;
  const CoreTab tab = core_eps2(*spec.core_data);
  const detail::TabView view{&tab.w, &tab.v};
  double core = detail::kk_kernel_integral(view, tab.w.front(), tab.w.back(),
                                           xi.ev, quad);
  core += detail::kk_kernel_tail(tab.w.back(), tab.v.back(), xi.ev, quad);
  return 1.0 + plasma + (2.0 / M_PI) * core;
}

double gp_eps_imag_axis_windowed(const GeneralizedPlasmaSpec& spec, Frequency xi,
                                 Frequency b, const QuadratureConfig& quad) {
  spec.validate();
  quad.validate();
  if (!(xi.ev > 0.0))
    throw ValidationError("gp_eps_imag_axis_windowed: xi must be > 0");
  if (b.ev < 0.0)
    throw ValidationError("gp_eps_imag_axis_windowed: b must be >= 0");
  if (b.ev >= spec.omega_inter.ev)
    throw ValidationError(
        "gp_eps_imag_axis_windowed: b must be below omega_inter (eps'_core is "
        "only constant there)");
  if (b.ev == 0.0) return gp_eps_imag_axis_direct(spec, xi, quad);

  const double plasma = spec.omega_p.ev * spec.omega_p.ev / (xi.ev * xi.ev);
  const double pref = std::sqrt(1.0 + (b.ev / xi.ev) * (b.ev / xi.ev));
  double eps = 1.0 + plasma + spec.eps_core_bar * (1.0 - pref);
  if (spec.core_data) {
    const CoreTab tab = core_eps2(*spec.core_data);
    const detail::TabView view{&tab.w, &tab.v};
    double core = detail::sqrtwin_eps2_integral(view, b.ev, tab.w.front(),
                                                tab.w.back(), xi.ev, quad);
    core += detail::sqrtwin_eps2_tail(tab.w.back(), tab.v.back(), b.ev, xi.ev,
                                      quad);
    eps += pref * (2.0 / M_PI) * core;
  }
  return eps;
}

DrudeParams gold_drude_params() { return {Frequency{9.0}, Frequency{0.035}}; }

std::vector<LorentzOscillator> gold_interband_oscillators() {
  // Fixture stand-ins for the interband absorption; not fitted to data.
  return {{2.6, Frequency{3.0}, Frequency{1.4}},
          {4.0, Frequency{5.2}, Frequency{3.0}}};
}

}  // namespace kkwin
