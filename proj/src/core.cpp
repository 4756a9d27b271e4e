#include "kkwin/core.hpp"

#include <algorithm>
#include <cmath>
#include <mutex>
#include <thread>

namespace kkwin {

std::complex<double> eps_from_nk(double n, double k) {
  if (!(n > 0.0)) throw ValidationError("eps_from_nk: n must be > 0");
  if (!(k >= 0.0)) throw ValidationError("eps_from_nk: k must be >= 0");
  return {n * n - k * k, 2.0 * n * k};
}

void nk_from_eps(std::complex<double> eps, double& n, double& k) {
  const std::complex<double> root = std::sqrt(eps);  // principal: Re >= 0
  n = root.real();
  k = root.imag();
  if (k < 0.0 && k > -1e-300) k = 0.0;  // -0.0 from eps'' == 0
}

OpticalDataset OpticalDataset::create(std::vector<OpticalSample> samples,
                                      std::string label,
                                      std::string source_meta) {
  if (samples.size() < 4)
    throw ValidationError("OpticalDataset '" + label +
                          "': at least 4 samples required, got " +
                          std::to_string(samples.size()));
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const auto& s = samples[i];
    if (!(s.omega.ev > 0.0))
      throw ValidationError("OpticalDataset '" + label + "': omega <= 0 at index " +
                            std::to_string(i));
    if (!(s.n > 0.0))
      throw ValidationError("OpticalDataset '" + label + "': n <= 0 at omega = " +
                            std::to_string(s.omega.ev) + " eV");
    if (!(s.k >= 0.0))
      throw ValidationError("OpticalDataset '" + label + "': k < 0 at omega = " +
                            std::to_string(s.omega.ev) + " eV");
    if (i > 0 && !(samples[i - 1].omega.ev < s.omega.ev))
      throw ValidationError("OpticalDataset '" + label +
                            "': omega not strictly increasing at index " +
                            std::to_string(i));
  }
  OpticalDataset d;
  d.samples_ = std::move(samples);
  d.label_ = std::move(label);
  d.source_meta_ = std::move(source_meta);
  return d;
}

namespace {

// Power-law (log-log linear) value between nodes; linear fallback when an
// endpoint is non-positive.
double interp_panel(double wa, double wb, double va, double vb, double w) {
  if (va > 0.0 && vb > 0.0) {
    const double p = std::log(vb / va) / std::log(wb / wa);
    return va * std::pow(w / wa, p);
  }
  const double t = (w - wa) / (wb - wa);
  return va + t * (vb - va);
}

}  // namespace

std::complex<double> interpolate_eps(const OpticalDataset& data, Frequency omega) {
  const double w = omega.ev;
  const auto& s = data.samples();
  if (w < s.front().omega.ev || w > s.back().omega.ev)
    throw ValidationError("interpolate_eps: omega = " + std::to_string(w) +
                          " eV outside data range");
  auto it = std::lower_bound(s.begin(), s.end(), w,
                             [](const OpticalSample& a, double x) {
                               return a.omega.ev < x;
                             });
  std::size_t i = static_cast<std::size_t>(it - s.begin());
  if (i > 0 && (i == s.size() || s[i].omega.ev != w)) --i;
  if (i + 1 >= s.size()) i = s.size() - 2;
  const double wa = s[i].omega.ev, wb = s[i + 1].omega.ev;
  // eps'' interpolates log-log directly; eps' through (1 - eps'), which is
  // positive and power-law-like for conductors.
  const double e2 = interp_panel(wa, wb, data.eps2(i), data.eps2(i + 1), w);
  const double one_minus =
      interp_panel(wa, wb, 1.0 - data.eps1(i), 1.0 - data.eps1(i + 1), w);
  return {1.0 - one_minus, e2};
}

std::vector<Frequency> make_log_grid(Frequency start, Frequency stop,
                                     int points_per_decade) {
  if (!(start.ev > 0.0))
    throw ValidationError("make_log_grid: start must be > 0");
  if (!(stop.ev > start.ev))
    throw ValidationError("make_log_grid: stop must exceed start");
  if (points_per_decade < 1)
    throw ValidationError("make_log_grid: points_per_decade must be >= 1");
  const double decades = std::log10(stop.ev / start.ev);
  const int n =
      std::max(2, static_cast<int>(std::ceil(points_per_decade * decades - 1e-9)) + 1);
  std::vector<Frequency> grid(static_cast<std::size_t>(n));
  const double ratio_log = std::log(stop.ev / start.ev) / (n - 1);
  for (int i = 0; i < n; ++i)
    grid[static_cast<std::size_t>(i)] = Frequency{start.ev * std::exp(i * ratio_log)};
  grid.front() = start;
  grid.back() = stop;
  return grid;
}

void parallel_for(std::size_t n, int threads,
                  const std::function<void(std::size_t)>& fn) {
  if (threads <= 1 || n <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  const std::size_t nt = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  std::vector<std::thread> pool;
  pool.reserve(nt);
  std::exception_ptr first_error;
  std::mutex err_mutex;
  for (std::size_t t = 0; t < nt; ++t) {
    pool.emplace_back([&, t]() {
      for (std::size_t i = t; i < n; i += nt) {
        try {
          fn(i);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mutex);
          if (!first_error) first_error = std::current_exception();
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (first_error) std::rethrow_exception(first_error);
}

}  // namespace kkwin
