#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "kkwin/fitting.hpp"
#include "kkwin/models.hpp"

using namespace kkwin;

namespace {

const DrudeParams kGold = gold_drude_params();

// Independent least-squares oracle on exact Drude eps' values.
struct OlsResult {
  double slope, intercept;
};
OlsResult ols_oracle(const std::vector<double>& omegas) {
  double mx = 0, my = 0;
  std::vector<double> xs, ys;
  for (double w : omegas) {
    const double lam = kEvMicron / w;
    xs.push_back(lam * lam);
    ys.push_back(1.0 - 81.0 / (w * w + 0.035 * 0.035));
  }
  for (std::size_t i = 0; i < xs.size(); ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= xs.size();
  my /= ys.size();
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  return {sxy / sxx, my - sxy / sxx * mx};
}

}  // namespace

TEST_CASE("plasma-frequency fit on synthetic Drude data") {
  const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 40);
  const auto data = synthetic_dataset(kGold, {}, grid, "drude");
  WarningLog warnings;
  const auto fit =
      fit_plasma_frequency(data, Frequency{0.3}, Frequency{0.8}, {}, &warnings);

  // matches the independent OLS oracle through the identical arithmetic
  std::vector<double> in_range;
  for (const auto& s : data.samples())
    if (s.omega.ev >= 0.3 && s.omega.ev <= 0.8) in_range.push_back(s.omega.ev);
  const auto oracle = ols_oracle(in_range);
  CHECK(fit.omega_p.ev ==
        doctest::Approx(kEvMicron * std::sqrt(-oracle.slope)).epsilon(1e-12));

  // and recovers the generator within 1% (gamma bias is second order)
  CHECK(fit.omega_p.ev == doctest::Approx(9.0).epsilon(0.01));
  CHECK(fit.eps_inter_was_fitted);
  CHECK(fit.residual_rms >= 0.0);
  CHECK(fit.n_points == in_range.size());
}

TEST_CASE("fit with pinned interband constant") {
  const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 30);
  const auto data = synthetic_dataset(kGold, {}, grid, "drude");
  const auto fit = fit_plasma_frequency(data, Frequency{0.3}, Frequency{0.8}, 0.0);
  CHECK_FALSE(fit.eps_inter_was_fitted);
  CHECK(fit.eps_inter == 0.0);
  CHECK(fit.omega_p.ev == doctest::Approx(9.0).epsilon(0.01));
}

TEST_CASE("fit rejections and degenerate input") {
  const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 30);
  const auto data = synthetic_dataset(kGold, {}, grid, "drude");
  SUBCASE("too few samples in range") {
    CHECK_THROWS_AS(fit_plasma_frequency(data, Frequency{0.3}, Frequency{0.31}),
                    ValidationError);
  }
  SUBCASE("non-metallic data has no negative slope") {
    std::vector<OpticalSample> s;
    for (double w : {0.2, 0.3, 0.4, 0.5, 0.6}) s.push_back({Frequency{w}, 1.5, 0.0});
    const auto flat = OpticalDataset::create(s, "insulator");
    CHECK_THROWS_AS(fit_plasma_frequency(flat, Frequency{0.2}, Frequency{0.6}),
                    ValidationError);
  }
}

TEST_CASE("fit is scale-equivariant") {
  const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 40);
  const auto data = synthetic_dataset(kGold, {}, grid, "drude");
  const auto fit = fit_plasma_frequency(data, Frequency{0.3}, Frequency{0.8});

  // relabel every frequency by 1/s (lambda -> s lambda), same eps' values
  const double s = 3.0;
  std::vector<OpticalSample> scaled;
  for (const auto& smp : data.samples())
    scaled.push_back({Frequency{smp.omega.ev / s}, smp.n, smp.k});
  const auto scaled_data = OpticalDataset::create(scaled, "scaled");
  const auto fit2 = fit_plasma_frequency(scaled_data, Frequency{0.3 / s},
                                         Frequency{0.8 / s});
  CHECK(fit2.omega_p.ev * s == doctest::Approx(fit.omega_p.ev).epsilon(1e-12));
}

TEST_CASE("fit bias shrinks as gamma/omega_min shrinks") {
  double prev_err = 1e9;
  for (double gamma : {0.14, 0.07, 0.035}) {
    const DrudeParams p{Frequency{9.0}, Frequency{gamma}};
    const auto data = synthetic_dataset(
        p, {}, make_log_grid(Frequency{0.2}, Frequency{2.0}, 40), "d");
    const auto fit = fit_plasma_frequency(data, Frequency{0.3}, Frequency{0.8});
    const double err = std::abs(fit.omega_p.ev - 9.0);
    CHECK(err < prev_err);
    prev_err = err;
  }
}

TEST_CASE("interband constant") {
  SUBCASE("zero absorption above omega_inter") {
    std::vector<OpticalSample> s;
    for (double w : {2.5, 5.0, 10.0, 20.0}) s.push_back({Frequency{w}, 1.2, 0.0});
    const auto data = OpticalDataset::create(s, "clear");
    CHECK(interband_constant(data, Frequency{2.0}) == 0.0);
  }
  SUBCASE("narrow oscillator integrates to its strength") {
    // panels must resolve the resonance width for the power-law interpolant
    const LorentzOscillator osc{1.5, Frequency{6.0}, Frequency{0.2}};
    const auto grid = make_log_grid(Frequency{2.0}, Frequency{500.0}, 1500);
    std::vector<OpticalSample> s;
    for (const auto w : grid) {
      double n, k;
      nk_from_eps(1.0 + lorentz_eps_contrib(osc, w), n, k);
      s.push_back({w, n, k});
    }
    const auto data = OpticalDataset::create(s, "osc");
    CHECK(interband_constant(data, Frequency{2.0}) ==
          doctest::Approx(1.5).epsilon(0.02));
  }
  SUBCASE("monotone non-increasing in omega_inter") {
    const auto data = synthetic_dataset(
        kGold, gold_interband_oscillators(),
        make_log_grid(Frequency{0.5}, Frequency{1e3}, 60), "gold");
    double prev = 1e300;
    for (double wi : {1.0, 2.0, 4.0, 8.0}) {
      const double v = interband_constant(data, Frequency{wi});
      CHECK(v <= prev);
      CHECK(v >= 0.0);
      prev = v;
    }
  }
  SUBCASE("warns when the tail dominates") {
    std::vector<OpticalSample> s;
    for (double w : {2.5, 3.0, 3.5, 4.0}) s.push_back({Frequency{w}, 1.2, 0.8});
    const auto data = OpticalDataset::create(s, "short");
    WarningLog warnings;
    interband_constant(data, Frequency{2.4}, {}, &warnings);
    CHECK(!warnings.empty());
  }
  SUBCASE("requires data above omega_inter") {
    std::vector<OpticalSample> s;
    for (double w : {0.5, 0.8, 1.0, 1.5}) s.push_back({Frequency{w}, 1.2, 0.8});
    const auto data = OpticalDataset::create(s, "low");
    CHECK_THROWS_AS(interband_constant(data, Frequency{2.0}), ValidationError);
  }
}

namespace {

// Four-point fixtures shaped like the handbook's overlapping IR datasets:
// (omega, eps', eps'') rows converted to (n, k).
OpticalDataset table_fixture(const std::string& label,
                             const std::vector<std::array<double, 3>>& rows) {
  std::vector<OpticalSample> s;
  for (const auto& r : rows) {
    double n, k;
    nk_from_eps({r[1], r[2]}, n, k);
    s.push_back({Frequency{r[0]}, n, k});
  }
  return OpticalDataset::create(s, label);
}

}  // namespace

TEST_CASE("consistency report") {
  SUBCASE("identical datasets: zero differences, no flags") {
    const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 20);
    const auto a = synthetic_dataset(kGold, {}, grid, "a");
    const auto b = synthetic_dataset(kGold, {}, grid, "b");
    const auto rep = consistency_report({a, b}, {Frequency{0.5}, Frequency{1.0}});
    for (const auto& row : rep.probes)
      for (double d : row.pair_diff_percent) CHECK(d == 0.0);
    CHECK(rep.flagged_pairs.empty());
  }
  SUBCASE("handbook-style inconsistent values at 0.7 eV") {
    const auto dold = table_fixture("dold", {{0.6, -168.2, 23.3},
                                             {0.7, -125.0, 15.6},
                                             {0.8, -96.0, 11.0},
                                             {0.9, -76.7, 7.96}});
    const auto theye = table_fixture("theye", {{0.6, -170.7, 25.6},
                                               {0.7, -165.9, 18.7},
                                               {0.8, -131.9, 12.65},
                                               {0.9, -94.3, 8.9}});
    const auto rep = consistency_report({dold, theye}, {Frequency{0.7}});
    REQUIRE(rep.probes.size() == 1);
    CHECK(rep.probes[0].eps[0].real() == doctest::Approx(-125.0).epsilon(1e-9));
    CHECK(rep.probes[0].eps[1].real() == doctest::Approx(-165.9).epsilon(1e-9));
    CHECK(rep.probes[0].pair_diff_percent[0] > 10.0);
  }
  SUBCASE("drude pair with different plasma frequencies is flagged") {
    const auto grid = make_log_grid(Frequency{0.2}, Frequency{2.0}, 20);
    const auto a = synthetic_dataset({Frequency{9.0}, Frequency{0.035}}, {}, grid, "a");
    const auto b = synthetic_dataset({Frequency{7.7}, Frequency{0.035}}, {}, grid, "b");
    const auto rep = consistency_report({a, b}, {Frequency{0.7}});
    REQUIRE(rep.flagged_pairs.size() == 1);
    CHECK(rep.fits[0].omega_p.ev == doctest::Approx(9.0).epsilon(0.02));
    CHECK(rep.fits[1].omega_p.ev == doctest::Approx(7.7).epsilon(0.02));
    CHECK(rep.flagged_pairs[0].omega_p_diff_percent > 5.0);
  }
}
