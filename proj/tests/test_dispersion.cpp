#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kkwin/dispersion.hpp"
#include "kkwin/models.hpp"

using namespace kkwin;

namespace {

const DrudeParams kGold = gold_drude_params();

OpticalDataset drude_fixture(double lo, double hi, int ppd = 50) {
  return synthetic_dataset(kGold, {}, make_log_grid(Frequency{lo}, Frequency{hi}, ppd),
                           "drude-gold");
}

OpticalDataset gold_fixture(double lo, double hi, int ppd = 50) {
  return synthetic_dataset(kGold, gold_interband_oscillators(),
                           make_log_grid(Frequency{lo}, Frequency{hi}, ppd),
                           "drude-lorentz-gold");
}

}  // namespace

TEST_CASE("window evaluation on the real axis") {
  SUBCASE("sqrt window, degenerate b = 0") {
    CHECK(window_eval_real(SqrtWindow{Frequency{0.0}}, Frequency{3.7}) ==
          std::complex<double>(1.0, 0.0));
  }
  SUBCASE("sqrt window above b") {
    const auto f = window_eval_real(SqrtWindow{Frequency{1.0}}, Frequency{2.0});
    CHECK(f.real() == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
    CHECK(f.imag() == 0.0);
  }
  SUBCASE("sqrt window below b: negative imaginary branch") {
    const auto f = window_eval_real(SqrtWindow{Frequency{2.0}}, Frequency{1.0});
    CHECK(f.real() == 0.0);
    CHECK(f.imag() == doctest::Approx(-1.0 / std::sqrt(3.0)).epsilon(1e-14));
  }
  SUBCASE("pole at omega = b") {
    CHECK_THROWS_AS(window_eval_real(SqrtWindow{Frequency{1.0}}, Frequency{1.0}),
                    WindowZeroError);
  }
}

TEST_CASE("window evaluation on the imaginary axis") {
  CHECK(window_eval_imag(SqrtWindow{Frequency{1.0}}, Frequency{1.0}) ==
        doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  CHECK(window_eval_imag(IdentityWindow{}, Frequency{0.37}) == 1.0);

  SUBCASE("old window near its zero at xi ~ 2.4") {
    const OldRationalWindow old{};  // p=1, q=3, w=(1-2i)
    CHECK_THROWS_AS(window_eval_imag(old, Frequency{2.4}), WindowZeroError);
    // the paper evaluates the diagnostic at 2.5, which must pass
    CHECK_NOTHROW(window_eval_imag(old, Frequency{2.5}));
    CHECK_NOTHROW(window_eval_imag(old, Frequency{0.5}));
  }
}

TEST_CASE("window symmetry: f(i xi) is real for every variant") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  const WindowSpec specs[] = {IdentityWindow{}, SqrtWindow{Frequency{1.5}},
                              OldRationalWindow{}};
  for (const auto& w : specs) {
    for (int i = 0; i < 100; ++i) {
      const double xi = std::pow(10.0, u(rng));
      const auto v = window_eval_complex(w, {0.0, xi});
      CHECK(std::abs(v.imag()) <= 1e-13 * std::max(1.0, std::abs(v.real())));
    }
  }
}

TEST_CASE("upper-half-plane branch is continuous across the imaginary axis") {
  // the naive principal sqrt(z^2-b^2) would jump here
  const SqrtWindow w{Frequency{1.0}};
  const std::complex<double> left = window_eval_complex(w, {-1e-9, 2.0});
  const std::complex<double> right = window_eval_complex(w, {1e-9, 2.0});
  CHECK(std::abs(left - right) < 1e-8);
}

TEST_CASE("standard KK reproduces the Drude closed form on wide data") {
  const auto data = drude_fixture(1e-3, 1e4);
  const std::vector<Frequency> grid = {Frequency{0.16}, Frequency{0.5}, Frequency{1.0},
                                       Frequency{2.0},  Frequency{5.0}, Frequency{10.0}};
  const auto res = kk_standard(data, kGold, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double oracle = drude_eps_imag_axis(kGold, grid[i]);
    CHECK(res.eps_total[i] == doctest::Approx(oracle).epsilon(5e-3));
    CHECK(res.eps_total[i] ==
          1.0 + res.eps_cut[i] + res.eps_expt[i]);  // identity, exact
    CHECK(res.negative_flag[i] == 0);
  }
  CHECK(res.min_kernel_eps2 >= 0.0);
}

TEST_CASE("vacuum data with zero-amplitude extrapolation gives eps = 1") {
  std::vector<OpticalSample> s;
  for (double w : {0.1, 1.0, 10.0, 100.0}) s.push_back({Frequency{w}, 1.0, 0.0});
  const auto data = OpticalDataset::create(s, "vacuum");
  const DrudeParams none{Frequency{0.0}, Frequency{0.0}};
  const auto res = kk_standard(data, none, {Frequency{1.0}, Frequency{3.0}});
  for (double e : res.eps_total) CHECK(e == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("windowed transform reproduces the Drude closed form") {
  const auto data = drude_fixture(1e-3, 1e4);
  const std::vector<Frequency> grid = {Frequency{0.16}, Frequency{0.5}, Frequency{1.0},
                                       Frequency{2.0},  Frequency{5.0}, Frequency{10.0}};
  for (double b : {1.0, 1.5, 3.0}) {
    const auto res = kk_windowed(data, kGold, SqrtWindow{Frequency{b}}, grid);
    for (std::size_t i = 0; i < grid.size(); ++i) {
      const double oracle = drude_eps_imag_axis(kGold, grid[i]);
      CHECK(res.eps_total[i] == doctest::Approx(oracle).epsilon(5e-3));
    }
    CHECK(res.min_kernel_eps1 >= 0.0);
    CHECK(res.min_kernel_eps2 >= 0.0);
  }
}

TEST_CASE("windowed transform with a smaller data range still tracks the oracle") {
  const auto data = drude_fixture(0.042, 1e4);
  const std::vector<Frequency> grid = {Frequency{1.0}};
  const auto res = kk_windowed(data, kGold, SqrtWindow{Frequency{1.0}}, grid);
  CHECK(res.eps_total[0] ==
        doctest::Approx(drude_eps_imag_axis(kGold, Frequency{1.0})).epsilon(5e-3));
}

TEST_CASE("b = 0 sqrt window delegates to the standard transform") {
  const auto data = drude_fixture(0.1, 100.0, 20);
  const std::vector<Frequency> grid = {Frequency{0.5}, Frequency{2.0}};
  const auto std_res = kk_standard(data, kGold, grid);
  const auto win_res = kk_windowed(data, kGold, SqrtWindow{Frequency{0.0}}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(win_res.eps_total[i] == std_res.eps_total[i]);
    CHECK(win_res.eps_cut[i] == std_res.eps_cut[i]);
  }
  CHECK(window_tag(win_res.window) == "kk");
}

TEST_CASE("window consistency: b = 1 vs b = 1.5 on wide KK-consistent data") {
  const auto data = gold_fixture(1e-3, 1e4);
  const auto grid = make_log_grid(Frequency{0.1}, Frequency{10.0}, 10);
  const auto r1 = kk_windowed(data, kGold, SqrtWindow{Frequency{1.0}}, grid);
  const auto r2 = kk_windowed(data, kGold, SqrtWindow{Frequency{1.5}}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rel = std::abs(r1.eps_total[i] - r2.eps_total[i]) / r1.eps_total[i];
    CHECK(rel < 1e-3);
  }
}

TEST_CASE("eps(i xi) decreases monotonically on ohmic data") {
  const auto data = gold_fixture(0.042, 1e4, 40);
  const auto grid = make_log_grid(Frequency{0.1}, Frequency{10.0}, 15);
  const auto res = kk_standard(data, kGold, grid);
  for (std::size_t i = 1; i < grid.size(); ++i)
    CHECK(res.eps_total[i] < res.eps_total[i - 1]);
}

TEST_CASE("old rational window on exact data reproduces the oracle") {
  const auto data = drude_fixture(0.042, 1e4);
  const std::vector<Frequency> grid = {Frequency{0.5}, Frequency{1.0}, Frequency{5.0}};
  const auto res = kk_windowed(data, kGold, OldRationalWindow{}, grid);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double oracle = drude_eps_imag_axis(kGold, grid[i]);
    CHECK(res.eps_total[i] == doctest::Approx(oracle).epsilon(1e-2));
  }
}

TEST_CASE("old rational window rejects xi grids touching its zero") {
  const auto data = drude_fixture(0.1, 100.0, 20);
  CHECK_THROWS_AS(
      kk_windowed(data, kGold, OldRationalWindow{}, {Frequency{1.0}, Frequency{2.4}}),
      WindowZeroError);
}

TEST_CASE("cut fraction: handbook-range standard KK leans on the extrapolation") {
  // the Drude extrapolation supplies over 90% of eps(i 0.1 eV) when the data
  // start at 0.125 eV
  const auto data = drude_fixture(0.125, 1e4);
  const auto res = kk_standard(data, kGold, {Frequency{0.1}});
  const auto frac = cut_fraction(res);
  CHECK(frac.raw[0] > 0.9);
}

TEST_CASE("cut fraction: suppression by the sqrt window (fig. 3 pattern)") {
  const auto data = drude_fixture(0.042, 9.0);
  const std::vector<Frequency> grid = {Frequency{0.1}, Frequency{0.5}};

  const auto std_res = kk_standard(data, kGold, grid);
  const auto std_frac = cut_fraction(std_res);
  CHECK(std_frac.raw[0] > 0.5);  // paper: 70.2% at xi = 0.1

  const auto win_res = kk_windowed(data, kGold, SqrtWindow{Frequency{1.0}}, grid);
  const auto win_frac = cut_fraction(win_res);
  CHECK(win_frac.raw[0] < 0.15);  // paper: 8.4%
  CHECK(win_frac.raw[1] < 0.05);  // paper: 1.5% at xi = 0.5

  SUBCASE("zero extrapolation means zero fraction") {
    const DrudeParams none{Frequency{0.0}, Frequency{0.0}};
    const auto res0 = kk_standard(data, none, grid);
    const auto frac0 = cut_fraction(res0);
    for (double f : frac0.raw) CHECK(f == 0.0);
  }
}

TEST_CASE("g diagnostic") {
  const auto data = gold_fixture(0.125, 1e4, 30);

  SUBCASE("identity window: the positive standard kernel") {
    const auto g = g_diagnostic(data, IdentityWindow{}, Frequency{2.5});
    for (std::size_t i = 0; i < g.size(); ++i) {
      const double w = g[i].first.ev;
      const double expect =
          2.0 / M_PI * w * data.eps2(i) / (w * w + 2.5 * 2.5);
      CHECK(g[i].second == doctest::Approx(expect).epsilon(1e-12));
      CHECK(g[i].second >= 0.0);
    }
  }
  SUBCASE("sqrt window: non-negative for conductor data") {
    const auto g = g_diagnostic(data, SqrtWindow{Frequency{1.0}}, Frequency{1.0});
    for (const auto& [w, v] : g) CHECK(v >= -1e-15);
  }
  SUBCASE("old window: attains both signs on metallic data") {
    const auto g = g_diagnostic(data, OldRationalWindow{}, Frequency{2.5});
    double lo = 0.0, hi = 0.0;
    for (const auto& [w, v] : g) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    CHECK(lo < 0.0);
    CHECK(hi > 0.0);
  }
}

TEST_CASE("negative eps is flagged, not fatal") {
  // A wildly KK-inconsistent dataset: eps' ~ +100 below b forces the eps'
  // kernel negative and the windowed result negative at low xi.
  std::vector<OpticalSample> s;
  for (double w : {0.05, 0.1, 0.2, 0.4, 0.8, 1.6, 3.2}) {
    double n, k;
    nk_from_eps({100.0, 0.01}, n, k);
    s.push_back({Frequency{w}, n, k});
  }
  const auto data = OpticalDataset::create(s, "inconsistent");
  const DrudeParams none{Frequency{0.0}, Frequency{0.0}};
  const auto res =
      kk_windowed(data, none, SqrtWindow{Frequency{1.0}}, {Frequency{0.1}});
  CHECK(res.negative_flag[0] == 1);
  CHECK(res.eps_total[0] < 0.0);
  CHECK(!res.warnings.empty());
  CHECK(res.min_kernel_eps1 < 0.0);
}

TEST_CASE("transforms are bit-stable across thread counts") {
  const auto data = gold_fixture(0.1, 100.0, 25);
  const auto grid = make_log_grid(Frequency{0.16}, Frequency{10.0}, 8);
  const auto serial = kk_windowed(data, kGold, SqrtWindow{Frequency{1.0}}, grid, {}, 1);
  const auto parallel = kk_windowed(data, kGold, SqrtWindow{Frequency{1.0}}, grid, {}, 4);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    CHECK(serial.eps_total[i] == parallel.eps_total[i]);
    CHECK(serial.eps_cut[i] == parallel.eps_cut[i]);
  }
}

TEST_CASE("window tags") {
  CHECK(window_tag(IdentityWindow{}) == "kk");
  CHECK(window_tag(SqrtWindow{Frequency{1.5}}) == "win_b1p5");
  CHECK(window_tag(OldRationalWindow{}) == "old_p1_q3");
}
