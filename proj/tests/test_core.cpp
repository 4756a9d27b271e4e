#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "kkwin/core.hpp"

using namespace kkwin;

TEST_CASE("log grid: exact decade endpoints") {
  const auto g = make_log_grid(Frequency{0.1}, Frequency{10.0}, 1);
  REQUIRE(g.size() == 3);
  CHECK(g[0].ev == 0.1);
  CHECK(g[1].ev == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(g[2].ev == 10.0);
}

TEST_CASE("log grid: degenerate interval rejected") {
  CHECK_THROWS_AS(make_log_grid(Frequency{1.0}, Frequency{1.0}, 5), ValidationError);
  CHECK_THROWS_AS(make_log_grid(Frequency{0.0}, Frequency{1.0}, 5), ValidationError);
  CHECK_THROWS_AS(make_log_grid(Frequency{0.1}, Frequency{10.0}, 0), ValidationError);
}

TEST_CASE("log grid: 10 points per decade over two decades") {
  const auto g = make_log_grid(Frequency{0.1}, Frequency{10.0}, 10);
  REQUIRE(g.size() == 21);
  const double ratio = std::pow(10.0, 0.1);
  for (std::size_t i = 1; i < g.size(); ++i)
    CHECK(g[i].ev / g[i - 1].ev == doctest::Approx(ratio).epsilon(1e-12));
}

TEST_CASE("log grid: deterministic") {
  const auto a = make_log_grid(Frequency{0.042}, Frequency{9.0}, 37);
  const auto b = make_log_grid(Frequency{0.042}, Frequency{9.0}, 37);
  REQUIRE(a.size() == b.size());
  for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i].ev == b[i].ev);
}

TEST_CASE("eps_from_nk: vacuum and algebraic identity") {
  CHECK(eps_from_nk(1.0, 0.0) == std::complex<double>(1.0, 0.0));
  const auto e = eps_from_nk(0.5, 2.0);
  CHECK(e.real() == doctest::Approx(-3.75));
  CHECK(e.imag() == doctest::Approx(2.0));
  CHECK_THROWS_AS(eps_from_nk(0.0, 1.0), ValidationError);
  CHECK_THROWS_AS(eps_from_nk(-1.0, 1.0), ValidationError);
  CHECK_THROWS_AS(eps_from_nk(1.0, -0.5), ValidationError);
}

TEST_CASE("eps <-> nk round trip for random physical samples") {
  std::mt19937 rng(12345);
  std::uniform_real_distribution<double> un(0.01, 30.0), uk(0.0, 50.0);
  for (int i = 0; i < 100; ++i) {
    const double n = un(rng), k = uk(rng);
    const auto eps = eps_from_nk(n, k);
    double n2, k2;
    nk_from_eps(eps, n2, k2);
    CHECK(n2 == doctest::Approx(n).epsilon(1e-12));
    CHECK(k2 == doctest::Approx(k).epsilon(1e-12));
    CHECK(k2 >= 0.0);
  }
}

TEST_CASE("dataset invariants") {
  std::vector<OpticalSample> s = {{Frequency{0.1}, 2.0, 3.0},
                                  {Frequency{0.2}, 2.0, 2.0},
                                  {Frequency{0.3}, 2.0, 1.0},
                                  {Frequency{0.4}, 2.0, 0.5}};
  const auto d = OpticalDataset::create(s, "t");
  CHECK(d.size() == 4);
  CHECK(d.omega_min().ev == 0.1);
  CHECK(d.omega_max().ev == 0.4);
  for (std::size_t i = 0; i < d.size(); ++i) CHECK(d.eps2(i) >= 0.0);

  SUBCASE("too few samples") {
    s.pop_back();
    CHECK_THROWS_AS(OpticalDataset::create(s, "t"), ValidationError);
  }
  SUBCASE("non-monotone omega") {
    s[2].omega = Frequency{0.15};
    CHECK_THROWS_AS(OpticalDataset::create(s, "t"), ValidationError);
  }
  SUBCASE("bad n and k") {
    s[1].n = 0.0;
    CHECK_THROWS_AS(OpticalDataset::create(s, "t"), ValidationError);
    s[1].n = 1.0;
    s[1].k = -0.1;
    CHECK_THROWS_AS(OpticalDataset::create(s, "t"), ValidationError);
  }
}

TEST_CASE("eps interpolation hits nodes and stays in range") {
  std::vector<OpticalSample> s;
  for (double w : {0.1, 0.2, 0.4, 0.8, 1.6}) s.push_back({Frequency{w}, 1.5, 2.0 / w});
  const auto d = OpticalDataset::create(s, "t");
  for (std::size_t i = 0; i < d.size(); ++i) {
    const auto e = interpolate_eps(d, d[i].omega);
    CHECK(e.real() == doctest::Approx(d.eps1(i)).epsilon(1e-12));
    CHECK(e.imag() == doctest::Approx(d.eps2(i)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(interpolate_eps(d, Frequency{0.05}), ValidationError);
  CHECK_THROWS_AS(interpolate_eps(d, Frequency{2.0}), ValidationError);
  // between nodes, eps'' = 2 n k = 6/omega follows the power law exactly
  const auto e = interpolate_eps(d, Frequency{0.3});
  CHECK(e.imag() == doctest::Approx(6.0 / 0.3).epsilon(1e-10));
}

TEST_CASE("unit conversions") {
  CHECK(from_wavelength_um(1.239841984).ev == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(Frequency{1.0}.rad_per_s() == doctest::Approx(1.5192674488e15).epsilon(1e-9));
  // first Matsubara mode at room temperature, approx 0.16 eV
  CHECK(matsubara_first(300.0).ev == doctest::Approx(0.16243).epsilon(1e-4));
}

TEST_CASE("parallel_for covers every index once") {
  std::vector<int> hits(1000, 0);
  parallel_for(hits.size(), 4, [&](std::size_t i) { hits[i]++; });
  for (int h : hits) CHECK(h == 1);
}
