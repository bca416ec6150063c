#include <cmath>
#include <cstdio>
#include <random>

#include "doctest.h"
#include "spacenorm/gridfn.hpp"
#include "spacenorm/lattice.hpp"

using namespace spacenorm;

TEST_CASE("sampling the corpus families") {
  const auto dom = DomainSpec::full_space(Box{{-1}, {1}});
  GridDescriptor g{{5}, {-1.0}, 0.5};

  const auto poly = TestFunctionSpec::polynomial({{1}}, {1.0});  // p(x) = x
  const GridFunction f = sample(poly, g, dom);
  CHECK(f.value(0) == -1.0);
  CHECK(f.value(1) == -0.5);
  CHECK(f.value(2) == 0.0);
  CHECK(f.value(3) == 0.5);
  CHECK(f.value(4) == 1.0);

  const auto gauss = TestFunctionSpec::gaussian({0.0}, 1.0);
  CHECK(gauss.evaluate(std::vector<double>{0.0}) == 1.0);
  CHECK(gauss.evaluate(std::vector<double>{1.0}) == doctest::Approx(std::exp(-0.5)));

  const auto step = TestFunctionSpec::step_indicator(Box{{0.0}, {1.0}});
  CHECK(step.evaluate(std::vector<double>{-0.25}) == 0.0);
  CHECK(step.evaluate(std::vector<double>{0.25}) == 1.0);

  const auto cusp = TestFunctionSpec::cusp(0.3, 1.0);
  CHECK(cusp.evaluate(std::vector<double>{0.0}) == 0.0);
  CHECK(cusp.evaluate(std::vector<double>{2.0}) == 0.0);  // beyond the cutoff
  CHECK(cusp.evaluate(std::vector<double>{0.5}) > 0.0);
}

TEST_CASE("mask equals domain membership") {
  const auto half = DomainSpec::special_lipschitz_1d(0.0, Box{{-1}, {1}});
  const auto g = GridDescriptor::covering(Box{{-1}, {1}}, 16);
  const GridFunction f = sample(TestFunctionSpec::gaussian({0.0}, 1.0), g, half);
  int masked = 0;
  for (std::size_t i = 0; i < f.size(); ++i) {
    const auto y = f.point_of(i);
    CHECK(f.masked(i) == !contains(half, y));
    masked += f.masked(i);
  }
  CHECK(masked == 8);
}

TEST_CASE("riemann_mean examples") {
  GridDescriptor g{{3}, {0.0}, 1.0};
  {
    GridFunction f(g, {2.0, 2.0, 2.0}, {1, 1, 1});
    const std::vector<std::size_t> pts{0, 1, 2};
    CHECK(riemann_mean(f, pts, 3.0, 1.0) == doctest::Approx(2.0));
  }
  {
    GridFunction f(g, {1.0, -2.0, 3.0}, {1, 1, 1});
    const std::vector<std::size_t> pts{0, 1, 2};
    CHECK(riemann_mean(f, pts, 1.0, kInfinity) == 3.0);
  }
  {
    GridDescriptor g2{{2}, {0.0}, 1.0};
    GridFunction f(g2, {3.0, 4.0}, {1, 1});
    const std::vector<std::size_t> pts{0, 1};
    CHECK(riemann_mean(f, pts, 2.0, 2.0) == doctest::Approx(std::sqrt(12.5)));
  }
  {
    GridFunction f(g, {0.0, 0.0, 0.0}, {1, 1, 1});
    const std::vector<std::size_t> pts{0, 1, 2};
    for (double v : {0.5, 1.0, 2.0, kInfinity}) CHECK(riemann_mean(f, pts, 2.0, v) == 0.0);
  }
  {
    GridFunction f(g, {1.0, 1.0, 1.0}, {1, 1, 1});
    CHECK(riemann_mean(f, std::vector<std::size_t>{}, 1.0, 2.0) == 0.0);
    CHECK_THROWS_AS(riemann_mean(f, std::vector<std::size_t>{0}, 0.0, 2.0),
                    NonpositiveNormalizer);
  }
}

TEST_CASE("riemann_mean homogeneity and exponent monotonicity") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  GridDescriptor g{{16}, {0.0}, 0.25};
  std::vector<double> vals(16);
  for (auto& x : vals) x = u(rng);
  GridFunction f(g, vals, std::vector<std::uint8_t>(16, 1));
  std::vector<std::size_t> pts;
  for (std::size_t i = 2; i < 11; ++i) pts.push_back(i);
  const double t = 1.3;
  const double norm = std::pow(t, 1);

  for (double v : {0.5, 1.0, 2.0, 3.5}) {
    const double m1 = riemann_mean(f, pts, norm, v);
    const double m2 = riemann_mean(f.scaled(-2.5), pts, norm, v);
    CHECK(m2 == doctest::Approx(2.5 * m1).epsilon(1e-12));
  }

  // discrete Hoelder: mean_{v1} <= (|P| h^d / t^d)^{1/v1 - 1/v2} mean_{v2}
  const double measure = static_cast<double>(pts.size()) * f.cell_volume() / norm;
  for (auto [v1, v2] : std::vector<std::pair<double, double>>{
           {0.5, 1.0}, {1.0, 2.0}, {2.0, 7.0}, {1.5, kInfinity}}) {
    const double m1 = riemann_mean(f, pts, norm, v1);
    const double m2 = riemann_mean(f, pts, norm, v2);
    const double inv2 = v2 == kInfinity ? 0.0 : 1.0 / v2;
    CHECK(m1 <= std::pow(measure, 1.0 / v1 - inv2) * m2 * (1 + 1e-12));
  }
}

TEST_CASE("binary file round trip is lossless") {
  const auto half = DomainSpec::special_lipschitz_1d(0.0, Box{{-1}, {1}});
  const auto g = GridDescriptor::covering(Box{{-1}, {1}}, 32);
  const GridFunction f = sample(TestFunctionSpec::gaussian({0.3}, 0.7), g, half);
  const std::string path = "gridfn_roundtrip.bin";
  f.save(path);
  const GridFunction back = GridFunction::load(path);
  CHECK(back.grid().shape == f.grid().shape);
  CHECK(back.grid().origin == f.grid().origin);
  CHECK(back.grid().spacing == f.grid().spacing);
  CHECK(back.values() == f.values());
  CHECK(back.mask() == f.mask());
  std::remove(path.c_str());

  const std::string csv = "gridfn_roundtrip.csv";
  f.export_csv(csv);
  std::remove(csv.c_str());
}

TEST_CASE("ball_domain_samples respects mask and radius") {
  const auto g = GridDescriptor::covering(Box{{-2}, {2}}, 8);  // h = 0.5
  const auto full = DomainSpec::full_space(Box{{-2}, {2}});
  const GridFunction f = sample(TestFunctionSpec::gaussian({0.0}, 1.0), g, full);
  // nodes at -1.75, -1.25, ..., 1.75; ball of radius 1 around 0 holds 4 nodes
  const auto pts = ball_domain_samples(f, std::vector<double>{0.0}, 1.0);
  REQUIRE(pts.size() == 4);
  for (auto pfl : pts) CHECK(std::abs(f.point_of(pfl)[0]) < 1.0);

  const auto half = DomainSpec::special_lipschitz_1d(0.0, Box{{-2}, {2}});
  const GridFunction fh = sample(TestFunctionSpec::gaussian({0.0}, 1.0), g, half);
  const auto pts2 = ball_domain_samples(fh, std::vector<double>{0.0}, 1.0);
  REQUIRE(pts2.size() == 2);
  for (auto pfl : pts2) CHECK(fh.point_of(pfl)[0] > 0.0);

  // radius below the spacing, centered on a node
  const auto pts3 = ball_domain_samples(f, f.point_of(3), 0.3);
  REQUIRE(pts3.size() == 1);
  CHECK(pts3[0] == 3);
}

TEST_CASE("band limited profile is smooth and refinement consistent") {
  const auto fn = TestFunctionSpec::band_limited(4.0);
  // closed form, independent of any grid: 16-periodic and bounded
  const double a = fn.evaluate(std::vector<double>{0.375});
  CHECK(a == fn.evaluate(std::vector<double>{0.375}));
  CHECK(fn.evaluate(std::vector<double>{0.375 + 16.0}) == doctest::Approx(a).epsilon(1e-10));
  double peak = 0.0;
  for (double x = -8.0; x <= 8.0; x += 0.01)
    peak = std::max(peak, std::abs(fn.evaluate(std::vector<double>{x})));
  CHECK(peak > 0.1);
  CHECK(peak < 50.0);
}
