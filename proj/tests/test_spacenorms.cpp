#include <cmath>

#include "doctest.h"
#include "spacenorm/spacenorms.hpp"

using namespace spacenorm;

TEST_CASE("hypothesis validation") {
  {
    const auto sp = SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 1.0, 1.0);
    const auto rep = validate(sp);
    CHECK(rep.core_ok);
    CHECK(sp.smoothness_lower_bound() == doctest::Approx(1.0 / 6.0));
    CHECK(sp.sigma_p() == 0.0);
  }
  {
    // v = 0.5 violates the domain clause but not the core window
    auto sp = SpaceParams::besov_morrey(1, 0.7, 1.0, 2.0, 2.0, 0.5, 2, 1.0, 1.0);
    const auto rep = validate(sp);
    bool domain_flag = true;
    for (const auto& c : rep.clauses)
      if (c.name == "domain_v_ge_1") domain_flag = c.satisfied;
    CHECK_FALSE(domain_flag);
    CHECK(sp.smoothness_lower_bound() == 0.0);  // max{0, 0, 1 - 2} = 0
  }
  {
    // p < 1 pushes the window lower bound up
    const auto sp = SpaceParams::besov_morrey(1, 1.6, 0.5, 1.0, 2.0, 2.0, 2, 1.0, 1.0);
    CHECK(sp.smoothness_lower_bound() == doctest::Approx(1.5));  // max{0, 1, 2 - 1/2}
  }
  {
    // s = N violates the strict upper bound
    const auto sp = SpaceParams::besov_morrey(1, 2.0, 2.0, 2.0, 2.0, 2.0, 2, 1.0, 1.0);
    const auto rep = validate(sp);
    CHECK_FALSE(rep.core_ok);
  }
  {
    // sigma_p for p < 1
    const auto sp = SpaceParams::besov_morrey(2, 1.0, 0.5, 1.0, 2.0, 2.0, 2, 1.0, 1.0);
    CHECK(sp.sigma_p() == doctest::Approx(2.0));
  }
  CHECK_THROWS_AS(SpaceParams::besov_type(1, 0.7, 2.0, 0.6, 2.0, 2.0, 2, 1.0, 1.0).morrey(),
                  ConfigError);
}

TEST_CASE("space params json round trip") {
  auto sp = SpaceParams::besov_type(2, 0.8, 2.0, 0.15, kInfinity, kInfinity, 3, kInfinity, 0.5);
  sp.flavor = Flavor::Diff;
  sp.main_variant = MainTermVariant::PlainMorrey;
  const auto back = SpaceParams::from_json(sp.to_json());
  CHECK(back.family == Family::BesovType);
  CHECK(back.tau == sp.tau);
  CHECK(back.u == doctest::Approx(sp.u));
  CHECK(back.q == kInfinity);
  CHECK(back.v == kInfinity);
  CHECK(back.T == kInfinity);
  CHECK(back.flavor == Flavor::Diff);
  CHECK(back.main_variant == MainTermVariant::PlainMorrey);
}

TEST_CASE("scale levels and aggregation") {
  const auto dom = DomainSpec::full_space(Box{{-8}, {8}});
  auto sp = SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 1.0, 1.0);
  const double h = 1.0 / 64.0;
  const auto levels = scale_levels(sp, dom, h);
  // t_j = 2^{-j} in [1/16, 1]: j = 0..4
  REQUIRE(levels.size() == 5);
  CHECK(levels.front() == 0);
  CHECK(levels.back() == 4);

  sp.T = h;  // below the floor
  CHECK_THROWS_AS(scale_levels(sp, dom, h), ScaleRangeEmpty);

  ScaleBreakdown br;
  br.levels = {{0, 1.0, 2.0}, {1, 0.5, 1.0}};
  // q = 2, s = 1: (2^0 2)^2 + (2^1 1)^2 = 8
  CHECK(aggregate(br, 1.0, 2.0) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-15));
  // q = inf: max(2, 2) = 2
  CHECK(aggregate(br, 1.0, kInfinity) == doctest::Approx(2.0));
  // weight offset shifts the exponent
  br.weight_offset = 1.0;
  CHECK(aggregate(br, 0.0, kInfinity) == doctest::Approx(2.0));
}

TEST_CASE("seminorm vanishes on polynomials and is monotone in T") {
  const auto dom = DomainSpec::full_space(Box{{-1}, {1}});
  const auto g = GridDescriptor::covering(Box{{-1}, {1}}, 128);
  {
    const GridFunction f = sample(TestFunctionSpec::polynomial({{0}, {1}}, {0.3, -1.2}), g, dom);
    for (Flavor fl : {Flavor::Osc, Flavor::Diff}) {
      auto sp = SpaceParams::besov_morrey(1, 0.9, 2.0, 2.5, 2.0, 2.0, 2, 0.5, 0.5);
      sp.flavor = fl;
      CHECK(seminorm(f, sp, dom).value <= 1e-10);
    }
  }
  {
    const GridFunction f = sample(TestFunctionSpec::gaussian({0.0}, 0.5), g, dom);
    auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 2.5, 2.0, 2.0, 2, 0.125, 0.5);
    sp.flavor = Flavor::Osc;
    double prev = 0.0;
    for (double T : {0.125, 0.25, 0.5, 1.0}) {
      sp.T = T;
      const double val = seminorm(f, sp, dom).value;
      CHECK(val >= prev * (1 - 1e-12));
      prev = val;
    }
    CHECK(prev > 0.0);
  }
}

TEST_CASE("main term examples") {
  {
    const auto dom = DomainSpec::full_space(Box{{0}, {1}});
    const auto g = GridDescriptor::covering(Box{{0}, {1}}, 128);
    const GridFunction f = sample(TestFunctionSpec::polynomial({{0}}, {1.0}), g, dom);
    auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 2.0, 2.0, 2.0, 2, 1.0, 0.25);
    sp.main_variant = MainTermVariant::PlainMorrey;
    CHECK(main_term(f, sp, dom).value == doctest::Approx(1.0).epsilon(1e-10));
  }
  {
    const auto dom = DomainSpec::full_space(Box{{-2}, {2}});
    const auto g = GridDescriptor::covering(Box{{-2}, {2}}, 512);
    const GridFunction f = sample(TestFunctionSpec::step_indicator(Box{{-1}, {1}}), g, dom);
    auto sp = SpaceParams::besov_morrey(1, 0.7, 1.0, 2.0, 2.0, 2.0, 2, 1.0, 1.0);
    sp.main_variant = MainTermVariant::PlainMorrey;
    CHECK(main_term(f, sp, dom).value == doctest::Approx(2.0).epsilon(0.02));
  }
  {
    const auto dom = DomainSpec::full_space(Box{{-2}, {2}});
    const auto g = GridDescriptor::covering(Box{{-2}, {2}}, 256);
    const GridFunction zero = sample(TestFunctionSpec::polynomial({{0}}, {0.0}), g, dom);
    for (auto variant : {MainTermVariant::PlainMorrey, MainTermVariant::VAveraged}) {
      auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 3.0, 2.0, 2.0, 2, 1.0, 0.5);
      sp.main_variant = variant;
      CHECK(main_term(zero, sp, dom).value == 0.0);
    }
  }
}

TEST_CASE("full norm: polynomial reduces to the main term; homogeneity exact") {
  const auto dom = DomainSpec::full_space(Box{{-1}, {1}});
  const auto g = GridDescriptor::covering(Box{{-1}, {1}}, 128);
  {
    const GridFunction f = sample(TestFunctionSpec::polynomial({{1}}, {2.0}), g, dom);
    auto sp = SpaceParams::besov_morrey(1, 0.9, 2.0, 2.0, 2.0, 2.0, 2, 0.5, 0.5);
    sp.main_variant = MainTermVariant::PlainMorrey;
    const auto e = full_norm(f, sp, dom);
    CHECK(e.semi <= 1e-10);
    CHECK(e.total == doctest::Approx(e.main).epsilon(1e-9));
  }
  {
    const GridFunction f = sample(TestFunctionSpec::gaussian({0.0}, 0.5), g, dom);
    for (Flavor fl : {Flavor::Osc, Flavor::Diff}) {
      auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 2.0, 2.0, 2.0, 2, 0.5, 0.5);
      sp.flavor = fl;
      const auto e1 = full_norm(f, sp, dom);
      const auto e2 = full_norm(f.scaled(2.0), sp, dom);
      CHECK(std::abs(e2.total - 2.0 * e1.total) <= 1e-12 * e1.total * 2.0);
    }
  }
}

TEST_CASE("hn discrete norm comparable to the scale-integral norm") {
  const auto dom = DomainSpec::full_space(Box{{-4}, {4}});
  const auto g = GridDescriptor::covering(Box{{-4}, {4}}, 512);
  const GridFunction f = sample(TestFunctionSpec::gaussian({0.0}, 1.0), g, dom);
  auto sp = SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 1.0, 1.0);
  sp.flavor = Flavor::HNDiscrete;
  const auto hn = hn_discrete_norm(f, sp, dom);
  sp.flavor = Flavor::Osc;
  const auto full = full_norm(f, sp, dom);
  const double ratio = hn.total / full.total;
  CHECK(ratio >= 0.1);
  CHECK(ratio <= 10.0);

  // zero function and polynomials
  const GridFunction zero = f.scaled(0.0);
  CHECK(hn_discrete_norm(zero, sp, dom).total == 0.0);
  const GridFunction lin = sample(TestFunctionSpec::polynomial({{1}}, {0.7}), g, dom);
  const auto hn_lin = hn_discrete_norm(lin, sp, dom);
  CHECK(hn_lin.semi <= 1e-9);

  // besov-type variant runs and is homogeneous
  auto bt = SpaceParams::besov_type(1, 0.7, 2.0, 0.15, 2.0, 2.0, 2, 1.0, 1.0);
  bt.flavor = Flavor::HNDiscrete;
  const double h1 = hn_discrete_norm(f, bt, dom).total;
  const double h2 = hn_discrete_norm(f.scaled(2.0), bt, dom).total;
  CHECK(h2 == doctest::Approx(2.0 * h1).epsilon(1e-12));
}

TEST_CASE("outer norm dispatch: tau = 0 cube norm vs u = p ball norm stay close") {
  const auto dom = DomainSpec::full_space(Box{{-2}, {2}});
  const auto g = GridDescriptor::covering(Box{{-2}, {2}}, 256);
  const GridFunction f = sample(TestFunctionSpec::gaussian({0.3}, 0.7), g, dom);
  const auto bm = SpaceParams::besov_morrey(1, 0.7, 2.0, 2.0, 2.0, 2.0, 2, 1.0, 1.0);
  const auto bt = SpaceParams::besov_type(1, 0.7, 2.0, 0.0, 2.0, 2.0, 2, 1.0, 1.0);
  const double a = outer_norm(f, bm, dom);
  const double b = outer_norm(f, bt, dom);
  CHECK(b / a >= 0.25);
  CHECK(b / a <= 4.0);
}
