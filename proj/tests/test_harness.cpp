#include <filesystem>

#include "doctest.h"
#include "spacenorm/harness.hpp"
#include "spacenorm/parallel.hpp"

using namespace spacenorm;
using namespace spacenorm::harness;

namespace {

ExperimentConfig tiny_config() {
  ExperimentConfig cfg;
  cfg.domains.push_back(DomainSpec::full_space(Box{{-4}, {4}}));
  cfg.corpus.push_back(TestFunctionSpec::gaussian({0.0}, 1.0));
  cfg.parameter_grid.push_back(SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 0.5, 0.5));
  cfg.grid_sizes = {128, 256};
  cfg.flavors = {"osc", "diff"};
  return cfg;
}

}  // namespace

TEST_CASE("experiment config json round trip and validation") {
  const auto cfg = tiny_config();
  const auto back = ExperimentConfig::from_json(cfg.to_json());
  CHECK(back.corpus.size() == 1);
  CHECK(back.domains.size() == 1);
  CHECK(back.grid_sizes == cfg.grid_sizes);
  CHECK(back.flavors == cfg.flavors);

  CHECK_THROWS_AS(ExperimentConfig::from_json("{\"corpus\": []}"), ConfigError);
  CHECK_THROWS_AS(ExperimentConfig::from_json("not json"), ConfigError);
}

TEST_CASE("run produces cells, ratios, and a deterministic report") {
  const auto cfg = tiny_config();
  const auto rep1 = run(cfg);
  CHECK(rep1.cells.size() == 4);  // 2 grids x 2 flavors
  CHECK(rep1.ratios.size() == 2);
  for (const auto& c : rep1.cells) CHECK(c.ok());
  for (const auto& r : rep1.ratios) {
    CHECK(r.within_bounds);
    CHECK(r.ratio > 0.0);
  }
  CHECK(rep1.all_passed);

  const auto rep2 = run(cfg);
  CHECK(rep1.to_json() == rep2.to_json());  // bit-identical report

  // json round trip is lossless
  const auto back = NormReport::from_json(rep1.to_json());
  CHECK(back.to_json() == rep1.to_json());
}

TEST_CASE("worker count does not change the numbers") {
  auto cfg = tiny_config();
  cfg.grid_sizes = {192};
  cfg.threads = 1;
  const auto rep1 = run(cfg);
  cfg.threads = 7;
  const auto rep7 = run(cfg);
  REQUIRE(rep1.cells.size() == rep7.cells.size());
  for (std::size_t i = 0; i < rep1.cells.size(); ++i)
    CHECK(rep1.cells[i].entry.total == rep7.cells[i].entry.total);
  set_thread_count(0);
}

TEST_CASE("report saves json and csv artifacts") {
  namespace fs = std::filesystem;
  auto cfg = tiny_config();
  cfg.grid_sizes = {128};
  cfg.output_dir = "harness_report_test";
  const auto rep = run(cfg);
  CHECK(fs::exists("harness_report_test/report.json"));
  CHECK(fs::exists("harness_report_test/breakdowns.csv"));
  CHECK(fs::exists("harness_report_test/ratios.csv"));
  fs::remove_all("harness_report_test");
}

TEST_CASE("cell errors attach to the cell") {
  const auto half = DomainSpec::special_lipschitz_1d(0.0, Box{{-4}, {4}});
  const auto sp = SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 0.5, 0.5);
  const auto cell =
      compute_cell(TestFunctionSpec::gaussian({0.0}, 1.0), half, sp, "lp", 128);
  CHECK_FALSE(cell.ok());  // the reference norm is full-space only
}

TEST_CASE("regularity_scan preconditions and degenerate input") {
  const auto dom = DomainSpec::full_space(Box{{-4}, {4}});
  const auto sp = SpaceParams::besov_morrey(1, 0.5, 2.0, 2.0, 1.0, 1.0, 1, 1.0, 1.0);
  CHECK_THROWS_AS(
      regularity_scan(TestFunctionSpec::gaussian({0.0}, 1.0), sp, dom, {128, 256}),
      InsufficientScales);
  const auto res =
      regularity_scan(TestFunctionSpec::polynomial({{0}}, {1.0}), sp, dom, {128, 256, 512});
  CHECK(res.degenerate);
}

TEST_CASE("restriction check on the half line") {
  const auto half = DomainSpec::special_lipschitz_1d(0.0, Box{{-2}, {2}});
  const auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 3.0, 2.0, 2.0, 2, 0.25, 0.25);
  const auto res =
      restriction_check(TestFunctionSpec::gaussian({0.3}, 0.8), half, sp, 128, 32);
  CHECK(res.passed);
  CHECK(res.points_checked > 0);

  auto bad = sp;
  bad.v = 1.5;
  CHECK_THROWS_AS(restriction_check(TestFunctionSpec::gaussian({0.3}, 0.8), half, bad, 64, 8),
                  ConfigError);
}

TEST_CASE("whitney check returns finite stable ratios on a tiny corpus") {
  const auto dom = DomainSpec::full_space(Box{{-4}, {4}});
  const auto sp = SpaceParams::besov_morrey(1, 0.7, 2.0, 2.0, 2.0, 1.0, 1, 0.5, 1.0);
  const auto res =
      whitney_check({TestFunctionSpec::gaussian({0.0}, 1.0)}, sp, dom, {256, 512}, 0.25);
  CHECK(res.corpus_max > 0.0);
  CHECK(std::isfinite(res.corpus_max));
  CHECK(res.refinement_stable);
}
