// Command-line front end: norm / compare / scan / suite / export.
//
// Exit codes: 0 = all asserted suites pass, 1 = numeric failure,
// 2 = configuration error.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "spacenorm/acceptance.hpp"
#include "spacenorm/harness.hpp"
#include "spacenorm/parallel.hpp"

using namespace spacenorm;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot read " + path);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

harness::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return harness::ExperimentConfig::default_config();
  return harness::ExperimentConfig::from_json(slurp(path));
}

void apply_overrides(harness::ExperimentConfig& cfg, int grid_size, const std::string& out,
                     int threads, double tolerance, const std::string& flavor) {
  if (grid_size > 0) cfg.grid_sizes = {grid_size};
  if (!out.empty()) cfg.output_dir = out;
  if (threads > 0) cfg.threads = threads;
  if (tolerance > 0) cfg.refine_tolerance = tolerance;
  if (!flavor.empty()) cfg.flavors = {flavor};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Equivalent quasi-norms of Besov-Morrey and Besov-type spaces on sampled grids"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path, out_dir, flavor;
  int grid_size = 0, threads = 0;
  double tolerance = 0.0;
  app.add_option("--config", config_path, "JSON experiment config");
  app.add_option("--grid-size", grid_size, "override: single grid size");
  app.add_option("--out", out_dir, "output directory for reports");
  app.add_option("--threads", threads, "worker threads (default: hardware)");
  app.add_option("--tolerance", tolerance, "refinement stability tolerance");
  app.add_option("--flavor", flavor, "norm flavor: osc|diff|hn|lp")
      ->check(CLI::IsMember({"osc", "diff", "hn", "lp"}));

  auto* cmd_norm = app.add_subcommand("norm", "compute norms for one config");
  auto* cmd_compare = app.add_subcommand("compare", "compute norms and the ratio matrix");
  auto* cmd_scan = app.add_subcommand("scan", "regularity threshold scan");
  int scan_fn_index = 0;
  cmd_scan->add_option("--function", scan_fn_index, "corpus index to scan");
  auto* cmd_suite = app.add_subcommand("suite", "run the acceptance suite");
  std::vector<int> suite_only;
  cmd_suite->add_option("--criterion", suite_only, "run only these criteria ids");
  auto* cmd_export = app.add_subcommand("export", "write per-level CSV tables for a report");
  std::string report_path;
  cmd_export->add_option("--report", report_path, "existing report.json")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;  // malformed invocations are config errors
  }

  try {
    if (threads > 0) set_thread_count(threads);

    if (cmd_suite->parsed()) {
      const int failures = acceptance::run_and_print(std::cout, suite_only);
      return failures == 0 ? 0 : 1;
    }

    if (cmd_export->parsed()) {
      const auto j = nlohmann::json::parse(slurp(report_path));
      const std::string dir = out_dir.empty() ? "." : out_dir;
      std::filesystem::create_directories(dir);
      std::ofstream os(std::filesystem::path(dir) / "breakdowns.csv");
      os.precision(17);
      os << "function,domain,param_index,flavor,grid_size,j,t,a\n";
      for (const auto& c : j.at("cells"))
        for (const auto& l : c.at("entry").at("levels"))
          os << c.at("function").get<std::string>() << ',' << c.at("domain").get<std::string>()
             << ',' << c.at("param_index").get<int>() << ',' << c.at("flavor").get<std::string>()
             << ',' << c.at("grid_size").get<int>() << ',' << l.at("j").get<int>() << ','
             << l.at("t").get<double>() << ',' << l.at("a").get<double>() << '\n';
      std::cout << "wrote " << (std::filesystem::path(dir) / "breakdowns.csv") << '\n';
      return 0;
    }

    harness::ExperimentConfig cfg = load_config(config_path);
    apply_overrides(cfg, grid_size, out_dir, threads, tolerance, flavor);

    if (cmd_scan->parsed()) {
      if (scan_fn_index < 0 || scan_fn_index >= static_cast<int>(cfg.corpus.size()))
        throw ConfigError("--function index out of range");
      if (cfg.grid_sizes.size() < 3) {
        // the scan needs a refinement ladder; grow one below the finest grid
        const int finest = *std::max_element(cfg.grid_sizes.begin(), cfg.grid_sizes.end());
        cfg.grid_sizes = {std::max(finest / 4, 64), std::max(finest / 2, 128), finest};
      }
      const auto res = harness::regularity_scan(cfg.corpus[static_cast<std::size_t>(scan_fn_index)],
                                                cfg.parameter_grid.at(0), cfg.domains.at(0),
                                                cfg.grid_sizes);
      nlohmann::json j{{"threshold", res.degenerate ? nlohmann::json("-inf")
                                                    : nlohmann::json(res.threshold)},
                       {"slope", res.degenerate ? nlohmann::json("-inf") : nlohmann::json(res.slope)},
                       {"degenerate", res.degenerate},
                       {"grid_size", res.grid_size}};
      std::cout << j.dump(2) << '\n';
      return 0;
    }

    if (cmd_norm->parsed() || cmd_compare->parsed()) {
      cfg.compare_all_pairs = cmd_compare->parsed();
      const auto report = harness::run(cfg);
      if (cfg.output_dir.empty()) std::cout << report.to_json() << '\n';
      if (cmd_compare->parsed()) {
        for (const auto& r : report.ratios)
          std::cout << r.function << " " << r.flavor_a << "/" << r.flavor_b << " @" << r.grid_size
                    << ": " << r.ratio << (r.within_bounds ? "" : "  [out of bounds]") << '\n';
      }
      return report.all_passed ? 0 : 1;
    }
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}
