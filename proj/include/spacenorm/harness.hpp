#ifndef SPACENORM_HARNESS_HPP
#define SPACENORM_HARNESS_HPP

#include <optional>
#include <string>
#include <vector>

#include "spacenorm/gridfn.hpp"
#include "spacenorm/lpref.hpp"
#include "spacenorm/spacenorms.hpp"

namespace spacenorm::harness {

struct ExperimentConfig {
  std::vector<TestFunctionSpec> corpus;
  std::vector<DomainSpec> domains;
  std::vector<SpaceParams> parameter_grid;
  std::vector<int> grid_sizes;
  std::vector<std::string> flavors;  // subset of {"osc","diff","hn","lp"}
  bool compare_all_pairs = true;
  double ratio_low = 0.1;
  double ratio_high = 10.0;
  double refine_tolerance = 0.2;  // +-20 percent across grids
  std::string output_dir;
  int threads = 0;

  std::string to_json() const;
  static ExperimentConfig from_json(const std::string& text);
  /// Small full-space config used when no file is given.
  static ExperimentConfig default_config();
};

struct NormCell {
  std::string function;
  std::string domain;
  int param_index = 0;
  std::string flavor;
  int grid_size = 0;
  NormEntry entry;
  std::string error;  // nonempty when the cell failed

  bool ok() const { return error.empty(); }
};

struct RatioCell {
  std::string function;
  std::string domain;
  int param_index = 0;
  std::string flavor_a, flavor_b;
  int grid_size = 0;
  double ratio = 0.0;
  bool within_bounds = true;
};

struct InvariantResult {
  std::string name;
  bool passed = true;
  double worst = 0.0;
  std::string detail;
};

struct NormReport {
  int schema = 1;
  std::string psi_profile = "exp-smoothstep";
  // Morrey weights use the radius power r^{d(1/u-1/p)}; the ball-measure
  // convention differs by the constant omega_d^{1/u-1/p}.
  std::string morrey_weight = "radius-power";
  double scale_floor_factor = 4.0;
  ExperimentConfig config;
  std::vector<NormCell> cells;
  std::vector<RatioCell> ratios;
  std::vector<InvariantResult> invariants;
  bool all_passed = true;

  std::string to_json() const;
  static NormReport from_json(const std::string& text);
  void save(const std::string& dir) const;  // report.json + breakdowns.csv + ratios.csv
};

/// Computes every requested norm, assembles the ratio matrices, and runs the
/// stored-breakdown invariant suite. Cell-level numeric errors attach to the
/// cell; configuration errors throw.
NormReport run(const ExperimentConfig& config);

struct ScanResult {
  double threshold = 0.0;   // s where the fitted level slope crosses 0
  double slope = 0.0;       // d log2 a_j / dj on the finest grid
  bool degenerate = false;  // all a_j = 0 (polynomial input)
  std::vector<ScaleBreakdown::Level> levels;
  int grid_size = 0;
};

/// Empirical smoothness threshold from the decay of the per-level terms
/// a_j: log2 a_j ~ -threshold * j, so 2^{js} a_j flattens at s = threshold.
ScanResult regularity_scan(const TestFunctionSpec& fn, const SpaceParams& sp,
                           const DomainSpec& dom, const std::vector<int>& grid_sizes);

struct WhitneyResult {
  struct Row {
    std::string function;
    int grid_size = 0;
    double max_ratio = 0.0;
  };
  std::vector<Row> rows;
  double corpus_max = 0.0;
  bool refinement_stable = true;  // per function, across the supplied grids
};

/// max over x, t, f of osc_field / (box max of diff_field over radius t):
/// the discrete surrogate of the Whitney-estimate comparison.
WhitneyResult whitney_check(const std::vector<TestFunctionSpec>& corpus, const SpaceParams& sp,
                            const DomainSpec& dom, const std::vector<int>& grid_sizes,
                            double stability_tol = 0.25);

struct RestrictionResult {
  bool passed = true;
  double max_osc_violation = 0.0;
  double max_diff_violation = 0.0;
  std::size_t points_checked = 0;
};

/// Samples F on the full window and its restriction on Omega; checks
/// pointwise that restricting can only shrink oscillations and difference
/// ball means (up to 1e-10).
RestrictionResult restriction_check(const TestFunctionSpec& F, const DomainSpec& dom,
                                    const SpaceParams& sp, int grid_size,
                                    std::size_t max_points = 256);

/// Computes one cell (function, domain, params, flavor) on one grid.
NormCell compute_cell(const TestFunctionSpec& fn, const DomainSpec& dom, const SpaceParams& sp,
                      const std::string& flavor, int grid_size);

}  // namespace spacenorm::harness

#endif
