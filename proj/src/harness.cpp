#include "spacenorm/harness.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>

#include "json.hpp"
#include "spacenorm/differences.hpp"
#include "spacenorm/lattice.hpp"
#include "spacenorm/localpoly.hpp"
#include "spacenorm/parallel.hpp"

namespace spacenorm::harness {

using nlohmann::json;

namespace {

json entry_to_json(const NormEntry& e) {
  json levels = json::array();
  for (const auto& l : e.breakdown.levels)
    levels.push_back({{"j", l.j}, {"t", l.t}, {"a", l.a}});
  json flags = json::object();
  for (const auto& [k, v] : e.flags) flags[k] = v;
  return json{{"main_term", e.main},
              {"seminorm", e.semi},
              {"total", e.total},
              {"levels", levels},
              {"weight_offset", e.breakdown.weight_offset},
              {"truncated", e.breakdown.truncated},
              {"flags", flags}};
}

NormEntry entry_from_json(const json& j) {
  NormEntry e;
  e.main = j.at("main_term").get<double>();
  e.semi = j.at("seminorm").get<double>();
  e.total = j.at("total").get<double>();
  e.breakdown.weight_offset = j.value("weight_offset", 0.0);
  e.breakdown.truncated = j.value("truncated", false);
  for (const auto& l : j.at("levels"))
    e.breakdown.levels.push_back(
        {l.at("j").get<int>(), l.at("t").get<double>(), l.at("a").get<double>()});
  if (j.contains("flags"))
    for (auto it = j.at("flags").begin(); it != j.at("flags").end(); ++it)
      e.flags[it.key()] = it.value().get<double>();
  return e;
}

}  // namespace

std::string ExperimentConfig::to_json() const {
  json j;
  j["corpus"] = json::array();
  for (const auto& f : corpus) j["corpus"].push_back(json::parse(f.to_json()));
  j["domains"] = json::array();
  for (const auto& d : domains) j["domains"].push_back(json::parse(d.to_json()));
  j["parameter_grid"] = json::array();
  for (const auto& p : parameter_grid) j["parameter_grid"].push_back(json::parse(p.to_json()));
  j["grid_sizes"] = grid_sizes;
  j["flavors"] = flavors;
  j["compare_all_pairs"] = compare_all_pairs;
  j["ratio_low"] = ratio_low;
  j["ratio_high"] = ratio_high;
  j["refine_tolerance"] = refine_tolerance;
  j["output_dir"] = output_dir;
  j["threads"] = threads;
  return j.dump(2);
}

ExperimentConfig ExperimentConfig::from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
  ExperimentConfig c;
  if (!j.contains("corpus") || j.at("corpus").empty()) throw ConfigError("corpus is empty");
  for (const auto& f : j.at("corpus")) c.corpus.push_back(TestFunctionSpec::from_json(f.dump()));
  if (j.contains("domains"))
    for (const auto& d : j.at("domains")) c.domains.push_back(DomainSpec::from_json(d.dump()));
  if (c.domains.empty()) throw ConfigError("domains is empty");
  if (!j.contains("parameter_grid") || j.at("parameter_grid").empty())
    throw ConfigError("parameter_grid is empty");
  for (const auto& p : j.at("parameter_grid"))
    c.parameter_grid.push_back(SpaceParams::from_json(p.dump()));
  c.grid_sizes = j.value("grid_sizes", std::vector<int>{1024});
  c.flavors = j.value("flavors", std::vector<std::string>{"osc", "diff"});
  for (const auto& fl : c.flavors)
    if (fl != "osc" && fl != "diff" && fl != "hn" && fl != "lp")
      throw ConfigError("unknown flavor: " + fl);
  c.compare_all_pairs = j.value("compare_all_pairs", true);
  c.ratio_low = j.value("ratio_low", 0.1);
  c.ratio_high = j.value("ratio_high", 10.0);
  c.refine_tolerance = j.value("refine_tolerance", 0.2);
  c.output_dir = j.value("output_dir", std::string{});
  c.threads = j.value("threads", 0);
  return c;
}

ExperimentConfig ExperimentConfig::default_config() {
  ExperimentConfig c;
  Box window{{-8.0}, {8.0}};
  c.domains.push_back(DomainSpec::full_space(window));
  c.corpus.push_back(TestFunctionSpec::gaussian({0.0}, 1.0));
  c.corpus.push_back(TestFunctionSpec::cusp(0.3, 1.0));
  c.corpus.push_back(TestFunctionSpec::band_limited(4.0));
  c.parameter_grid.push_back(SpaceParams::besov_morrey(1, 0.7, 1.5, 3.0, 2.0, 2.0, 2, 1.0, 1.0));
  c.grid_sizes = {1024, 2048};
  c.flavors = {"osc", "diff", "hn", "lp"};
  return c;
}

NormCell compute_cell(const TestFunctionSpec& fn, const DomainSpec& dom, const SpaceParams& sp,
                      const std::string& flavor, int grid_size) {
  NormCell cell;
  cell.function = fn.name;
  cell.domain = dom.to_json();
  cell.flavor = flavor;
  cell.grid_size = grid_size;
  try {
    const auto grid = GridDescriptor::covering(dom.window, grid_size);
    const GridFunction f = sample(fn, grid, dom);
    SpaceParams p = sp;
    if (flavor == "lp") {
      const auto dec = build_decomposition(std::numbers::pi / grid.spacing, default_k_max(grid));
      const auto r = lp_norm(f, p, dec, dom);
      cell.entry.total = r.value;
      cell.entry.semi = r.value;
      if (r.boundary_flagged) cell.entry.flags["boundary_mass"] = 1.0;
    } else {
      if (flavor == "osc")
        p.flavor = Flavor::Osc;
      else if (flavor == "diff")
        p.flavor = Flavor::Diff;
      else if (flavor == "hn")
        p.flavor = Flavor::HNDiscrete;
      else
        throw ConfigError("unknown flavor: " + flavor);
      cell.entry = full_norm(f, p, dom);
    }
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  return cell;
}

NormReport run(const ExperimentConfig& config) {
  if (config.corpus.empty() || config.parameter_grid.empty())
    throw ConfigError("corpus and parameter_grid must be nonempty");
  if (config.threads > 0) set_thread_count(config.threads);

  NormReport report;
  report.config = config;

  for (std::size_t di = 0; di < config.domains.size(); ++di) {
    const auto& dom = config.domains[di];
    for (const auto& fn : config.corpus) {
      for (std::size_t pi = 0; pi < config.parameter_grid.size(); ++pi) {
        for (int g : config.grid_sizes) {
          for (const auto& flavor : config.flavors) {
            NormCell cell = compute_cell(fn, dom, config.parameter_grid[pi], flavor, g);
            cell.param_index = static_cast<int>(pi);
            cell.domain = "domain_" + std::to_string(di);
            report.cells.push_back(std::move(cell));
          }
        }
      }
    }
  }

  // Ratio matrices per (function, domain, params, grid) over flavor pairs.
  auto find_cell = [&](const std::string& fn, const std::string& dm, int pi, int g,
                       const std::string& fl) -> const NormCell* {
    for (const auto& c : report.cells)
      if (c.function == fn && c.domain == dm && c.param_index == pi && c.grid_size == g &&
          c.flavor == fl)
        return &c;
    return nullptr;
  };
  if (config.compare_all_pairs) {
    for (const auto& base : report.cells) {
      for (const auto& other_flavor : config.flavors) {
        if (other_flavor <= base.flavor) continue;
        const NormCell* b = find_cell(base.function, base.domain, base.param_index,
                                      base.grid_size, other_flavor);
        if (b == nullptr || !base.ok() || !b->ok()) continue;
        if (base.entry.total < 1e-14 && b->entry.total < 1e-14) continue;  // 0/0 cells
        RatioCell r;
        r.function = base.function;
        r.domain = base.domain;
        r.param_index = base.param_index;
        r.grid_size = base.grid_size;
        r.flavor_a = base.flavor;
        r.flavor_b = other_flavor;
        r.ratio = b->entry.total > 0 ? base.entry.total / b->entry.total
                                     : std::numeric_limits<double>::infinity();
        r.within_bounds = r.ratio >= config.ratio_low && r.ratio <= config.ratio_high;
        report.ratios.push_back(r);
      }
    }
  }

  // Invariant suite over the stored cells.
  {
    InvariantResult agg{"aggregate_reproducible", true, 0.0, ""};
    InvariantResult qmono{"q_monotonicity", true, 0.0, ""};
    InvariantResult tmono{"T_monotonicity", true, 0.0, ""};
    for (std::size_t ci = 0; ci < report.cells.size(); ++ci) {
      const auto& c = report.cells[ci];
      if (!c.ok() || c.entry.breakdown.levels.empty()) continue;
      if (c.flavor == "hn") continue;  // main term sits inside the aggregate
      const auto& sp = config.parameter_grid[static_cast<std::size_t>(c.param_index)];
      const double re = aggregate(c.entry.breakdown, sp.s, sp.q);
      const double err = std::abs(re - c.entry.semi) / std::max(1.0, c.entry.semi);
      agg.worst = std::max(agg.worst, err);
      if (err > 1e-12) {
        agg.passed = false;
        agg.detail = "cell " + std::to_string(ci);
      }
      if (sp.q != kInfinity) {
        const double a1 = aggregate(c.entry.breakdown, sp.s, sp.q);
        const double a2 = aggregate(c.entry.breakdown, sp.s, 2.0 * sp.q);
        const double a3 = aggregate(c.entry.breakdown, sp.s, kInfinity);
        if (a2 > a1 * (1 + 1e-12) || a3 > a2 * (1 + 1e-12)) {
          qmono.passed = false;
          qmono.detail = "cell " + std::to_string(ci);
        }
        qmono.worst = std::max(qmono.worst, std::max(a2 / std::max(a1, 1e-300),
                                                     a3 / std::max(a2, 1e-300)) -
                                                1.0);
      }
      // Growing T adds coarser levels (smaller j); the aggregate may only grow.
      ScaleBreakdown prefix;
      prefix.weight_offset = c.entry.breakdown.weight_offset;
      double prev = 0.0;
      for (auto it = c.entry.breakdown.levels.rbegin(); it != c.entry.breakdown.levels.rend();
           ++it) {
        prefix.levels.push_back(*it);
        const double val = aggregate(prefix, sp.s, sp.q);
        if (val < prev * (1 - 1e-12)) {
          tmono.passed = false;
          tmono.detail = "cell " + std::to_string(ci);
        }
        prev = val;
      }
    }
    report.invariants.push_back(agg);
    report.invariants.push_back(qmono);
    report.invariants.push_back(tmono);
  }
  {
    // Ratios reproducible from their cells, and refinement stability.
    InvariantResult consist{"ratio_consistency", true, 0.0, ""};
    InvariantResult stable{"refinement_stability", true, 0.0, ""};
    for (const auto& r : report.ratios) {
      const NormCell* a = find_cell(r.function, r.domain, r.param_index, r.grid_size, r.flavor_a);
      const NormCell* b = find_cell(r.function, r.domain, r.param_index, r.grid_size, r.flavor_b);
      if (a == nullptr || b == nullptr) continue;
      const double expect = b->entry.total > 0 ? a->entry.total / b->entry.total
                                               : std::numeric_limits<double>::infinity();
      if (std::isfinite(expect)) {
        const double err = std::abs(expect - r.ratio) / std::max(1.0, std::abs(expect));
        consist.worst = std::max(consist.worst, err);
        if (err > 1e-12) consist.passed = false;
      }
    }
    if (config.grid_sizes.size() >= 2) {
      for (const auto& r : report.ratios) {
        if (r.grid_size != config.grid_sizes.front()) continue;
        double lo = r.ratio, hi = r.ratio;
        bool complete = std::isfinite(r.ratio);
        for (int g : config.grid_sizes) {
          bool found = false;
          for (const auto& r2 : report.ratios) {
            if (r2.function == r.function && r2.domain == r.domain &&
                r2.param_index == r.param_index && r2.flavor_a == r.flavor_a &&
                r2.flavor_b == r.flavor_b && r2.grid_size == g) {
              if (!std::isfinite(r2.ratio)) complete = false;
              lo = std::min(lo, r2.ratio);
              hi = std::max(hi, r2.ratio);
              found = true;
              break;
            }
          }
          complete = complete && found;
        }
        if (!complete) continue;
        const double spread = hi / std::max(lo, 1e-300);
        const double budget = (1.0 + config.refine_tolerance) / (1.0 - config.refine_tolerance);
        stable.worst = std::max(stable.worst, spread);
        if (spread > budget) {
          stable.passed = false;
          stable.detail = r.function + " " + r.flavor_a + "/" + r.flavor_b;
        }
      }
    }
    report.invariants.push_back(consist);
    report.invariants.push_back(stable);
  }

  report.all_passed = true;
  for (const auto& inv : report.invariants) report.all_passed = report.all_passed && inv.passed;
  for (const auto& r : report.ratios) report.all_passed = report.all_passed && r.within_bounds;
  for (const auto& c : report.cells) report.all_passed = report.all_passed && c.ok();

  if (!config.output_dir.empty()) report.save(config.output_dir);
  return report;
}

std::string NormReport::to_json() const {
  json j;
  j["schema"] = schema;
  j["psi_profile"] = psi_profile;
  j["morrey_weight"] = morrey_weight;
  j["scale_floor_factor"] = scale_floor_factor;
  j["config"] = json::parse(config.to_json());
  j["cells"] = json::array();
  for (const auto& c : cells)
    j["cells"].push_back({{"function", c.function},
                          {"domain", c.domain},
                          {"param_index", c.param_index},
                          {"flavor", c.flavor},
                          {"grid_size", c.grid_size},
                          {"entry", entry_to_json(c.entry)},
                          {"error", c.error}});
  j["ratios"] = json::array();
  for (const auto& r : ratios)
    j["ratios"].push_back({{"function", r.function},
                           {"domain", r.domain},
                           {"param_index", r.param_index},
                           {"flavor_a", r.flavor_a},
                           {"flavor_b", r.flavor_b},
                           {"grid_size", r.grid_size},
                           {"ratio", r.ratio},
                           {"within_bounds", r.within_bounds}});
  j["invariants"] = json::array();
  for (const auto& inv : invariants)
    j["invariants"].push_back({{"name", inv.name},
                               {"passed", inv.passed},
                               {"worst", inv.worst},
                               {"detail", inv.detail}});
  j["all_passed"] = all_passed;
  return j.dump(2);
}

NormReport NormReport::from_json(const std::string& text) {
  json j = json::parse(text);
  NormReport rep;
  rep.schema = j.at("schema").get<int>();
  rep.psi_profile = j.at("psi_profile").get<std::string>();
  rep.morrey_weight = j.value("morrey_weight", std::string("radius-power"));
  rep.scale_floor_factor = j.at("scale_floor_factor").get<double>();
  rep.config = ExperimentConfig::from_json(j.at("config").dump());
  for (const auto& c : j.at("cells")) {
    NormCell cell;
    cell.function = c.at("function").get<std::string>();
    cell.domain = c.at("domain").get<std::string>();
    cell.param_index = c.at("param_index").get<int>();
    cell.flavor = c.at("flavor").get<std::string>();
    cell.grid_size = c.at("grid_size").get<int>();
    cell.entry = entry_from_json(c.at("entry"));
    cell.error = c.at("error").get<std::string>();
    rep.cells.push_back(std::move(cell));
  }
  for (const auto& r : j.at("ratios")) {
    RatioCell rc;
    rc.function = r.at("function").get<std::string>();
    rc.domain = r.at("domain").get<std::string>();
    rc.param_index = r.at("param_index").get<int>();
    rc.flavor_a = r.at("flavor_a").get<std::string>();
    rc.flavor_b = r.at("flavor_b").get<std::string>();
    rc.grid_size = r.at("grid_size").get<int>();
    rc.ratio = r.at("ratio").get<double>();
    rc.within_bounds = r.at("within_bounds").get<bool>();
    rep.ratios.push_back(std::move(rc));
  }
  for (const auto& i : j.at("invariants"))
    rep.invariants.push_back({i.at("name").get<std::string>(), i.at("passed").get<bool>(),
                              i.at("worst").get<double>(), i.at("detail").get<std::string>()});
  rep.all_passed = j.at("all_passed").get<bool>();
  return rep;
}

void NormReport::save(const std::string& dir) const {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  {
    std::ofstream os(fs::path(dir) / "report.json");
    os << to_json() << '\n';
  }
  {
    std::ofstream os(fs::path(dir) / "breakdowns.csv");
    os.precision(17);
    os << "function,domain,param_index,flavor,grid_size,j,t,a\n";
    for (const auto& c : cells)
      for (const auto& l : c.entry.breakdown.levels)
        os << c.function << ',' << c.domain << ',' << c.param_index << ',' << c.flavor << ','
           << c.grid_size << ',' << l.j << ',' << l.t << ',' << l.a << '\n';
  }
  {
    std::ofstream os(fs::path(dir) / "ratios.csv");
    os.precision(17);
    os << "function,domain,param_index,flavor_a,flavor_b,grid_size,ratio,within_bounds\n";
    for (const auto& r : ratios)
      os << r.function << ',' << r.domain << ',' << r.param_index << ',' << r.flavor_a << ','
         << r.flavor_b << ',' << r.grid_size << ',' << r.ratio << ',' << int(r.within_bounds)
         << '\n';
  }
}

ScanResult regularity_scan(const TestFunctionSpec& fn, const SpaceParams& sp,
                           const DomainSpec& dom, const std::vector<int>& grid_sizes) {
  if (grid_sizes.size() < 3) throw InsufficientScales("regularity_scan needs >= 3 grid sizes");
  const int finest = *std::max_element(grid_sizes.begin(), grid_sizes.end());

  const auto grid = GridDescriptor::covering(dom.window, finest);
  const GridFunction f = sample(fn, grid, dom);
  SpaceParams p = sp;
  p.flavor = Flavor::Osc;
  const auto sn = seminorm(f, p, dom);

  ScanResult out;
  out.grid_size = finest;
  out.levels = sn.breakdown.levels;

  double amax = 0.0;
  for (const auto& l : sn.breakdown.levels) amax = std::max(amax, l.a);
  std::vector<std::pair<double, double>> pts;  // (j, log2 a_j)
  for (const auto& l : sn.breakdown.levels)
    if (l.a > 1e-12 * std::max(amax, 1.0)) pts.push_back({double(l.j), std::log2(l.a)});
  if (pts.size() < 2) {
    out.degenerate = true;
    out.threshold = -kInfinity;
    out.slope = -kInfinity;
    return out;
  }
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (auto [x, y] : pts) {
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double n = static_cast<double>(pts.size());
  out.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  out.threshold = -out.slope;
  return out;
}

namespace {

// max of |g| over the closed box |y - x|_inf <= t, per node.
GridFunction box_max_field(const GridFunction& g, double t) {
  const int d = g.dim();
  const int reach = static_cast<int>(std::floor(t / g.spacing() + 1e-9));
  std::vector<double> out(g.size(), 0.0);
  parallel_for(g.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(static_cast<std::size_t>(d)), node(static_cast<std::size_t>(d));
    for (std::size_t i = b; i < e; ++i) {
      if (g.masked(i)) continue;
      g.unflatten(i, idx);
      double m = 0.0;
      node.assign(static_cast<std::size_t>(d), 0);
      std::vector<int> off(static_cast<std::size_t>(d), -reach);
      while (true) {
        bool ok = true;
        for (int k = 0; k < d; ++k) {
          node[static_cast<std::size_t>(k)] =
              idx[static_cast<std::size_t>(k)] + off[static_cast<std::size_t>(k)];
          if (node[static_cast<std::size_t>(k)] < 0 ||
              node[static_cast<std::size_t>(k)] >= g.grid().shape[k]) {
            ok = false;
            break;
          }
        }
        if (ok) {
          const std::size_t flat = g.flat_index(node);
          if (!g.masked(flat)) m = std::max(m, std::abs(g.value(flat)));
        }
        int axis = d - 1;
        while (axis >= 0 && off[static_cast<std::size_t>(axis)] == reach)
          off[static_cast<std::size_t>(axis--)] = -reach;
        if (axis < 0) break;
        ++off[static_cast<std::size_t>(axis)];
      }
      out[i] = m;
    }
  });
  return GridFunction(g.grid(), std::move(out), g.mask());
}

}  // namespace

WhitneyResult whitney_check(const std::vector<TestFunctionSpec>& corpus, const SpaceParams& sp,
                            const DomainSpec& dom, const std::vector<int>& grid_sizes,
                            double stability_tol) {
  WhitneyResult res;
  for (const auto& fn : corpus) {
    std::vector<double> per_grid;
    for (int g : grid_sizes) {
      const auto grid = GridDescriptor::covering(dom.window, g);
      const GridFunction f = sample(fn, grid, dom);
      const auto levels = scale_levels(sp, dom, grid.spacing);
      double worst = 0.0;
      for (int j : levels) {
        const double t = std::exp2(-j);
        const auto osc = osc_field(f, t, sp.v, sp.N, dom);
        const auto dif = diff_field(f, t, sp.v, sp.N, dom);
        const auto smooth = box_max_field(dif.field, t);
        for (std::size_t i = 0; i < f.size(); ++i) {
          if (f.masked(i)) continue;
          const double o = osc.field.value(i), s = smooth.value(i);
          if (o <= 1e-12 && s <= 1e-12) continue;
          worst = std::max(worst, o / std::max(s, 1e-300));
        }
      }
      res.rows.push_back({fn.name, g, worst});
      per_grid.push_back(worst);
      res.corpus_max = std::max(res.corpus_max, worst);
    }
    if (per_grid.size() >= 2) {
      const double lo = *std::min_element(per_grid.begin(), per_grid.end());
      const double hi = *std::max_element(per_grid.begin(), per_grid.end());
      if (hi > lo * (1 + stability_tol) / (1 - stability_tol)) res.refinement_stable = false;
    }
  }
  return res;
}

RestrictionResult restriction_check(const TestFunctionSpec& F, const DomainSpec& dom,
                                    const SpaceParams& sp, int grid_size,
                                    std::size_t max_points) {
  if (sp.v != 2.0 && sp.v != kInfinity)
    throw ConfigError("restriction_check needs v in {2, inf} (exact oscillation modes)");
  if (dom.kind == DomainKind::FullSpace)
    throw ConfigError("restriction_check needs a proper subdomain");

  const auto grid = GridDescriptor::covering(dom.window, grid_size);
  const DomainSpec full = DomainSpec::full_space(dom.window);
  const GridFunction f_full = sample(F, grid, full);
  const GridFunction f_dom = sample(F, grid, dom);
  const auto levels = scale_levels(sp, dom, grid.spacing);
  const OscMode mode = sp.v == 2.0 ? OscMode::Exact2 : OscMode::Minimax;

  std::vector<std::size_t> points;
  for (std::size_t i = 0; i < f_dom.size(); ++i)
    if (!f_dom.masked(i)) points.push_back(i);
  const std::size_t stride = std::max<std::size_t>(1, points.size() / max_points);

  RestrictionResult res;
  const int d = f_dom.dim();
  std::vector<int> idx(static_cast<std::size_t>(d));
  for (std::size_t pi = 0; pi < points.size(); pi += stride) {
    const std::size_t flat = points[pi];
    f_dom.unflatten(flat, idx);
    const auto x = f_dom.point_of(flat);
    for (int j : levels) {
      const double t = std::exp2(-j);
      const double osc_dom = oscillation(f_dom, x, t, sp.v, sp.N, dom, mode);
      const double osc_full = oscillation(f_full, x, t, sp.v, sp.N, full, mode);
      res.max_osc_violation = std::max(res.max_osc_violation, osc_dom - osc_full);
      const double dif_dom = diff_ball_mean(f_dom, idx, t, sp.v, sp.N, dom).value;
      const double dif_full = diff_ball_mean(f_full, idx, t, sp.v, sp.N, full).value;
      res.max_diff_violation = std::max(res.max_diff_violation, dif_dom - dif_full);
      ++res.points_checked;
    }
  }
  res.passed = res.max_osc_violation <= 1e-10 && res.max_diff_violation <= 1e-10;
  return res;
}

}  // namespace spacenorm::harness
