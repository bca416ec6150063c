#include "spacenorm/spacenorms.hpp"

#include <algorithm>
#include <cmath>

#include "json.hpp"
#include "spacenorm/differences.hpp"
#include "spacenorm/lattice.hpp"
#include "spacenorm/localpoly.hpp"
#include "spacenorm/parallel.hpp"

namespace spacenorm {

using nlohmann::json;

std::string to_string(Family f) {
  return f == Family::BesovMorrey ? "besov_morrey" : "besov_type";
}

std::string to_string(Flavor f) {
  switch (f) {
    case Flavor::Osc: return "osc";
    case Flavor::Diff: return "diff";
    case Flavor::HNDiscrete: return "hn";
  }
  return "?";
}

std::string to_string(MainTermVariant m) {
  return m == MainTermVariant::PlainMorrey ? "plain_morrey" : "v_averaged";
}

SpaceParams SpaceParams::besov_morrey(int d, double s, double p, double u, double q, double v,
                                      int N, double T, double R) {
  SpaceParams sp;
  sp.d = d;
  sp.s = s;
  sp.p = p;
  sp.u = u;
  sp.tau = 1.0 / p - 1.0 / u;
  sp.q = q;
  sp.v = v;
  sp.family = Family::BesovMorrey;
  sp.N = N;
  sp.T = T;
  sp.R = R;
  return sp;
}

SpaceParams SpaceParams::besov_type(int d, double s, double p, double tau, double q, double v,
                                    int N, double T, double R) {
  SpaceParams sp;
  sp.d = d;
  sp.s = s;
  sp.p = p;
  sp.tau = tau;
  sp.u = 1.0 / (1.0 / p - tau);
  sp.q = q;
  sp.v = v;
  sp.family = Family::BesovType;
  sp.N = N;
  sp.T = T;
  sp.R = R;
  return sp;
}

double SpaceParams::sigma_p() const { return d * std::max(0.0, 1.0 / p - 1.0); }

double SpaceParams::smoothness_lower_bound() const {
  const double inv_v = v == kInfinity ? 0.0 : 1.0 / v;
  return d * std::max({0.0, 1.0 / p - 1.0, 1.0 / p - inv_v});
}

MorreyParams SpaceParams::morrey() const {
  if (family == Family::BesovMorrey) return MorreyParams(p, u);
  return MorreyParams::from_tau(p, tau);
}

namespace {

json num_or_inf(double x) {
  if (x == kInfinity) return json("inf");
  return json(x);
}

double parse_num_or_inf(const json& j) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return kInfinity;
    throw ConfigError("expected a number or \"inf\", got \"" + s + "\"");
  }
  return j.get<double>();
}

}  // namespace

std::string SpaceParams::to_json() const {
  json j;
  j["d"] = d;
  j["s"] = s;
  j["p"] = p;
  j["q"] = num_or_inf(q);
  j["v"] = num_or_inf(v);
  j["family"] = to_string(family);
  if (family == Family::BesovMorrey)
    j["u"] = u;
  else
    j["tau"] = tau;
  j["N"] = N;
  j["T"] = num_or_inf(T);
  j["R"] = R;
  j["flavor"] = to_string(flavor);
  j["main_term_variant"] = to_string(main_variant);
  return j.dump();
}

SpaceParams SpaceParams::from_json(const std::string& text) {
  json j = json::parse(text);
  const std::string fam = j.value("family", "besov_morrey");
  const int d = j.at("d").get<int>();
  const double s = j.at("s").get<double>();
  const double p = j.at("p").get<double>();
  const double q = parse_num_or_inf(j.at("q"));
  const double v = parse_num_or_inf(j.at("v"));
  const int N = j.at("N").get<int>();
  const double T = parse_num_or_inf(j.at("T"));
  const double R = j.at("R").get<double>();
  SpaceParams sp;
  if (fam == "besov_morrey")
    sp = besov_morrey(d, s, p, j.at("u").get<double>(), q, v, N, T, R);
  else if (fam == "besov_type")
    sp = besov_type(d, s, p, j.at("tau").get<double>(), q, v, N, T, R);
  else
    throw ConfigError("unknown family: " + fam);
  const std::string fl = j.value("flavor", "osc");
  if (fl == "osc")
    sp.flavor = Flavor::Osc;
  else if (fl == "diff")
    sp.flavor = Flavor::Diff;
  else if (fl == "hn")
    sp.flavor = Flavor::HNDiscrete;
  else
    throw ConfigError("unknown flavor: " + fl);
  const std::string mv = j.value("main_term_variant", "v_averaged");
  sp.main_variant =
      mv == "plain_morrey" ? MainTermVariant::PlainMorrey : MainTermVariant::VAveraged;
  return sp;
}

HypothesisReport validate(const SpaceParams& sp) {
  HypothesisReport rep;
  auto add = [&](const std::string& name, bool ok, const std::string& detail, bool core) {
    rep.clauses.push_back({name, ok, detail});
    if (core && !ok) rep.core_ok = false;
  };
  add("p_positive", sp.p > 0 && std::isfinite(sp.p), "0 < p < inf", true);
  if (sp.family == Family::BesovMorrey)
    add("p_le_u", sp.p <= sp.u && std::isfinite(sp.u), "p <= u < inf", true);
  else
    add("tau_range", sp.tau >= 0 && sp.tau < 1.0 / sp.p, "0 <= tau < 1/p", true);
  add("q_positive", sp.q > 0, "0 < q <= inf", true);
  add("v_positive", sp.v > 0, "0 < v <= inf", true);
  add("T_positive", sp.T > 0, "0 < T <= inf", true);
  add("R_positive", sp.R > 0 && std::isfinite(sp.R), "0 < R < inf", true);
  add("order_positive", sp.N >= 1, "N >= 1", true);

  const double lower = sp.smoothness_lower_bound();
  add("smoothness_window_lower", sp.s > lower,
      "d*max{0,1/p-1,1/p-1/v} = " + std::to_string(lower) + " < s", true);
  add("smoothness_window_upper", sp.s < sp.N, "s < N", true);

  add("domain_v_ge_1", sp.v >= 1.0, "domains require v >= 1 (informational)", false);
  const bool conv = sp.p > 1.0 && sp.v == kInfinity && sp.s > sp.d / sp.p;
  add("convex_sup_variant", conv, "convex domains with v = inf need p > 1 and d/p < s", false);
  add("plain_main_term_p_ge_1", sp.p >= 1.0,
      "plain Morrey main term on domains requires p >= 1 (informational)", false);
  return rep;
}

double aggregate(const ScaleBreakdown& br, double s, double q) {
  if (br.levels.empty()) return 0.0;
  if (q == kInfinity) {
    double m = 0.0;
    for (const auto& l : br.levels) m = std::max(m, std::exp2(l.j * (s + br.weight_offset)) * l.a);
    return m;
  }
  double acc = 0.0;
  for (const auto& l : br.levels) acc += std::pow(std::exp2(l.j * (s + br.weight_offset)) * l.a, q);
  return std::pow(acc, 1.0 / q);
}

std::vector<int> scale_levels(const SpaceParams& sp, const DomainSpec& dom, double spacing,
                              bool* truncated) {
  const double floor_t = 4.0 * spacing;
  double cap = std::exp2(std::ceil(std::log2(dom.window.max_extent())));
  bool trunc = false;
  if (sp.T < cap)
    cap = sp.T;
  else if (sp.T > cap)
    trunc = true;  // T beyond the representable scales
  if (truncated) *truncated = trunc;
  if (floor_t > cap) throw ScaleRangeEmpty("4*spacing exceeds min(T, window)");

  // t_j = 2^{-j} in [floor_t, cap]
  const int j_lo = static_cast<int>(std::ceil(-std::log2(cap) - 1e-9));
  const int j_hi = static_cast<int>(std::floor(std::log2(1.0 / floor_t) + 1e-9));
  std::vector<int> levels;
  for (int j = j_lo; j <= j_hi; ++j) levels.push_back(j);
  if (levels.empty()) throw ScaleRangeEmpty("no dyadic scale between 4*spacing and T");
  return levels;
}

double outer_norm(const GridFunction& g, const SpaceParams& sp, const DomainSpec& dom) {
  if (sp.family == Family::BesovMorrey) {
    const auto radii = default_radius_set(dom, g.spacing());
    return morrey_ball_norm(g, sp.morrey(), dom, radii);
  }
  const auto [j_min, j_max] = default_cube_levels(dom, g.spacing());
  return morrey_cube_norm(g, sp.morrey(), dom, j_min, j_max);
}

GridFunction v_average_field(const GridFunction& f, double R, double v) {
  const int d = f.dim();
  const auto offsets = lattice_ball_offsets(d, f.spacing(), R);
  std::vector<double> out(f.size(), 0.0);
  parallel_for(f.size(), [&](std::size_t b, std::size_t e) {
    std::vector<int> idx(static_cast<std::size_t>(d)), node(static_cast<std::size_t>(d));
    for (std::size_t i = b; i < e; ++i) {
      if (f.masked(i)) continue;
      f.unflatten(i, idx);
      double acc = 0.0, sup = 0.0;
      for (const auto& m : offsets) {
        bool ok = true;
        for (int k = 0; k < d; ++k) {
          node[static_cast<std::size_t>(k)] =
              idx[static_cast<std::size_t>(k)] + m[static_cast<std::size_t>(k)];
          if (node[static_cast<std::size_t>(k)] < 0 ||
              node[static_cast<std::size_t>(k)] >= f.grid().shape[k]) {
            ok = false;
            break;
          }
        }
        if (!ok) continue;
        const std::size_t flat = f.flat_index(node);
        if (f.masked(flat)) continue;
        const double a = std::abs(f.value(flat));
        if (v == kInfinity)
          sup = std::max(sup, a);
        else if (v == 1.0)
          acc += a;
        else if (v == 2.0)
          acc += a * a;
        else
          acc += std::pow(a, v);
      }
      out[i] = v == kInfinity ? sup : std::pow(acc * f.cell_volume(), 1.0 / v);
    }
  });
  return GridFunction(f.grid(), std::move(out), f.mask());
}

SeminormResult seminorm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
  if (sp.flavor == Flavor::HNDiscrete)
    throw ConfigError("seminorm: the discrete-scale flavor is computed by hn_discrete_norm");
  SeminormResult res;
  bool truncated = false;
  const auto levels = scale_levels(sp, dom, f.spacing(), &truncated);
  res.breakdown.truncated = truncated;
  if (truncated) res.flags["scale_truncated"] = 1.0;

  double empty = 0.0, clipped = 0.0, low = 0.0;
  for (int j : levels) {
    const double t = std::exp2(-j);
    GridFunction field = [&] {
      if (sp.flavor == Flavor::Diff) {
        auto r = diff_field(f, t, sp.v, sp.N, dom);
        empty += static_cast<double>(r.empty_count);
        clipped += static_cast<double>(r.clipped_count);
        return std::move(r.field);
      }
      auto r = osc_field(f, t, sp.v, sp.N, dom);
      low += static_cast<double>(r.low_sample_count);
      return std::move(r.field);
    }();
    const double a = outer_norm(field, sp, dom);
    res.breakdown.levels.push_back({j, t, a});
  }
  if (empty > 0) res.flags["empty_ball_means"] = empty;
  if (clipped > 0) res.flags["clipped_steps"] = clipped;
  if (low > 0) res.flags["low_sample_balls"] = low;
  res.value = aggregate(res.breakdown, sp.s, sp.q);
  return res;
}

MainTermResult main_term(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
  MainTermResult res;
  if (sp.main_variant == MainTermVariant::PlainMorrey) {
    res.value = outer_norm(f, sp, dom);
    return res;
  }
  if (!(sp.R >= f.spacing())) throw ConfigError("main_term: R below grid spacing");
  const GridFunction avg = v_average_field(f, sp.R, sp.v);
  res.value = outer_norm(avg, sp, dom);
  return res;
}

NormEntry full_norm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
  if (sp.flavor == Flavor::HNDiscrete) return hn_discrete_norm(f, sp, dom);
  NormEntry entry;
  auto mt = main_term(f, sp, dom);
  auto sn = seminorm(f, sp, dom);
  entry.main = mt.value;
  entry.semi = sn.value;
  entry.total = mt.value + sn.value;
  entry.breakdown = std::move(sn.breakdown);
  entry.flags = std::move(sn.flags);
  for (const auto& [k, v] : mt.flags) entry.flags[k] += v;
  return entry;
}

NormEntry hn_discrete_norm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom) {
  NormEntry entry;
  const double spacing = f.spacing();
  const double inv_v = sp.v == kInfinity ? 0.0 : 1.0 / sp.v;

  // Levels j >= 1 down to the resolution floor.
  std::vector<int> levels;
  for (int j = 1; std::exp2(-j) >= 4.0 * spacing; ++j) levels.push_back(j);
  if (levels.empty()) throw ScaleRangeEmpty("hn_discrete_norm: no scales below 1/2");

  // Unit-ball v-averaged main field.
  const GridFunction avg = v_average_field(f, 1.0, sp.v);

  // Unnormalized best-approximation error fields w_j = t_j^{d/v} osc(., t_j).
  std::vector<GridFunction> w_fields;
  std::size_t low = 0;
  for (int j : levels) {
    const double t = std::exp2(-j);
    auto r = osc_field(f, t, sp.v, sp.N, dom);
    low += r.low_sample_count;
    w_fields.push_back(r.field.scaled(std::pow(t, sp.d * inv_v)));
  }
  if (low > 0) entry.flags["low_sample_balls"] = static_cast<double>(low);
  entry.breakdown.weight_offset = sp.d * inv_v;

  if (sp.family == Family::BesovMorrey) {
    const auto radii = default_radius_set(dom, spacing);
    const MorreyParams mp = sp.morrey();
    const double m0 = morrey_ball_norm(avg, mp, dom, radii);
    double acc = 0.0, sup = m0;
    for (std::size_t li = 0; li < levels.size(); ++li) {
      const double a = morrey_ball_norm(w_fields[li], mp, dom, radii);
      entry.breakdown.levels.push_back({levels[li], std::exp2(-levels[li]), a});
      const double weighted = std::exp2(levels[li] * (sp.s + sp.d * inv_v)) * a;
      if (sp.q == kInfinity)
        sup = std::max(sup, weighted);
      else
        acc += std::pow(weighted, sp.q);
    }
    entry.main = m0;
    entry.semi = sp.q == kInfinity ? aggregate(entry.breakdown, sp.s, sp.q)
                                   : std::pow(acc, 1.0 / sp.q);
    entry.total = sp.q == kInfinity ? sup : std::pow(std::pow(m0, sp.q) + acc, 1.0 / sp.q);
    return entry;
  }

  // BesovType: sup over cubes of the full aggregate.
  const auto [j_min, j_max] = default_cube_levels(dom, spacing);
  double best = 0.0, best_main = 0.0;
  for_each_cube(dom, j_min, j_max, [&](const DyadicCube& cube) {
    const double weight = std::exp2(static_cast<double>(cube.level) * sp.d * sp.tau);
    const double m0 = local_lp_on_cube(avg, sp.p, cube, dom);
    double acc = 0.0, sup = m0;
    for (std::size_t li = 0; li < levels.size(); ++li) {
      // Here the t^{d/v} scaling cancels: the display integrates
      // osc(., 2^{-j}) directly with weights 2^{js}.
      const double lp = local_lp_on_cube(w_fields[li], sp.p, cube, dom) *
                        std::exp2(levels[li] * sp.d * inv_v);
      const double weighted = std::exp2(levels[li] * sp.s) * lp;
      if (sp.q == kInfinity)
        sup = std::max(sup, weighted);
      else
        acc += std::pow(weighted, sp.q);
    }
    const double value =
        weight * (sp.q == kInfinity ? sup : std::pow(std::pow(m0, sp.q) + acc, 1.0 / sp.q));
    if (value > best) {
      best = value;
      best_main = weight * m0;
    }
  });
  entry.total = best;
  entry.main = best_main;
  entry.semi = best;  // aggregate and sup are inseparable here
  return entry;
}

}  // namespace spacenorm
