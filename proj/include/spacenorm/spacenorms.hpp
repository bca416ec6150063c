#ifndef SPACENORM_SPACENORMS_HPP
#define SPACENORM_SPACENORMS_HPP

#include <map>
#include <string>
#include <vector>

#include "spacenorm/geometry.hpp"
#include "spacenorm/gridfn.hpp"
#include "spacenorm/morrey.hpp"

namespace spacenorm {

enum class Family { BesovMorrey, BesovType };
enum class Flavor { Osc, Diff, HNDiscrete };
enum class MainTermVariant { PlainMorrey, VAveraged };

std::string to_string(Family f);
std::string to_string(Flavor f);
std::string to_string(MainTermVariant m);

/// Full parameter tuple of one quasi-norm. BesovMorrey carries u (p <= u),
/// BesovType carries tau in [0, 1/p); the other slot is derived through
/// 1/u = 1/p - tau.
struct SpaceParams {
  int d = 1;
  double s = 0.5;
  double p = 2.0;
  double q = 2.0;
  double v = 2.0;
  Family family = Family::BesovMorrey;
  double u = 2.0;
  double tau = 0.0;
  int N = 1;
  double T = 1.0;
  double R = 1.0;
  Flavor flavor = Flavor::Osc;
  MainTermVariant main_variant = MainTermVariant::VAveraged;

  static SpaceParams besov_morrey(int d, double s, double p, double u, double q, double v, int N,
                                  double T, double R);
  static SpaceParams besov_type(int d, double s, double p, double tau, double q, double v, int N,
                                double T, double R);

  double sigma_p() const;
  /// d * max{0, 1/p - 1, 1/p - 1/v}, the lower edge of the theorem window.
  double smoothness_lower_bound() const;
  MorreyParams morrey() const;

  std::string to_json() const;
  static SpaceParams from_json(const std::string& text);
};

struct ValidityClause {
  std::string name;
  bool satisfied = true;
  std::string detail;
};

struct HypothesisReport {
  std::vector<ValidityClause> clauses;
  bool core_ok = true;  // parameter ranges plus the smoothness window
};

/// Checks the parameter hypotheses clause by clause; never blocks.
HypothesisReport validate(const SpaceParams& sp);

/// Per-scale values a_j at t_j = 2^{-j} before the 2^{jsq} weights.
struct ScaleBreakdown {
  struct Level {
    int j = 0;
    double t = 0.0;
    double a = 0.0;
  };
  std::vector<Level> levels;
  /// extra weight exponent: aggregate uses 2^{j (s + offset) q}
  double weight_offset = 0.0;
  bool truncated = false;  // T exceeded the representable scales
};

/// (sum_j 2^{j(s+offset)q} a_j^q)^{1/q}, sup-modification for q = infinity.
double aggregate(const ScaleBreakdown& br, double s, double q);

using Flags = std::map<std::string, double>;

struct SeminormResult {
  double value = 0.0;
  ScaleBreakdown breakdown;
  Flags flags;
};

/// Scale-aggregated seminorm: per level, the inner field (oscillation or
/// difference ball means at t_j) measured in the outer norm (Morrey ball
/// norm or tau-weighted cube sup), then the weighted l_q sum over levels.
SeminormResult seminorm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom);

struct MainTermResult {
  double value = 0.0;
  Flags flags;
};

MainTermResult main_term(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom);

struct NormEntry {
  double main = 0.0;
  double semi = 0.0;
  double total = 0.0;
  ScaleBreakdown breakdown;
  Flags flags;
};

/// main_term + seminorm (HNDiscrete combines them inside the q-sum).
NormEntry full_norm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom);

/// Discrete-scale norm: v-averaged unit-ball main term and unnormalized
/// best-approximation errors over B(., 2^{-j}) with weights 2^{j(s + d/v)},
/// all inside one l_q aggregate (cube-sup outside for BesovType).
NormEntry hn_discrete_norm(const GridFunction& f, const SpaceParams& sp, const DomainSpec& dom);

/// Dyadic levels t_j = 2^{-j} in [4 spacing, min(T, representable)].
std::vector<int> scale_levels(const SpaceParams& sp, const DomainSpec& dom, double spacing,
                              bool* truncated = nullptr);

/// Outer norm dispatch: Morrey ball norm (BesovMorrey) or tau-weighted
/// dyadic cube sup (BesovType).
double outer_norm(const GridFunction& g, const SpaceParams& sp, const DomainSpec& dom);

/// x -> (int_{B(x,R) cap Omega} |f|^v)^{1/v} (unnormalized; sup for v = inf).
GridFunction v_average_field(const GridFunction& f, double R, double v);

}  // namespace spacenorm

#endif
