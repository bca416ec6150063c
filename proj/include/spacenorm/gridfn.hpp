#ifndef SPACENORM_GRIDFN_HPP
#define SPACENORM_GRIDFN_HPP

#include <cassert>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "spacenorm/errors.hpp"
#include "spacenorm/geometry.hpp"

namespace spacenorm {

/// Uniform isotropic tensor grid: node i has coordinate origin + i * spacing.
struct GridDescriptor {
  std::vector<int> shape;
  std::vector<double> origin;
  double spacing = 1.0;

  int dim() const { return static_cast<int>(shape.size()); }
  std::size_t size() const;
  Box bounding_box() const;

  /// Grid covering `box` with `n` nodes along the longest axis, node 0 at
  /// box.lo and the last node at box.hi (spacing = extent / (n - 1)).
  static GridDescriptor covering(const Box& box, int n);
};

/// Samples of a function on a grid with a domain-membership mask. Immutable
/// after construction; masked entries are never handed out by value().
class GridFunction {
 public:
  GridFunction(GridDescriptor grid, std::vector<double> values, std::vector<std::uint8_t> mask);

  const GridDescriptor& grid() const { return grid_; }
  int dim() const { return grid_.dim(); }
  double spacing() const { return grid_.spacing; }
  std::size_t size() const { return values_.size(); }
  /// Cell volume h^d.
  double cell_volume() const { return cell_volume_; }

  bool masked(std::size_t flat) const { return mask_[flat] == 0; }
  double value(std::size_t flat) const {
    assert(mask_[flat] != 0 && "masked entry read");
    return values_[flat];
  }

  std::size_t flat_index(std::span<const int> idx) const;
  void unflatten(std::size_t flat, std::span<int> idx) const;
  bool in_bounds(std::span<const int> idx) const;
  void point(std::span<const int> idx, std::span<double> out) const;
  std::vector<double> point_of(std::size_t flat) const;

  /// Nearest grid node to y (indices clamped into range).
  std::vector<int> nearest_index(std::span<const double> y) const;

  const std::vector<double>& values() const { return values_; }
  const std::vector<std::uint8_t>& mask() const { return mask_; }
  const std::vector<std::size_t>& strides() const { return strides_; }

  GridFunction scaled(double c) const;

  void save(const std::string& path) const;
  static GridFunction load(const std::string& path);
  void export_csv(const std::string& path) const;  // d <= 2

 private:
  GridDescriptor grid_;
  std::vector<double> values_;
  std::vector<std::uint8_t> mask_;
  std::vector<std::size_t> strides_;
  double cell_volume_;
};

enum class TestFamily { Polynomial, Gaussian, StepIndicator, Cusp, BandLimited };

/// Analytic test functions with known smoothness, used throughout the
/// experiment corpus.
struct TestFunctionSpec {
  TestFamily family = TestFamily::Gaussian;
  std::string name;

  // Polynomial: sum of coeffs[i] * prod_k y_k^{exponents[i][k]}
  std::vector<std::vector<int>> exponents;
  std::vector<double> coeffs;

  // Gaussian: exp(-|y - center|^2 / (2 width^2))
  std::vector<double> center;
  double width = 1.0;

  // StepIndicator: characteristic function of `box`
  Box step_box;

  // Cusp: |y - center|^alpha * bump(|y - center| / cutoff)
  double cusp_alpha = 0.5;
  double cusp_cutoff = 1.0;

  // BandLimited: 16-periodic finite cosine series with a smooth spectral
  // rolloff, spectrum inside [-cutoff_frequency, cutoff_frequency]
  // (tensor product over axes)
  double cutoff_frequency = 4.0;

  /// Known Besov smoothness threshold, when one applies (used by scans).
  double analytic_regularity = -1.0;

  double evaluate(std::span<const double> y) const;

  std::string to_json() const;
  static TestFunctionSpec from_json(const std::string& text);

  static TestFunctionSpec polynomial(std::vector<std::vector<int>> exps, std::vector<double> cs);
  static TestFunctionSpec gaussian(std::vector<double> center, double width);
  static TestFunctionSpec step_indicator(Box box);
  static TestFunctionSpec cusp(double alpha, double cutoff, std::vector<double> center = {});
  static TestFunctionSpec band_limited(double cutoff_frequency);
};

/// Pointwise evaluation on the grid; mask = Omega membership.
GridFunction sample(const TestFunctionSpec& spec, const GridDescriptor& grid,
                    const DomainSpec& dom);

/// (normalizer^{-1} sum_points |g|^v h^d)^{1/v}; v = infinity gives the max
/// of |g| over the points. Empty point lists give 0.
double riemann_mean(const GridFunction& g, std::span<const std::size_t> points, double normalizer,
                    double v);

/// Same reduction over an explicit value list (plus the grid cell volume).
double riemann_mean_values(std::span<const double> vals, double cell_volume, double normalizer,
                           double v);

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace spacenorm

#endif
