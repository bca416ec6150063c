#include "spacenorm/gridfn.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numbers>

#include "json.hpp"

namespace spacenorm {

using nlohmann::json;

std::size_t GridDescriptor::size() const {
  std::size_t n = 1;
  for (int s : shape) n *= static_cast<std::size_t>(s);
  return n;
}

Box GridDescriptor::bounding_box() const {
  Box b;
  for (int i = 0; i < dim(); ++i) {
    b.lo.push_back(origin[i] - 0.5 * spacing);
    b.hi.push_back(origin[i] + (shape[i] - 0.5) * spacing);
  }
  return b;
}

GridDescriptor GridDescriptor::covering(const Box& box, int n) {
  if (n < 2) throw ConfigError("grid needs at least 2 nodes");
  GridDescriptor g;
  g.spacing = box.max_extent() / n;
  for (int i = 0; i < box.dim(); ++i) {
    const int ni = std::max(1, static_cast<int>(std::llround(box.extent(i) / g.spacing)));
    g.shape.push_back(ni);
    // cell-centered nodes: lo + (i + 1/2) h
    g.origin.push_back(box.lo[i] + 0.5 * g.spacing);
  }
  return g;
}

GridFunction::GridFunction(GridDescriptor grid, std::vector<double> values,
                           std::vector<std::uint8_t> mask)
    : grid_(std::move(grid)), values_(std::move(values)), mask_(std::move(mask)) {
  if (grid_.shape.empty()) throw ConfigError("grid shape is empty");
  if (!(grid_.spacing > 0)) throw ConfigError("grid spacing must be positive");
  if (values_.size() != grid_.size() || mask_.size() != values_.size())
    throw ConfigError("values/mask shape mismatch");
  strides_.assign(grid_.shape.size(), 1);
  for (int k = grid_.dim() - 2; k >= 0; --k)
    strides_[k] = strides_[k + 1] * static_cast<std::size_t>(grid_.shape[k + 1]);
  cell_volume_ = std::pow(grid_.spacing, grid_.dim());
}

std::size_t GridFunction::flat_index(std::span<const int> idx) const {
  std::size_t f = 0;
  for (int k = 0; k < dim(); ++k) f += static_cast<std::size_t>(idx[k]) * strides_[k];
  return f;
}

void GridFunction::unflatten(std::size_t flat, std::span<int> idx) const {
  for (int k = 0; k < dim(); ++k) {
    idx[k] = static_cast<int>(flat / strides_[k]);
    flat %= strides_[k];
  }
}

bool GridFunction::in_bounds(std::span<const int> idx) const {
  for (int k = 0; k < dim(); ++k)
    if (idx[k] < 0 || idx[k] >= grid_.shape[k]) return false;
  return true;
}

void GridFunction::point(std::span<const int> idx, std::span<double> out) const {
  for (int k = 0; k < dim(); ++k) out[k] = grid_.origin[k] + idx[k] * grid_.spacing;
}

std::vector<double> GridFunction::point_of(std::size_t flat) const {
  std::vector<int> idx(dim());
  unflatten(flat, idx);
  std::vector<double> p(dim());
  point(idx, p);
  return p;
}

std::vector<int> GridFunction::nearest_index(std::span<const double> y) const {
  std::vector<int> idx(dim());
  for (int k = 0; k < dim(); ++k) {
    int i = static_cast<int>(std::llround((y[k] - grid_.origin[k]) / grid_.spacing));
    idx[k] = std::clamp(i, 0, grid_.shape[k] - 1);
  }
  return idx;
}

GridFunction GridFunction::scaled(double c) const {
  std::vector<double> v(values_.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c * values_[i];
  return GridFunction(grid_, std::move(v), mask_);
}

namespace {

template <class T>
void write_pod(std::ofstream& os, const T& x) {
  os.write(reinterpret_cast<const char*>(&x), sizeof(T));
}

template <class T>
T read_pod(std::ifstream& is) {
  T x;
  is.read(reinterpret_cast<char*>(&x), sizeof(T));
  return x;
}

}  // namespace

void GridFunction::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.write("SNGF", 4);
  write_pod<std::uint32_t>(os, 1);  // format version
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(dim()));
  for (int s : grid_.shape) write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s));
  for (double o : grid_.origin) write_pod<double>(os, o);
  write_pod<double>(os, grid_.spacing);
  os.write(reinterpret_cast<const char*>(values_.data()),
           static_cast<std::streamsize>(values_.size() * sizeof(double)));
  os.write(reinterpret_cast<const char*>(mask_.data()),
           static_cast<std::streamsize>(mask_.size()));
}

GridFunction GridFunction::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw Error("cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (std::memcmp(magic, "SNGF", 4) != 0) throw Error("bad magic in " + path);
  if (read_pod<std::uint32_t>(is) != 1) throw Error("unsupported format version");
  const auto d = read_pod<std::uint32_t>(is);
  GridDescriptor g;
  for (std::uint32_t i = 0; i < d; ++i)
    g.shape.push_back(static_cast<int>(read_pod<std::uint32_t>(is)));
  for (std::uint32_t i = 0; i < d; ++i) g.origin.push_back(read_pod<double>(is));
  g.spacing = read_pod<double>(is);
  const std::size_t n = g.size();
  std::vector<double> values(n);
  std::vector<std::uint8_t> mask(n);
  is.read(reinterpret_cast<char*>(values.data()), static_cast<std::streamsize>(n * sizeof(double)));
  is.read(reinterpret_cast<char*>(mask.data()), static_cast<std::streamsize>(n));
  if (!is) throw Error("truncated file: " + path);
  return GridFunction(std::move(g), std::move(values), std::move(mask));
}

void GridFunction::export_csv(const std::string& path) const {
  if (dim() > 2) throw Error("csv export supports d <= 2");
  std::ofstream os(path);
  if (!os) throw Error("cannot open " + path + " for writing");
  os.precision(17);
  if (dim() == 1) {
    os << "x,value,mask\n";
    for (std::size_t i = 0; i < size(); ++i)
      os << grid_.origin[0] + static_cast<double>(i) * grid_.spacing << ','
         << values_[i] << ',' << int(mask_[i]) << '\n';
  } else {
    os << "x,y,value,mask\n";
    std::vector<int> idx(2);
    for (std::size_t f = 0; f < size(); ++f) {
      unflatten(f, idx);
      os << grid_.origin[0] + idx[0] * grid_.spacing << ','
         << grid_.origin[1] + idx[1] * grid_.spacing << ',' << values_[f] << ','
         << int(mask_[f]) << '\n';
    }
  }
}

namespace {

double smooth_bump(double u) {
  // C^inf bump on (-1,1), value 1 at 0.
  const double u2 = u * u;
  if (u2 >= 1.0) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - u2));
}

double band_limited_profile(double x, double cutoff, double period) {
  // Finite cosine series with frequencies quantized to `period`, amplitudes
  // rolled off smoothly below `cutoff`. Exactly band-limited and periodic.
  const double base = 2.0 * std::numbers::pi / period;
  double s = 0.0;
  for (int m = 0; base * m <= cutoff; ++m) {
    const double xi = base * m;
    const double amp = std::exp(-2.0 * (xi / cutoff) * (xi / cutoff)) *
                       (1.0 + 0.3 * std::sin(3.7 * m));
    const double phase = 0.4 * m * m;
    s += amp * std::cos(xi * x + phase);
  }
  return s;
}

}  // namespace

double TestFunctionSpec::evaluate(std::span<const double> y) const {
  switch (family) {
    case TestFamily::Polynomial: {
      double s = 0.0;
      for (std::size_t i = 0; i < coeffs.size(); ++i) {
        double term = coeffs[i];
        for (std::size_t k = 0; k < exponents[i].size(); ++k)
          for (int e = 0; e < exponents[i][k]; ++e) term *= y[k];
        s += term;
      }
      return s;
    }
    case TestFamily::Gaussian: {
      double r2 = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) {
        const double c = k < center.size() ? center[k] : 0.0;
        r2 += (y[k] - c) * (y[k] - c);
      }
      return std::exp(-r2 / (2.0 * width * width));
    }
    case TestFamily::StepIndicator:
      return step_box.contains_closed(y) ? 1.0 : 0.0;
    case TestFamily::Cusp: {
      double r2 = 0.0;
      for (std::size_t k = 0; k < y.size(); ++k) {
        const double c = k < center.size() ? center[k] : 0.0;
        r2 += (y[k] - c) * (y[k] - c);
      }
      const double r = std::sqrt(r2);
      return std::pow(r, cusp_alpha) * smooth_bump(r / cusp_cutoff);
    }
    case TestFamily::BandLimited: {
      double s = 1.0;
      for (double yi : y) s *= band_limited_profile(yi, cutoff_frequency, 16.0);
      return s;
    }
  }
  return 0.0;
}

TestFunctionSpec TestFunctionSpec::polynomial(std::vector<std::vector<int>> exps,
                                              std::vector<double> cs) {
  TestFunctionSpec s;
  s.family = TestFamily::Polynomial;
  s.exponents = std::move(exps);
  s.coeffs = std::move(cs);
  s.name = "polynomial";
  return s;
}

TestFunctionSpec TestFunctionSpec::gaussian(std::vector<double> center, double width) {
  TestFunctionSpec s;
  s.family = TestFamily::Gaussian;
  s.center = std::move(center);
  s.width = width;
  s.name = "gaussian";
  return s;
}

TestFunctionSpec TestFunctionSpec::step_indicator(Box box) {
  TestFunctionSpec s;
  s.family = TestFamily::StepIndicator;
  s.step_box = std::move(box);
  s.name = "step";
  return s;
}

TestFunctionSpec TestFunctionSpec::cusp(double alpha, double cutoff, std::vector<double> center) {
  if (!(alpha > 0)) throw ConfigError("cusp exponent must be positive");
  TestFunctionSpec s;
  s.family = TestFamily::Cusp;
  s.cusp_alpha = alpha;
  s.cusp_cutoff = cutoff;
  s.center = std::move(center);
  s.name = "cusp";
  return s;
}

TestFunctionSpec TestFunctionSpec::band_limited(double cutoff_frequency) {
  TestFunctionSpec s;
  s.family = TestFamily::BandLimited;
  s.cutoff_frequency = cutoff_frequency;
  s.name = "bandlimited";
  return s;
}

std::string TestFunctionSpec::to_json() const {
  json j;
  j["name"] = name;
  switch (family) {
    case TestFamily::Polynomial:
      j["family"] = "polynomial";
      j["exponents"] = exponents;
      j["coeffs"] = coeffs;
      break;
    case TestFamily::Gaussian:
      j["family"] = "gaussian";
      j["center"] = center;
      j["width"] = width;
      break;
    case TestFamily::StepIndicator:
      j["family"] = "step_indicator";
      j["box"] = {{"lo", step_box.lo}, {"hi", step_box.hi}};
      break;
    case TestFamily::Cusp:
      j["family"] = "cusp";
      j["alpha"] = cusp_alpha;
      j["cutoff"] = cusp_cutoff;
      j["center"] = center;
      break;
    case TestFamily::BandLimited:
      j["family"] = "band_limited";
      j["cutoff_frequency"] = cutoff_frequency;
      break;
  }
  if (analytic_regularity >= 0) j["analytic_regularity"] = analytic_regularity;
  return j.dump();
}

TestFunctionSpec TestFunctionSpec::from_json(const std::string& text) {
  json j = json::parse(text);
  const std::string fam = j.at("family").get<std::string>();
  TestFunctionSpec s;
  if (fam == "polynomial")
    s = polynomial(j.at("exponents").get<std::vector<std::vector<int>>>(),
                   j.at("coeffs").get<std::vector<double>>());
  else if (fam == "gaussian")
    s = gaussian(j.at("center").get<std::vector<double>>(), j.at("width").get<double>());
  else if (fam == "step_indicator") {
    Box b;
    b.lo = j.at("box").at("lo").get<std::vector<double>>();
    b.hi = j.at("box").at("hi").get<std::vector<double>>();
    s = step_indicator(std::move(b));
  } else if (fam == "cusp")
    s = cusp(j.at("alpha").get<double>(), j.at("cutoff").get<double>(),
             j.value("center", std::vector<double>{}));
  else if (fam == "band_limited")
    s = band_limited(j.at("cutoff_frequency").get<double>());
  else
    throw ConfigError("unknown test function family: " + fam);
  s.name = j.value("name", s.name);
  s.analytic_regularity = j.value("analytic_regularity", -1.0);
  return s;
}

GridFunction sample(const TestFunctionSpec& spec, const GridDescriptor& grid,
                    const DomainSpec& dom) {
  const std::size_t n = grid.size();
  std::vector<double> values(n);
  std::vector<std::uint8_t> mask(n);
  const int d = grid.dim();
  std::vector<int> idx(d, 0);
  std::vector<double> y(d);
  for (std::size_t f = 0; f < n; ++f) {
    for (int k = 0; k < d; ++k) y[k] = grid.origin[k] + idx[k] * grid.spacing;
    const bool inside = contains(dom, y);
    mask[f] = inside ? 1 : 0;
    values[f] = inside ? spec.evaluate(y) : 0.0;
    int axis = d - 1;
    while (axis >= 0 && ++idx[axis] == grid.shape[axis]) {
      idx[axis] = 0;
      --axis;
    }
  }
  return GridFunction(grid, std::move(values), std::move(mask));
}

double riemann_mean_values(std::span<const double> vals, double cell_volume, double normalizer,
                           double v) {
  if (vals.empty()) return 0.0;
  if (v == kInfinity) {
    double m = 0.0;
    for (double x : vals) m = std::max(m, std::abs(x));
    return m;
  }
  if (!(normalizer > 0)) throw NonpositiveNormalizer("riemann_mean");
  if (!(v > 0)) throw ConfigError("riemann_mean: v must be positive");
  double s = 0.0;
  for (double x : vals) s += std::pow(std::abs(x), v);
  return std::pow(s * cell_volume / normalizer, 1.0 / v);
}

double riemann_mean(const GridFunction& g, std::span<const std::size_t> points, double normalizer,
                    double v) {
  if (points.empty()) return 0.0;
  if (v == kInfinity) {
    double m = 0.0;
    for (std::size_t p : points) m = std::max(m, std::abs(g.value(p)));
    return m;
  }
  if (!(normalizer > 0)) throw NonpositiveNormalizer("riemann_mean");
  if (!(v > 0)) throw ConfigError("riemann_mean: v must be positive");
  double s = 0.0;
  for (std::size_t p : points) s += std::pow(std::abs(g.value(p)), v);
  return std::pow(s * g.cell_volume() / normalizer, 1.0 / v);
}

}  // namespace spacenorm
