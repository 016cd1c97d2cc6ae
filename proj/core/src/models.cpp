#include "kmu/models.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <tuple>

#include "kmu/error.hpp"
#include "kmu/io.hpp"
#include "kmu/kmeans.hpp"
#include "kmu/metrics.hpp"
#include "kmu/numeric.hpp"

namespace kmu {
namespace {

using std::numbers::pi;

constexpr double kNarrowSigma = 0.2;    // I/25 covariance
constexpr double kTruncationSds = 5.0;  // C2k3 radial truncation
constexpr double kBoundaryEps = 1e-12;

struct Component {
  std::array<double, 2> mean;
  double sigma;
};

struct Mixture {
  std::vector<Component> components;  // equal weights
  bool truncated = false;
};

Mixture gaussian_mixture(Family family) {
  const double h = std::sqrt(3.0) / 2.0;
  switch (family) {
    case Family::C1k2:
      return {{{{0.0, 0.0}, 1.0}}};
    case Family::C2k3:
      return {{{{-1.0, 0.0}, kNarrowSigma}, {{1.0, 0.0}, kNarrowSigma}}, true};
    case Family::TC3k2:
      return {{{{1.0, 0.0}, kNarrowSigma}, {{-0.5, h}, kNarrowSigma}, {{-0.5, -h}, kNarrowSigma}}};
    case Family::C2k2_1:
      return {{{{-1.0, 0.0}, kNarrowSigma}, {{1.0, 0.0}, kNarrowSigma}}};
    case Family::C2k2_2:
      return {{{{-1.5, 0.0}, 1.0}, {{1.5, 0.0}, 1.0}}};
    case Family::C2k2_3:
      return {{{{-1.0, 0.0}, 1.0}, {{1.0, 0.0}, 1.0}}};
    case Family::C3k3:
    case Family::C3k2:
      return {{{{-1.0, 0.0}, kNarrowSigma}, {{0.0, 0.0}, kNarrowSigma}, {{1.0, 0.0}, kNarrowSigma}}};
    case Family::UrC3k2:
      break;
  }
  throw ParameterError("not a Gaussian family");
}

// E||X||^2 over the first two coordinates.
double planar_second_moment(Family family) {
  const Mixture mix = gaussian_mixture(family);
  double total = 0.0;
  for (const auto& c : mix.components) {
    total += c.mean[0] * c.mean[0] + c.mean[1] * c.mean[1] + 2.0 * c.sigma * c.sigma;
  }
  return total / static_cast<double>(mix.components.size());
}

// E|X_1| for a mixture of normals centered on the first axis.
double mean_abs_first_coordinate(Family family) {
  const Mixture mix = gaussian_mixture(family);
  double total = 0.0;
  for (const auto& c : mix.components) {
    const double mu = c.mean[0];
    const double s = c.sigma;
    total += mu * (2.0 * normal_cdf(mu / s) - 1.0) + 2.0 * s * normal_pdf(mu / s);
  }
  return total / static_cast<double>(mix.components.size());
}

// Fraction of the I/25 radial truncation tail, exp(-25/2).
double truncation_tail() { return std::exp(-0.5 * kTruncationSds * kTruncationSds); }

// E||X - m||^2 for one radially truncated C2k3 component.
double c2k3_component_spread() {
  const double u = 0.5 * kTruncationSds * kTruncationSds;
  const double tail = truncation_tail();
  return 2.0 * kNarrowSigma * kNarrowSigma * (1.0 - (1.0 + u) * tail) / (1.0 - tail);
}

CenterSet symmetric_pair(double c, std::size_t dim) {
  return CenterSet(2, 2, {-c, 0.0, c, 0.0}).padded(dim);
}

using Transform = std::array<double, 4>;  // row-major 2x2

std::vector<Transform> symmetry_group(Family family) {
  if (family == Family::TC3k2) {
    std::vector<Transform> g;
    for (int i = 0; i < 3; ++i) {
      const double a = 2.0 * pi * i / 3.0;
      const double c = std::cos(a), s = std::sin(a);
      g.push_back({c, -s, s, c});
      g.push_back({c, s, s, -c});  // rotation after reflection y -> -y
    }
    return g;
  }
  return {{1, 0, 0, 1}, {-1, 0, 0, 1}, {1, 0, 0, -1}, {-1, 0, 0, -1}};
}

CenterSet transform_centers(const CenterSet& centers, const Transform& t) {
  std::vector<double> out;
  out.reserve(centers.size() * 2);
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto p = centers.center(i);
    out.push_back(t[0] * p[0] + t[1] * p[1]);
    out.push_back(t[2] * p[0] + t[3] * p[1]);
  }
  return CenterSet(centers.size(), 2, std::move(out));
}

struct PlanarCatalog {
  std::vector<CenterSet> sets;
  double wcss;
};

// Sampled oracle for the families without closed-form centers. The sample
// is closed under the model's symmetry group so that symmetric optima tie
// to rounding error, then the winning sets are closed under the group too.
PlanarCatalog numeric_oracle(Family family, const CatalogOptions& options) {
  const auto group = symmetry_group(family);
  const std::size_t base = (options.oracle_n + group.size() - 1) / group.size();
  const Dataset draws = sample(ModelSpec::make(family), base, RngStream(options.oracle_seed));

  std::vector<double> values;
  values.reserve(base * group.size() * 2);
  for (const auto& t : group) {
    for (std::size_t i = 0; i < base; ++i) {
      const auto p = draws.row(i);
      values.push_back(t[0] * p[0] + t[1] * p[1]);
      values.push_back(t[2] * p[0] + t[3] * p[1]);
    }
  }
  const Dataset data(base * group.size(), 2, std::move(values));

  const std::size_t k = family_k(family);
  const RngStream fits = RngStream(options.oracle_seed).split(1);
  std::vector<KMeansFit> optima;
  for (std::size_t r = 0; r < options.oracle_restarts; ++r) {
    optima.push_back(fit(data, k, 1, fits.split(r)));
  }
  const double best = std::min_element(optima.begin(), optima.end(), [](const auto& a, const auto& b) {
                        return a.wcss < b.wcss;
                      })->wcss;

  PlanarCatalog out{{}, best};
  auto add_unique = [&](const CenterSet& candidate) {
    for (const auto& s : out.sets) {
      if (hausdorff(s, candidate) < options.dedupe_distance) return;
    }
    out.sets.push_back(candidate);
  };
  for (const auto& f : optima) {
    if (f.wcss <= best * (1.0 + options.tie_tolerance)) add_unique(f.centers);
  }
  const std::size_t found = out.sets.size();
  for (std::size_t i = 0; i < found; ++i) {
    for (const auto& t : group) {
      const CenterSet image = transform_centers(out.sets[i], t);
      if (objective(data, image) <= best * (1.0 + options.tie_tolerance)) add_unique(image);
    }
  }
  return out;
}

const PlanarCatalog& cached_numeric_oracle(Family family, const CatalogOptions& options) {
  using Key = std::tuple<int, std::size_t, std::size_t, std::uint64_t, double, double>;
  static std::mutex mutex;
  static std::map<Key, PlanarCatalog> cache;
  const Key key{static_cast<int>(family), options.oracle_n, options.oracle_restarts,
                options.oracle_seed, options.tie_tolerance, options.dedupe_distance};
  std::lock_guard lock(mutex);
  auto it = cache.find(key);
  if (it == cache.end()) it = cache.emplace(key, numeric_oracle(family, options)).first;
  return it->second;
}

}  // namespace

std::string_view family_name(Family family) noexcept {
  switch (family) {
    case Family::UrC3k2: return "UrC3k2";
    case Family::C1k2: return "C1k2";
    case Family::C2k3: return "C2k3";
    case Family::TC3k2: return "TC3k2";
    case Family::C2k2_1: return "C2k2-1";
    case Family::C2k2_2: return "C2k2-2";
    case Family::C2k2_3: return "C2k2-3";
    case Family::C3k3: return "C3k3";
    case Family::C3k2: return "C3k2";
  }
  return "?";
}

Family parse_family(std::string_view name) {
  constexpr std::array all{Family::UrC3k2, Family::C1k2,   Family::C2k3,
                           Family::TC3k2,  Family::C2k2_1, Family::C2k2_2,
                           Family::C2k2_3, Family::C3k3,   Family::C3k2};
  std::string normalized(name);
  std::replace(normalized.begin(), normalized.end(), '_', '-');
  for (Family f : all) {
    if (normalized == family_name(f)) return f;
  }
  throw ParameterError("unknown model family: " + std::string(name));
}

std::size_t family_k(Family family) noexcept {
  switch (family) {
    case Family::C2k3:
    case Family::C3k3:
      return 3;
    default:
      return 2;
  }
}

std::size_t intrinsic_dim(Family family) noexcept { return family == Family::UrC3k2 ? 1 : 2; }

ModelSpec ModelSpec::make(Family family, double r, std::size_t dim) {
  ModelSpec spec;
  spec.family = family;
  spec.r = r;
  spec.dim = dim == 0 ? intrinsic_dim(family) : dim;
  spec.k = family_k(family);
  return spec;
}

void ModelSpec::validate() const {
  if (family == Family::UrC3k2) {
    if (!(r >= 0.0 && r <= 0.5)) throw ParameterError("UrC3k2 requires 0 <= r <= 1/2");
    if (dim != 1) throw ParameterError("UrC3k2 is one-dimensional");
  } else if (dim < 2) {
    throw ParameterError(std::string(family_name(family)) + " requires dim >= 2");
  }
  if (k != family_k(family)) {
    throw ParameterError(std::string(family_name(family)) + " is studied with k = " +
                         std::to_string(family_k(family)));
  }
}

std::string ModelSpec::name() const {
  std::string out;
  if (family == Family::UrC3k2) {
    out = "U" + format_short(r) + "C3k2";
  } else {
    out = std::string(family_name(family));
  }
  if (dim != intrinsic_dim(family)) out += "_d" + std::to_string(dim);
  return out;
}

double urc3k2_phase_boundary() noexcept { return 3.0 * std::numbers::sqrt2 - 4.0; }

bool urc3k2_at_boundary(double r) noexcept {
  return std::fabs(r - urc3k2_phase_boundary()) < kBoundaryEps;
}

double urc3k2_wcss_lower_branch(double r) noexcept { return (2.0 * r * r + 1.0) / 6.0; }

double urc3k2_wcss_upper_branch(double r) noexcept { return (11.0 * r * r - 8.0 * r + 8.0) / 36.0; }

double urc3k2_population_wcss(double r) {
  if (!(r >= 0.0 && r <= 0.5)) throw ParameterError("UrC3k2 requires 0 <= r <= 1/2");
  if (r < urc3k2_phase_boundary() || urc3k2_at_boundary(r)) return urc3k2_wcss_lower_branch(r);
  return urc3k2_wcss_upper_branch(r);
}

double c2k2_1_offset() noexcept {
  return std::exp(-12.5) / 15.0 * std::sqrt(2.0 / pi) + 2.0 * normal_cdf(5.0) - 1.0;
}

double c2k2_2_offset() noexcept {
  return std::exp(-9.0 / 8.0) * std::sqrt(2.0 / pi) + 1.5 * (2.0 * normal_cdf(1.5) - 1.0);
}

double c2k2_3_offset() noexcept {
  return std::sqrt(2.0 / (std::numbers::e * pi)) + 2.0 * normal_cdf(1.0) - 1.0;
}

double c3k2_offset() noexcept {
  return (10.0 * (2.0 * normal_cdf(5.0) - 1.0) +
          std::sqrt(2.0 / pi) * (1.0 + 2.0 * std::exp(-12.5))) /
         15.0;
}

double c1k2_radius() noexcept { return std::sqrt(2.0 / pi); }

double c2k3_radius() noexcept {
  const double tail = truncation_tail();
  const double truncated_mean_radius =
      kNarrowSigma * (std::sqrt(pi / 2.0) * (2.0 * normal_cdf(kTruncationSds) - 1.0) -
                      kTruncationSds * tail) /
      (1.0 - tail);
  return 2.0 / pi * truncated_mean_radius;
}

Dataset sample(const ModelSpec& spec, std::size_t n, RngStream stream) {
  spec.validate();
  if (n == 0) throw ParameterError("sample size must be at least 1");
  Rng rng(stream);
  std::vector<double> values;
  values.reserve(n * spec.dim);

  if (spec.family == Family::UrC3k2) {
    for (std::size_t i = 0; i < n; ++i) {
      const double center = static_cast<double>(rng.below(3)) - 1.0;
      values.push_back(center + spec.r * (2.0 * rng.uniform() - 1.0));
    }
    return Dataset(n, 1, std::move(values));
  }

  const Mixture mix = gaussian_mixture(spec.family);
  const double limit2 = kTruncationSds * kTruncationSds;
  for (std::size_t i = 0; i < n; ++i) {
    const Component& c = mix.components[rng.below(mix.components.size())];
    double z1, z2;
    do {
      z1 = rng.normal();
      z2 = rng.normal();
    } while (mix.truncated && z1 * z1 + z2 * z2 > limit2);
    values.push_back(c.mean[0] + c.sigma * z1);
    values.push_back(c.mean[1] + c.sigma * z2);
    for (std::size_t j = 2; j < spec.dim; ++j) values.push_back(rng.normal());
  }
  return Dataset(n, spec.dim, std::move(values));
}

std::string_view multiplicity_name(Multiplicity m) noexcept {
  switch (m) {
    case Multiplicity::Unique: return "UNIQUE";
    case Multiplicity::Dnu: return "DNU";
    case Multiplicity::Cnu: return "CNU";
  }
  return "?";
}

std::string_view catalog_kind_name(CatalogKind k) noexcept {
  switch (k) {
    case CatalogKind::ClosedForm: return "CLOSED_FORM";
    case CatalogKind::Numeric: return "NUMERIC";
    case CatalogKind::ParametricOrbit: return "PARAMETRIC_ORBIT";
  }
  return "?";
}

CenterSet CatalogEntry::at(double angle) const {
  if (orbit) return orbit(angle);
  return *centers;
}

bool PopulationCatalog::has_orbit() const noexcept {
  return std::any_of(entries.begin(), entries.end(), [](const auto& e) { return e.is_orbit(); });
}

PopulationCatalog population_catalog(const ModelSpec& spec, const CatalogOptions& options) {
  spec.validate();
  PopulationCatalog cat;
  const std::size_t dim = spec.dim;
  const double extra = static_cast<double>(dim) - 2.0;  // variance of padded coordinates

  auto fixed = [](CenterSet c) {
    CatalogEntry e;
    e.centers = std::move(c);
    return e;
  };

  switch (spec.family) {
    case Family::UrC3k2: {
      const double r = spec.r;
      cat.wcss = urc3k2_population_wcss(r);
      if (r < urc3k2_phase_boundary() || urc3k2_at_boundary(r)) {
        cat.entries.push_back(fixed(CenterSet(2, 1, {-1.0, 0.5})));
        cat.entries.push_back(fixed(CenterSet(2, 1, {-0.5, 1.0})));
        if (urc3k2_at_boundary(r)) {
          const double s = 1.0 / std::numbers::sqrt2;
          cat.entries.push_back(fixed(CenterSet(2, 1, {-s, s})));
        }
        cat.multiplicity = Multiplicity::Dnu;
      } else {
        const double c = (4.0 + r) / 6.0;
        cat.entries.push_back(fixed(CenterSet(2, 1, {-c, c})));
        cat.multiplicity = Multiplicity::Unique;
      }
      cat.kind = CatalogKind::ClosedForm;
      return cat;
    }
    case Family::C1k2: {
      const double rho = c1k2_radius();
      CatalogEntry e;
      e.orbit = [rho, dim](double a) {
        const double x = rho * std::cos(a), y = rho * std::sin(a);
        return CenterSet(2, 2, {x, y, -x, -y}).padded(dim);
      };
      e.orbit_description = "antipodal pairs on the circle of radius " + format_double(rho) +
                            " about the origin";
      cat.entries.push_back(std::move(e));
      cat.wcss = 2.0 - rho * rho + extra;
      cat.kind = CatalogKind::ParametricOrbit;
      cat.multiplicity = Multiplicity::Cnu;
      return cat;
    }
    case Family::C2k3: {
      const double rho = c2k3_radius();
      for (double pivot : {-1.0, 1.0}) {
        CatalogEntry e;
        e.orbit = [rho, pivot, dim](double a) {
          const double x = rho * std::cos(a), y = rho * std::sin(a);
          return CenterSet(3, 2, {pivot + x, y, pivot - x, -y, -pivot, 0.0}).padded(dim);
        };
        e.orbit_description = "antipodal pairs on the circle of radius " + format_double(rho) +
                              " about (" + format_short(pivot) + ", 0) plus the center (" +
                              format_short(-pivot) + ", 0)";
        cat.entries.push_back(std::move(e));
      }
      const double spread = c2k3_component_spread();
      cat.wcss = spread - 0.5 * rho * rho + extra;
      cat.kind = CatalogKind::ParametricOrbit;
      cat.multiplicity = Multiplicity::Cnu;
      return cat;
    }
    case Family::C2k2_1:
    case Family::C2k2_2:
    case Family::C2k2_3:
    case Family::C3k2: {
      double c = 0.0;
      switch (spec.family) {
        case Family::C2k2_1: c = c2k2_1_offset(); break;
        case Family::C2k2_2: c = c2k2_2_offset(); break;
        case Family::C2k2_3: c = c2k2_3_offset(); break;
        default: c = c3k2_offset(); break;
      }
      cat.entries.push_back(fixed(symmetric_pair(c, dim)));
      // Objective at (+-c, 0): E||X||^2 - 2 c E|X_1| + c^2.
      cat.wcss = planar_second_moment(spec.family) - 2.0 * c * mean_abs_first_coordinate(spec.family) +
                 c * c + extra;
      cat.kind = CatalogKind::ClosedForm;
      cat.multiplicity = Multiplicity::Unique;
      return cat;
    }
    case Family::TC3k2:
    case Family::C3k3: {
      const PlanarCatalog& planar = cached_numeric_oracle(spec.family, options);
      for (const auto& s : planar.sets) cat.entries.push_back(fixed(s.padded(dim)));
      cat.wcss = planar.wcss + extra;
      cat.kind = CatalogKind::Numeric;
      cat.multiplicity = cat.entries.size() > 1 ? Multiplicity::Dnu : Multiplicity::Unique;
      cat.oracle_seed = options.oracle_seed;
      cat.oracle_n = options.oracle_n;
      cat.oracle_restarts = options.oracle_restarts;
      return cat;
    }
  }
  throw ParameterError("unknown model family");
}

bool MonteCarloEstimate::has_standard_error() const noexcept {
  return draws >= 2 && std::isfinite(standard_error);
}

MonteCarloEstimate expected_min_squared_distance(const ModelSpec& spec, const CenterSet& centers,
                                                 std::size_t n_mc, RngStream stream) {
  spec.validate();
  if (n_mc == 0) throw ParameterError("n_mc must be at least 1");
  if (centers.dim() != spec.dim) throw ShapeError("centers do not match the model dimension");
  constexpr std::size_t kBlock = 1 << 16;
  Moments moments;
  for (std::size_t block = 0, done = 0; done < n_mc; ++block) {
    const std::size_t m = std::min(kBlock, n_mc - done);
    const Dataset draws = sample(spec, m, stream.split(block));
    Moments local;
    for (std::size_t i = 0; i < m; ++i) {
      double best = std::numeric_limits<double>::infinity();
      for (std::size_t c = 0; c < centers.size(); ++c) {
        best = std::min(best, squared_distance(draws.row(i), centers.center(c)));
      }
      local.add(best);
    }
    moments.merge(local);
    done += m;
  }
  MonteCarloEstimate out;
  out.value = moments.mean();
  out.draws = n_mc;
  out.standard_error = n_mc >= 2 ? moments.sd() / std::sqrt(static_cast<double>(n_mc))
                                 : std::numeric_limits<double>::quiet_NaN();
  return out;
}

MonteCarloEstimate population_wcss_numeric(const ModelSpec& spec, std::size_t n_mc,
                                           RngStream stream, std::size_t entry,
                                           const CatalogOptions& options) {
  const PopulationCatalog cat = population_catalog(spec, options);
  if (entry >= cat.entries.size()) {
    throw UnsupportedError("catalog has no evaluable entry " + std::to_string(entry));
  }
  return expected_min_squared_distance(spec, cat.entries[entry].at(0.0), n_mc, stream);
}

}  // namespace kmu
