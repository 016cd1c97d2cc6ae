#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "kmu/dataset.hpp"
#include "kmu/rng.hpp"

namespace kmu {

/// The nine generative models. Names follow the "C<i>k<j>" convention:
/// a mixture of i components studied with k = j centers.
enum class Family { UrC3k2, C1k2, C2k3, TC3k2, C2k2_1, C2k2_2, C2k2_3, C3k3, C3k2 };

std::string_view family_name(Family family) noexcept;
/// Accepts "C2k2-1" as well as "C2k2_1". Throws ParameterError.
Family parse_family(std::string_view name);
std::size_t family_k(Family family) noexcept;
/// 1 for UrC3k2, 2 for the Gaussian families.
std::size_t intrinsic_dim(Family family) noexcept;

struct ModelSpec {
  Family family = Family::C1k2;
  double r = 0.0;  // only meaningful for UrC3k2
  std::size_t dim = 2;
  std::size_t k = 2;

  /// Spec with the family's own k and intrinsic dimension unless overridden.
  static ModelSpec make(Family family, double r = 0.0, std::size_t dim = 0);

  /// Throws ParameterError if r, dim or k are invalid for the family.
  void validate() const;

  /// Display name; UrC3k2 includes the radius, e.g. "U0.1C3k2".
  std::string name() const;

  friend bool operator==(const ModelSpec&, const ModelSpec&) = default;
};

/// 3*sqrt(2) - 4: the radius at which UrC3k2 switches from two optimal
/// 2-means sets to one.
double urc3k2_phase_boundary() noexcept;
/// Boundary test used by the catalog: |r - boundary| < 1e-12.
bool urc3k2_at_boundary(double r) noexcept;
/// Population WCSS of UrC3k2 with k = 2, piecewise in r.
double urc3k2_population_wcss(double r);
double urc3k2_wcss_lower_branch(double r) noexcept;  // (2r^2 + 1) / 6
double urc3k2_wcss_upper_branch(double r) noexcept;  // (11r^2 - 8r + 8) / 36

/// Half-offsets of the symmetric 2-means {(-c,0),(c,0)} for the uniqueness
/// models, exactly as the closed forms are printed.
double c2k2_1_offset() noexcept;
double c2k2_2_offset() noexcept;
double c2k2_3_offset() noexcept;
double c3k2_offset() noexcept;
/// Radius sqrt(2/pi) of the antipodal orbit of the standard bivariate normal.
double c1k2_radius() noexcept;
/// Orbit radius for C2k3: conditional mean of the half of one radially
/// truncated N(m, I/25) component, (2/pi) E[R | R <= 5 sigma].
double c2k3_radius() noexcept;

/// n i.i.d. draws. Deterministic given the stream.
Dataset sample(const ModelSpec& spec, std::size_t n, RngStream stream);

enum class Multiplicity { Unique, Dnu, Cnu };
enum class CatalogKind { ClosedForm, Numeric, ParametricOrbit };

std::string_view multiplicity_name(Multiplicity m) noexcept;
std::string_view catalog_kind_name(CatalogKind k) noexcept;

/// One population k-means set, or a one-parameter family of them.
struct CatalogEntry {
  std::optional<CenterSet> centers;
  /// For orbit entries: angle in [0, 2*pi) -> center set.
  std::function<CenterSet(double)> orbit;
  /// Human-readable description of the orbit (pivot, radius, fixed centers).
  std::string orbit_description;

  bool is_orbit() const noexcept { return static_cast<bool>(orbit); }
  /// The fixed set, or the orbit member at `angle`.
  CenterSet at(double angle = 0.0) const;
};

struct PopulationCatalog {
  std::vector<CatalogEntry> entries;
  double wcss = 0.0;
  CatalogKind kind = CatalogKind::ClosedForm;
  Multiplicity multiplicity = Multiplicity::Unique;
  // Numeric oracle settings (zero for analytic catalogs).
  std::uint64_t oracle_seed = 0;
  std::size_t oracle_n = 0;
  std::size_t oracle_restarts = 0;

  bool has_orbit() const noexcept;
};

/// Settings of the sampled oracle used for TC3k2 and C3k3, which have no
/// closed-form centers.
struct CatalogOptions {
  std::size_t oracle_n = 1'000'000;
  std::size_t oracle_restarts = 50;
  std::uint64_t oracle_seed = 20240601;
  double tie_tolerance = 1e-6;      // relative WCSS
  double dedupe_distance = 1e-3;    // Hausdorff
};

/// Population k-means sets and W(k). Numeric catalogs are memoized per
/// (family, options) within the process.
PopulationCatalog population_catalog(const ModelSpec& spec, const CatalogOptions& options = {});

struct MonteCarloEstimate {
  double value = 0.0;
  /// NaN when fewer than two draws were used.
  double standard_error = 0.0;
  std::size_t draws = 0;

  bool has_standard_error() const noexcept;
};

/// Monte-Carlo average over fresh draws of the squared distance to the
/// nearest center of `centers`.
MonteCarloEstimate expected_min_squared_distance(const ModelSpec& spec, const CenterSet& centers,
                                                 std::size_t n_mc, RngStream stream);

/// Same estimate for catalog entry `entry` (orbit entries evaluated at
/// angle 0). Throws UnsupportedError if the catalog has no such entry.
MonteCarloEstimate population_wcss_numeric(const ModelSpec& spec, std::size_t n_mc, RngStream stream,
                                           std::size_t entry = 0,
                                           const CatalogOptions& options = {});

}  // namespace kmu
