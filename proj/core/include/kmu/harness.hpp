#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "kmu/dataset.hpp"
#include "kmu/metrics.hpp"
#include "kmu/models.hpp"
#include "kmu/rng.hpp"

namespace kmu {

// Purpose tags mixed into replicate sub-streams.
enum class StreamPurpose : std::uint64_t { Sample = 1, Test = 2, Fit = 3 };

/// Key of the stream owned by one replicate of one (model, n) cell.
RngStream replicate_stream(std::uint64_t master_seed, std::size_t model_index,
                           std::size_t size_index, std::size_t replicate, StreamPurpose purpose);

struct ExperimentConfig {
  std::vector<ModelSpec> models;
  std::vector<std::size_t> sample_sizes;
  std::size_t replicates = 20;
  std::size_t B = 200;
  double alpha = 0.05;
  std::size_t restarts = 20;
  std::uint64_t master_seed = 0;
  std::size_t parallelism = 1;
  /// When false every time column is written as 0 (byte-stable output).
  bool record_timing = true;
  bool warm_start = true;

  void validate() const;
  /// Replicates 200 and B = 1000.
  void apply_full_scale() noexcept;
};

/// One replicate: a fresh sample, its bootstrap draws and the decision.
struct DetailRow {
  std::string model;
  std::size_t model_index = 0;
  std::size_t n = 0;
  std::size_t replicate = 0;
  double t_bar_star = 0.0;
  bool reject = false;
  double base_wcss = 0.0;
  double kmeans_time_s = 0.0;
  double test_time_s = 0.0;
  std::uint64_t seed = 0;
  bool failed = false;
  std::string error;
};

struct CellResult {
  ModelSpec model;
  std::size_t n = 0;
  std::size_t rejections = 0;
  /// Replicates that completed; failures are excluded from the rate.
  std::size_t replicates = 0;
  std::size_t failures = 0;
  double rejection_rate = 0.0;
  double mean_kmeans_time_s = 0.0;
  double mean_test_time_s = 0.0;
};

struct GridResult {
  std::vector<CellResult> cells;
  std::vector<DetailRow> detail;
};

/// Every (model, n, replicate): sample, bootstrap, decide.
GridResult run_grid(const ExperimentConfig& config);

/// Pure fold of replicate rows into one cell per (model, n), in config order.
std::vector<CellResult> aggregate_cells(const ExperimentConfig& config,
                                        const std::vector<DetailRow>& detail);

/// Bootstrap test on UrC3k2(r) for each radius.
GridResult run_r_grid(const std::vector<double>& radii, std::size_t n, std::size_t replicates,
                      std::size_t B, double alpha, std::uint64_t master_seed,
                      std::size_t restarts = 20, std::size_t parallelism = 1);

struct McGridOptions {
  /// Independent tests per radius; the rejection rate is over these.
  std::size_t tests = 1;
  double alpha = 0.05;
  std::size_t restarts = 20;
  std::size_t parallelism = 1;
  bool record_timing = true;
};

/// Monte-Carlo variant using the closed-form W(P_r; 2): each test draws
/// `replicates` fresh samples, forms T_n = sqrt(n) (W_n - W) for each and
/// rejects when their standardized mean falls below q(alpha).
GridResult run_mc_grid(const std::vector<double>& radii, std::size_t n, std::size_t replicates,
                       std::uint64_t master_seed, const McGridOptions& options = {});

std::vector<double> default_r_grid();

struct ConsistencyRecord {
  std::size_t sample_index = 0;
  CenterSet centers;
  double wcss = 0.0;
  OrbitDistance distance;
};

/// Fits k-means on `samples` independent datasets of size n and measures
/// each fitted set against the population catalog.
std::vector<ConsistencyRecord> run_consistency(const ModelSpec& spec, std::size_t samples,
                                               std::size_t n, std::size_t restarts,
                                               std::uint64_t master_seed,
                                               std::size_t orbit_grid = kDefaultOrbitGrid,
                                               std::size_t parallelism = 1,
                                               const CatalogOptions& catalog_options = {});

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells);
void write_detail_csv(std::ostream& out, const std::vector<DetailRow>& detail);
void write_centers_csv(std::ostream& out, const ModelSpec& spec,
                       const std::vector<ConsistencyRecord>& records);

}  // namespace kmu
