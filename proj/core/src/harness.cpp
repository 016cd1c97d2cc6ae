#include "kmu/harness.hpp"

#include <cmath>
#include <optional>
#include <ostream>

#include "kmu/error.hpp"
#include "kmu/io.hpp"
#include "kmu/kmeans.hpp"
#include "kmu/numeric.hpp"
#include "kmu/parallel.hpp"
#include "kmu/uniqueness.hpp"

namespace kmu {

RngStream replicate_stream(std::uint64_t master_seed, std::size_t model_index,
                           std::size_t size_index, std::size_t replicate, StreamPurpose purpose) {
  return RngStream(master_seed)
      .split(model_index)
      .split(size_index)
      .split(replicate)
      .split(static_cast<std::uint64_t>(purpose));
}

void ExperimentConfig::validate() const {
  if (models.empty()) throw ParameterError("experiment needs at least one model");
  if (sample_sizes.empty()) throw ParameterError("experiment needs at least one sample size");
  for (const auto& m : models) m.validate();
  for (std::size_t n : sample_sizes) {
    if (n == 0) throw ParameterError("sample sizes must be positive");
  }
  if (replicates == 0) throw ParameterError("replicates must be at least 1");
  if (B < 2) throw ParameterError("B must be at least 2");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ParameterError("alpha must lie in (0, 1)");
  if (restarts == 0) throw ParameterError("restarts must be at least 1");
}

void ExperimentConfig::apply_full_scale() noexcept {
  replicates = 200;
  B = 1000;
}

GridResult run_grid(const ExperimentConfig& config) {
  config.validate();
  const std::size_t per_model = config.sample_sizes.size() * config.replicates;
  const std::size_t jobs = config.models.size() * per_model;
  std::vector<DetailRow> detail(jobs);

  parallel_for(jobs, config.parallelism, [&](std::size_t job) {
    const std::size_t mi = job / per_model;
    const std::size_t ni = (job % per_model) / config.replicates;
    const std::size_t rep = job % config.replicates;
    const ModelSpec& model = config.models[mi];
    const std::size_t n = config.sample_sizes[ni];
    const RngStream test_stream = replicate_stream(config.master_seed, mi, ni, rep, StreamPurpose::Test);

    DetailRow& row = detail[job];
    row.model = model.name();
    row.model_index = mi;
    row.n = n;
    row.replicate = rep;
    row.seed = test_stream.key();
    try {
      const Dataset data =
          sample(model, n, replicate_stream(config.master_seed, mi, ni, rep, StreamPurpose::Sample));
      BootstrapOptions options;
      options.warm_start = config.warm_start;
      const BootstrapDraws draws =
          bootstrap_draws(data, model.k, config.B, config.restarts, test_stream, options);
      const UniquenessReport report = decide(draws, config.alpha);
      row.t_bar_star = report.t_bar_star;
      row.reject = report.reject;
      row.base_wcss = report.base_wcss;
      if (config.record_timing) {
        row.kmeans_time_s = draws.base_fit_time_s;
        row.test_time_s = draws.wall_time_s;
      }
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
      row.t_bar_star = std::nan("");
    }
  });

  return {aggregate_cells(config, detail), std::move(detail)};
}

std::vector<CellResult> aggregate_cells(const ExperimentConfig& config,
                                        const std::vector<DetailRow>& detail) {
  std::vector<CellResult> cells;
  for (std::size_t mi = 0; mi < config.models.size(); ++mi) {
    for (std::size_t n : config.sample_sizes) {
      CellResult cell;
      cell.model = config.models[mi];
      cell.n = n;
      CompensatedSum kmeans_time, test_time;
      for (const auto& row : detail) {
        if (row.model_index != mi || row.n != n) continue;
        if (row.failed) {
          ++cell.failures;
          continue;
        }
        ++cell.replicates;
        if (row.reject) ++cell.rejections;
        kmeans_time.add(row.kmeans_time_s);
        test_time.add(row.test_time_s);
      }
      if (cell.replicates > 0) {
        const double count = static_cast<double>(cell.replicates);
        cell.rejection_rate = static_cast<double>(cell.rejections) / count;
        cell.mean_kmeans_time_s = kmeans_time.value() / count;
        cell.mean_test_time_s = test_time.value() / count;
      }
      cells.push_back(cell);
    }
  }
  return cells;
}

std::vector<double> default_r_grid() {
  return {0.1, 0.2, urc3k2_phase_boundary(), 0.3, 0.4, 0.5};
}

GridResult run_r_grid(const std::vector<double>& radii, std::size_t n, std::size_t replicates,
                      std::size_t B, double alpha, std::uint64_t master_seed,
                      std::size_t restarts, std::size_t parallelism) {
  ExperimentConfig config;
  for (double r : radii) config.models.push_back(ModelSpec::make(Family::UrC3k2, r));
  config.sample_sizes = {n};
  config.replicates = replicates;
  config.B = B;
  config.alpha = alpha;
  config.restarts = restarts;
  config.master_seed = master_seed;
  config.parallelism = parallelism;
  return run_grid(config);
}

GridResult run_mc_grid(const std::vector<double>& radii, std::size_t n, std::size_t replicates,
                       std::uint64_t master_seed, const McGridOptions& options) {
  if (radii.empty()) throw ParameterError("mc grid needs at least one radius");
  if (replicates < 2) throw ParameterError("mc grid needs at least two replicates per test");
  if (options.tests == 0) throw ParameterError("mc grid needs at least one test");
  if (n == 0) throw ParameterError("sample size must be positive");

  ExperimentConfig config;  // used for the cell fold only
  for (double r : radii) config.models.push_back(ModelSpec::make(Family::UrC3k2, r));
  for (const auto& m : config.models) m.validate();
  config.sample_sizes = {n};

  const std::size_t jobs = radii.size() * options.tests;
  std::vector<DetailRow> detail(jobs);
  const double threshold = normal_quantile(options.alpha);
  const double root_n = std::sqrt(static_cast<double>(n));

  parallel_for(jobs, options.parallelism, [&](std::size_t job) {
    const std::size_t ri = job / options.tests;
    const std::size_t test = job % options.tests;
    const ModelSpec& model = config.models[ri];
    const double population = urc3k2_population_wcss(model.r);
    const RngStream sample_stream =
        replicate_stream(master_seed, ri, 0, test, StreamPurpose::Sample);
    const RngStream fit_stream = replicate_stream(master_seed, ri, 0, test, StreamPurpose::Fit);

    DetailRow& row = detail[job];
    row.model = model.name();
    row.model_index = ri;
    row.n = n;
    row.replicate = test;
    row.seed = fit_stream.key();
    try {
      std::vector<double> t(replicates);
      CompensatedSum fitted, kmeans_time, total_time;
      for (std::size_t rep = 0; rep < replicates; ++rep) {
        const Dataset data = sample(model, n, sample_stream.split(rep));
        const KMeansFit f = fit(data, model.k, options.restarts, fit_stream.split(rep));
        t[rep] = root_n * (f.wcss - population);
        fitted.add(f.wcss);
        kmeans_time.add(f.wall_time_s);
      }
      double t_bar = 0.0, s = 0.0;
      const bool informative = standardized_mean(t, t_bar, s);
      row.t_bar_star = t_bar;
      row.reject = informative && t_bar < threshold;
      row.base_wcss = fitted.value() / static_cast<double>(replicates);
      if (options.record_timing) {
        row.kmeans_time_s = kmeans_time.value() / static_cast<double>(replicates);
        row.test_time_s = kmeans_time.value();
      }
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
      row.t_bar_star = std::nan("");
    }
  });

  return {aggregate_cells(config, detail), std::move(detail)};
}

std::vector<ConsistencyRecord> run_consistency(const ModelSpec& spec, std::size_t samples,
                                               std::size_t n, std::size_t restarts,
                                               std::uint64_t master_seed, std::size_t orbit_grid,
                                               std::size_t parallelism,
                                               const CatalogOptions& catalog_options) {
  spec.validate();
  if (samples == 0) throw ParameterError("samples must be at least 1");
  const PopulationCatalog catalog = population_catalog(spec, catalog_options);

  std::vector<std::optional<ConsistencyRecord>> slots(samples);
  parallel_for(samples, parallelism, [&](std::size_t s) {
    const Dataset data = sample(spec, n, replicate_stream(master_seed, 0, 0, s, StreamPurpose::Sample));
    KMeansFit f = fit(data, spec.k, restarts, replicate_stream(master_seed, 0, 0, s, StreamPurpose::Fit));
    const OrbitDistance dist = orbit_distance(f.centers, catalog, orbit_grid);
    slots[s] = ConsistencyRecord{s, std::move(f.centers), f.wcss, dist};
  });

  std::vector<ConsistencyRecord> out;
  out.reserve(samples);
  for (auto& slot : slots) out.push_back(std::move(*slot));
  return out;
}

void write_cells_csv(std::ostream& out, const std::vector<CellResult>& cells) {
  out << "model,family,r,dim,k,n,replicates,rejections,rejection_rate,mean_kmeans_time_s,"
         "mean_test_time_s\n";
  for (const auto& c : cells) {
    out << c.model.name() << ',' << family_name(c.model.family) << ','
        << (c.model.family == Family::UrC3k2 ? format_double(c.model.r) : "") << ','
        << c.model.dim << ',' << c.model.k << ',' << c.n << ',' << c.replicates << ','
        << c.rejections << ',' << format_double(c.rejection_rate) << ','
        << format_double(c.mean_kmeans_time_s) << ',' << format_double(c.mean_test_time_s)
        << '\n';
  }
}

void write_detail_csv(std::ostream& out, const std::vector<DetailRow>& detail) {
  out << "model,n,replicate,t_bar_star,reject,base_wcss,kmeans_time_s,test_time_s,seed\n";
  for (const auto& r : detail) {
    out << r.model << ',' << r.n << ',' << r.replicate << ',' << format_double(r.t_bar_star)
        << ',' << (r.reject ? 1 : 0) << ',' << format_double(r.base_wcss) << ','
        << format_double(r.kmeans_time_s) << ',' << format_double(r.test_time_s) << ','
        << r.seed << '\n';
  }
}

void write_centers_csv(std::ostream& out, const ModelSpec& spec,
                       const std::vector<ConsistencyRecord>& records) {
  out << "model,sample_idx,center_idx";
  for (std::size_t j = 0; j < spec.dim; ++j) out << ",x" << j + 1;
  out << ",orbit_distance\n";
  const std::string name = spec.name();
  for (const auto& rec : records) {
    for (std::size_t c = 0; c < rec.centers.size(); ++c) {
      out << name << ',' << rec.sample_index << ',' << c;
      for (double v : rec.centers.center(c)) out << ',' << format_double(v);
      out << ',' << format_double(rec.distance.distance) << '\n';
    }
  }
}

}  // namespace kmu
