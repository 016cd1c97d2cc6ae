#include "cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "kmu/error.hpp"
#include "kmu/harness.hpp"
#include "kmu/io.hpp"
#include "kmu/json.hpp"
#include "kmu/kmeans.hpp"
#include "kmu/limit_law.hpp"
#include "kmu/metrics.hpp"
#include "kmu/models.hpp"
#include "kmu/uniqueness.hpp"

namespace kmu::cli {
namespace {

using nlohmann::json;
namespace fs = std::filesystem;

std::size_t to_count(double value, const char* name, std::size_t minimum = 1) {
  if (!(value >= static_cast<double>(minimum)) || std::floor(value) != value || value > 1e15) {
    throw ParameterError(std::string("--") + name + " must be an integer >= " +
                         std::to_string(minimum));
  }
  return static_cast<std::size_t>(value);
}

std::string resolve_input(const std::string& path) {
  const char* root = std::getenv("KMU_DATA_DIR");
  if (root == nullptr || *root == '\0' || fs::path(path).is_absolute()) return path;
  return (fs::path(root) / path).string();
}

HeaderMode parse_header(const std::string& mode) {
  if (mode == "auto") return HeaderMode::Auto;
  if (mode == "yes") return HeaderMode::Present;
  if (mode == "no") return HeaderMode::Absent;
  throw ParameterError("--header must be auto, yes or no");
}

std::vector<double> parse_list(const std::string& text) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      std::size_t used = 0;
      out.push_back(std::stod(item, &used));
      if (used != item.size()) throw std::invalid_argument(item);
    } catch (const std::logic_error&) {
      throw ParameterError("cannot parse number list: " + text);
    }
  }
  if (out.empty()) throw ParameterError("empty number list");
  return out;
}

struct Output {
  std::ostream& out;
  std::ostream& err;
  bool quiet = false;

  void progress(const std::string& message) const {
    if (!quiet) err << message << '\n';
  }

  void emit(const std::string& path, const std::string& content) const {
    if (path.empty()) {
      out << content;
      return;
    }
    std::ofstream file(path);
    if (!file) throw ShapeError("cannot write output file: " + path);
    file << content;
  }

  void emit_json(const std::string& path, const json& value) const { emit(path, value.dump(2) + "\n"); }
};

struct ModelArgs {
  std::string name;
  double r = 0.0;
  std::size_t dim = 0;

  void add(CLI::App* app) {
    app->add_option("--model", name, "Model family (UrC3k2, C1k2, C2k3, TC3k2, C2k2-1, C2k2-2, "
                                     "C2k2-3, C3k3, C3k2)")
        ->required();
    app->add_option("--r", r, "Radius for UrC3k2");
    app->add_option("--dim", dim, "Ambient dimension (default: intrinsic)");
  }

  ModelSpec spec() const {
    // Accept the display form "U0.1C3k2" as well as --model UrC3k2 --r 0.1.
    const std::string suffix = "C3k2";
    if (name.size() > 5 && name[0] == 'U' && name[1] != 'r' &&
        name.compare(name.size() - suffix.size(), suffix.size(), suffix) == 0) {
      const std::string radius = name.substr(1, name.size() - 1 - suffix.size());
      std::size_t used = 0;
      double value = 0.0;
      try {
        value = std::stod(radius, &used);
      } catch (const std::logic_error&) {
        used = 0;
      }
      if (used != radius.size()) throw ParameterError("unknown model family: " + name);
      ModelSpec spec = ModelSpec::make(Family::UrC3k2, value, dim);
      spec.validate();
      return spec;
    }
    ModelSpec spec = ModelSpec::make(parse_family(name), r, dim);
    spec.validate();
    return spec;
  }
};

struct FitArgs {
  std::string data;
  std::string header = "auto";
  std::size_t k = 0;
  std::size_t restarts = 20;
  std::size_t max_iters = 300;
  double tol = 1e-10;
  std::uint64_t seed = 0;
  bool no_hartigan = false;
  double clamp_radius = 0.0;
  std::string out;

  void add(CLI::App* app) {
    app->add_option("--data", data, "CSV file, one observation per row")->required();
    app->add_option("--header", header, "Header handling: auto, yes, no");
    app->add_option("--k", k, "Number of centers")->required();
    app->add_option("--restarts", restarts, "Random restarts");
    app->add_option("--max-iters", max_iters, "Lloyd iteration cap");
    app->add_option("--tol", tol, "Relative WCSS change that stops Lloyd");
    app->add_option("--seed", seed, "Random seed")->required();
    app->add_flag("--no-hartigan", no_hartigan, "Skip the single-point-move pass");
    app->add_option("--clamp-radius", clamp_radius, "Project centers onto a ball of this radius");
    app->add_option("--out", out, "Write JSON here instead of stdout");
  }

  FitOptions options() const {
    FitOptions o;
    o.max_iters = max_iters;
    o.tol = tol;
    o.hartigan = !no_hartigan;
    if (clamp_radius > 0.0) o.clamp_radius = clamp_radius;
    return o;
  }

  Dataset load() const { return read_csv_file(resolve_input(data), parse_header(header)); }
};

void write_text_file(const fs::path& path, const std::string& content) {
  std::ofstream file(path);
  if (!file) throw ShapeError("cannot write output file: " + path.string());
  file << content;
}

void write_grid(const fs::path& dir, const GridResult& result, const Output& io) {
  std::ostringstream cells, detail;
  write_cells_csv(cells, result.cells);
  write_detail_csv(detail, result.detail);
  if (dir.empty()) {
    io.out << cells.str();
    return;
  }
  fs::create_directories(dir);
  write_text_file(dir / "cells.csv", cells.str());
  write_text_file(dir / "detail.csv", detail.str());
  for (const auto& row : result.detail) {
    if (row.failed) io.err << "replicate failed: " << row.model << " n=" << row.n << " #"
                           << row.replicate << ": " << row.error << '\n';
  }
  io.progress("wrote " + (dir / "cells.csv").string() + " and " + (dir / "detail.csv").string());
}

int dispatch(const std::vector<std::string>& args, Output& io) {
  CLI::App app{"k-means uniqueness toolkit", "kmu"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_help_all_flag("--help-all", "Show help for every subcommand");
  bool quiet = false;
  app.add_flag("--quiet", quiet, "Suppress progress messages")->configurable(false);

  // fit
  FitArgs fit_args;
  bool with_assignments = false;
  auto* fit_cmd = app.add_subcommand("fit", "Fit k-means and report centers and WCSS");
  fit_args.add(fit_cmd);
  fit_cmd->add_flag("--with-assignments", with_assignments, "Include per-row assignments");

  // wcss
  FitArgs wcss_args;
  auto* wcss_cmd = app.add_subcommand("wcss", "Empirical within-cluster sum of squares");
  wcss_args.add(wcss_cmd);

  // test-uniqueness
  FitArgs test_args;
  double test_B = 1000;
  double test_alpha = 0.05;
  std::size_t test_parallelism = 1;
  bool no_warm_start = false;
  auto* test_cmd = app.add_subcommand("test-uniqueness", "Bootstrap test for a unique k-means set");
  test_args.add(test_cmd);
  test_cmd->add_option("--B", test_B, "Bootstrap samples");
  test_cmd->add_option("--alpha", test_alpha, "Significance level");
  test_cmd->add_option("--parallelism", test_parallelism, "Worker threads");
  test_cmd->add_flag("--no-warm-start", no_warm_start,
                     "Do not seed bootstrap fits with the original centers");

  // experiment
  std::string exp_config, exp_out;
  std::uint64_t exp_seed = 0;
  std::size_t exp_parallelism = 0;
  bool full_scale = false, no_timing = false;
  auto* exp_cmd = app.add_subcommand("experiment", "Rejection-rate grid from a JSON config");
  exp_cmd->add_option("--config", exp_config, "ExperimentConfig JSON")->required();
  exp_cmd->add_option("--out-dir", exp_out, "Directory for cells.csv and detail.csv");
  exp_cmd->add_option("--seed", exp_seed, "Master seed")->required();
  exp_cmd->add_option("--parallelism", exp_parallelism, "Worker threads (overrides config)");
  exp_cmd->add_flag("--paper-scale", full_scale, "200 replicates and B = 1000");
  exp_cmd->add_flag("--no-timing", no_timing, "Write zero for every time column");

  // r-grid
  std::string rg_radii, rg_out;
  double rg_n = 100000, rg_replicates = 20, rg_B = 200;
  double rg_alpha = 0.05;
  std::size_t rg_restarts = 20, rg_parallelism = 1;
  std::uint64_t rg_seed = 0;
  auto* rg_cmd = app.add_subcommand("r-grid", "Bootstrap test across UrC3k2 radii");
  rg_cmd->add_option("--radii", rg_radii, "Comma-separated radii (default: 0.1,0.2,3*sqrt(2)-4,0.3,0.4,0.5)");
  rg_cmd->add_option("--n", rg_n, "Sample size");
  rg_cmd->add_option("--replicates", rg_replicates, "Replicates per radius");
  rg_cmd->add_option("--B", rg_B, "Bootstrap samples");
  rg_cmd->add_option("--alpha", rg_alpha, "Significance level");
  rg_cmd->add_option("--restarts", rg_restarts, "Random restarts");
  rg_cmd->add_option("--parallelism", rg_parallelism, "Worker threads");
  rg_cmd->add_option("--seed", rg_seed, "Master seed")->required();
  rg_cmd->add_option("--out-dir", rg_out, "Directory for cells.csv and detail.csv");

  // mc-grid
  std::string mc_radii, mc_out;
  double mc_n = 100000, mc_replicates = 200, mc_tests = 1;
  double mc_alpha = 0.05;
  std::size_t mc_restarts = 20, mc_parallelism = 1;
  std::uint64_t mc_seed = 0;
  auto* mc_cmd = app.add_subcommand("mc-grid", "Monte-Carlo test with the closed-form UrC3k2 WCSS");
  mc_cmd->add_option("--radii", mc_radii, "Comma-separated radii");
  mc_cmd->add_option("--n", mc_n, "Sample size");
  mc_cmd->add_option("--replicates", mc_replicates, "Fresh samples per test");
  mc_cmd->add_option("--tests", mc_tests, "Independent tests per radius");
  mc_cmd->add_option("--alpha", mc_alpha, "Significance level");
  mc_cmd->add_option("--restarts", mc_restarts, "Random restarts");
  mc_cmd->add_option("--parallelism", mc_parallelism, "Worker threads");
  mc_cmd->add_option("--seed", mc_seed, "Master seed")->required();
  mc_cmd->add_option("--out-dir", mc_out, "Directory for cells.csv and detail.csv");

  // limit-sim
  ModelArgs ls_model;
  double ls_mc_n = 1e6, ls_n_sim = 1e6;
  std::size_t ls_orbit_points = 0, ls_parallelism = 1;
  std::uint64_t ls_seed = 0;
  std::string ls_out;
  auto* ls_cmd = app.add_subcommand("limit-sim", "Simulate the limit law over the catalog minimizers");
  ls_model.add(ls_cmd);
  ls_cmd->add_option("--mc-n", ls_mc_n, "Draws for the covariance estimate");
  ls_cmd->add_option("--n-sim", ls_n_sim, "Simulated limit values");
  ls_cmd->add_option("--orbit-points", ls_orbit_points, "Members taken from each orbit");
  ls_cmd->add_option("--parallelism", ls_parallelism, "Worker threads");
  ls_cmd->add_option("--seed", ls_seed, "Random seed")->required();
  ls_cmd->add_option("--out", ls_out, "Write JSON here instead of stdout");

  // oracle
  auto* oracle_cmd = app.add_subcommand("oracle", "Population catalogs, samplers and set distances");
  oracle_cmd->require_subcommand(1);
  oracle_cmd->fallthrough();
  ModelArgs cat_model;
  CatalogOptions cat_options;
  auto* cat_cmd = oracle_cmd->add_subcommand("catalog", "Population k-means sets and W(k)");
  cat_model.add(cat_cmd);
  cat_cmd->add_option("--oracle-n", cat_options.oracle_n, "Sample size of the numeric oracle");
  cat_cmd->add_option("--oracle-restarts", cat_options.oracle_restarts, "Restarts of the numeric oracle");
  cat_cmd->add_option("--oracle-seed", cat_options.oracle_seed, "Seed of the numeric oracle");

  ModelArgs smp_model;
  double smp_n = 0;
  std::uint64_t smp_seed = 0;
  std::string smp_out;
  bool smp_no_header = false;
  auto* smp_cmd = oracle_cmd->add_subcommand("sample", "Draw a dataset from a model");
  smp_model.add(smp_cmd);
  smp_cmd->add_option("--n", smp_n, "Sample size")->required();
  smp_cmd->add_option("--seed", smp_seed, "Random seed")->required();
  smp_cmd->add_option("--out", smp_out, "CSV path (default stdout)");
  smp_cmd->add_flag("--no-header", smp_no_header, "Omit the x1,...,xd header");

  ModelArgs ow_model;
  double ow_n_mc = 1e6;
  std::size_t ow_entry = 0;
  std::uint64_t ow_seed = 0;
  auto* ow_cmd = oracle_cmd->add_subcommand("wcss", "Monte-Carlo population WCSS of a catalog entry");
  ow_model.add(ow_cmd);
  ow_cmd->add_option("--n-mc", ow_n_mc, "Monte-Carlo draws");
  ow_cmd->add_option("--entry", ow_entry, "Catalog entry index");
  ow_cmd->add_option("--seed", ow_seed, "Random seed")->required();

  std::string dist_a, dist_b, dist_header = "auto";
  auto* dist_cmd = oracle_cmd->add_subcommand("dist", "Hausdorff and Gromov-Hausdorff distances");
  dist_cmd->add_option("--a", dist_a, "First center set (CSV or JSON)")->required();
  dist_cmd->add_option("--b", dist_b, "Second center set (CSV or JSON)")->required();
  dist_cmd->add_option("--header", dist_header, "CSV header handling: auto, yes, no");

  // consistency
  ModelArgs con_model;
  double con_samples = 100, con_n = 20000;
  std::size_t con_restarts = 20, con_grid = kDefaultOrbitGrid, con_parallelism = 1;
  std::uint64_t con_seed = 0;
  std::string con_out;
  auto* con_cmd = app.add_subcommand("consistency", "Fitted center sets versus the population catalog");
  con_model.add(con_cmd);
  con_cmd->add_option("--samples", con_samples, "Independent samples");
  con_cmd->add_option("--n", con_n, "Sample size");
  con_cmd->add_option("--restarts", con_restarts, "Random restarts");
  con_cmd->add_option("--orbit-grid", con_grid, "Angles per orbit");
  con_cmd->add_option("--parallelism", con_parallelism, "Worker threads");
  con_cmd->add_option("--seed", con_seed, "Master seed")->required();
  con_cmd->add_option("--out", con_out, "centers.csv path (default stdout)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    io.out << app.help();
    return kSuccess;
  } catch (const CLI::CallForAllHelp& e) {
    io.out << app.help("", CLI::AppFormatMode::All);
    return kSuccess;
  } catch (const CLI::ParseError& e) {
    io.err << "error: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }
  io.quiet = quiet;

  if (fit_cmd->parsed()) {
    const Dataset data = fit_args.load();
    const KMeansFit f = fit(data, fit_args.k, fit_args.restarts, RngStream(fit_args.seed),
                            fit_args.options());
    json j = fit_json(f, data.size(), data.dim(), fit_args.seed);
    j.erase("wall_time_s");
    if (!with_assignments) j.erase("assignments");
    io.progress("fit finished in " + format_short(f.wall_time_s) + " s");
    io.emit_json(fit_args.out, j);
  } else if (wcss_cmd->parsed()) {
    const Dataset data = wcss_args.load();
    const double w = wcss(data, wcss_args.k, wcss_args.restarts, RngStream(wcss_args.seed),
                          wcss_args.options());
    io.emit_json(wcss_args.out, json{{"n", data.size()},
                                     {"d", data.dim()},
                                     {"k", wcss_args.k},
                                     {"wcss", w},
                                     {"seed", wcss_args.seed},
                                     {"restarts", wcss_args.restarts}});
  } else if (test_cmd->parsed()) {
    const Dataset data = test_args.load();
    BootstrapOptions options;
    options.fit = test_args.options();
    options.warm_start = !no_warm_start;
    options.parallelism = test_parallelism;
    io.progress("running " + std::to_string(to_count(test_B, "B", 2)) + " bootstrap fits");
    const BootstrapDraws draws = bootstrap_draws(data, test_args.k, to_count(test_B, "B", 2),
                                                 test_args.restarts, RngStream(test_args.seed), options);
    io.emit_json(test_args.out, report_json(decide(draws, test_alpha)));
  } else if (exp_cmd->parsed()) {
    std::ifstream in(resolve_input(exp_config));
    if (!in) throw ShapeError("cannot open config: " + exp_config);
    json raw;
    try {
      raw = json::parse(in);
    } catch (const json::exception& e) {
      throw ParameterError(std::string("config is not valid JSON: ") + e.what());
    }
    ExperimentConfig config = raw.get<ExperimentConfig>();
    config.master_seed = exp_seed;
    if (exp_parallelism > 0) config.parallelism = exp_parallelism;
    if (full_scale) config.apply_full_scale();
    if (no_timing) config.record_timing = false;
    io.progress("running " + std::to_string(config.models.size() * config.sample_sizes.size()) +
                " cells x " + std::to_string(config.replicates) + " replicates");
    write_grid(exp_out, run_grid(config), io);
  } else if (rg_cmd->parsed()) {
    const auto radii = rg_radii.empty() ? default_r_grid() : parse_list(rg_radii);
    write_grid(rg_out,
               run_r_grid(radii, to_count(rg_n, "n"), to_count(rg_replicates, "replicates"),
                          to_count(rg_B, "B", 2), rg_alpha, rg_seed, rg_restarts, rg_parallelism),
               io);
  } else if (mc_cmd->parsed()) {
    const auto radii = mc_radii.empty() ? default_r_grid() : parse_list(mc_radii);
    McGridOptions options;
    options.tests = to_count(mc_tests, "tests");
    options.alpha = mc_alpha;
    options.restarts = mc_restarts;
    options.parallelism = mc_parallelism;
    write_grid(mc_out,
               run_mc_grid(radii, to_count(mc_n, "n"), to_count(mc_replicates, "replicates", 2),
                           mc_seed, options),
               io);
  } else if (ls_cmd->parsed()) {
    const ModelSpec spec = ls_model.spec();
    const PopulationCatalog catalog = population_catalog(spec);
    const RngStream stream(ls_seed);
    const MinimizerCovariance cov =
        estimate_covariance(spec, catalog, to_count(ls_mc_n, "mc-n", 2), stream.split(0), ls_orbit_points);
    const LimitSummary summary =
        simulate_T(cov, to_count(ls_n_sim, "n-sim", 2), stream.split(1), false, ls_parallelism);
    json j = limit_summary_json(spec, cov, summary);
    j["seed"] = ls_seed;
    io.emit_json(ls_out, j);
  } else if (oracle_cmd->parsed()) {
    if (cat_cmd->parsed()) {
      const ModelSpec spec = cat_model.spec();
      io.emit_json("", catalog_json(spec, population_catalog(spec, cat_options)));
    } else if (smp_cmd->parsed()) {
      const Dataset data = sample(smp_model.spec(), to_count(smp_n, "n"), RngStream(smp_seed));
      std::ostringstream csv;
      write_csv(csv, data, !smp_no_header);
      io.emit(smp_out, csv.str());
    } else if (ow_cmd->parsed()) {
      const ModelSpec spec = ow_model.spec();
      const auto est = population_wcss_numeric(spec, to_count(ow_n_mc, "n-mc"), RngStream(ow_seed), ow_entry);
      json j{{"model", spec}, {"entry", ow_entry}, {"value", est.value}, {"draws", est.draws},
             {"seed", ow_seed}, {"population_wcss", population_catalog(spec).wcss}};
      j["standard_error"] = est.has_standard_error() ? json(est.standard_error) : json(nullptr);
      io.emit_json("", j);
    } else if (dist_cmd->parsed()) {
      auto load = [&](const std::string& path) {
        const std::string resolved = resolve_input(path);
        std::ifstream in(resolved);
        if (!in) throw ShapeError("cannot open center set: " + path);
        if (fs::path(resolved).extension() == ".json") {
          try {
            return center_set_from_json(json::parse(in));
          } catch (const json::parse_error& e) {
            throw ShapeError(std::string("invalid JSON center set: ") + e.what());
          }
        }
        return read_centers_csv(in, parse_header(dist_header));
      };
      const CenterSet a = load(dist_a);
      const CenterSet b = load(dist_b);
      json j{{"hausdorff", hausdorff(a, b)}};
      if (a.size() <= kMaxGromovHausdorffPoints && b.size() <= kMaxGromovHausdorffPoints) {
        j["gromov_hausdorff"] = gromov_hausdorff_small(a, b);
      } else {
        j["gromov_hausdorff"] = nullptr;
      }
      io.emit_json("", j);
    }
  } else if (con_cmd->parsed()) {
    const ModelSpec spec = con_model.spec();
    const auto records = run_consistency(spec, to_count(con_samples, "samples"), to_count(con_n, "n"),
                                         con_restarts, con_seed, con_grid, con_parallelism);
    std::ostringstream csv;
    write_centers_csv(csv, spec, records);
    io.emit(con_out, csv.str());
    double worst = 0.0;
    for (const auto& r : records) worst = std::max(worst, r.distance.distance);
    io.progress("max orbit distance " + format_short(worst));
  }
  return kSuccess;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Output io{out, err};
  try {
    return dispatch(args, io);
  } catch (const ParameterError& e) {
    err << "parameter error: " << e.what() << '\n';
    return kUsageError;
  } catch (const UnsupportedError& e) {
    err << "unsupported: " << e.what() << '\n';
    return kUsageError;
  } catch (const ShapeError& e) {
    err << "data error: " << e.what() << '\n';
    return kDataError;
  } catch (const InfeasibleError& e) {
    err << "infeasible: " << e.what() << '\n';
    return kNumericalError;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << '\n';
    return kNumericalError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kInternalError;
  }
}

}  // namespace kmu::cli
