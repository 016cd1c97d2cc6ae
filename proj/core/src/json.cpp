#include "kmu/json.hpp"

#include <cmath>

#include "kmu/error.hpp"

namespace kmu {

using nlohmann::json;

void to_json(json& j, const ModelSpec& spec) {
  j = json{{"family", std::string(family_name(spec.family))}, {"dim", spec.dim}, {"k", spec.k}};
  if (spec.family == Family::UrC3k2) j["r"] = spec.r;
}

void from_json(const json& j, ModelSpec& spec) {
  try {
    const Family family = parse_family(j.at("family").get<std::string>());
    ModelSpec out = ModelSpec::make(family, j.value("r", 0.0), j.value("dim", std::size_t{0}));
    if (j.contains("k")) out.k = j.at("k").get<std::size_t>();
    out.validate();
    spec = out;
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid model spec: ") + e.what());
  }
}

void to_json(json& j, const ExperimentConfig& config) {
  j = json{{"models", config.models},
           {"sample_sizes", config.sample_sizes},
           {"replicates", config.replicates},
           {"B", config.B},
           {"alpha", config.alpha},
           {"restarts", config.restarts},
           {"master_seed", config.master_seed},
           {"parallelism", config.parallelism},
           {"record_timing", config.record_timing},
           {"warm_start", config.warm_start}};
}

void from_json(const json& j, ExperimentConfig& config) {
  try {
    ExperimentConfig out;
    out.models = j.at("models").get<std::vector<ModelSpec>>();
    out.sample_sizes = j.at("sample_sizes").get<std::vector<std::size_t>>();
    out.replicates = j.value("replicates", out.replicates);
    out.B = j.value("B", out.B);
    out.alpha = j.value("alpha", out.alpha);
    out.restarts = j.value("restarts", out.restarts);
    out.master_seed = j.value("master_seed", out.master_seed);
    out.parallelism = j.value("parallelism", out.parallelism);
    out.record_timing = j.value("record_timing", out.record_timing);
    out.warm_start = j.value("warm_start", out.warm_start);
    config = std::move(out);
  } catch (const json::exception& e) {
    throw ParameterError(std::string("invalid experiment config: ") + e.what());
  }
}

json center_set_json(const CenterSet& centers) {
  json rows = json::array();
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const auto c = centers.center(i);
    rows.push_back(std::vector<double>(c.begin(), c.end()));
  }
  return rows;
}

CenterSet center_set_from_json(const json& j) {
  try {
    const json& rows = j.is_object() ? j.at("centers") : j;
    return CenterSet::from_rows(rows.get<std::vector<std::vector<double>>>());
  } catch (const json::exception& e) {
    throw ShapeError(std::string("invalid center set: ") + e.what());
  }
}

json fit_json(const KMeansFit& fit, std::size_t n, std::size_t d, std::uint64_t seed) {
  return json{{"n", n},
              {"d", d},
              {"k", fit.centers.size()},
              {"centers", center_set_json(fit.centers)},
              {"wcss", fit.wcss},
              {"restarts_used", fit.restarts_used},
              {"best_restart", fit.best_restart},
              {"iterations", fit.iterations},
              {"converged", fit.converged},
              {"seed", seed},
              {"assignments", fit.assignments},
              {"wall_time_s", fit.wall_time_s}};
}

json report_json(const UniquenessReport& r) {
  return json{{"n", r.n},
              {"d", r.d},
              {"k", r.k},
              {"B", r.B},
              {"alpha", r.alpha},
              {"base_wcss", r.base_wcss},
              {"t_bar_star", r.t_bar_star},
              {"s_star", r.s_star},
              {"threshold", r.threshold},
              {"reject", r.reject},
              {"degenerate", r.degenerate},
              {"seed", r.seed},
              {"restarts", r.restarts},
              {"redraws", r.redraws},
              {"wall_time_s", r.wall_time_s}};
}

json catalog_json(const ModelSpec& spec, const PopulationCatalog& catalog) {
  json entries = json::array();
  for (const auto& e : catalog.entries) {
    if (e.is_orbit()) {
      entries.push_back({{"type", "orbit"},
                         {"description", e.orbit_description},
                         {"example_centers", center_set_json(e.at(0.0))}});
    } else {
      entries.push_back({{"type", "fixed"}, {"centers", center_set_json(*e.centers)}});
    }
  }
  json out{{"model", spec},
           {"name", spec.name()},
           {"kind", std::string(catalog_kind_name(catalog.kind))},
           {"multiplicity", std::string(multiplicity_name(catalog.multiplicity))},
           {"wcss", catalog.wcss},
           {"entries", entries}};
  if (catalog.kind == CatalogKind::Numeric) {
    out["oracle"] = {{"seed", catalog.oracle_seed},
                     {"n", catalog.oracle_n},
                     {"restarts", catalog.oracle_restarts}};
  }
  return out;
}

json limit_summary_json(const ModelSpec& spec, const MinimizerCovariance& cov,
                        const LimitSummary& summary) {
  return json{{"model", spec},
              {"name", spec.name()},
              {"m", cov.m},
              {"sigma", cov.sigma},
              {"mc_n", cov.mc_n},
              {"approximate", cov.approximate},
              {"n_sim", summary.n_sim},
              {"mean", summary.mean},
              {"sd", summary.sd},
              {"skewness", summary.skewness},
              {"excess_kurtosis", summary.excess_kurtosis}};
}

json cell_json(const CellResult& c) {
  return json{{"model", c.model},
              {"name", c.model.name()},
              {"n", c.n},
              {"replicates", c.replicates},
              {"failures", c.failures},
              {"rejections", c.rejections},
              {"rejection_rate", c.rejection_rate},
              {"mean_kmeans_time_s", c.mean_kmeans_time_s},
              {"mean_test_time_s", c.mean_test_time_s}};
}

}  // namespace kmu
