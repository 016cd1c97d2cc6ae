#pragma once

#include <nlohmann/json.hpp>

#include "kmu/harness.hpp"
#include "kmu/kmeans.hpp"
#include "kmu/limit_law.hpp"
#include "kmu/models.hpp"
#include "kmu/uniqueness.hpp"

namespace kmu {

// {"family": string, "r": number?, "dim": int, "k": int}
void to_json(nlohmann::json& j, const ModelSpec& spec);
void from_json(const nlohmann::json& j, ModelSpec& spec);

// Field names match the ExperimentConfig members.
void to_json(nlohmann::json& j, const ExperimentConfig& config);
void from_json(const nlohmann::json& j, ExperimentConfig& config);

nlohmann::json center_set_json(const CenterSet& centers);
/// Accepts [[x, y, ...], ...] or {"centers": [[...], ...]}.
CenterSet center_set_from_json(const nlohmann::json& j);

nlohmann::json fit_json(const KMeansFit& fit, std::size_t n, std::size_t d, std::uint64_t seed);
nlohmann::json report_json(const UniquenessReport& report);
nlohmann::json catalog_json(const ModelSpec& spec, const PopulationCatalog& catalog);
nlohmann::json limit_summary_json(const ModelSpec& spec, const MinimizerCovariance& cov,
                                  const LimitSummary& summary);
nlohmann::json cell_json(const CellResult& cell);

}  // namespace kmu
