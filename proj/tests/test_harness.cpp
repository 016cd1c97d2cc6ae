#include <gtest/gtest.h>

#include <functional>
#include <set>
#include <sstream>

#include "kmu/error.hpp"
#include "kmu/harness.hpp"
#include "kmu/parallel.hpp"

using namespace kmu;

namespace {

ExperimentConfig small_config() {
  ExperimentConfig c;
  c.models = {ModelSpec::make(Family::TC3k2), ModelSpec::make(Family::C2k2_3)};
  c.sample_sizes = {200, 400};
  c.replicates = 3;
  c.B = 10;
  c.restarts = 3;
  c.master_seed = 99;
  c.record_timing = false;
  return c;
}

std::string csv(const GridResult& g) {
  std::ostringstream out;
  write_cells_csv(out, g.cells);
  write_detail_csv(out, g.detail);
  return out.str();
}

std::string first_line(const std::string& s) { return s.substr(0, s.find('\n')); }

}  // namespace

TEST(Harness, ConfigValidation) {
  ExperimentConfig c = small_config();
  EXPECT_NO_THROW(c.validate());
  c.B = 1;
  EXPECT_THROW(run_grid(c), ParameterError);
  c = small_config();
  c.models.clear();
  EXPECT_THROW(c.validate(), ParameterError);
  c = small_config();
  c.alpha = 1.5;
  EXPECT_THROW(c.validate(), ParameterError);
  c = small_config();
  c.apply_full_scale();
  EXPECT_EQ(c.replicates, 200u);
  EXPECT_EQ(c.B, 1000u);
}

TEST(Harness, GridShapeAndRates) {
  ExperimentConfig c = small_config();
  c.replicates = 1;
  const GridResult g = run_grid(c);
  ASSERT_EQ(g.cells.size(), 4u);
  EXPECT_EQ(g.detail.size(), 4u);
  for (const auto& cell : g.cells) {
    EXPECT_TRUE(cell.rejection_rate == 0.0 || cell.rejection_rate == 1.0);
    EXPECT_EQ(cell.replicates, 1u);
    EXPECT_EQ(cell.mean_kmeans_time_s, 0.0);
  }
  EXPECT_EQ(g.cells[0].model.family, Family::TC3k2);
  EXPECT_EQ(g.cells[1].n, 400u);
  EXPECT_EQ(g.cells[2].model.family, Family::C2k2_3);
}

TEST(Harness, ByteIdenticalAcrossParallelism) {
  ExperimentConfig c = small_config();
  const std::string serial = csv(run_grid(c));
  for (std::size_t p : {std::size_t{4}, hardware_workers()}) {
    c.parallelism = p;
    EXPECT_EQ(csv(run_grid(c)), serial) << "parallelism " << p;
  }
}

TEST(Harness, ReplicatesDrawDistinctSamples) {
  std::set<std::size_t> hashes;
  for (std::size_t rep = 0; rep < 200; ++rep) {
    const Dataset d =
        sample(ModelSpec::make(Family::C1k2), 50, replicate_stream(7, 0, 0, rep, StreamPurpose::Sample));
    std::size_t h = 0;
    for (double x : d.values()) h = h * 1000003u ^ std::hash<double>{}(x);
    hashes.insert(h);
  }
  EXPECT_EQ(hashes.size(), 200u);
  EXPECT_NE(replicate_stream(7, 0, 0, 0, StreamPurpose::Sample),
            replicate_stream(7, 0, 0, 0, StreamPurpose::Test));
  EXPECT_NE(replicate_stream(7, 1, 0, 0, StreamPurpose::Sample),
            replicate_stream(7, 0, 1, 0, StreamPurpose::Sample));
}

TEST(Harness, AggregationExcludesFailures) {
  ExperimentConfig c;
  c.models = {ModelSpec::make(Family::C1k2)};
  c.sample_sizes = {10};
  std::vector<DetailRow> rows(4);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    rows[i].n = 10;
    rows[i].replicate = i;
    rows[i].kmeans_time_s = 1.0 + i;
  }
  rows[0].reject = true;
  rows[3].failed = true;
  rows[3].reject = true;
  auto cells = aggregate_cells(c, rows);
  ASSERT_EQ(cells.size(), 1u);
  EXPECT_EQ(cells[0].replicates, 3u);
  EXPECT_EQ(cells[0].failures, 1u);
  EXPECT_EQ(cells[0].rejections, 1u);
  EXPECT_DOUBLE_EQ(cells[0].rejection_rate, 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(cells[0].mean_kmeans_time_s, 2.0);
  std::reverse(rows.begin(), rows.end());
  EXPECT_EQ(aggregate_cells(c, rows)[0].rejection_rate, cells[0].rejection_rate);
}

TEST(Harness, FailedReplicatesAreRecorded) {
  ExperimentConfig c;
  // One row can never hold two clusters.
  c.models = {ModelSpec::make(Family::C1k2)};
  c.sample_sizes = {1};
  c.replicates = 2;
  c.B = 5;
  c.restarts = 1;
  const GridResult g = run_grid(c);
  EXPECT_EQ(g.cells[0].failures, 2u);
  EXPECT_TRUE(g.detail[0].failed);
  EXPECT_FALSE(g.detail[0].error.empty());
}

TEST(Harness, CsvHeaders) {
  const GridResult g = run_r_grid({0.1, urc3k2_phase_boundary()}, 300, 1, 5, 0.05, 3, 2);
  std::ostringstream cells, detail;
  write_cells_csv(cells, g.cells);
  write_detail_csv(detail, g.detail);
  EXPECT_EQ(first_line(cells.str()),
            "model,family,r,dim,k,n,replicates,rejections,rejection_rate,mean_kmeans_time_s,"
            "mean_test_time_s");
  EXPECT_EQ(first_line(detail.str()),
            "model,n,replicate,t_bar_star,reject,base_wcss,kmeans_time_s,test_time_s,seed");
  EXPECT_NE(cells.str().find("\nU0.1C3k2,UrC3k2,0.10000000000000001,1,2,300,1,"), std::string::npos);
  EXPECT_EQ(g.cells.size(), 2u);
  EXPECT_EQ(g.cells[1].model.r, urc3k2_phase_boundary());

  const ModelSpec spec = ModelSpec::make(Family::C2k2_2, 0.0, 3);
  const auto records = run_consistency(spec, 2, 200, 2, 5);
  std::ostringstream centers;
  write_centers_csv(centers, spec, records);
  EXPECT_EQ(first_line(centers.str()), "model,sample_idx,center_idx,x1,x2,x3,orbit_distance");
  const std::string text = centers.str();
  EXPECT_EQ(std::count(text.begin(), text.end(), '\n'), 5);
}

TEST(Harness, McGridRunsWithTwoReplicates) {
  McGridOptions opts;
  opts.tests = 3;
  opts.restarts = 2;
  const GridResult g = run_mc_grid({0.2, 0.4}, 500, 2, 11, opts);
  ASSERT_EQ(g.cells.size(), 2u);
  EXPECT_EQ(g.detail.size(), 6u);
  for (const auto& row : g.detail) EXPECT_FALSE(row.failed);
  EXPECT_EQ(g.cells[0].replicates, 3u);
  EXPECT_THROW(run_mc_grid({0.2}, 500, 1, 11, opts), ParameterError);
  EXPECT_THROW(run_mc_grid({0.7}, 500, 2, 11, opts), ParameterError);
}

TEST(Harness, ConsistencyOnDiscreteSupport) {
  const ModelSpec spec = ModelSpec::make(Family::UrC3k2, 0.0);
  const auto records = run_consistency(spec, 1, 5000, 10, 1);
  ASSERT_EQ(records.size(), 1u);
  EXPECT_LT(records[0].distance.distance, 0.02);
  EXPECT_NEAR(records[0].wcss, 1.0 / 6.0, 0.01);
}
