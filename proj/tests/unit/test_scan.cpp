#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bilocal/criteria.hpp"
#include "bilocal/scan.hpp"

namespace bilocal {
namespace {

const ScanRecord& nearest(const ScanTable& table, std::initializer_list<double> point) {
  const ScanRecord* best = nullptr;
  double best_dist = INFINITY;
  for (const auto& r : table.records) {
    double d = 0.0;
    std::size_t i = 0;
    for (double v : point) d += std::abs(r.axes[i++] - v);
    if (d < best_dist) {
      best_dist = d;
      best = &r;
    }
  }
  return *best;
}

TEST(ScanAxis, InclusiveWithClampedLastStep) {
  const auto v = ScanAxis{"a", 0.0, 1.0, 0.3}.values();
  ASSERT_EQ(v.size(), 5u);
  EXPECT_DOUBLE_EQ(v[3], 0.3 * 3);
  EXPECT_EQ(v.back(), 1.0);
  const auto exact = ScanAxis{"a", -1.0, 1.0, 0.01}.values();
  EXPECT_EQ(exact.size(), 201u);
  EXPECT_EQ(exact.front(), -1.0);
  EXPECT_NEAR(exact.back(), 1.0, 1e-12);
  EXPECT_EQ(ScanAxis({"a", 0.5, 0.5, 0.1}).values().size(), 1u);
  EXPECT_THROW(ScanAxis({"a", 0.0, 1.0, 0.0}).values(), ScanConfigError);
  EXPECT_THROW(ScanAxis({"a", 1.0, 0.0, 0.1}).values(), ScanConfigError);
}

TEST(ScanConfig, Validation) {
  ScanConfig cfg;
  cfg.model = "alpha_pair";
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);  // no axes
  cfg.axes = {{"alpha1", 0, 1, 0.5}};
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);  // alpha2 unbound
  cfg.fixed["alpha2"] = 0.7;
  EXPECT_NO_THROW(scan_layout(cfg));
  cfg.fixed["alpha1"] = 0.7;
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);  // bound twice
  cfg.fixed.erase("alpha1");
  cfg.criteria = {"bogus"};
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);
  cfg.criteria = {"nonbilocal"};
  EXPECT_EQ(scan_layout(cfg).columns.size(), 1u);
  cfg.axes = {{"alpha1", 0, 1, 0.5}, {"alpha1", 0, 1, 0.5}, {"x", 0, 1, 1}, {"y", 0, 1, 1}};
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);
  cfg.model = "nope";
  EXPECT_THROW(scan_layout(cfg), ScanConfigError);
}

TEST(ScanConfig, OutOfDomainGridForNeverInvalidModelIsAnError) {
  ScanConfig cfg;
  cfg.model = "alpha_pair";
  cfg.axes = {{"alpha1", 0, 1.5, 0.5}, {"alpha2", 0, 1, 0.5}};
  EXPECT_THROW(run_scan(cfg), ScanConfigError);
}

TEST(Scan, RowMajorOrder) {
  ScanConfig cfg;
  cfg.model = "alpha_pair";
  cfg.axes = {{"alpha1", 0, 1, 0.5}, {"alpha2", 0, 1, 0.5}};
  const auto t = run_scan(cfg);
  ASSERT_EQ(t.records.size(), 9u);
  EXPECT_EQ(t.records[1].axes, (std::vector<double>{0.0, 0.5}));
  EXPECT_EQ(t.records[3].axes, (std::vector<double>{0.5, 0.0}));
  EXPECT_EQ(scan_size(cfg), 9u);
}

TEST(Scan, InvalidPointsAreFlaggedNotFatal) {
  ScanConfig cfg;
  cfg.model = "t_pair";
  cfg.axes = {{"t1_cx", -1, 1, 0.5}};
  cfg.fixed = {{"t1_cy", 0.9}, {"t1_cz", 0.0}, {"t2_cx", 0}, {"t2_cy", 0}, {"t2_cz", 0}};
  const auto t = run_scan(cfg);
  ASSERT_EQ(t.records.size(), 5u);
  EXPECT_TRUE(t.layout.has_valid_column);
  EXPECT_FALSE(t.records[4].valid);  // |1 + 0.9| > 1
  EXPECT_TRUE(t.records[2].valid);
  EXPECT_TRUE(t.records[4].values.empty());
}

TEST(Scan, DeterministicAcrossWorkerCounts) {
  auto cfg = ScanConfig::figure(2, 0.02);
  const auto serial = run_scan(cfg);
  cfg.workers = 3;
  const auto parallel = run_scan(cfg);
  EXPECT_EQ(serial.records, parallel.records);

  auto fig4 = ScanConfig::figure(4, 0.02);
  fig4.flagged_only = "witness";
  const auto a = run_scan(fig4);
  fig4.workers = 4;
  EXPECT_EQ(a.records, run_scan(fig4).records);
}

TEST(Scan, Figure2Region) {
  const auto t = run_scan(ScanConfig::figure(2, 0.01));
  const auto& in = nearest(t, {0.8, 0.8});
  ASSERT_TRUE(in.valid);
  EXPECT_TRUE(in.flag(t.layout, "local_but_nonbilocal"));
  const auto& out = nearest(t, {0.6, 0.6});
  EXPECT_FALSE(out.flag(t.layout, "local_but_nonbilocal"));
  EXPECT_FALSE(out.flag(t.layout, "nonbilocal"));

  // Flags are recomputable from the axis values.
  for (const auto& r : t.records) {
    if (!r.valid) continue;
    const TParams c{r.axes[0], r.value(t.layout, "cy"), r.axes[1]};
    ASSERT_EQ(r.flag(t.layout, "nonbilocal"), t_nonbilocal_condition(c, c).holds);
    ASSERT_EQ(r.flag(t.layout, "local"), t_local_condition(c, c).holds);
  }
}

TEST(Scan, Figure3And5Bounds) {
  const double step3 = 0.005;
  const auto f3 = run_scan(ScanConfig::figure(3, step3));
  for (const auto& r : f3.records)
    if (r.flag(f3.layout, "nonbilocal")) ASSERT_LT(r.axes[0], 0.21 + step3);

  const auto f5 = run_scan(ScanConfig::figure(5, 0.01));
  std::size_t flagged = 0;
  for (const auto& r : f5.records) {
    if (!r.flag(f5.layout, "nonbilocal")) continue;
    ++flagged;
    ASSERT_GE(std::min(r.axes[0], r.axes[1]), 0.5);
  }
  EXPECT_GT(flagged, 0u);
}

TEST(Scan, Figure6PositiveQuadrantNeverCapable) {
  const auto t = run_scan(ScanConfig::figure(6, 0.05));
  for (const auto& r : t.records)
    if (r.axes[0] > 0 && r.axes[1] > 0) ASSERT_FALSE(r.flag(t.layout, "nonbilocal_capable"));
}

TEST(Scan, FlaggedOnlyFilters) {
  auto cfg = ScanConfig::figure(5, 0.1);
  cfg.flagged_only = "nonbilocal";
  const auto t = run_scan(cfg);
  EXPECT_FALSE(t.records.empty());
  for (const auto& r : t.records) EXPECT_TRUE(r.flag(t.layout, "nonbilocal"));
  cfg.flagged_only = "s1_value";
  EXPECT_THROW(run_scan(cfg), ScanConfigError);
}

ScanTable two_records() {
  ScanConfig cfg;
  cfg.model = "alpha_pair";
  cfg.axes = {{"alpha1", 0.25, 1.0, 0.75}};
  cfg.fixed = {{"alpha2", 0.75}};
  return run_scan(cfg);
}

TEST(Emit, CsvShape) {
  const auto t = two_records();
  std::ostringstream out;
  emit(t, OutputFormat::Csv, out);
  EXPECT_EQ(out.str(), "alpha1,s1_value,nonbilocal\n0.25,0,false\n1,1.11803398875,true\n");
}

TEST(Emit, CsvInvalidRowsHaveEmptyCells) {
  ScanConfig cfg;
  cfg.model = "t_pair";
  cfg.axes = {{"t1_cx", 1, 1, 1}};
  cfg.fixed = {{"t1_cy", 0.9}, {"t1_cz", 0.0}, {"t2_cx", 0}, {"t2_cy", 0}, {"t2_cz", 0}};
  cfg.criteria = {"r7_value", "nonbilocal"};
  std::ostringstream out;
  emit(run_scan(cfg), OutputFormat::Csv, out);
  EXPECT_EQ(out.str(), "t1_cx,valid,r7_value,nonbilocal\n1,false,,\n");
}

TEST(Emit, JsonRoundTripsAndIsDeterministic) {
  const auto t = run_scan(ScanConfig::figure(2, 0.25));
  std::ostringstream a, b;
  emit(t, OutputFormat::Json, a);
  emit(t, OutputFormat::Json, b);
  EXPECT_EQ(a.str(), b.str());
  std::istringstream in(a.str());
  const auto back = read_json(in, t.layout.axis_names);
  EXPECT_EQ(back.records, t.records);
  ASSERT_EQ(back.layout.columns.size(), t.layout.columns.size());
  for (std::size_t c = 0; c < t.layout.columns.size(); ++c) {
    EXPECT_EQ(back.layout.columns[c].name, t.layout.columns[c].name);
    EXPECT_EQ(back.layout.columns[c].kind, t.layout.columns[c].kind);
  }
}

TEST(Emit, RejectsEmptyAndUnwritable) {
  ScanTable empty;
  std::ostringstream out;
  EXPECT_THROW(emit(empty, OutputFormat::Csv, out), ScanConfigError);
  EXPECT_THROW(emit(two_records(), OutputFormat::Csv,
                    std::filesystem::path("/nonexistent-dir/out.csv")),
               ScanIoError);
}

TEST(Emit, FileOutputMatchesStream) {
  const auto t = two_records();
  const auto path = std::filesystem::temp_directory_path() / "bilocal_emit_test.json";
  emit(t, OutputFormat::Json, path);
  std::ifstream in(path);
  std::stringstream file;
  file << in.rdbuf();
  std::ostringstream direct;
  emit(t, OutputFormat::Json, direct);
  EXPECT_EQ(file.str(), direct.str());
  std::filesystem::remove(path);
}

TEST(ConfigFile, ParsesAllKeys) {
  std::istringstream in(
      "# custom sweep\n"
      "model = werner_pair\n"
      "axis = alpha1 0 1 0.25   # trailing comment\n"
      "fixed = alpha2 0.9\n"
      "criteria = b1 nonbilocal\n"
      "flagged_only = nonbilocal\n"
      "workers = 2\n");
  const auto cfg = parse_scan_config(in);
  EXPECT_EQ(cfg.model, "werner_pair");
  ASSERT_EQ(cfg.axes.size(), 1u);
  EXPECT_EQ(cfg.axes[0].step, 0.25);
  EXPECT_EQ(cfg.fixed.at("alpha2"), 0.9);
  EXPECT_EQ(cfg.criteria, (std::vector<std::string>{"b1", "nonbilocal"}));
  EXPECT_EQ(cfg.flagged_only, "nonbilocal");
  EXPECT_EQ(cfg.workers, 2);
  const auto t = run_scan(cfg);
  for (const auto& r : t.records) EXPECT_GT(r.axes[0] * 0.9, 0.5);
}

TEST(ConfigFile, FigureSeed) {
  std::istringstream in("figure = 5\nstep = 0.5\n");
  const auto cfg = parse_scan_config(in);
  EXPECT_EQ(cfg.model, "alpha_pair");
  EXPECT_EQ(scan_size(cfg), 9u);
}

TEST(ConfigFile, Errors) {
  std::istringstream bad_key("colour = blue\n");
  EXPECT_THROW(parse_scan_config(bad_key), ScanConfigError);
  std::istringstream bad_axis("model = alpha_pair\naxis = alpha1 0 1\n");
  EXPECT_THROW(parse_scan_config(bad_axis), ScanConfigError);
  std::istringstream no_model("axis = alpha1 0 1 0.1\n");
  EXPECT_THROW(parse_scan_config(no_model), ScanConfigError);
  std::istringstream bad_number("model = alpha_pair\nfixed = alpha2 x\n");
  EXPECT_THROW(parse_scan_config(bad_number), ScanConfigError);
}

TEST(Models, RegistryListsBuiltins) {
  const auto models = scan_models();
  for (const char* name : {"t_same_copies", "visibility_tradeoff", "x_steering", "alpha_pair",
                           "delta_plane", "werner_same_copies", "werner_pair", "t_pair", "x_pair"}) {
    EXPECT_TRUE(std::any_of(models.begin(), models.end(),
                            [&](const ScanModelInfo& m) { return m.name == name; }))
        << name;
  }
}

}  // namespace
}  // namespace bilocal
