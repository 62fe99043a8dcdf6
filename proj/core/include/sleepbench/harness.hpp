#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sleepbench/classic.hpp"
#include "sleepbench/convnet.hpp"
#include "sleepbench/dataio.hpp"
#include "sleepbench/metrics.hpp"
#include "sleepbench/preprocess.hpp"

namespace sleepbench {

enum class ClassifierId { logreg, dtree, knn1, knn10, gnb, svm, conv1d_1, conv1d_2 };
inline constexpr std::array<ClassifierId, 8> kAllClassifiers = {
    ClassifierId::logreg, ClassifierId::dtree, ClassifierId::knn1, ClassifierId::knn10,
    ClassifierId::gnb,    ClassifierId::svm,   ClassifierId::conv1d_1, ClassifierId::conv1d_2};

std::string_view to_string(ClassifierId id);
ClassifierId classifier_id_from(std::string_view name);
/// Display name used as the classifier's report row label.
std::string_view classifier_label(ClassifierId id);
bool is_cnn(ClassifierId id);

struct ClassifierSpec {
  ClassifierId id = ClassifierId::logreg;
  TrainConfig classic;   // used by the five traditional kinds
  CnnTrainConfig cnn;    // used by the two CNN variants

  static ClassifierSpec defaults(ClassifierId id);
};

struct DatasetSpec {
  DatasetId id = DatasetId::sleep_study;
  std::string csv_path;               // empty -> synthesize a fixture
  std::uint64_t fixture_seed = 1;
  std::size_t fixture_rows = 0;       // 0 -> default_rows(id)
};

enum class ReportFormat { markdown, csv, json };
std::string_view to_string(ReportFormat format);
ReportFormat report_format_from(std::string_view name);
std::string_view format_extension(ReportFormat format);  // "md", "csv", "json"

struct RunConfig {
  std::vector<DatasetSpec> datasets;
  std::vector<ClassifierSpec> classifiers;
  std::uint64_t seed = 1;
  int repeats = 5;
  std::string output_dir = "bench_out";
  std::vector<ReportFormat> formats = {ReportFormat::markdown, ReportFormat::csv,
                                       ReportFormat::json};
  double fixture_noise = 1.25;
  NormKind normalization = NormKind::zscore;

  /// All three fixture datasets and all eight classifiers.
  static RunConfig defaults();
  void validate() const;
};

/// One (dataset, classifier) entry of the benchmark grid.
struct BenchmarkCell {
  DatasetId dataset = DatasetId::sleep_study;
  ClassifierId classifier = ClassifierId::logreg;
  std::vector<MetricsReport> repeats;
  std::array<double, kMetricCount> mean{};    // indexed by MetricId
  std::array<double, kMetricCount> stddev{};  // sample std; 0 for a single repeat
  std::array<bool, kMetricCount> any_undefined{};
  std::vector<std::vector<double>> epoch_losses;  // CNN cells: one series per repeat
  std::string error;  // nonempty if the cell failed

  bool ok() const { return error.empty(); }
};

/// Seed of the generator owned by one benchmark cell, derived only from the
/// global seed and the cell coordinates so scheduling cannot matter.
std::uint64_t cell_seed(std::uint64_t global_seed, DatasetId dataset, ClassifierId classifier,
                        int repeat);

/// Runs the full grid. Repeat r of every cell splits its dataset with seed
/// global_seed + r, normalizes with train-fitted stats, trains, and evaluates
/// on the test half. A failing cell records its error and the run continues.
std::vector<BenchmarkCell> run_benchmark(const RunConfig& cfg);

/// Six metric rows (AC, SE, SP, F1, PR, RE) for the logistic-regression cells,
/// one column per dataset. Metrics that hit a 0/0 denominator in any repeat
/// carry a footnote marker.
std::string emit_table1(const std::vector<BenchmarkCell>& cells, ReportFormat format);

/// One row per classifier, mean accuracy per dataset, best per column bolded
/// (markdown) or flagged (json).
std::string emit_table2(const std::vector<BenchmarkCell>& cells, ReportFormat format);

std::string cells_to_json(const RunConfig& cfg, const std::vector<BenchmarkCell>& cells);
std::vector<BenchmarkCell> cells_from_json(std::string_view text);

/// Writes table1.* and table2.* in every configured format plus cells.json
/// and per-repeat CNN loss CSVs into cfg.output_dir. Returns the paths.
std::vector<std::filesystem::path> write_reports(const RunConfig& cfg,
                                                 const std::vector<BenchmarkCell>& cells);

RunConfig parse_config_text(std::string_view text);
RunConfig parse_config_file(const std::filesystem::path& path);

}  // namespace sleepbench
