#include "sleepbench/harness.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "sleepbench/errors.hpp"

namespace sleepbench {

std::string_view to_string(ClassifierId id) {
  switch (id) {
    case ClassifierId::logreg: return "logreg";
    case ClassifierId::dtree: return "dtree";
    case ClassifierId::knn1: return "knn1";
    case ClassifierId::knn10: return "knn10";
    case ClassifierId::gnb: return "gnb";
    case ClassifierId::svm: return "svm";
    case ClassifierId::conv1d_1: return "conv1d_1";
    case ClassifierId::conv1d_2: return "conv1d_2";
  }
  return "?";
}

ClassifierId classifier_id_from(std::string_view name) {
  for (ClassifierId id : kAllClassifiers) {
    if (to_string(id) == name) return id;
  }
  throw ParamError("unknown classifier id '" + std::string(name) + "'");
}

std::string_view classifier_label(ClassifierId id) {
  switch (id) {
    case ClassifierId::logreg: return "Logistic Regression";
    case ClassifierId::dtree: return "Decision Tree";
    case ClassifierId::knn1: return "k-NN (k=1)";
    case ClassifierId::knn10: return "k-NN (k=10)";
    case ClassifierId::gnb: return "Naive Bayes";
    case ClassifierId::svm: return "SVM";
    case ClassifierId::conv1d_1: return "CONV-1D_1";
    case ClassifierId::conv1d_2: return "CONV-1D_2";
  }
  return "?";
}

bool is_cnn(ClassifierId id) {
  return id == ClassifierId::conv1d_1 || id == ClassifierId::conv1d_2;
}

ClassifierSpec ClassifierSpec::defaults(ClassifierId id) {
  ClassifierSpec spec;
  spec.id = id;
  if (id == ClassifierId::knn10) spec.classic.k = 10;
  return spec;
}

std::string_view to_string(ReportFormat format) {
  switch (format) {
    case ReportFormat::markdown: return "markdown";
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
  }
  return "?";
}

ReportFormat report_format_from(std::string_view name) {
  if (name == "markdown" || name == "md") return ReportFormat::markdown;
  if (name == "csv") return ReportFormat::csv;
  if (name == "json") return ReportFormat::json;
  throw ParamError("unknown report format '" + std::string(name) + "'");
}

std::string_view format_extension(ReportFormat format) {
  switch (format) {
    case ReportFormat::markdown: return "md";
    case ReportFormat::csv: return "csv";
    case ReportFormat::json: return "json";
  }
  return "?";
}

RunConfig RunConfig::defaults() {
  RunConfig cfg;
  cfg.datasets = {{DatasetId::sleep_study, "", 1, 0},
                  {DatasetId::sleep_deprivation, "", 2, 0},
                  {DatasetId::sleep_cycle, "", 3, 0}};
  for (ClassifierId id : kAllClassifiers) cfg.classifiers.push_back(ClassifierSpec::defaults(id));
  return cfg;
}

void RunConfig::validate() const {
  if (classifiers.empty()) throw ParamError("config needs at least one classifier");
  if (datasets.empty()) throw ParamError("config needs at least one dataset");
  if (repeats < 1) throw ParamError("repeats must be >= 1");
  if (formats.empty()) throw ParamError("config needs at least one report format");
  if (fixture_noise < 0) throw ParamError("fixture noise must be >= 0");
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    for (std::size_t j = i + 1; j < datasets.size(); ++j) {
      if (datasets[i].id == datasets[j].id) {
        throw ParamError("dataset '" + std::string(to_string(datasets[i].id)) +
                         "' configured twice");
      }
    }
  }
  for (std::size_t i = 0; i < classifiers.size(); ++i) {
    for (std::size_t j = i + 1; j < classifiers.size(); ++j) {
      if (classifiers[i].id == classifiers[j].id) {
        throw ParamError("classifier '" + std::string(to_string(classifiers[i].id)) +
                         "' configured twice");
      }
    }
  }
}

std::uint64_t cell_seed(std::uint64_t global_seed, DatasetId dataset, ClassifierId classifier,
                        int repeat) {
  std::uint64_t seed = Rng::mix(global_seed, 0x0D00 + static_cast<std::uint64_t>(dataset));
  seed = Rng::mix(seed, 0xC100 + static_cast<std::uint64_t>(classifier));
  return Rng::mix(seed, static_cast<std::uint64_t>(repeat));
}

namespace {

Dataset materialize(const DatasetSpec& spec, double noise) {
  if (!spec.csv_path.empty()) return load_csv(spec.csv_path, spec.id);
  Rng rng(spec.fixture_seed);
  const std::size_t rows = spec.fixture_rows == 0 ? default_rows(spec.id) : spec.fixture_rows;
  return load_csv_text(make_fixture(spec.id, rows, rng, {noise}), spec.id);
}

struct RepeatOutcome {
  MetricsReport metrics;
  std::vector<double> epoch_losses;
};

RepeatOutcome run_repeat(const Dataset& data, const ClassifierSpec& spec, const RunConfig& cfg,
                         int repeat) {
  const TrainTestSplit split = prepare_split(data, cfg.seed + static_cast<std::uint64_t>(repeat),
                                             cfg.normalization);
  Rng rng(cell_seed(cfg.seed, data.id, spec.id, repeat));

  RepeatOutcome outcome;
  std::vector<int> predicted;
  switch (spec.id) {
    case ClassifierId::logreg:
      predicted = predict(train_logreg(split.train.features, split.train.labels, spec.classic),
                          split.test.features);
      break;
    case ClassifierId::dtree:
      predicted = predict(train_dtree(split.train.features, split.train.labels, spec.classic),
                          split.test.features);
      break;
    case ClassifierId::knn1:
    case ClassifierId::knn10:
      predicted = predict(train_knn(split.train.features, split.train.labels, spec.classic),
                          split.test.features);
      break;
    case ClassifierId::gnb:
      predicted = predict(train_gnb(split.train.features, split.train.labels, spec.classic),
                          split.test.features);
      break;
    case ClassifierId::svm:
      predicted = predict(train_svm(split.train.features, split.train.labels, spec.classic),
                          split.test.features);
      break;
    case ClassifierId::conv1d_1:
    case ClassifierId::conv1d_2: {
      const CnnVariant variant = spec.id == ClassifierId::conv1d_1 ? CnnVariant::conv1d_1
                                                                   : CnnVariant::conv1d_2;
      CnnModel model = build_cnn(variant, data.dim(), spec.cnn, rng);
      CnnTrainResult trained =
          train_cnn(std::move(model), split.train.features, split.train.labels, spec.cnn, rng);
      outcome.epoch_losses = std::move(trained.epoch_losses);
      predicted = predict_cnn(trained.model, split.test.features);
      break;
    }
  }
  outcome.metrics = compute_metrics(confusion(predicted, split.test.labels));
  return outcome;
}

void aggregate(BenchmarkCell& cell) {
  const auto n = static_cast<double>(cell.repeats.size());
  for (std::size_t m = 0; m < kMetricCount; ++m) {
    const MetricId id = kAllMetrics[m];
    double mean = 0;
    for (const MetricsReport& r : cell.repeats) mean += r.value(id);
    mean /= n;
    double var = 0;
    for (const MetricsReport& r : cell.repeats) {
      const double diff = r.value(id) - mean;
      var += diff * diff;
    }
    cell.mean[m] = mean;
    cell.stddev[m] = cell.repeats.size() > 1 ? std::sqrt(var / (n - 1)) : 0.0;
    for (const MetricsReport& r : cell.repeats) {
      if (r.flagged(id)) cell.any_undefined[m] = true;
    }
  }
}

}  // namespace

std::vector<BenchmarkCell> run_benchmark(const RunConfig& cfg) {
  cfg.validate();
  std::vector<BenchmarkCell> cells;
  for (const DatasetSpec& ds : cfg.datasets) {
    Dataset data;
    std::string dataset_error;
    try {
      data = materialize(ds, cfg.fixture_noise);
    } catch (const Error& e) {
      dataset_error = e.what();
    }
    for (const ClassifierSpec& clf : cfg.classifiers) {
      BenchmarkCell cell;
      cell.dataset = ds.id;
      cell.classifier = clf.id;
      if (!dataset_error.empty()) {
        cell.error = "dataset error: " + dataset_error;
        cells.push_back(std::move(cell));
        continue;
      }
      try {
        for (int r = 0; r < cfg.repeats; ++r) {
          RepeatOutcome outcome = run_repeat(data, clf, cfg, r);
          cell.repeats.push_back(std::move(outcome.metrics));
          if (is_cnn(clf.id)) cell.epoch_losses.push_back(std::move(outcome.epoch_losses));
        }
        aggregate(cell);
      } catch (const Error& e) {
        cell.error = e.what();
        cell.repeats.clear();
        cell.epoch_losses.clear();
      }
      cells.push_back(std::move(cell));
    }
  }
  return cells;
}

std::vector<std::filesystem::path> write_reports(const RunConfig& cfg,
                                                 const std::vector<BenchmarkCell>& cells) {
  namespace fs = std::filesystem;
  const fs::path dir(cfg.output_dir);
  fs::create_directories(dir);

  std::vector<fs::path> written;
  auto write_file = [&written](const fs::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path.string() + "'");
    out << content;
    written.push_back(path);
  };

  // table1 only exists when the logistic-regression column source is present.
  const bool have_logreg = std::any_of(cells.begin(), cells.end(), [](const BenchmarkCell& c) {
    return c.classifier == ClassifierId::logreg;
  });
  for (ReportFormat format : cfg.formats) {
    const std::string ext(format_extension(format));
    if (have_logreg) write_file(dir / ("table1." + ext), emit_table1(cells, format));
    write_file(dir / ("table2." + ext), emit_table2(cells, format));
  }
  write_file(dir / "cells.json", cells_to_json(cfg, cells));

  for (const BenchmarkCell& cell : cells) {
    for (std::size_t r = 0; r < cell.epoch_losses.size(); ++r) {
      std::string csv = "epoch,loss\n";
      for (std::size_t e = 0; e < cell.epoch_losses[r].size(); ++e) {
        char buf[40];
        auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), cell.epoch_losses[r][e]);
        csv += std::to_string(e + 1);
        csv += ',';
        csv.append(buf, ptr);
        csv += '\n';
      }
      write_file(dir / ("loss_" + std::string(to_string(cell.dataset)) + "_" +
                        std::string(to_string(cell.classifier)) + "_r" + std::to_string(r) +
                        ".csv"),
                 csv);
    }
  }
  return written;
}

}  // namespace sleepbench
