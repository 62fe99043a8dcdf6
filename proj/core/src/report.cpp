#include <json.hpp>

#include <algorithm>
#include <optional>

#include "sleepbench/errors.hpp"
#include "sleepbench/harness.hpp"

namespace sleepbench {

namespace {

using nlohmann::json;

constexpr std::array<DatasetId, 3> kDatasetOrder = {
    DatasetId::sleep_study, DatasetId::sleep_deprivation, DatasetId::sleep_cycle};
// table1 row order.
constexpr std::array<MetricId, kMetricCount> kTableMetricOrder = {
    MetricId::ac, MetricId::se, MetricId::sp, MetricId::f1, MetricId::pr, MetricId::re};

std::vector<DatasetId> datasets_in(const std::vector<BenchmarkCell>& cells) {
  std::vector<DatasetId> out;
  for (DatasetId id : kDatasetOrder) {
    if (std::any_of(cells.begin(), cells.end(),
                    [id](const BenchmarkCell& c) { return c.dataset == id; })) {
      out.push_back(id);
    }
  }
  return out;
}

std::vector<ClassifierId> classifiers_in(const std::vector<BenchmarkCell>& cells) {
  std::vector<ClassifierId> out;
  for (ClassifierId id : kAllClassifiers) {
    if (std::any_of(cells.begin(), cells.end(),
                    [id](const BenchmarkCell& c) { return c.classifier == id; })) {
      out.push_back(id);
    }
  }
  return out;
}

const BenchmarkCell* find_cell(const std::vector<BenchmarkCell>& cells, DatasetId dataset,
                               ClassifierId classifier) {
  for (const BenchmarkCell& c : cells) {
    if (c.dataset == dataset && c.classifier == classifier) return &c;
  }
  return nullptr;
}

std::size_t metric_index(MetricId id) { return static_cast<std::size_t>(id); }

std::string cell_value(const BenchmarkCell& cell, MetricId metric) {
  if (!cell.ok()) return "n/a";
  std::string out = render_percent(cell.mean[metric_index(metric)]);
  if (cell.any_undefined[metric_index(metric)]) out += '*';
  return out;
}

constexpr const char* kFootnote = "0/0 denominator reported as 0 in at least one repeat.";

std::string markdown_table(const std::vector<std::string>& header,
                           const std::vector<std::vector<std::string>>& rows, bool footnote) {
  std::string out = "|";
  for (const std::string& h : header) out += " " + h + " |";
  out += "\n|";
  for (std::size_t i = 0; i < header.size(); ++i) out += " --- |";
  out += "\n";
  for (const auto& row : rows) {
    out += "|";
    for (const std::string& v : row) out += " " + v + " |";
    out += "\n";
  }
  if (footnote) {
    out += "\n\\* ";
    out += kFootnote;
    out += "\n";
  }
  return out;
}

std::string csv_table(const std::vector<std::string>& header,
                      const std::vector<std::vector<std::string>>& rows) {
  std::string out;
  auto emit_row = [&out](const std::vector<std::string>& fields) {
    for (std::size_t i = 0; i < fields.size(); ++i) {
      if (i) out += ',';
      out += fields[i];
    }
    out += '\n';
  };
  emit_row(header);
  for (const auto& row : rows) emit_row(row);
  return out;
}

json metrics_json(const MetricsReport& r) {
  json j;
  for (MetricId id : kAllMetrics) {
    j[std::string(metric_name(id))] = r.value(id);
  }
  json flags = json::array();
  for (MetricId id : r.undefined_flags) flags.push_back(std::string(metric_name(id)));
  j["undefined"] = std::move(flags);
  return j;
}

MetricsReport metrics_from_json(const json& j) {
  MetricsReport r;
  r.ac = j.at("AC").get<double>();
  r.se = j.at("SE").get<double>();
  r.sp = j.at("SP").get<double>();
  r.pr = j.at("PR").get<double>();
  r.re = j.at("RE").get<double>();
  r.f1 = j.at("F1").get<double>();
  for (const json& name : j.at("undefined")) {
    for (MetricId id : kAllMetrics) {
      if (name.get<std::string>() == metric_name(id)) r.undefined_flags.push_back(id);
    }
  }
  return r;
}

}  // namespace

std::string emit_table1(const std::vector<BenchmarkCell>& cells, ReportFormat format) {
  const std::vector<DatasetId> datasets = datasets_in(cells);
  if (datasets.empty()) throw ReportError("no benchmark cells to report");

  std::vector<const BenchmarkCell*> lr_cells;
  for (DatasetId ds : datasets) {
    const BenchmarkCell* cell = find_cell(cells, ds, ClassifierId::logreg);
    if (!cell) {
      throw ReportError("missing logistic-regression cell for dataset '" +
                        std::string(to_string(ds)) + "'");
    }
    lr_cells.push_back(cell);
  }

  if (format == ReportFormat::json) {
    json doc;
    doc["table"] = "table1";
    json columns = json::array();
    for (DatasetId ds : datasets) columns.push_back(std::string(to_string(ds)));
    doc["columns"] = std::move(columns);
    json rows = json::array();
    for (MetricId metric : kTableMetricOrder) {
      json row;
      row["metric"] = std::string(metric_name(metric));
      json values;
      for (std::size_t c = 0; c < datasets.size(); ++c) {
        const BenchmarkCell& cell = *lr_cells[c];
        json v;
        if (cell.ok()) {
          v["mean"] = cell.mean[metric_index(metric)];
          v["stddev"] = cell.stddev[metric_index(metric)];
          v["percent"] = render_percent(cell.mean[metric_index(metric)]);
          v["undefined"] = cell.any_undefined[metric_index(metric)];
        } else {
          v["error"] = cell.error;
        }
        values[std::string(to_string(datasets[c]))] = std::move(v);
      }
      row["values"] = std::move(values);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
  }

  std::vector<std::string> header = {"Metric"};
  for (DatasetId ds : datasets) header.emplace_back(dataset_label(ds));
  std::vector<std::vector<std::string>> rows;
  bool any_flag = false;
  for (MetricId metric : kTableMetricOrder) {
    std::vector<std::string> row = {std::string(metric_name(metric))};
    for (const BenchmarkCell* cell : lr_cells) {
      row.push_back(cell_value(*cell, metric));
      any_flag |= cell->ok() && cell->any_undefined[metric_index(metric)];
    }
    rows.push_back(std::move(row));
  }
  if (format == ReportFormat::csv) {
    std::vector<std::string> csv_header = {"metric"};
    for (DatasetId ds : datasets) csv_header.emplace_back(to_string(ds));
    return csv_table(csv_header, rows);
  }
  return markdown_table(header, rows, any_flag);
}

std::string emit_table2(const std::vector<BenchmarkCell>& cells, ReportFormat format) {
  const std::vector<DatasetId> datasets = datasets_in(cells);
  const std::vector<ClassifierId> classifiers = classifiers_in(cells);
  if (datasets.empty() || classifiers.empty()) throw ReportError("no benchmark cells to report");

  std::vector<std::vector<const BenchmarkCell*>> grid(classifiers.size());
  for (std::size_t r = 0; r < classifiers.size(); ++r) {
    for (DatasetId ds : datasets) {
      const BenchmarkCell* cell = find_cell(cells, ds, classifiers[r]);
      if (!cell) {
        throw ReportError("missing cell for classifier '" +
                          std::string(to_string(classifiers[r])) + "' on dataset '" +
                          std::string(to_string(ds)) + "'");
      }
      grid[r].push_back(cell);
    }
  }

  // Best (highest mean accuracy) row per column; first row wins ties.
  const std::size_t ac = metric_index(MetricId::ac);
  std::vector<std::optional<std::size_t>> best(datasets.size());
  for (std::size_t c = 0; c < datasets.size(); ++c) {
    for (std::size_t r = 0; r < classifiers.size(); ++r) {
      if (!grid[r][c]->ok()) continue;
      if (!best[c] || grid[r][c]->mean[ac] > grid[*best[c]][c]->mean[ac]) best[c] = r;
    }
  }

  if (format == ReportFormat::json) {
    json doc;
    doc["table"] = "table2";
    json columns = json::array();
    for (DatasetId ds : datasets) columns.push_back(std::string(to_string(ds)));
    doc["columns"] = std::move(columns);
    json rows = json::array();
    for (std::size_t r = 0; r < classifiers.size(); ++r) {
      json row;
      row["classifier"] = std::string(to_string(classifiers[r]));
      row["label"] = std::string(classifier_label(classifiers[r]));
      json values;
      for (std::size_t c = 0; c < datasets.size(); ++c) {
        const BenchmarkCell& cell = *grid[r][c];
        json v;
        if (cell.ok()) {
          v["mean"] = cell.mean[ac];
          v["stddev"] = cell.stddev[ac];
          v["percent"] = render_percent(cell.mean[ac]);
          v["best"] = best[c] && *best[c] == r;
        } else {
          v["error"] = cell.error;
        }
        values[std::string(to_string(datasets[c]))] = std::move(v);
      }
      row["values"] = std::move(values);
      rows.push_back(std::move(row));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(2) + "\n";
  }

  std::vector<std::vector<std::string>> rows;
  for (std::size_t r = 0; r < classifiers.size(); ++r) {
    std::vector<std::string> row = {std::string(classifier_label(classifiers[r]))};
    for (std::size_t c = 0; c < datasets.size(); ++c) {
      std::string value = cell_value(*grid[r][c], MetricId::ac);
      if (format == ReportFormat::markdown && best[c] && *best[c] == r) {
        value = "**" + value + "**";
      }
      row.push_back(std::move(value));
    }
    rows.push_back(std::move(row));
  }
  if (format == ReportFormat::csv) {
    std::vector<std::string> header = {"classifier"};
    for (DatasetId ds : datasets) header.emplace_back(to_string(ds));
    std::vector<std::vector<std::string>> csv_rows;
    for (std::size_t r = 0; r < classifiers.size(); ++r) {
      std::vector<std::string> row = {std::string(to_string(classifiers[r]))};
      for (std::size_t c = 0; c < datasets.size(); ++c) {
        row.push_back(cell_value(*grid[r][c], MetricId::ac));
      }
      csv_rows.push_back(std::move(row));
    }
    return csv_table(header, csv_rows);
  }
  std::vector<std::string> header = {"Classifier"};
  for (DatasetId ds : datasets) header.emplace_back(dataset_label(ds));
  return markdown_table(header, rows, false);
}

std::string cells_to_json(const RunConfig& cfg, const std::vector<BenchmarkCell>& cells) {
  json doc;
  doc["format"] = "sleepbench-cells";
  doc["version"] = 1;

  // Echo of the reproducibility-relevant configuration (output location and
  // report formats are presentation-only and omitted).
  json config;
  config["seed"] = cfg.seed;
  config["repeats"] = cfg.repeats;
  config["normalization"] = std::string(to_string(cfg.normalization));
  config["fixture_noise"] = cfg.fixture_noise;
  json datasets = json::array();
  for (const DatasetSpec& ds : cfg.datasets) {
    json d;
    d["id"] = std::string(to_string(ds.id));
    if (ds.csv_path.empty()) {
      d["fixture_seed"] = ds.fixture_seed;
      d["rows"] = ds.fixture_rows == 0 ? default_rows(ds.id) : ds.fixture_rows;
    } else {
      d["path"] = ds.csv_path;
    }
    datasets.push_back(std::move(d));
  }
  config["datasets"] = std::move(datasets);
  json classifiers = json::array();
  for (const ClassifierSpec& clf : cfg.classifiers) {
    json c;
    c["id"] = std::string(to_string(clf.id));
    if (is_cnn(clf.id)) {
      c["learning_rate"] = clf.cnn.learning_rate;
      c["epochs"] = clf.cnn.epochs;
      c["dropout"] = clf.cnn.dropout_rate;
      c["channels"] = {clf.cnn.channels1, clf.cnn.channels2};
      c["kernel_len"] = clf.cnn.kernel_len;
      c["hidden"] = clf.cnn.hidden;
    } else {
      c["learning_rate"] = clf.classic.learning_rate;
      c["epochs"] = clf.classic.epochs;
      c["l2"] = clf.classic.l2;
      c["k"] = clf.classic.k;
      c["max_depth"] = clf.classic.max_depth;
      c["min_leaf"] = clf.classic.min_leaf;
    }
    classifiers.push_back(std::move(c));
  }
  config["classifiers"] = std::move(classifiers);
  doc["config"] = std::move(config);

  json out_cells = json::array();
  for (const BenchmarkCell& cell : cells) {
    json c;
    c["dataset"] = std::string(to_string(cell.dataset));
    c["classifier"] = std::string(to_string(cell.classifier));
    if (!cell.ok()) {
      c["error"] = cell.error;
    } else {
      c["error"] = nullptr;
      json repeats = json::array();
      for (const MetricsReport& r : cell.repeats) repeats.push_back(metrics_json(r));
      c["repeats"] = std::move(repeats);
      json mean, stddev;
      json flags = json::array();
      for (MetricId id : kAllMetrics) {
        mean[std::string(metric_name(id))] = cell.mean[metric_index(id)];
        stddev[std::string(metric_name(id))] = cell.stddev[metric_index(id)];
        if (cell.any_undefined[metric_index(id)]) flags.push_back(std::string(metric_name(id)));
      }
      c["mean"] = std::move(mean);
      c["stddev"] = std::move(stddev);
      c["undefined"] = std::move(flags);
    }
    out_cells.push_back(std::move(c));
  }
  doc["cells"] = std::move(out_cells);
  return doc.dump(2) + "\n";
}

std::vector<BenchmarkCell> cells_from_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("cells file is not valid JSON: ") + e.what());
  }
  if (doc.value("format", "") != "sleepbench-cells" || doc.value("version", -1) != 1) {
    throw ParseError("not a version-1 cells file");
  }
  std::vector<BenchmarkCell> cells;
  for (const json& c : doc.at("cells")) {
    BenchmarkCell cell;
    cell.dataset = dataset_id_from(c.at("dataset").get<std::string>());
    cell.classifier = classifier_id_from(c.at("classifier").get<std::string>());
    if (!c.at("error").is_null()) {
      cell.error = c.at("error").get<std::string>();
      cells.push_back(std::move(cell));
      continue;
    }
    for (const json& r : c.at("repeats")) cell.repeats.push_back(metrics_from_json(r));
    for (MetricId id : kAllMetrics) {
      cell.mean[metric_index(id)] = c.at("mean").at(std::string(metric_name(id))).get<double>();
      cell.stddev[metric_index(id)] =
          c.at("stddev").at(std::string(metric_name(id))).get<double>();
    }
    for (const json& name : c.at("undefined")) {
      for (MetricId id : kAllMetrics) {
        if (name.get<std::string>() == metric_name(id)) cell.any_undefined[metric_index(id)] = true;
      }
    }
    cells.push_back(std::move(cell));
  }
  return cells;
}

}  // namespace sleepbench
