#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "sleepbench/errors.hpp"
#include "sleepbench/harness.hpp"

namespace sleepbench {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  return s;
}

std::vector<std::string> split(std::string_view s, char sep) {
  std::vector<std::string> out;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= s.size(); ++i) {
    if (i == s.size() || s[i] == sep) {
      out.emplace_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  return out;
}

template <typename T>
T parse_int(std::string_view value, std::string_view key) {
  T out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ParseError("key '" + std::string(key) + "': cannot parse integer from '" +
                     std::string(value) + "'");
  }
  return out;
}

double parse_double(std::string_view value, std::string_view key) {
  double out{};
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || ptr != value.data() + value.size()) {
    throw ParseError("key '" + std::string(key) + "': cannot parse number from '" +
                     std::string(value) + "'");
  }
  return out;
}

void apply_classifier_key(ClassifierSpec& spec, std::string_view field, std::string_view value,
                          std::string_view key) {
  const bool cnn = is_cnn(spec.id);
  if (field == "learning_rate") {
    (cnn ? spec.cnn.learning_rate : spec.classic.learning_rate) = parse_double(value, key);
  } else if (field == "epochs") {
    (cnn ? spec.cnn.epochs : spec.classic.epochs) = parse_int<int>(value, key);
  } else if (!cnn && field == "l2") {
    spec.classic.l2 = parse_double(value, key);
  } else if (!cnn && field == "k") {
    spec.classic.k = parse_int<int>(value, key);
  } else if (!cnn && field == "max_depth") {
    spec.classic.max_depth = parse_int<int>(value, key);
  } else if (!cnn && field == "min_leaf") {
    spec.classic.min_leaf = parse_int<int>(value, key);
  } else if (cnn && field == "dropout") {
    spec.cnn.dropout_rate = parse_double(value, key);
  } else if (cnn && field == "kernel_len") {
    spec.cnn.kernel_len = parse_int<int>(value, key);
  } else if (cnn && field == "hidden") {
    spec.cnn.hidden = parse_int<int>(value, key);
  } else if (cnn && field == "channels") {
    const std::vector<std::string> parts = split(value, ',');
    if (parts.size() != 2) {
      throw ParseError("key '" + std::string(key) + "': channels wants two values like '8,16'");
    }
    spec.cnn.channels1 = parse_int<int>(parts[0], key);
    spec.cnn.channels2 = parse_int<int>(parts[1], key);
  } else {
    throw ParseError("unknown setting '" + std::string(field) + "' for classifier '" +
                     std::string(to_string(spec.id)) + "'");
  }
}

DatasetSpec parse_dataset_value(DatasetId id, std::string_view value, std::string_view key) {
  DatasetSpec spec;
  spec.id = id;
  if (value.substr(0, 7) == "fixture") {
    const std::vector<std::string> parts = split(value, ':');
    if (parts[0] != "fixture" || parts.size() > 3) {
      throw ParseError("key '" + std::string(key) +
                       "': want 'fixture[:seed[:rows]]' or a CSV path, got '" + std::string(value) +
                       "'");
    }
    if (parts.size() >= 2) spec.fixture_seed = parse_int<std::uint64_t>(parts[1], key);
    if (parts.size() == 3) spec.fixture_rows = parse_int<std::size_t>(parts[2], key);
  } else {
    spec.csv_path = std::string(value);
  }
  return spec;
}

}  // namespace

RunConfig parse_config_text(std::string_view text) {
  RunConfig cfg;
  cfg.datasets.clear();
  cfg.formats.clear();

  std::map<ClassifierId, ClassifierSpec> specs;
  for (ClassifierId id : kAllClassifiers) specs.emplace(id, ClassifierSpec::defaults(id));
  std::vector<ClassifierId> classifier_order;

  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t eol = std::min(text.find('\n', start), text.size());
    std::string_view line = text.substr(start, eol - start);
    start = eol + 1;
    ++line_no;

    if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
      line = line.substr(0, hash);
    }
    line = trim(line);
    if (line.empty()) continue;

    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError("line " + std::to_string(line_no) + ": expected 'key = value'");
    }
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (key.empty() || value.empty()) {
      throw ParseError("line " + std::to_string(line_no) + ": empty key or value");
    }

    try {
      if (key == "seed") {
        cfg.seed = parse_int<std::uint64_t>(value, key);
      } else if (key == "repeats") {
        cfg.repeats = parse_int<int>(value, key);
      } else if (key == "output_dir") {
        cfg.output_dir = value;
      } else if (key == "normalization") {
        cfg.normalization = norm_kind_from(value);
      } else if (key == "fixture.noise") {
        cfg.fixture_noise = parse_double(value, key);
      } else if (key == "formats") {
        for (const std::string& name : split(value, ',')) {
          cfg.formats.push_back(report_format_from(name));
        }
      } else if (key == "classifiers") {
        for (const std::string& name : split(value, ',')) {
          classifier_order.push_back(classifier_id_from(name));
        }
      } else if (key.starts_with("dataset.")) {
        cfg.datasets.push_back(
            parse_dataset_value(dataset_id_from(key.substr(8)), value, key));
      } else if (const std::size_t dot = key.find('.'); dot != std::string::npos) {
        const ClassifierId id = classifier_id_from(key.substr(0, dot));
        apply_classifier_key(specs.at(id), key.substr(dot + 1), value, key);
      } else {
        throw ParseError("unknown key '" + key + "'");
      }
    } catch (const ParamError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    } catch (const ParseError& e) {
      throw ParseError("line " + std::to_string(line_no) + ": " + e.what());
    }
  }

  if (cfg.datasets.empty()) cfg.datasets = RunConfig::defaults().datasets;
  if (cfg.formats.empty()) {
    cfg.formats = {ReportFormat::markdown, ReportFormat::csv, ReportFormat::json};
  }
  if (classifier_order.empty()) classifier_order.assign(kAllClassifiers.begin(),
                                                        kAllClassifiers.end());
  for (ClassifierId id : classifier_order) cfg.classifiers.push_back(specs.at(id));

  cfg.validate();
  return cfg;
}

RunConfig parse_config_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParamError("cannot open config '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str());
}

}  // namespace sleepbench
