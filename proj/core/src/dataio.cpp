#include "sleepbench/dataio.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "sleepbench/errors.hpp"

namespace sleepbench {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

double parse_number(std::string_view token, std::string_view what) {
  double value = 0;
  const char* begin = token.data();
  const char* end = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, value);
  if (ec != std::errc() || ptr != end || !std::isfinite(value)) {
    throw ParseError("cannot parse " + std::string(what) + " from '" + std::string(token) + "'");
  }
  return value;
}

}  // namespace

std::string_view to_string(DatasetId id) {
  switch (id) {
    case DatasetId::sleep_study: return "sleep_study";
    case DatasetId::sleep_deprivation: return "sleep_deprivation";
    case DatasetId::sleep_cycle: return "sleep_cycle";
  }
  return "?";
}

DatasetId dataset_id_from(std::string_view name) {
  if (name == "sleep_study") return DatasetId::sleep_study;
  if (name == "sleep_deprivation") return DatasetId::sleep_deprivation;
  if (name == "sleep_cycle") return DatasetId::sleep_cycle;
  throw ParamError("unknown dataset id '" + std::string(name) + "'");
}

std::string_view dataset_label(DatasetId id) {
  switch (id) {
    case DatasetId::sleep_study: return "Sleep-Study";
    case DatasetId::sleep_deprivation: return "Sleep Deprivation";
    case DatasetId::sleep_cycle: return "Sleep Cycle Data";
  }
  return "?";
}

const std::vector<ColumnSchema>& schema_for(DatasetId id) {
  static const std::vector<ColumnSchema> sleep_study = {
      {"Enough", ColumnKind::yes_no, ColumnRole::target},
      {"Hours", ColumnKind::numeric, ColumnRole::feature},
      {"PhoneReach", ColumnKind::yes_no, ColumnRole::feature},
      {"PhoneTime", ColumnKind::yes_no, ColumnRole::feature},
      {"Tired", ColumnKind::ordinal_1_5, ColumnRole::feature},
      {"Breakfast", ColumnKind::yes_no, ColumnRole::feature},
  };
  static const std::vector<ColumnSchema> sleep_deprivation = {
      {"Age Group", ColumnKind::numeric, ColumnRole::feature},
      {"Anxiety Rate", ColumnKind::ordinal_1_5, ColumnRole::feature},
      {"Depression Rate", ColumnKind::ordinal_1_5, ColumnRole::feature},
      {"Panic", ColumnKind::yes_no, ColumnRole::feature},
      {"Worry", ColumnKind::ordinal_1_5, ColumnRole::feature},
      {"Health Problems", ColumnKind::yes_no, ColumnRole::feature},
      {"Nap Duration", ColumnKind::numeric, ColumnRole::feature},
      {"Enough Sleep", ColumnKind::yes_no, ColumnRole::target},
  };
  static const std::vector<ColumnSchema> sleep_cycle = {
      {"Start", ColumnKind::clock_time, ColumnRole::feature},
      {"End", ColumnKind::clock_time, ColumnRole::feature},
      {"Sleep Quality", ColumnKind::percent, ColumnRole::target},
      {"Time In Bed", ColumnKind::clock_time, ColumnRole::feature},
      {"Wake Up", ColumnKind::ordinal_1_5, ColumnRole::feature},
      {"Sleep Notes", ColumnKind::ignored, ColumnRole::excluded},
      {"Heart Rate", ColumnKind::numeric, ColumnRole::feature},
      {"Activity (Steps)", ColumnKind::numeric, ColumnRole::feature},
  };
  switch (id) {
    case DatasetId::sleep_study: return sleep_study;
    case DatasetId::sleep_deprivation: return sleep_deprivation;
    case DatasetId::sleep_cycle: return sleep_cycle;
  }
  throw ParamError("unknown dataset id");
}

std::size_t default_rows(DatasetId id) {
  switch (id) {
    case DatasetId::sleep_study: return 104;
    case DatasetId::sleep_deprivation: return 86;
    case DatasetId::sleep_cycle: return 50;
  }
  return 0;
}

double encode_cell(std::string_view raw, ColumnKind kind) {
  const std::string_view token = trim(raw);
  if (token.empty()) throw ParseError("empty cell");
  switch (kind) {
    case ColumnKind::yes_no: {
      const std::string t = lower(token);
      if (t == "yes") return 1.0;
      if (t == "no") return 0.0;
      throw ParseError("expected yes/no, got '" + std::string(token) + "'");
    }
    case ColumnKind::percent: {
      if (token.back() != '%') {
        throw ParseError("expected a percentage like '72%', got '" + std::string(token) + "'");
      }
      return parse_number(trim(token.substr(0, token.size() - 1)), "percent");
    }
    case ColumnKind::clock_time: {
      const std::size_t colon = token.find(':');
      if (colon == std::string_view::npos || colon == 0 || colon > 2 ||
          token.size() - colon - 1 != 2) {
        throw ParseError("expected a clock time like '7:23', got '" + std::string(token) + "'");
      }
      const double hours = parse_number(token.substr(0, colon), "clock hours");
      const double minutes = parse_number(token.substr(colon + 1), "clock minutes");
      if (hours != std::floor(hours) || minutes != std::floor(minutes) || minutes < 0 ||
          minutes > 59 || hours < 0) {
        throw ParseError("invalid clock time '" + std::string(token) + "'");
      }
      return hours * 60.0 + minutes;
    }
    case ColumnKind::ordinal_1_5: {
      // Mood glyphs map onto the low end of the scale.
      if (token == ":(") return 1.0;
      if (token == ":|") return 2.0;
      if (token == ":)") return 3.0;
      const double v = parse_number(token, "ordinal");
      if (v != std::floor(v) || v < 1 || v > 5) {
        throw ParseError("ordinal must be an integer in 1..5, got '" + std::string(token) + "'");
      }
      return v;
    }
    case ColumnKind::numeric:
      return parse_number(token, "number");
    case ColumnKind::ignored:
      throw ParseError("ignored columns are never encoded");
  }
  throw ParseError("unknown column kind");
}

std::vector<int> derive_label(const std::vector<double>& column, ColumnKind kind) {
  if (column.size() < 2) throw DataError("target column needs at least 2 rows");
  std::vector<int> labels(column.size());
  if (kind == ColumnKind::yes_no) {
    for (std::size_t i = 0; i < column.size(); ++i) labels[i] = column[i] > 0.5 ? 1 : 0;
  } else {
    std::vector<double> sorted(column);
    std::sort(sorted.begin(), sorted.end());
    const std::size_t n = sorted.size();
    const double median =
        (n % 2 == 1) ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);
    for (std::size_t i = 0; i < column.size(); ++i) labels[i] = column[i] > median ? 1 : 0;
  }
  const auto ones = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), 1));
  if (ones == 0 || ones == labels.size()) {
    throw DataError("single-class dataset: target column yields only class " +
                    std::to_string(ones == 0 ? 0 : 1));
  }
  return labels;
}

std::vector<std::vector<std::string>> parse_csv(std::string_view text) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool field_was_quoted = false;
  std::size_t row = 1;

  auto end_field = [&] {
    record.push_back(field);
    field.clear();
    field_was_quoted = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    ++row;
  };

  for (std::size_t i = 0; i < text.size(); ++i) {
    const char c = text[i];
    if (in_quotes) {
      if (c == '"') {
        if (i + 1 < text.size() && text[i + 1] == '"') {
          field += '"';
          ++i;
        } else {
          in_quotes = false;
        }
      } else {
        field += c;
      }
      continue;
    }
    switch (c) {
      case '"':
        if (!field.empty() || field_was_quoted) {
          throw ParseError("row " + std::to_string(row) + ": stray quote inside unquoted field");
        }
        in_quotes = true;
        field_was_quoted = true;
        break;
      case ',':
        end_field();
        break;
      case '\r':
        if (i + 1 >= text.size() || text[i + 1] != '\n') {
          throw ParseError("row " + std::to_string(row) + ": bare carriage return");
        }
        break;  // consumed by the following '\n'
      case '\n':
        end_record();
        break;
      default:
        field += c;
    }
  }
  if (in_quotes) throw ParseError("row " + std::to_string(row) + ": unterminated quoted field");
  if (!field.empty() || field_was_quoted || !record.empty()) end_record();
  return records;
}

Dataset load_csv_text(std::string_view text, DatasetId id) {
  if (trim(text).empty()) throw DataError("empty CSV input for dataset " + std::string(to_string(id)));
  const auto records = parse_csv(text);
  if (records.size() < 2) throw DataError("CSV has no data rows");

  const std::vector<ColumnSchema>& schema = schema_for(id);
  const std::vector<std::string>& header = records.front();

  // Locate each registered column by case-insensitive trimmed name.
  std::unordered_map<std::string, std::size_t> header_index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const std::string key = lower(trim(header[i]));
    if (key.empty()) continue;
    if (header_index.contains(key)) {
      throw SchemaError("duplicate column '" + std::string(trim(header[i])) + "' in header");
    }
    header_index.emplace(key, i);
  }
  std::vector<std::size_t> column_of(schema.size());
  for (std::size_t s = 0; s < schema.size(); ++s) {
    const auto it = header_index.find(lower(schema[s].name));
    if (it == header_index.end()) {
      if (schema[s].role == ColumnRole::excluded) {
        column_of[s] = static_cast<std::size_t>(-1);
        continue;
      }
      throw SchemaError("missing column '" + schema[s].name + "' for dataset " +
                        std::string(to_string(id)));
    }
    column_of[s] = it->second;
  }

  std::vector<std::size_t> feature_schema_idx;
  std::size_t target_schema_idx = schema.size();
  for (std::size_t s = 0; s < schema.size(); ++s) {
    if (schema[s].role == ColumnRole::feature) feature_schema_idx.push_back(s);
    if (schema[s].role == ColumnRole::target) target_schema_idx = s;
  }

  const std::size_t n = records.size() - 1;
  const std::size_t d = feature_schema_idx.size();
  if (n < 2) throw DataError("dataset needs at least 2 rows, got " + std::to_string(n));

  NumArray features = NumArray::zeros({n, d});
  std::vector<double> target_column(n);
  for (std::size_t r = 0; r < n; ++r) {
    const std::vector<std::string>& fields = records[r + 1];
    if (fields.size() != header.size()) {
      throw ParseError("row " + std::to_string(r + 2) + " has " + std::to_string(fields.size()) +
                       " fields, header has " + std::to_string(header.size()));
    }
    auto encode_at = [&](std::size_t s) {
      try {
        return encode_cell(fields[column_of[s]], schema[s].kind);
      } catch (const ParseError& e) {
        throw ParseError("row " + std::to_string(r + 2) + ", column '" + schema[s].name +
                         "': " + e.what());
      }
    };
    for (std::size_t j = 0; j < d; ++j) features.at(r, j) = encode_at(feature_schema_idx[j]);
    target_column[r] = encode_at(target_schema_idx);
  }

  Dataset ds;
  ds.id = id;
  ds.features = std::move(features);
  ds.labels = derive_label(target_column, schema[target_schema_idx].kind);
  ds.schema = schema;
  return ds;
}

Dataset load_csv(const std::filesystem::path& path, DatasetId id) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open '" + path.string() + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return load_csv_text(buffer.str(), id);
}

}  // namespace sleepbench
