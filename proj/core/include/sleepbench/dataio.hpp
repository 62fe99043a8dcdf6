#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "sleepbench/numarray.hpp"
#include "sleepbench/rng.hpp"

namespace sleepbench {

enum class DatasetId { sleep_study, sleep_deprivation, sleep_cycle };

std::string_view to_string(DatasetId id);
DatasetId dataset_id_from(std::string_view name);

/// Display name used as the dataset's report column header.
std::string_view dataset_label(DatasetId id);

enum class ColumnKind { numeric, yes_no, percent, clock_time, ordinal_1_5, ignored };
enum class ColumnRole { feature, target, excluded };

struct ColumnSchema {
  std::string name;
  ColumnKind kind;
  ColumnRole role;
};

/// Registered column schema for a dataset. Exactly one target column; ignored
/// columns are excluded from the feature matrix.
const std::vector<ColumnSchema>& schema_for(DatasetId id);

/// Row count of the corresponding published dataset; used as the default
/// fixture size.
std::size_t default_rows(DatasetId id);

struct Dataset {
  DatasetId id = DatasetId::sleep_study;
  NumArray features;        // [n, d]
  std::vector<int> labels;  // values in {0, 1}
  std::vector<ColumnSchema> schema;

  std::size_t n() const { return labels.size(); }
  std::size_t dim() const { return features.cols(); }
};

/// Encodes one trimmed CSV cell under a column kind:
///   yes_no      "Yes"/"no"       -> 1.0 / 0.0 (case-insensitive)
///   percent     "72%"            -> 72.0
///   clock_time  "7:23"           -> 443.0 (minutes)
///   ordinal_1_5 "4"              -> 4.0; moods ":(" ":|" ":)" -> 1, 2, 3
///   numeric     "6.25"           -> 6.25
double encode_cell(std::string_view raw, ColumnKind kind);

/// Derives the binary target from the encoded target column. yes_no columns
/// pass through; numeric-like columns get label 1 iff value > median (the
/// median is taken over all rows, before any split). Both classes must be
/// present.
std::vector<int> derive_label(const std::vector<double>& column, ColumnKind kind);

/// Loads a dataset from CSV text or a file. The header must contain every
/// registered column (matched case-insensitively, whitespace-trimmed);
/// unregistered columns are ignored. Row order is preserved.
Dataset load_csv_text(std::string_view text, DatasetId id);
Dataset load_csv(const std::filesystem::path& path, DatasetId id);

/// Minimal RFC-4180 reader: comma-separated, optional double-quoted fields
/// with "" escapes, LF or CRLF record ends. Returns one vector of fields per
/// record, header included.
std::vector<std::vector<std::string>> parse_csv(std::string_view text);

struct FixtureOptions {
  /// Relative noise level of the planted signal. 0 produces a separable
  /// fixture with a margin around the decision boundary; the default is
  /// calibrated so test accuracies land in the mid-50s to mid-70s.
  double noise = 1.25;
};

/// Generates schema-conformant synthetic CSV content for a dataset whose
/// features carry a planted linear signal. Deterministic per rng seed.
std::string make_fixture(DatasetId id, std::size_t n, Rng& rng, const FixtureOptions& opts = {});

}  // namespace sleepbench
