#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace bilocal {

class ScanConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ScanIoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ScanAxis {
  std::string name;
  double min = 0.0;
  double max = 0.0;
  double step = 0.0;

  /// min, min + step, ...; the last point is clamped to max (inclusive).
  std::vector<double> values() const;
};

struct ScanConfig {
  std::string model;
  std::vector<ScanAxis> axes;
  std::map<std::string, double> fixed;
  /// Columns to emit, in order; empty means every column of the model.
  std::vector<std::string> criteria;
  /// When set, only records whose flag column of this name is true are kept.
  std::optional<std::string> flagged_only;
  int workers = 1;

  /// Built-in region scans for figures 2-6.
  static ScanConfig figure(int figure_id, double step);
};

enum class ColumnKind { Real, Flag };

struct ColumnSpec {
  std::string name;
  ColumnKind kind = ColumnKind::Real;
};

/// Column layout of a scan's output.
struct ScanLayout {
  std::vector<std::string> axis_names;
  /// A `valid` flag column follows the axes only for models whose grid points
  /// can be physically invalid.
  bool has_valid_column = false;
  std::vector<ColumnSpec> columns;
};

struct ScanRecord {
  std::vector<double> axes;
  bool valid = true;
  /// One entry per layout column; flags are stored as 0/1. Empty when invalid.
  std::vector<double> values;

  double value(const ScanLayout& layout, const std::string& column) const;
  bool flag(const ScanLayout& layout, const std::string& column) const;

  friend bool operator==(const ScanRecord&, const ScanRecord&) = default;
};

struct ScanTable {
  ScanLayout layout;
  std::vector<ScanRecord> records;
};

/// Describes a registered scan model.
struct ScanModelInfo {
  std::string name;
  std::string description;
  std::vector<std::string> variables;
  std::vector<ColumnSpec> columns;
  bool can_be_invalid = false;
};

std::vector<ScanModelInfo> scan_models();

/// Validates the config against its model and returns the output layout.
ScanLayout scan_layout(const ScanConfig& cfg);

/// Number of grid points (before any flagged_only filtering).
std::size_t scan_size(const ScanConfig& cfg);

/// Streams records to `sink` in grid order (row-major, first axis slowest),
/// independent of cfg.workers.
void for_each_scan_record(const ScanConfig& cfg,
                          const std::function<void(const ScanRecord&)>& sink);

ScanTable run_scan(const ScanConfig& cfg);

// ---------------------------------------------------------------------------
// Output

enum class OutputFormat { Csv, Json };

OutputFormat parse_output_format(const std::string& text);

/// Incremental CSV / JSON writer. CSV reals use 12 significant digits; JSON
/// numbers use the shortest round-trip representation.
class RecordWriter {
 public:
  RecordWriter(std::ostream& out, OutputFormat format, ScanLayout layout);
  RecordWriter(const RecordWriter&) = delete;
  RecordWriter& operator=(const RecordWriter&) = delete;
  ~RecordWriter();

  void write(const ScanRecord& record);
  /// Closes the JSON array. Idempotent; called by the destructor.
  void finish();
  std::size_t count() const { return count_; }

 private:
  std::ostream& out_;
  OutputFormat format_;
  ScanLayout layout_;
  std::size_t count_ = 0;
  bool finished_ = false;
};

/// Writes every record of the table. Throws ScanConfigError for an empty table.
void emit(const ScanTable& table, OutputFormat format, std::ostream& out);
/// Throws ScanIoError when the destination cannot be written.
void emit(const ScanTable& table, OutputFormat format, const std::filesystem::path& destination);

/// Parses JSON produced by emit back into a table (layout inferred from keys).
ScanTable read_json(std::istream& in, const std::vector<std::string>& axis_names);

/// Flat key-value config format:
///   figure = 5            (optional; seeds the config from a built-in)
///   step = 0.01           (with figure)
///   model = alpha_pair
///   axis = alpha1 0 1 0.01
///   fixed = cy 0
///   criteria = s1_value nonbilocal
///   flagged_only = nonbilocal
///   workers = 4
/// Lines starting with '#' are comments.
ScanConfig parse_scan_config(std::istream& in);

}  // namespace bilocal
