#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "bilocal/scan.hpp"

namespace bilocal {

namespace {

using Json = nlohmann::ordered_json;

std::string csv_real(double v) { return std::isfinite(v) ? fmt::format("{:.12g}", v) : ""; }

std::string trim(const std::string& s) {
  const auto begin = s.find_first_not_of(" \t\r\n");
  if (begin == std::string::npos) return {};
  const auto end = s.find_last_not_of(" \t\r\n");
  return s.substr(begin, end - begin + 1);
}

std::vector<std::string> words(const std::string& s) {
  std::istringstream in(s);
  std::vector<std::string> out;
  for (std::string w; in >> w;) out.push_back(w);
  return out;
}

double parse_real(const std::string& text, int line) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used == text.size()) return v;
  } catch (const std::exception&) {
  }
  throw ScanConfigError(fmt::format("line {}: '{}' is not a number", line, text));
}

}  // namespace

OutputFormat parse_output_format(const std::string& text) {
  if (text == "csv") return OutputFormat::Csv;
  if (text == "json") return OutputFormat::Json;
  throw ScanConfigError(fmt::format("unknown output format '{}' (expected csv or json)", text));
}

RecordWriter::RecordWriter(std::ostream& out, OutputFormat format, ScanLayout layout)
    : out_(out), format_(format), layout_(std::move(layout)) {
  if (format_ == OutputFormat::Csv) {
    std::string header;
    for (const auto& a : layout_.axis_names) header += (header.empty() ? "" : ",") + a;
    if (layout_.has_valid_column) header += ",valid";
    for (const auto& c : layout_.columns) header += "," + c.name;
    out_ << header << '\n';
  } else {
    out_ << '[';
  }
}

RecordWriter::~RecordWriter() {
  try {
    finish();
  } catch (...) {
  }
}

void RecordWriter::write(const ScanRecord& record) {
  if (finished_) throw std::logic_error("RecordWriter used after finish()");
  if (format_ == OutputFormat::Csv) {
    std::string line;
    for (std::size_t a = 0; a < record.axes.size(); ++a) {
      line += (a ? "," : "") + csv_real(record.axes[a]);
    }
    if (layout_.has_valid_column) line += record.valid ? ",true" : ",false";
    for (std::size_t c = 0; c < layout_.columns.size(); ++c) {
      line += ',';
      if (!record.valid) continue;
      const double v = record.values[c];
      line += layout_.columns[c].kind == ColumnKind::Flag ? (v != 0.0 ? "true" : "false")
                                                          : csv_real(v);
    }
    out_ << line << '\n';
  } else {
    Json obj = Json::object();
    for (std::size_t a = 0; a < record.axes.size(); ++a) obj[layout_.axis_names[a]] = record.axes[a];
    if (layout_.has_valid_column) obj["valid"] = record.valid;
    for (std::size_t c = 0; c < layout_.columns.size(); ++c) {
      const auto& col = layout_.columns[c];
      if (!record.valid) {
        obj[col.name] = nullptr;
      } else if (col.kind == ColumnKind::Flag) {
        obj[col.name] = record.values[c] != 0.0;
      } else {
        obj[col.name] = record.values[c];
      }
    }
    out_ << (count_ ? ",\n" : "\n") << obj.dump();
  }
  ++count_;
}

void RecordWriter::finish() {
  if (finished_) return;
  finished_ = true;
  if (format_ == OutputFormat::Json) out_ << (count_ ? "\n]\n" : "]\n");
  out_.flush();
}

void emit(const ScanTable& table, OutputFormat format, std::ostream& out) {
  if (table.records.empty()) throw ScanConfigError("nothing to emit: the scan has no records");
  RecordWriter writer(out, format, table.layout);
  for (const auto& r : table.records) writer.write(r);
  writer.finish();
}

void emit(const ScanTable& table, OutputFormat format, const std::filesystem::path& destination) {
  if (table.records.empty()) throw ScanConfigError("nothing to emit: the scan has no records");
  std::ofstream out(destination, std::ios::binary | std::ios::trunc);
  if (!out) throw ScanIoError(fmt::format("cannot write '{}'", destination.string()));
  emit(table, format, static_cast<std::ostream&>(out));
  if (!out) throw ScanIoError(fmt::format("write to '{}' failed", destination.string()));
}

ScanTable read_json(std::istream& in, const std::vector<std::string>& axis_names) {
  Json doc;
  try {
    doc = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ScanConfigError(fmt::format("invalid scan JSON: {}", e.what()));
  }
  if (!doc.is_array()) throw ScanConfigError("scan JSON must be an array");

  ScanTable table;
  table.layout.axis_names = axis_names;
  if (doc.empty()) return table;

  // Column kinds come from the first valid record.
  const Json* sample = &doc.front();
  for (const auto& obj : doc) {
    if (!obj.contains("valid") || obj["valid"].get<bool>()) {
      sample = &obj;
      break;
    }
  }
  for (const auto& [key, value] : sample->items()) {
    if (std::find(axis_names.begin(), axis_names.end(), key) != axis_names.end()) continue;
    if (key == "valid") {
      table.layout.has_valid_column = true;
      continue;
    }
    table.layout.columns.push_back({key, value.is_boolean() ? ColumnKind::Flag : ColumnKind::Real});
  }

  for (const auto& obj : doc) {
    ScanRecord r;
    for (const auto& a : axis_names) r.axes.push_back(obj.at(a).get<double>());
    r.valid = !obj.contains("valid") || obj["valid"].get<bool>();
    if (r.valid) {
      for (const auto& c : table.layout.columns) {
        const auto& v = obj.at(c.name);
        r.values.push_back(v.is_boolean() ? (v.get<bool>() ? 1.0 : 0.0) : v.get<double>());
      }
    }
    table.records.push_back(std::move(r));
  }
  return table;
}

ScanConfig parse_scan_config(std::istream& in) {
  ScanConfig cfg;
  std::optional<int> figure;
  std::optional<double> step;
  bool have_model = false, have_axes = false;
  std::vector<ScanAxis> axes;
  std::map<std::string, double> fixed;
  std::optional<std::vector<std::string>> criteria;
  std::optional<std::string> flagged_only;
  std::optional<int> workers;

  int line_no = 0;
  for (std::string raw; std::getline(in, raw);) {
    ++line_no;
    const std::string line = trim(raw.substr(0, raw.find('#')));
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw ScanConfigError(fmt::format("line {}: expected key = value", line_no));
    }
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    const auto parts = words(value);
    if (parts.empty()) throw ScanConfigError(fmt::format("line {}: empty value for '{}'", line_no, key));

    if (key == "figure") {
      figure = static_cast<int>(parse_real(value, line_no));
    } else if (key == "step") {
      step = parse_real(value, line_no);
    } else if (key == "model") {
      cfg.model = value;
      have_model = true;
    } else if (key == "axis") {
      if (parts.size() != 4) {
        throw ScanConfigError(fmt::format("line {}: axis needs 'name min max step'", line_no));
      }
      axes.push_back({parts[0], parse_real(parts[1], line_no), parse_real(parts[2], line_no),
                      parse_real(parts[3], line_no)});
      have_axes = true;
    } else if (key == "fixed") {
      if (parts.size() != 2) {
        throw ScanConfigError(fmt::format("line {}: fixed needs 'name value'", line_no));
      }
      fixed[parts[0]] = parse_real(parts[1], line_no);
    } else if (key == "criteria") {
      criteria = parts;
    } else if (key == "flagged_only") {
      flagged_only = value;
    } else if (key == "workers") {
      workers = static_cast<int>(parse_real(value, line_no));
    } else {
      throw ScanConfigError(fmt::format("line {}: unknown key '{}'", line_no, key));
    }
  }

  if (figure) {
    if (have_model) throw ScanConfigError("use either 'figure' or 'model', not both");
    cfg = ScanConfig::figure(*figure, step.value_or(0.01));
    if (have_axes) cfg.axes = axes;
  } else {
    if (!have_model) throw ScanConfigError("config needs 'model' or 'figure'");
    if (step) throw ScanConfigError("'step' only applies together with 'figure'");
    cfg.axes = axes;
  }
  for (const auto& [k, v] : fixed) cfg.fixed[k] = v;
  if (criteria) cfg.criteria = *criteria;
  if (flagged_only) cfg.flagged_only = flagged_only;
  if (workers) cfg.workers = *workers;
  return cfg;
}

}  // namespace bilocal
