#pragma once

// Output records shared by the CLI's json, csv and plain writers.
//
// JSON is one flat object per line with keys in the fixed order
// op, inputs, value, unit, below_threshold. CSV uses the same order with the
// inputs flattened into columns. Doubles are written with 17 significant
// digits so every value round-trips exactly.

#include <charconv>
#include <cstdio>
#include <cmath>
#include <ostream>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace weberbits {

using InputValue = std::variant<double, std::string>;
using ResultValue = std::variant<std::monostate, double, bool>;

struct OutputRecord {
  std::string op;
  std::vector<std::pair<std::string, InputValue>> inputs;
  ResultValue value;
  std::string unit;
  bool below_threshold = false;
};

enum class OutputFormat { Json, Csv, Plain };

inline std::string format_double(double v) {
  if (!std::isfinite(v)) return "null";
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 17);
  return std::string(buf, res.ptr);
}

namespace record_detail {

inline std::string json_string(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\r': out += "\\r"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(c) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof(buf), "\\u%04x", static_cast<unsigned>(c));
          out += buf;
        } else {
          out += c;
        }
    }
  }
  return out + "\"";
}

inline std::string csv_field(std::string_view s) {
  if (s.find_first_of(",\"\n\r") == std::string_view::npos) return std::string(s);
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string input_text(const InputValue& v, bool json) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  const auto& s = std::get<std::string>(v);
  return json ? json_string(s) : s;
}

inline std::string value_text(const ResultValue& v, std::string_view null_text) {
  if (const auto* d = std::get_if<double>(&v)) return format_double(*d);
  if (const auto* b = std::get_if<bool>(&v)) return *b ? "true" : "false";
  return std::string(null_text);
}

}  // namespace record_detail

inline std::string to_json(const OutputRecord& r) {
  using namespace record_detail;
  std::string out = "{\"op\":" + json_string(r.op) + ",\"inputs\":{";
  for (std::size_t i = 0; i < r.inputs.size(); ++i) {
    if (i != 0) out += ',';
    out += json_string(r.inputs[i].first) + ':' + input_text(r.inputs[i].second, true);
  }
  out += "},\"value\":" + value_text(r.value, "null");
  out += ",\"unit\":" + json_string(r.unit);
  out += std::string(",\"below_threshold\":") + (r.below_threshold ? "true" : "false") + '}';
  return out;
}

inline std::string csv_header(const std::vector<std::string>& input_keys) {
  std::string out = "op";
  for (const auto& k : input_keys) out += ',' + record_detail::csv_field(k);
  return out + ",value,unit,below_threshold";
}

inline std::string to_csv(const OutputRecord& r) {
  using namespace record_detail;
  std::string out = csv_field(r.op);
  for (const auto& [key, value] : r.inputs) out += ',' + csv_field(input_text(value, false));
  out += ',' + value_text(r.value, "") + ',' + csv_field(r.unit) + ',' +
         (r.below_threshold ? "true" : "false");
  return out;
}

inline std::string to_plain(const OutputRecord& r) {
  using namespace record_detail;
  std::string out = r.op;
  for (const auto& [key, value] : r.inputs) out += ' ' + key + '=' + input_text(value, false);
  out += " -> ";
  if (std::holds_alternative<std::monostate>(r.value)) {
    out += "below threshold";
  } else {
    out += value_text(r.value, "");
    if (!r.unit.empty()) out += ' ' + r.unit;
    if (r.below_threshold) out += " (below threshold, clamped)";
  }
  return out;
}

// Writes the records in the requested format. The CSV header is emitted even
// when there are no records.
inline void write_records(std::ostream& out, OutputFormat format,
                          const std::vector<std::string>& input_keys,
                          const std::vector<OutputRecord>& records) {
  if (format == OutputFormat::Csv) out << csv_header(input_keys) << '\n';
  for (const auto& r : records) {
    switch (format) {
      case OutputFormat::Json: out << to_json(r) << '\n'; break;
      case OutputFormat::Csv: out << to_csv(r) << '\n'; break;
      case OutputFormat::Plain: out << to_plain(r) << '\n'; break;
    }
  }
}

}  // namespace weberbits
