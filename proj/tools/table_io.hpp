#pragma once

// Table emission for the CLI: RFC 4180 CSV (CRLF, quoted as needed, uniform
// field count — meta records are padded to the table width) or a single JSON
// object {"meta": {...}, "rows": [...]}.

#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "json.hpp"

namespace cli_io {

using json = nlohmann::json;

struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<json>> rows;

  void add_row(std::initializer_list<json> cells) { rows.emplace_back(cells); }
};

inline std::string csv_escape(const std::string& field) {
  const bool needs_quote =
      field.find_first_of(",\"\r\n") != std::string::npos;
  if (!needs_quote) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += '"';
  return out;
}

inline std::string cell_to_string(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  return v.dump();  // shortest round-trip numerals, deterministic
}

inline void write_csv(std::ostream& os, const json& meta, const Table& t) {
  const std::size_t width = std::max<std::size_t>(3, t.columns.size());
  const auto emit = [&os, width](std::vector<std::string> fields) {
    fields.resize(width);
    for (std::size_t i = 0; i < width; ++i) {
      if (i) os << ',';
      os << csv_escape(fields[i]);
    }
    os << "\r\n";
  };
  for (const auto& [key, value] : meta.items()) {
    emit({"meta", key, cell_to_string(value)});
  }
  std::vector<std::string> header(t.columns.begin(), t.columns.end());
  emit(std::move(header));
  for (const auto& row : t.rows) {
    std::vector<std::string> fields;
    fields.reserve(row.size());
    for (const auto& c : row) fields.push_back(cell_to_string(c));
    emit(std::move(fields));
  }
}

inline void write_json(std::ostream& os, const json& meta, const Table& t) {
  json out;
  out["meta"] = meta;
  out["rows"] = json::array();
  for (const auto& row : t.rows) {
    json r = json::object();
    for (std::size_t i = 0; i < row.size() && i < t.columns.size(); ++i) {
      r[t.columns[i]] = row[i];
    }
    out["rows"].push_back(std::move(r));
  }
  os << out.dump(2) << "\n";
}

inline int write_table(const std::string& out_path, const std::string& format,
                       const json& meta, const Table& t) {
  const auto emit = [&](std::ostream& os) {
    if (format == "json") write_json(os, meta, t);
    else write_csv(os, meta, t);
  };
  if (out_path.empty() || out_path == "-") {
    emit(std::cout);
    return 0;
  }
  std::ofstream f(out_path, std::ios::binary);
  if (!f) {
    std::cerr << "cannot open output file: " << out_path << "\n";
    return 2;
  }
  emit(f);
  return 0;
}

}  // namespace cli_io
