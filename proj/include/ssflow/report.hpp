#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "errors.hpp"
#include "field.hpp"
#include "grid.hpp"
#include "json.hpp"

namespace ssflow {

// Deterministic double formatting for all text artifacts: %.17g round-trips
// every finite double and never depends on locale or platform printing
// quirks, which is what makes rerun outputs byte-identical.
inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf);
}

inline std::string fmt17(int x) { return std::to_string(x); }

// CSV with a fixed header and '\n' line ends.  Cells are preformatted
// strings; add_row enforces the column count so a schema drift fails loudly
// instead of producing a ragged file.
struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  CsvTable() = default;
  explicit CsvTable(std::vector<std::string> h) : header(std::move(h)) {}

  void add_row(std::vector<std::string> r) {
    if (r.size() != header.size())
      throw ConfigError("csv row has " + std::to_string(r.size()) +
                        " cells, header has " +
                        std::to_string(header.size()));
    rows.push_back(std::move(r));
  }

  std::string to_string() const {
    std::string s;
    for (std::size_t k = 0; k < header.size(); ++k) {
      if (k) s += ',';
      s += header[k];
    }
    s += '\n';
    for (const auto& r : rows) {
      for (std::size_t k = 0; k < r.size(); ++k) {
        if (k) s += ',';
        s += r[k];
      }
      s += '\n';
    }
    return s;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << to_string();
  }
};

// Buffered JSON-lines ledger; nlohmann objects keep keys sorted, so records
// print deterministically.
struct JsonlWriter {
  std::vector<nlohmann::json> records;

  void add(nlohmann::json j) { records.push_back(std::move(j)); }

  std::string to_string() const {
    std::string s;
    for (const auto& r : records) {
      s += r.dump();
      s += '\n';
    }
    return s;
  }

  void write(const std::string& path) const {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw ConfigError("cannot write " + path);
    f << to_string();
  }
};

inline void write_text(const std::string& path, const std::string& body) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ConfigError("cannot write " + path);
  f << body;
}

inline void ensure_outdir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec)
    throw ConfigError("cannot create output directory " + dir + ": " +
                      ec.message());
}

// Node-ordered dump of one or more fields with their coordinates.
inline void dump_fields_csv(const std::string& path, const Grid& g,
                            const std::vector<std::string>& names,
                            const std::vector<const Field*>& fields) {
  if (names.size() != fields.size())
    throw ConfigError("field dump: name/field count mismatch");
  std::vector<std::string> header{"x1", "x2"};
  for (const auto& n : names) header.push_back(n);
  CsvTable t(header);
  for (int i = 0; i <= g.n1; ++i)
    for (int j = 0; j <= g.n2; ++j) {
      std::vector<std::string> row{fmt17(g.x1[i]), fmt17(g.x2[j])};
      for (const Field* f : fields) row.push_back(fmt17((*f)(i, j)));
      t.add_row(std::move(row));
    }
  t.write(path);
}

}  // namespace ssflow
