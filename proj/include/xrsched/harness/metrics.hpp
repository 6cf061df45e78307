#pragma once

#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

namespace xrsched {

// Shortest-round-trip decimal form (%.10g); the same call everywhere keeps
// runs byte-comparable across reruns.
std::string format_double(double v);

// Plain CSV with a fixed header. Cells are written pre-formatted; the writer
// never touches locales or stream formatting state.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);

  void row(const std::vector<std::string>& cells);
  void flush() { out_.flush(); }

 private:
  std::ofstream out_;
  std::size_t columns_;
};

// Per-user column names: prefix1, prefix2, ...
std::vector<std::string> indexed_columns(const std::string& prefix, int count,
                                         int first_index = 1);

}  // namespace xrsched
