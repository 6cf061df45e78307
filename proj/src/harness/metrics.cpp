#include "xrsched/harness/metrics.hpp"

#include <cstdio>
#include <stdexcept>

namespace xrsched {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.10g", v);
  return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : out_(path), columns_(columns.size()) {
  if (!out_) throw std::runtime_error("csv: cannot open '" + path + "'");
  if (columns.empty()) throw std::invalid_argument("csv: need at least one column");
  for (std::size_t i = 0; i < columns.size(); ++i) {
    if (i) out_ << ',';
    out_ << columns[i];
  }
  out_ << '\n';
}

void CsvWriter::row(const std::vector<std::string>& cells) {
  if (cells.size() != columns_) {
    throw std::invalid_argument("csv: row has " + std::to_string(cells.size()) +
                                " cells, header has " + std::to_string(columns_));
  }
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    out_ << cells[i];
  }
  out_ << '\n';
}

std::vector<std::string> indexed_columns(const std::string& prefix, int count,
                                         int first_index) {
  std::vector<std::string> names;
  names.reserve(static_cast<std::size_t>(count));
  for (int i = 0; i < count; ++i) {
    names.push_back(prefix + std::to_string(first_index + i));
  }
  return names;
}

}  // namespace xrsched
