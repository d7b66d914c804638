#include "eisenlab/csv.hpp"

#include <stdexcept>

namespace eisenlab {

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& columns)
    : ncols_(columns.size()) {
  if (columns.empty()) throw std::invalid_argument("CsvWriter: no columns");
  f_ = std::fopen(path.c_str(), "wb");
  if (!f_) throw std::runtime_error("CsvWriter: cannot open " + path);
  for (std::size_t i = 0; i < columns.size(); ++i) {
    std::fputs(columns[i].c_str(), f_);
    std::fputc(i + 1 == columns.size() ? '\n' : ',', f_);
  }
}

CsvWriter::~CsvWriter() {
  if (f_) std::fclose(f_);
}

std::string CsvWriter::format(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.16e", v);
  return buf;
}

void CsvWriter::row(const std::vector<double>& values) {
  if (values.size() != ncols_) throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::fputs(format(values[i]).c_str(), f_);
    std::fputc(i + 1 == values.size() ? '\n' : ',', f_);
  }
}

void CsvWriter::row_cells(const std::vector<std::string>& cells) {
  if (cells.size() != ncols_) throw std::invalid_argument("CsvWriter: row width mismatch");
  for (std::size_t i = 0; i < cells.size(); ++i) {
    std::fputs(cells[i].c_str(), f_);
    std::fputc(i + 1 == cells.size() ? '\n' : ',', f_);
  }
}

void CsvWriter::flush() {
  if (f_) std::fflush(f_);
}

}  // namespace eisenlab
