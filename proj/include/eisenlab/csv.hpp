#pragma once

#include <cstdio>
#include <string>
#include <vector>

namespace eisenlab {

// CSV writer for run outputs.  Doubles are printed as %.16e (17 significant
// digits), which round-trips binary64 exactly: reruns that compute identical
// doubles produce byte-identical files.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const std::vector<std::string>& columns);
  ~CsvWriter();
  CsvWriter(const CsvWriter&) = delete;
  CsvWriter& operator=(const CsvWriter&) = delete;

  void row(const std::vector<double>& values);  // size must equal column count
  void row_cells(const std::vector<std::string>& cells);  // pre-formatted
  void flush();

  static std::string format(double v);

 private:
  std::FILE* f_ = nullptr;
  std::size_t ncols_ = 0;
};

}  // namespace eisenlab
