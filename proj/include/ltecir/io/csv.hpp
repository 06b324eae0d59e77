#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace ltecir::io {

// Minimal CSV writer: header row + numeric rows, '.17g' style doubles so
// round-trips are lossless.
class CsvWriter {
 public:
  CsvWriter(const std::filesystem::path& path, const std::vector<std::string>& header);
  void row(const std::vector<double>& values);
  void close();

 private:
  std::ofstream out_;
  std::filesystem::path path_;
  size_t ncols_ = 0;
};

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  int col(const std::string& name) const;  // -1 if absent
};

CsvTable read_csv(const std::filesystem::path& path);

std::string format_double(double v);

// Writes `content` to a temp file in the same directory, then renames over
// `path` so readers never observe a partial file.
void atomic_write_text(const std::filesystem::path& path, const std::string& content);

}  // namespace ltecir::io
