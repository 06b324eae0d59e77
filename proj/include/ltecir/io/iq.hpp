#pragma once

#include <cstdio>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "ltecir/common.hpp"

namespace ltecir::io {

// Sidecar metadata stored next to each .iq file as <stem>.json.
struct IqMeta {
  double sampling_rate_hz = 0.0;
  double carrier_frequency_hz = 0.0;
  double start_time = 0.0;
  int cell_id = 0;
};

std::filesystem::path sidecar_path(const std::filesystem::path& iq_path);

// Interleaved little-endian float32 I/Q, no header.
class IqWriter {
 public:
  IqWriter(const std::filesystem::path& path, const IqMeta& meta);
  ~IqWriter();
  IqWriter(const IqWriter&) = delete;
  IqWriter& operator=(const IqWriter&) = delete;

  void write(std::span<const cplx> samples);
  void close();
  size_t samples_written() const { return count_; }

 private:
  std::FILE* f_ = nullptr;
  std::filesystem::path path_;
  size_t count_ = 0;
};

class IqReader {
 public:
  explicit IqReader(const std::filesystem::path& path);
  ~IqReader();
  IqReader(const IqReader&) = delete;
  IqReader& operator=(const IqReader&) = delete;

  const IqMeta& meta() const { return meta_; }
  size_t total_samples() const { return total_; }

  // Reads up to n samples; returns fewer at end of file.
  std::vector<cplx> read(size_t n);
  std::vector<cplx> read_all();

 private:
  std::FILE* f_ = nullptr;
  IqMeta meta_;
  size_t total_ = 0;
};

}  // namespace ltecir::io
