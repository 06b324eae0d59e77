#include "ltecir/io/iq.hpp"

#include <fstream>
#include <stdexcept>

#include <json.hpp>

namespace ltecir::io {

namespace {

void write_sidecar(const std::filesystem::path& p, const IqMeta& m) {
  nlohmann::json j;
  j["sampling_rate_hz"] = m.sampling_rate_hz;
  j["carrier_frequency_hz"] = m.carrier_frequency_hz;
  j["start_time"] = m.start_time;
  j["cell_id"] = m.cell_id;
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write sidecar: " + p.string());
  out << j.dump(2) << "\n";
}

IqMeta read_sidecar(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read sidecar: " + p.string());
  nlohmann::json j;
  in >> j;
  IqMeta m;
  m.sampling_rate_hz = j.at("sampling_rate_hz").get<double>();
  m.carrier_frequency_hz = j.at("carrier_frequency_hz").get<double>();
  m.start_time = j.at("start_time").get<double>();
  m.cell_id = j.at("cell_id").get<int>();
  return m;
}

}  // namespace

std::filesystem::path sidecar_path(const std::filesystem::path& iq_path) {
  std::filesystem::path p = iq_path;
  p.replace_extension(".json");
  return p;
}

IqWriter::IqWriter(const std::filesystem::path& path, const IqMeta& meta) : path_(path) {
  f_ = std::fopen(path.string().c_str(), "wb");
  if (!f_) throw std::runtime_error("cannot open for writing: " + path.string());
  write_sidecar(sidecar_path(path), meta);
}

IqWriter::~IqWriter() { close(); }

void IqWriter::write(std::span<const cplx> samples) {
  if (!f_) throw std::runtime_error("IqWriter: write after close");
  std::vector<float> buf(samples.size() * 2);
  for (size_t i = 0; i < samples.size(); ++i) {
    buf[2 * i] = static_cast<float>(samples[i].real());
    buf[2 * i + 1] = static_cast<float>(samples[i].imag());
  }
  if (std::fwrite(buf.data(), sizeof(float), buf.size(), f_) != buf.size())
    throw std::runtime_error("short write: " + path_.string());
  count_ += samples.size();
}

void IqWriter::close() {
  if (f_) {
    std::fclose(f_);
    f_ = nullptr;
  }
}

IqReader::IqReader(const std::filesystem::path& path) {
  meta_ = read_sidecar(sidecar_path(path));
  f_ = std::fopen(path.string().c_str(), "rb");
  if (!f_) throw std::runtime_error("cannot open for reading: " + path.string());
  std::fseek(f_, 0, SEEK_END);
  const long bytes = std::ftell(f_);
  std::fseek(f_, 0, SEEK_SET);
  total_ = static_cast<size_t>(bytes) / (2 * sizeof(float));
}

IqReader::~IqReader() {
  if (f_) std::fclose(f_);
}

std::vector<cplx> IqReader::read(size_t n) {
  std::vector<float> buf(n * 2);
  const size_t got = std::fread(buf.data(), sizeof(float), buf.size(), f_);
  std::vector<cplx> out(got / 2);
  for (size_t i = 0; i < out.size(); ++i) out[i] = cplx(buf[2 * i], buf[2 * i + 1]);
  return out;
}

std::vector<cplx> IqReader::read_all() { return read(total_); }

}  // namespace ltecir::io
