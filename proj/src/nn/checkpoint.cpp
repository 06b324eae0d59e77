#include "ltecir/nn/checkpoint.hpp"

#include <cstdio>
#include <stdexcept>

#include <json.hpp>

#include "ltecir/io/csv.hpp"

namespace ltecir::nn {

namespace {
constexpr uint32_t kMagic = 0x4c544e4e;  // "LTNN"
constexpr uint32_t kVersion = 1;

void write_u64(std::FILE* f, uint64_t v) { std::fwrite(&v, sizeof(v), 1, f); }
uint64_t read_u64(std::FILE* f) {
  uint64_t v = 0;
  if (std::fread(&v, sizeof(v), 1, f) != 1) throw std::runtime_error("checkpoint truncated");
  return v;
}
}  // namespace

void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  std::fwrite(&kMagic, sizeof(kMagic), 1, f);
  std::fwrite(&kVersion, sizeof(kVersion), 1, f);
  write_u64(f, tensors.size());
  for (const auto& nt : tensors) {
    write_u64(f, nt.name.size());
    std::fwrite(nt.name.data(), 1, nt.name.size(), f);
    write_u64(f, nt.tensor.shape.size());
    for (const int d : nt.tensor.shape) write_u64(f, static_cast<uint64_t>(d));
    std::fwrite(nt.tensor.values.data(), sizeof(double), nt.tensor.values.size(), f);
  }
  std::fclose(f);

  nlohmann::json manifest;
  manifest["magic"] = "LTNN";
  manifest["version"] = kVersion;
  auto layers = nlohmann::json::array();
  for (const auto& nt : tensors)
    layers.push_back({{"name", nt.name}, {"shape", nt.tensor.shape}});
  manifest["layers"] = layers;
  io::atomic_write_text(path.string() + ".json", manifest.dump(2) + "\n");
}

std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) throw std::runtime_error("cannot read " + path.string());
  uint32_t magic = 0, version = 0;
  if (std::fread(&magic, sizeof(magic), 1, f) != 1 || magic != kMagic) {
    std::fclose(f);
    throw std::runtime_error("not a checkpoint: " + path.string());
  }
  if (std::fread(&version, sizeof(version), 1, f) != 1 || version != kVersion) {
    std::fclose(f);
    throw std::runtime_error("unsupported checkpoint version in " + path.string());
  }
  std::vector<NamedTensor> out;
  try {
    const uint64_t count = read_u64(f);
    for (uint64_t k = 0; k < count; ++k) {
      NamedTensor nt;
      nt.name.resize(read_u64(f));
      if (std::fread(nt.name.data(), 1, nt.name.size(), f) != nt.name.size())
        throw std::runtime_error("checkpoint truncated");
      std::vector<int> shape(read_u64(f));
      for (auto& d : shape) d = static_cast<int>(read_u64(f));
      nt.tensor = Tensor(shape);
      if (std::fread(nt.tensor.values.data(), sizeof(double), nt.tensor.values.size(), f) !=
          nt.tensor.values.size())
        throw std::runtime_error("checkpoint truncated");
      out.push_back(std::move(nt));
    }
  } catch (...) {
    std::fclose(f);
    throw;
  }
  std::fclose(f);
  return out;
}

}  // namespace ltecir::nn
