#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ltecir/nn/tensor.hpp"

namespace ltecir::nn {

struct NamedTensor {
  std::string name;
  Tensor tensor;
};

// Binary checkpoint: magic + version, then per tensor name/shape/row-major
// doubles.  A `<path>.json` manifest mirrors the layer names and shapes.
void save_checkpoint(const std::filesystem::path& path, const std::vector<NamedTensor>& tensors);
std::vector<NamedTensor> load_checkpoint(const std::filesystem::path& path);

}  // namespace ltecir::nn
