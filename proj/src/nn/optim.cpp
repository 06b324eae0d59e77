#include "ltecir/nn/optim.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace ltecir::nn {

AdamState make_adam(const std::vector<Param*>& params, const AdamConfig& cfg) {
  AdamState st;
  st.cfg = cfg;
  for (const Param* p : params) {
    st.m.emplace_back(p->value.values.size(), 0.0);
    st.v.emplace_back(p->value.values.size(), 0.0);
  }
  return st;
}

void adam_step(AdamState& st, const std::vector<Param*>& params) {
  if (params.size() != st.m.size())
    throw std::invalid_argument("adam: parameter set does not match state");
  ++st.step;
  const double b1 = st.cfg.beta1, b2 = st.cfg.beta2;
  const double corr1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
  const double corr2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
  for (size_t k = 0; k < params.size(); ++k) {
    auto& value = params[k]->value.values;
    const auto& grad = params[k]->grad.values;
    if (grad.size() != st.m[k].size())
      throw std::invalid_argument("adam: shape mismatch on " + params[k]->name);
    for (size_t i = 0; i < value.size(); ++i) {
      st.m[k][i] = b1 * st.m[k][i] + (1.0 - b1) * grad[i];
      st.v[k][i] = b2 * st.v[k][i] + (1.0 - b2) * grad[i] * grad[i];
      const double mh = st.m[k][i] / corr1;
      const double vh = st.v[k][i] / corr2;
      value[i] -= st.cfg.lr * mh / (std::sqrt(vh) + st.cfg.eps);
    }
  }
}

double sgd_decay_lr(const SgdDecayState& st) {
  const double t = static_cast<double>(st.step);
  const double exponent =
      st.cfg.staircase ? std::floor(t / st.cfg.decay_steps) : t / st.cfg.decay_steps;
  return st.cfg.lr0 * std::pow(st.cfg.decay_rate, exponent);
}

void sgd_decay_step(SgdDecayState& st, const std::vector<Param*>& params) {
  const double lr = sgd_decay_lr(st);
  for (Param* p : params) {
    if (p->grad.values.size() != p->value.values.size())
      throw std::invalid_argument("sgd: shape mismatch on " + p->name);
    for (size_t i = 0; i < p->value.values.size(); ++i)
      p->value.values[i] -= lr * p->grad.values[i];
  }
  ++st.step;
}

namespace {
constexpr uint32_t kAdamMagic = 0x4c544144;  // "LTAD"

void write_u64(std::FILE* f, uint64_t v) { std::fwrite(&v, sizeof(v), 1, f); }
uint64_t read_u64(std::FILE* f) {
  uint64_t v = 0;
  if (std::fread(&v, sizeof(v), 1, f) != 1) throw std::runtime_error("optimizer state truncated");
  return v;
}
void write_doubles(std::FILE* f, const std::vector<double>& v) {
  write_u64(f, v.size());
  std::fwrite(v.data(), sizeof(double), v.size(), f);
}
std::vector<double> read_doubles(std::FILE* f) {
  std::vector<double> v(read_u64(f));
  if (std::fread(v.data(), sizeof(double), v.size(), f) != v.size())
    throw std::runtime_error("optimizer state truncated");
  return v;
}
}  // namespace

void save_adam(const std::filesystem::path& path, const AdamState& st) {
  std::FILE* f = std::fopen(path.string().c_str(), "wb");
  if (!f) throw std::runtime_error("cannot write " + path.string());
  uint32_t magic = kAdamMagic;
  std::fwrite(&magic, sizeof(magic), 1, f);
  std::fwrite(&st.cfg, sizeof(st.cfg), 1, f);
  write_u64(f, static_cast<uint64_t>(st.step));
  write_u64(f, st.m.size());
  for (size_t k = 0; k < st.m.size(); ++k) {
    write_doubles(f, st.m[k]);
    write_doubles(f, st.v[k]);
  }
  std::fclose(f);
}

AdamState load_adam(const std::filesystem::path& path) {
  std::FILE* f = std::fopen(path.string().c_str(), "rb");
  if (!f) throw std::runtime_error("cannot read " + path.string());
  AdamState st;
  uint32_t magic = 0;
  if (std::fread(&magic, sizeof(magic), 1, f) != 1 || magic != kAdamMagic) {
    std::fclose(f);
    throw std::runtime_error("not an optimizer state file: " + path.string());
  }
  if (std::fread(&st.cfg, sizeof(st.cfg), 1, f) != 1) {
    std::fclose(f);
    throw std::runtime_error("optimizer state truncated: " + path.string());
  }
  st.step = static_cast<int64_t>(read_u64(f));
  const uint64_t count = read_u64(f);
  for (uint64_t k = 0; k < count; ++k) {
    st.m.push_back(read_doubles(f));
    st.v.push_back(read_doubles(f));
  }
  std::fclose(f);
  return st;
}

}  // namespace ltecir::nn
