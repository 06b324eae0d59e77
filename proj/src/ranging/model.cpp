#include "ltecir/ranging/model.hpp"

#include <stdexcept>

#include "ltecir/nn/checkpoint.hpp"

namespace ltecir::ranging {

Variant variant_from_string(const std::string& s) {
  if (s == "proposed") return Variant::kProposed;
  if (s == "baseline") return Variant::kBaseline;
  if (s == "complex") return Variant::kComplex;
  throw std::invalid_argument("unknown model variant: " + s);
}

std::string variant_to_string(Variant v) {
  switch (v) {
    case Variant::kProposed: return "proposed";
    case Variant::kBaseline: return "baseline";
    case Variant::kComplex: return "complex";
  }
  return "?";
}

ModelInput make_input(std::span<const double> magnitudes, const ModelSpec& spec, double scale) {
  ModelInput in;
  in.norm = normalize_cir(magnitudes, scale);
  if (spec.variant != Variant::kBaseline && !spec.dense_front_end) {
    in.tokens = quantize_cir(magnitudes, spec.vocab, scale);
    // Scan the delay axis tail-first so the leading taps (where the channel
    // actually lives) are the last steps the recurrent state sees before the
    // readout.
    std::reverse(in.tokens.begin(), in.tokens.end());
  }
  return in;
}

RangingModel::RangingModel(const ModelSpec& spec, uint64_t seed) : spec_(spec) {
  Rng rng(derive_seed(seed, 0x1a7e1));
  const bool recurrent = spec.variant != Variant::kBaseline;
  if (recurrent) {
    if (spec.dense_front_end)
      front_ = std::make_unique<nn::Dense>("front", 1, spec.embed_dim, rng);
    else
      embed_ = std::make_unique<nn::Embedding>("embed", spec.vocab, spec.embed_dim, rng);
    if (spec.variant == Variant::kComplex)
      gru_ = std::make_unique<nn::Gru>("gru", spec.embed_dim, spec.hidden, rng);
    lstm_ = std::make_unique<nn::Lstm>(
        "lstm", spec.variant == Variant::kComplex ? spec.hidden : spec.embed_dim, spec.hidden,
        rng);
  }
  const int head_in = recurrent ? spec.hidden : spec.n_cir;
  const int n_hidden_dense = spec.variant == Variant::kComplex ? 2 : 1;
  int in_dim = head_in;
  for (int k = 0; k < n_hidden_dense; ++k) {
    dense_.emplace_back("dense" + std::to_string(k), in_dim, 128, rng);
    in_dim = 128;
  }
  dense_.emplace_back("dense" + std::to_string(n_hidden_dense), in_dim, 1, rng);
}

std::vector<nn::Param*> RangingModel::params() {
  std::vector<nn::Param*> out;
  auto add = [&](std::vector<nn::Param*> ps) { out.insert(out.end(), ps.begin(), ps.end()); };
  if (embed_) add(embed_->params());
  if (front_) add(front_->params());
  if (gru_) add(gru_->params());
  if (lstm_) add(lstm_->params());
  for (auto& d : dense_) add(d.params());
  return out;
}

int64_t RangingModel::param_count() {
  int64_t n = 0;
  for (const nn::Param* p : params()) n += p->value.numel();
  return n;
}

double RangingModel::run_forward(const ModelInput& in, bool training, Rng* rng,
                                 ForwardCache* cache) const {
  const double rate = spec_.dropout_rate;
  nn::Tensor x;

  if (spec_.variant == Variant::kBaseline) {
    if (static_cast<int>(in.norm.size()) != spec_.n_cir)
      throw std::invalid_argument("model: input width != n_cir");
    x = nn::Tensor({1, spec_.n_cir});
    x.values = in.norm;
  } else {
    nn::Tensor seq;
    if (front_) {
      // Same tail-first scan as the token path (see make_input).
      nn::Tensor fin({static_cast<int>(in.norm.size()), 1});
      fin.values.assign(in.norm.rbegin(), in.norm.rend());
      seq = front_->forward(fin);
      if (cache) cache->front_in = std::move(fin);
    } else {
      seq = embed_->forward(in.tokens);
      if (cache) cache->tokens = in.tokens;
    }
    if (cache) {
      cache->seq_in = seq;
      cache->rec.resize(gru_ ? 2 : 1);
    }
    if (gru_) seq = gru_->forward(seq, cache ? &cache->rec[0] : nullptr);
    const nn::Tensor hs =
        lstm_->forward(seq, cache ? &cache->rec[cache->rec.size() - 1] : nullptr);
    x = nn::Tensor({1, spec_.hidden});
    for (int j = 0; j < spec_.hidden; ++j) x.at(0, j) = hs.at(hs.rows() - 1, j);
    if (training) {
      nn::Tensor mask;
      x = nn::dropout_forward(x, rate, *rng, true, &mask);
      if (cache) cache->drop_mask.push_back(std::move(mask));
    }
  }

  for (size_t k = 0; k < dense_.size(); ++k) {
    if (cache) cache->dense_in.push_back(x);
    nn::Tensor pre = dense_[k].forward(x);
    if (cache) cache->dense_pre.push_back(pre);
    x = nn::relu_forward(pre);
    if (training && k + 1 < dense_.size()) {
      nn::Tensor mask;
      x = nn::dropout_forward(x, rate, *rng, true, &mask);
      if (cache) cache->drop_mask.push_back(std::move(mask));
    }
  }
  return x.at(0, 0);
}

double RangingModel::predict(const ModelInput& in) const {
  return run_forward(in, false, nullptr, nullptr);
}

double RangingModel::forward_train(const ModelInput& in, Rng& dropout_rng, ForwardCache& cache) {
  cache = ForwardCache{};
  return run_forward(in, true, &dropout_rng, &cache);
}

void RangingModel::backward(const ForwardCache& cache, double dpred) {
  nn::Tensor d({1, 1});
  d.at(0, 0) = dpred;
  size_t mask_idx = cache.drop_mask.size();
  for (size_t k = dense_.size(); k-- > 0;) {
    d = nn::relu_backward(cache.dense_pre[k], d);
    d = dense_[k].backward(cache.dense_in[k], d);
    if (k > 0 || spec_.variant != Variant::kBaseline)
      d = nn::dropout_backward(d, cache.drop_mask[--mask_idx]);
  }
  if (spec_.variant == Variant::kBaseline) return;

  const auto& lstm_cache = cache.rec[cache.rec.size() - 1];
  nn::Tensor dh({lstm_cache.x.rows(), spec_.hidden});
  for (int j = 0; j < spec_.hidden; ++j) dh.at(dh.rows() - 1, j) = d.at(0, j);
  nn::Tensor dseq = lstm_->backward(lstm_cache, dh);
  if (gru_) dseq = gru_->backward(cache.rec[0], dseq);
  if (front_)
    front_->backward(cache.front_in, dseq);
  else
    embed_->backward(cache.tokens, dseq);
}

void RangingModel::set_output_bias(double value) {
  dense_.back().b.value.values[0] = value;
}

void RangingModel::save(const std::filesystem::path& path) {
  std::vector<nn::NamedTensor> ts;
  for (const nn::Param* p : params()) ts.push_back({p->name, p->value});
  nn::save_checkpoint(path, ts);
}

void RangingModel::load(const std::filesystem::path& path) {
  const auto ts = nn::load_checkpoint(path);
  auto ps = params();
  if (ts.size() != ps.size())
    throw std::runtime_error("checkpoint layer count mismatch: " + path.string());
  for (size_t i = 0; i < ps.size(); ++i) {
    if (ts[i].name != ps[i]->name || ts[i].tensor.shape != ps[i]->value.shape)
      throw std::runtime_error("checkpoint layer mismatch at " + ts[i].name + " in " +
                               path.string());
    ps[i]->value.values = ts[i].tensor.values;
  }
}

}  // namespace ltecir::ranging
