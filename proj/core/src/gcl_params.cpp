// Copyright 2026 The mathgcl Authors. All rights reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "mathgcl/gcl_params.hpp"

#include <cmath>

#include "mathgcl/binary_io.hpp"
#include "mathgcl/error.hpp"
#include "mathgcl/rng.hpp"

namespace mathgcl {
namespace {

constexpr std::uint32_t kCheckpointVersion = 1;

template <typename P, typename T>
void collect(P& params, bool trainable_only, std::vector<std::pair<std::string, T*>>& out) {
  auto encoder = [&out](const std::string& prefix, auto& w) {
    out.emplace_back(prefix + ".w1", &w.w1);
    out.emplace_back(prefix + ".b1", &w.b1);
    out.emplace_back(prefix + ".w2", &w.w2);
    out.emplace_back(prefix + ".b2", &w.b2);
    out.emplace_back(prefix + ".relations", &w.relations);
  };
  auto mlp = [&out](const std::string& prefix, auto& m) {
    out.emplace_back(prefix + ".w1", &m.w1);
    out.emplace_back(prefix + ".b1", &m.b1);
    out.emplace_back(prefix + ".w2", &m.w2);
    out.emplace_back(prefix + ".b2", &m.b2);
  };
  encoder("online", params.online);
  switch (params.objective) {
    case Objective::kInfoGraph:
      out.emplace_back("discriminator", &params.discriminator);
      break;
    case Objective::kGraphCl:
      mlp("projector", params.projector);
      break;
    case Objective::kBgrl:
      mlp("predictor", params.predictor);
      if (!trainable_only) encoder("target", params.target);
      break;
  }
}

void require_same_shape(const Matrix& a, const Matrix& b, const std::string& what) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(ErrorCode::kShapeMismatch,
                what + ": " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) + " vs " +
                    std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  }
}

}  // namespace

std::string_view objective_name(Objective objective) noexcept {
  switch (objective) {
    case Objective::kInfoGraph: return "infograph";
    case Objective::kGraphCl: return "graphcl";
    case Objective::kBgrl: return "bgrl";
  }
  return "infograph";
}

Objective parse_objective(std::string_view name) {
  if (name == "infograph") return Objective::kInfoGraph;
  if (name == "graphcl") return Objective::kGraphCl;
  if (name == "bgrl") return Objective::kBgrl;
  throw Error(ErrorCode::kInvalidArgument,
              "unknown model '" + std::string(name) + "' (expected infograph, graphcl or bgrl)");
}

EncoderParams EncoderParams::initialize(Objective objective, std::size_t dim, std::uint64_t seed) {
  Rng rng(derive_seed(seed, 0x4743));
  EncoderParams p;
  p.objective = objective;
  p.online = EncoderWeights::random(dim, rng);
  const auto d = static_cast<Eigen::Index>(dim);
  switch (objective) {
    case Objective::kInfoGraph: {
      const double bound = std::sqrt(6.0 / static_cast<double>(2 * dim));
      p.discriminator = Matrix(d, d);
      for (Eigen::Index c = 0; c < d; ++c) {
        for (Eigen::Index r = 0; r < d; ++r) p.discriminator(r, c) = rng.uniform(-bound, bound);
      }
      break;
    }
    case Objective::kGraphCl:
      p.projector = Mlp::random(dim, rng);
      break;
    case Objective::kBgrl:
      p.predictor = Mlp::random(dim, rng);
      p.target = p.online;
      break;
  }
  return p;
}

EncoderParams EncoderParams::zeros_like(const EncoderParams& like) {
  EncoderParams z = like;
  for (auto& [name, t] : tensors(z, false)) t->setZero();
  return z;
}

bool EncoderParams::all_finite() const {
  for (const auto& [name, t] : tensors(*this, false)) {
    if (!t->allFinite()) return false;
  }
  return true;
}

std::vector<NamedTensor> tensors(EncoderParams& params, bool trainable_only) {
  std::vector<NamedTensor> out;
  collect(params, trainable_only, out);
  return out;
}

std::vector<ConstNamedTensor> tensors(const EncoderParams& params, bool trainable_only) {
  std::vector<ConstNamedTensor> out;
  collect(params, trainable_only, out);
  return out;
}

std::size_t parameter_count(const EncoderParams& params, bool trainable_only) {
  std::size_t n = 0;
  for (const auto& [name, t] : tensors(params, trainable_only)) n += static_cast<std::size_t>(t->size());
  return n;
}

std::vector<double> flatten(const EncoderParams& params, bool trainable_only) {
  std::vector<double> out;
  out.reserve(parameter_count(params, trainable_only));
  for (const auto& [name, t] : tensors(params, trainable_only)) {
    out.insert(out.end(), t->data(), t->data() + t->size());
  }
  return out;
}

void unflatten(EncoderParams& params, std::span<const double> values, bool trainable_only) {
  if (values.size() != parameter_count(params, trainable_only)) {
    throw Error(ErrorCode::kShapeMismatch, "flat parameter vector has " +
                                               std::to_string(values.size()) + " entries, expected " +
                                               std::to_string(parameter_count(params, trainable_only)));
  }
  std::size_t pos = 0;
  for (auto& [name, t] : tensors(params, trainable_only)) {
    std::copy_n(values.begin() + static_cast<std::ptrdiff_t>(pos), t->size(), t->data());
    pos += static_cast<std::size_t>(t->size());
  }
}

void ema_update(EncoderWeights& target, const EncoderWeights& online, double decay) {
  if (!(decay >= 0.0 && decay < 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "EMA decay must lie in [0, 1)");
  }
  require_same_shape(target.w1, online.w1, "w1");
  require_same_shape(target.b1, online.b1, "b1");
  require_same_shape(target.w2, online.w2, "w2");
  require_same_shape(target.b2, online.b2, "b2");
  require_same_shape(target.relations, online.relations, "relations");
  auto blend = [decay](Matrix& t, const Matrix& o) { t = decay * t + (1.0 - decay) * o; };
  blend(target.w1, online.w1);
  blend(target.b1, online.b1);
  blend(target.w2, online.w2);
  blend(target.b2, online.b2);
  blend(target.relations, online.relations);
}

Adam::Adam(double learning_rate, double beta1, double beta2, double epsilon)
    : lr_(learning_rate), beta1_(beta1), beta2_(beta2), eps_(epsilon) {
  if (!(learning_rate > 0.0)) throw Error(ErrorCode::kInvalidArgument, "learning rate must be > 0");
}

void Adam::step(EncoderParams& params, const EncoderParams& grad) {
  auto p = tensors(params, true);
  auto g = tensors(grad, true);
  if (p.size() != g.size()) throw Error(ErrorCode::kShapeMismatch, "gradient layout differs");
  if (m_.empty()) {
    for (const auto& [name, t] : p) {
      m_.push_back(Matrix::Zero(t->rows(), t->cols()));
      v_.push_back(Matrix::Zero(t->rows(), t->cols()));
    }
  }
  ++t_;
  const double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
  for (std::size_t i = 0; i < p.size(); ++i) {
    require_same_shape(*p[i].second, *g[i].second, p[i].first);
    const Matrix& gi = *g[i].second;
    m_[i] = beta1_ * m_[i] + (1.0 - beta1_) * gi;
    v_[i] = beta2_ * v_[i] + (1.0 - beta2_) * gi.cwiseProduct(gi);
    const auto m_hat = (m_[i] / c1).array();
    const auto v_hat = (v_[i] / c2).array();
    p[i].second->array() -= lr_ * m_hat / (v_hat.sqrt() + eps_);
  }
}

void save_checkpoint(const std::filesystem::path& path, const EncoderParams& params,
                     const CheckpointInfo& info) {
  BinaryWriter w(path);
  w.magic("MGCP");
  w.u32(kCheckpointVersion);
  w.string(objective_name(params.objective));
  w.string(layout_name(info.layout));
  w.u64(info.config_hash);
  w.u32(static_cast<std::uint32_t>(params.dim()));
  const auto all = tensors(params, false);
  w.u32(static_cast<std::uint32_t>(all.size()));
  for (const auto& [name, t] : all) {
    w.string(name);
    w.u32(static_cast<std::uint32_t>(t->rows()));
    w.u32(static_cast<std::uint32_t>(t->cols()));
  }
  std::vector<float> buf;
  for (const auto& [name, t] : all) {
    buf.resize(static_cast<std::size_t>(t->size()));
    // row-major on disk
    std::size_t k = 0;
    for (Eigen::Index r = 0; r < t->rows(); ++r) {
      for (Eigen::Index c = 0; c < t->cols(); ++c) buf[k++] = static_cast<float>((*t)(r, c));
    }
    w.f32s(buf);
  }
  w.finish();
}

EncoderParams load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info) {
  BinaryReader r(path);
  r.expect_magic("MGCP");
  const std::uint32_t version = r.u32();
  if (version != kCheckpointVersion) {
    throw Error(ErrorCode::kMalformedRecord, "unsupported checkpoint version " + std::to_string(version));
  }
  CheckpointInfo meta;
  meta.objective = parse_objective(r.string());
  meta.layout = parse_layout(r.string());
  meta.config_hash = r.u64();
  const std::uint32_t dim = r.u32();
  EncoderParams params = EncoderParams::zeros_like(EncoderParams::initialize(meta.objective, dim, 0));
  auto all = tensors(params, false);
  const std::uint32_t count = r.u32();
  if (count != all.size()) {
    throw Error(ErrorCode::kMalformedRecord, "checkpoint holds " + std::to_string(count) +
                                                 " tensors, expected " + std::to_string(all.size()));
  }
  for (const auto& [name, t] : all) {
    const std::string stored = r.string();
    const std::uint32_t rows = r.u32();
    const std::uint32_t cols = r.u32();
    if (stored != name || rows != t->rows() || cols != t->cols()) {
      throw Error(ErrorCode::kMalformedRecord, "tensor directory entry '" + stored + "' does not match '" +
                                                   name + "'");
    }
  }
  std::vector<float> buf;
  for (auto& [name, t] : all) {
    buf.resize(static_cast<std::size_t>(t->size()));
    r.f32s(buf);
    std::size_t k = 0;
    for (Eigen::Index row = 0; row < t->rows(); ++row) {
      for (Eigen::Index c = 0; c < t->cols(); ++c) (*t)(row, c) = buf[k++];
    }
  }
  if (!params.all_finite()) throw Error(ErrorCode::kMalformedRecord, "checkpoint holds non-finite values");
  if (info) *info = meta;
  return params;
}

}  // namespace mathgcl
