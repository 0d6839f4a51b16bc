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

#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "mathgcl/encoder.hpp"
#include "mathgcl/formula_graph.hpp"

namespace mathgcl {

enum class Objective { kInfoGraph, kGraphCl, kBgrl };

std::string_view objective_name(Objective objective) noexcept;  // "infograph" / "graphcl" / "bgrl"
Objective parse_objective(std::string_view name);              // throws kInvalidArgument

/// Encoder plus the head used by the selected objective. Heads that the
/// objective does not use are left empty (0 x 0).
struct EncoderParams {
  Objective objective = Objective::kInfoGraph;
  EncoderWeights online;
  Matrix discriminator;  // InfoGraph bilinear critic
  Mlp projector;         // GraphCL
  Mlp predictor;         // BGRL
  EncoderWeights target; // BGRL, updated only by ema_update

  static EncoderParams initialize(Objective objective, std::size_t dim, std::uint64_t seed);
  /// Same shapes as `like`, all zeros; used as a gradient accumulator.
  static EncoderParams zeros_like(const EncoderParams& like);

  std::size_t dim() const noexcept { return online.dim(); }
  bool all_finite() const;
};

using NamedTensor = std::pair<std::string, Matrix*>;
using ConstNamedTensor = std::pair<std::string, const Matrix*>;

/// Tensors in a fixed order. `trainable` excludes the BGRL target copy.
std::vector<NamedTensor> tensors(EncoderParams& params, bool trainable_only);
std::vector<ConstNamedTensor> tensors(const EncoderParams& params, bool trainable_only);

std::size_t parameter_count(const EncoderParams& params, bool trainable_only);
std::vector<double> flatten(const EncoderParams& params, bool trainable_only);
void unflatten(EncoderParams& params, std::span<const double> values, bool trainable_only);

/// target <- decay * target + (1 - decay) * online for every tensor.
/// Throws kShapeMismatch if shapes differ and kInvalidArgument if decay
/// is outside [0, 1).
void ema_update(EncoderWeights& target, const EncoderWeights& online, double decay);

class Adam {
 public:
  explicit Adam(double learning_rate, double beta1 = 0.9, double beta2 = 0.999,
                double epsilon = 1e-8);

  /// Updates every trainable tensor of `params` from the matching tensor in
  /// `grad`. The BGRL target copy is never touched.
  void step(EncoderParams& params, const EncoderParams& grad);

  std::size_t steps() const noexcept { return t_; }

 private:
  double lr_, beta1_, beta2_, eps_;
  std::size_t t_ = 0;
  std::vector<Matrix> m_, v_;
};

struct CheckpointInfo {
  Objective objective = Objective::kInfoGraph;
  Layout layout = Layout::kSlt;
  std::uint64_t config_hash = 0;
};

void save_checkpoint(const std::filesystem::path& path, const EncoderParams& params,
                     const CheckpointInfo& info);
EncoderParams load_checkpoint(const std::filesystem::path& path, CheckpointInfo* info = nullptr);

}  // namespace mathgcl
