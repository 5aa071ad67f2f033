/*
 * Copyright 2026 The tenantsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#pragma once

#include <cstdint>
#include <vector>

#include "tenantsim/lowering.hpp"
#include "tenantsim/pe_array.hpp"

namespace tenantsim {

struct FoldCycles {
  std::int64_t load = 0;
  std::int64_t feed_drain = 0;

  std::int64_t total() const { return load + feed_drain; }
  bool operator==(const FoldCycles&) const = default;
};

struct CycleEstimate {
  std::int64_t load_cycles = 0;
  std::int64_t feed_drain_cycles = 0;
  std::int64_t total = 0;
  std::vector<FoldCycles> per_fold;
};

/// Where a layer runs: partition size plus the feed-sharing context that
/// only matters in interleaved mode.
struct Placement {
  std::int64_t rows = 1;
  std::int64_t cols = 1;
  FeedModel feed_model = FeedModel::Independent;
  std::int64_t n_active = 1;
  std::int64_t col_start = 0;
};

/// Closed-form cycles for one r_f x c_f tile with t streamed vectors.
///   independent: r_f + (t + r_f + c_f - 1)
///   interleaved: r_f + (n_active*(t-1) + 1) + r_f + c_f + col_start - 1
FoldCycles fold_cycles(std::int64_t r_f, std::int64_t c_f, std::int64_t t,
                       FeedModel model, std::int64_t n_active,
                       std::int64_t col_start);

std::int64_t cycles_per_fold(std::int64_t r_f, std::int64_t c_f, std::int64_t t,
                             FeedModel model, std::int64_t n_active = 1,
                             std::int64_t col_start = 0);

/// Sum over the layer's folds; folds run back to back with no overlap.
CycleEstimate layer_cycles(const LayerShape& layer, const Placement& where);
CycleEstimate gemm_cycles(const GemmDims& g, const Placement& where);

}  // namespace tenantsim
