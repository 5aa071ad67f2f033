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

#include "tenantsim/workload.hpp"

namespace tenantsim {

/// GEMM view of a layer under im2col lowering: the weight matrix is
/// k x m (k = C*R*S reduction rows, m = M output channels) and t = N*P*Q
/// input vectors are streamed over time.
struct GemmDims {
  std::int64_t k = 1;
  std::int64_t m = 1;
  std::int64_t t = 1;

  bool operator==(const GemmDims&) const = default;
};

/// One tile of the GEMM that fits the partition.
struct Fold {
  std::int64_t k_index = 0;   // which k-fold
  std::int64_t m_index = 0;   // which m-fold
  std::int64_t row_offset = 0;  // first reduction row of this tile
  std::int64_t col_offset = 0;  // first output channel of this tile
  std::int64_t rows = 1;  // r_f
  std::int64_t cols = 1;  // c_f
  std::int64_t t = 1;

  bool operator==(const Fold&) const = default;
};

struct FoldPlan {
  std::int64_t k_folds = 0;
  std::int64_t m_folds = 0;
  /// k-major: every k-fold of m-fold 0, then every k-fold of m-fold 1, ...
  std::vector<Fold> folds;
};

GemmDims lower(const LayerShape& layer);

/// Tiles `g` onto a part_rows x part_cols partition. Edge tiles are
/// truncated. Throws Error(InvalidArgument) if either dimension is < 1.
FoldPlan plan_folds(const GemmDims& g, std::int64_t part_rows,
                    std::int64_t part_cols);

/// Row-major k x m weight matrix from FW[M][C][R][S]; row index is
/// (c*R + r)*S + s, column index is the output channel.
std::vector<std::int64_t> im2col_weights(const LayerShape& layer,
                                         const std::vector<std::int64_t>& fw);

/// Row-major t x k input matrix from IFMap[N][C][H][W]; row index is the
/// output pixel (n*P + p)*Q + q.
std::vector<std::int64_t> im2col_inputs(const LayerShape& layer,
                                        const std::vector<std::int64_t>& ifmap);

}  // namespace tenantsim
