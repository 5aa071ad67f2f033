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

#include "tenantsim/lowering.hpp"

#include <algorithm>

namespace tenantsim {

GemmDims lower(const LayerShape& l) {
  return GemmDims{l.C * l.R * l.S, l.M, l.N * l.P * l.Q};
}

FoldPlan plan_folds(const GemmDims& g, std::int64_t part_rows,
                    std::int64_t part_cols) {
  if (part_rows < 1 || part_cols < 1) {
    throw Error(ErrorKind::InvalidArgument, "partition dimensions must be >= 1");
  }
  FoldPlan plan;
  plan.k_folds = (g.k + part_rows - 1) / part_rows;
  plan.m_folds = (g.m + part_cols - 1) / part_cols;
  plan.folds.reserve(static_cast<std::size_t>(plan.k_folds * plan.m_folds));
  for (std::int64_t mi = 0; mi < plan.m_folds; ++mi) {
    const std::int64_t col_offset = mi * part_cols;
    const std::int64_t cols = std::min(part_cols, g.m - col_offset);
    for (std::int64_t ki = 0; ki < plan.k_folds; ++ki) {
      const std::int64_t row_offset = ki * part_rows;
      const std::int64_t rows = std::min(part_rows, g.k - row_offset);
      plan.folds.push_back(Fold{ki, mi, row_offset, col_offset, rows, cols, g.t});
    }
  }
  return plan;
}

std::vector<std::int64_t> im2col_weights(const LayerShape& l,
                                         const std::vector<std::int64_t>& fw) {
  const GemmDims g = lower(l);
  if (static_cast<std::int64_t>(fw.size()) != l.M * g.k) {
    throw Error(ErrorKind::InvalidArgument, "filter tensor has the wrong size");
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(g.k * g.m));
  for (std::int64_t m = 0; m < l.M; ++m) {
    for (std::int64_t row = 0; row < g.k; ++row) {
      // FW[m][c][r][s] flattened is exactly m*k + (c*R + r)*S + s.
      out[static_cast<std::size_t>(row * g.m + m)] =
          fw[static_cast<std::size_t>(m * g.k + row)];
    }
  }
  return out;
}

std::vector<std::int64_t> im2col_inputs(const LayerShape& l,
                                        const std::vector<std::int64_t>& ifmap) {
  const GemmDims g = lower(l);
  if (static_cast<std::int64_t>(ifmap.size()) != l.N * l.C * l.H * l.W) {
    throw Error(ErrorKind::InvalidArgument, "input tensor has the wrong size");
  }
  std::vector<std::int64_t> out(static_cast<std::size_t>(g.t * g.k));
  for (std::int64_t n = 0; n < l.N; ++n) {
    for (std::int64_t p = 0; p < l.P; ++p) {
      for (std::int64_t q = 0; q < l.Q; ++q) {
        const std::int64_t pixel = (n * l.P + p) * l.Q + q;
        for (std::int64_t c = 0; c < l.C; ++c) {
          for (std::int64_t r = 0; r < l.R; ++r) {
            for (std::int64_t s = 0; s < l.S; ++s) {
              const std::int64_t row = (c * l.R + r) * l.S + s;
              const std::int64_t src =
                  ((n * l.C + c) * l.H + (p + r)) * l.W + (q + s);
              out[static_cast<std::size_t>(pixel * g.k + row)] =
                  ifmap[static_cast<std::size_t>(src)];
            }
          }
        }
      }
    }
  }
  return out;
}

}  // namespace tenantsim
