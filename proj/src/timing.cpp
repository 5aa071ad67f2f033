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

#include "tenantsim/timing.hpp"

namespace tenantsim {

FoldCycles fold_cycles(std::int64_t r_f, std::int64_t c_f, std::int64_t t,
                       FeedModel model, std::int64_t n_active,
                       std::int64_t col_start) {
  if (r_f < 1 || c_f < 1 || t < 1 || n_active < 1 || col_start < 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid fold dimensions");
  }
  if (model == FeedModel::Independent) {
    return FoldCycles{r_f, t + r_f + c_f - 1};
  }
  // Round-robin injection stretches the stream to n*(t-1)+1 cycles, then
  // the last value crosses the upstream columns and the tile.
  return FoldCycles{r_f, (n_active * (t - 1) + 1) + r_f + c_f + col_start - 1};
}

std::int64_t cycles_per_fold(std::int64_t r_f, std::int64_t c_f, std::int64_t t,
                             FeedModel model, std::int64_t n_active,
                             std::int64_t col_start) {
  return fold_cycles(r_f, c_f, t, model, n_active, col_start).total();
}

CycleEstimate gemm_cycles(const GemmDims& g, const Placement& where) {
  const FoldPlan plan = plan_folds(g, where.rows, where.cols);
  CycleEstimate est;
  est.per_fold.reserve(plan.folds.size());
  for (const Fold& f : plan.folds) {
    const FoldCycles fc =
        fold_cycles(f.rows, f.cols, f.t, where.feed_model, where.n_active, where.col_start);
    est.load_cycles += fc.load;
    est.feed_drain_cycles += fc.feed_drain;
    est.per_fold.push_back(fc);
  }
  est.total = est.load_cycles + est.feed_drain_cycles;
  return est;
}

CycleEstimate layer_cycles(const LayerShape& layer, const Placement& where) {
  return gemm_cycles(lower(layer), where);
}

}  // namespace tenantsim
