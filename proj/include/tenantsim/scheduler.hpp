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
#include <functional>
#include <utility>
#include <vector>

#include "tenantsim/timing.hpp"
#include "tenantsim/trace.hpp"

namespace tenantsim {

/// A ready layer waiting for columns.
struct TaskQueueEntry {
  LayerRef layer;
  std::int64_t mac_priority = 0;  // opr_count of the layer
  Cycles ready_at = 0;
  Cycles arrival_time = 0;  // of the owning DNN, used for tie-breaks

  bool operator==(const TaskQueueEntry&) const = default;
};

/// Equal-width split of the array over `n_tasks` ready layers:
/// n_tasks widths of floor(array_cols / n_tasks). Remainder columns are
/// not part of any returned width. Throws TooManyTasks if
/// n_tasks > array_cols and InvalidArgument if n_tasks < 1.
std::vector<std::int64_t> partition_calculation(std::int64_t n_tasks,
                                                std::int64_t array_cols);

/// Orders ready layers by MAC priority (descending; ties by earlier DNN
/// arrival, then dnn_id, then layer index) and free regions by width
/// (descending; ties by col_start), then pairs them off.
std::vector<std::pair<LayerRef, Partition>> task_assignment(
    std::vector<TaskQueueEntry> ready, std::vector<Partition> free_regions);

/// Fills uncovered columns with free partitions and collapses each run of
/// adjacent free partitions into one, which keeps the leftmost member's id.
/// Busy partitions are untouched.
PartitionSet merge_free(const PartitionSet& parts, std::int64_t array_cols);

struct LayerExecution {
  Cycles cycles = 0;
  ActivityCounts activities;
};

/// Supplies the duration and activity of one layer on one placement.
using LayerExecutor =
    std::function<LayerExecution(const LayerRef&, const LayerShape&, const Placement&)>;

/// Closed-form timing and activity model.
LayerExecution analytical_execution(const LayerShape& layer, const Placement& where);

/// Event-driven schedule of a validated workload.
///
/// partitioned: the first layer to start gets the whole array. Whenever
/// the whole array is idle and several layers are ready it is split into
/// equal column ranges, one per ready layer; otherwise freed columns are
/// merged with free neighbours and handed out whole, widest region to the
/// heaviest layer. Running layers are never preempted.
///
/// baseline: first-come first-served by DNN (arrival, then dnn_id), one
/// layer at a time on the whole array.
Trace run_schedule(const Workload& w, const ArrayConfig& cfg, ScheduleMode mode,
                   const LayerExecutor& executor = {});

}  // namespace tenantsim
