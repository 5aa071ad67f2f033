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

#include "tenantsim/scheduler.hpp"

#include <algorithm>
#include <limits>
#include <map>

#include "tenantsim/energy.hpp"

namespace tenantsim {

std::vector<std::int64_t> partition_calculation(std::int64_t n_tasks,
                                                std::int64_t array_cols) {
  if (n_tasks < 1) {
    throw Error(ErrorKind::InvalidArgument, "need at least one task to partition for");
  }
  if (n_tasks > array_cols) {
    throw Error(ErrorKind::TooManyTasks,
                std::to_string(n_tasks) + " tasks cannot share " +
                    std::to_string(array_cols) + " columns");
  }
  return std::vector<std::int64_t>(static_cast<std::size_t>(n_tasks),
                                   array_cols / n_tasks);
}

namespace {

bool higher_priority(const TaskQueueEntry& a, const TaskQueueEntry& b) {
  if (a.mac_priority != b.mac_priority) return a.mac_priority > b.mac_priority;
  if (a.arrival_time != b.arrival_time) return a.arrival_time < b.arrival_time;
  if (a.layer.dnn_id != b.layer.dnn_id) return a.layer.dnn_id < b.layer.dnn_id;
  return a.layer.layer_index < b.layer.layer_index;
}

}  // namespace

std::vector<std::pair<LayerRef, Partition>> task_assignment(
    std::vector<TaskQueueEntry> ready, std::vector<Partition> free_regions) {
  std::sort(ready.begin(), ready.end(), higher_priority);
  std::sort(free_regions.begin(), free_regions.end(),
            [](const Partition& a, const Partition& b) {
              if (a.col_width != b.col_width) return a.col_width > b.col_width;
              return a.col_start < b.col_start;
            });
  std::vector<std::pair<LayerRef, Partition>> out;
  const std::size_t n = std::min(ready.size(), free_regions.size());
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.emplace_back(ready[i].layer, free_regions[i]);
  return out;
}

PartitionSet merge_free(const PartitionSet& parts, std::int64_t array_cols) {
  check_partitions(parts, array_cols);
  PartitionSet sorted = parts;
  std::sort(sorted.begin(), sorted.end(),
            [](const Partition& a, const Partition& b) { return a.col_start < b.col_start; });
  PartitionId next_id = 0;
  for (const auto& p : sorted) next_id = std::max(next_id, p.id + 1);

  // Normalize: cover every column.
  PartitionSet covered;
  std::int64_t cursor = 0;
  for (const auto& p : sorted) {
    if (p.col_start > cursor) {
      covered.push_back(Partition{next_id++, cursor, p.col_start - cursor,
                                  PartitionState::Free, std::nullopt});
    }
    covered.push_back(p);
    cursor = p.col_end();
  }
  if (cursor < array_cols) {
    covered.push_back(Partition{next_id++, cursor, array_cols - cursor,
                                PartitionState::Free, std::nullopt});
  }

  PartitionSet merged;
  for (auto p : covered) {
    if (!p.busy()) p.assignment.reset();
    if (!merged.empty() && !merged.back().busy() && !p.busy()) {
      merged.back().col_width += p.col_width;
    } else {
      merged.push_back(std::move(p));
    }
  }
  return merged;
}

LayerExecution analytical_execution(const LayerShape& layer, const Placement& where) {
  const GemmDims g = lower(layer);
  LayerExecution out;
  out.cycles = gemm_cycles(g, where).total;
  out.activities =
      layer_activities(g, where.rows, where.cols, where.feed_model, where.col_start);
  return out;
}

namespace {

struct Running {
  LayerRef layer;
  PartitionId partition = 0;
  Cycles end = 0;
};

struct DnnState {
  const DnnGraph* dnn = nullptr;
  bool arrived = false;
  std::vector<std::size_t> pending_preds;
  std::vector<bool> started;
  std::size_t done = 0;
};

class Scheduler {
 public:
  Scheduler(const Workload& w, const ArrayConfig& cfg, ScheduleMode mode,
            const LayerExecutor& executor)
      : w_(w), cfg_(cfg), mode_(mode), executor_(executor) {
    trace_.mode = mode;
    trace_.array = cfg;
    trace_.workload_signature = workload_signature(w);
    for (const auto& dnn : w.dnns) {
      DnnState s;
      s.dnn = &dnn;
      s.pending_preds.resize(dnn.layers.size());
      for (std::size_t i = 0; i < dnn.layers.size(); ++i) {
        s.pending_preds[i] = dnn.predecessors(i).size();
      }
      s.started.assign(dnn.layers.size(), false);
      dnns_.push_back(std::move(s));
      trace_.dnns.push_back(DnnRecord{dnn.dnn_id, dnn.arrival_time, -1, -1});
    }
    // FCFS order for the baseline and deterministic arrival processing.
    for (std::size_t i = 0; i < dnns_.size(); ++i) fcfs_.push_back(i);
    std::stable_sort(fcfs_.begin(), fcfs_.end(), [&](std::size_t a, std::size_t b) {
      const auto& da = *dnns_[a].dnn;
      const auto& db = *dnns_[b].dnn;
      if (da.arrival_time != db.arrival_time) return da.arrival_time < db.arrival_time;
      return da.dnn_id < db.dnn_id;
    });
    parts_.push_back(Partition{next_id_++, 0, cfg.cols, PartitionState::Free, std::nullopt});
  }

  Trace run() {
    for (;;) {
      Cycles now = std::numeric_limits<Cycles>::max();
      for (const auto& s : dnns_) {
        if (!s.arrived) now = std::min(now, s.dnn->arrival_time);
      }
      for (const auto& r : running_) now = std::min(now, r.end);
      if (now == std::numeric_limits<Cycles>::max()) break;

      finish_layers(now);
      admit_arrivals(now);
      if (mode_ == ScheduleMode::Partitioned) merge(now);
      assign(now);
    }
    for (const auto& r : trace_.layers) trace_.makespan = std::max(trace_.makespan, r.end);
    for (const auto& r : trace_.layers) trace_.totals += r.activities;
    return std::move(trace_);
  }

 private:
  void emit(EventKind kind, Cycles time, std::optional<LayerRef> layer,
            std::string dnn_id = {}) {
    trace_.events.push_back(
        ScheduleEvent{kind, time, std::move(layer), std::move(dnn_id), parts_});
  }

  Partition& part(PartitionId id) {
    for (auto& p : parts_) {
      if (p.id == id) return p;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown partition");
  }

  std::size_t dnn_index(const std::string& id) const {
    for (std::size_t i = 0; i < dnns_.size(); ++i) {
      if (dnns_[i].dnn->dnn_id == id) return i;
    }
    throw Error(ErrorKind::InvalidArgument, "unknown dnn " + id);
  }

  void make_ready(std::size_t d, std::size_t layer, Cycles now) {
    const DnnGraph& dnn = *dnns_[d].dnn;
    ready_.push_back(TaskQueueEntry{LayerRef{dnn.dnn_id, layer},
                                    opr_count(dnn.layers[layer]), now,
                                    dnn.arrival_time});
  }

  void finish_layers(Cycles now) {
    std::vector<Running> ending;
    for (const auto& r : running_) {
      if (r.end == now) ending.push_back(r);
    }
    std::sort(ending.begin(), ending.end(), [&](const Running& a, const Running& b) {
      return part(a.partition).col_start < part(b.partition).col_start;
    });
    std::erase_if(running_, [now](const Running& r) { return r.end == now; });
    for (const auto& r : ending) {
      Partition& p = part(r.partition);
      p.state = PartitionState::Free;
      p.assignment.reset();
      emit(EventKind::LayerEnd, now, r.layer);
      const std::size_t d = dnn_index(r.layer.dnn_id);
      DnnState& s = dnns_[d];
      ++s.done;
      for (std::size_t succ : s.dnn->successors(r.layer.layer_index)) {
        if (--s.pending_preds[succ] == 0) make_ready(d, succ, now);
      }
      if (s.done == s.dnn->layers.size()) {
        trace_.dnns[d].completion = now;
        emit(EventKind::DnnDone, now, std::nullopt, s.dnn->dnn_id);
      }
    }
  }

  void admit_arrivals(Cycles now) {
    for (std::size_t d : fcfs_) {
      DnnState& s = dnns_[d];
      if (s.arrived || s.dnn->arrival_time != now) continue;
      s.arrived = true;
      emit(EventKind::DnnArrival, now, std::nullopt, s.dnn->dnn_id);
      for (std::size_t i = 0; i < s.dnn->layers.size(); ++i) {
        if (s.pending_preds[i] == 0) make_ready(d, i, now);
      }
    }
  }

  void merge(Cycles now) {
    PartitionSet merged = merge_free(parts_, cfg_.cols);
    if (merged != parts_) {
      parts_ = std::move(merged);
      emit(EventKind::Merge, now, std::nullopt);
    }
  }

  bool array_idle() const {
    return std::none_of(parts_.begin(), parts_.end(),
                        [](const Partition& p) { return p.busy(); });
  }

  void assign(Cycles now) {
    if (ready_.empty()) return;
    std::vector<std::pair<LayerRef, Partition>> grants;

    if (mode_ == ScheduleMode::Baseline) {
      if (!array_idle()) return;
      // Next layer of the earliest unfinished DNN, in topological order.
      for (std::size_t d : fcfs_) {
        const DnnState& s = dnns_[d];
        if (!s.arrived || s.done == s.dnn->layers.size()) continue;
        const TaskQueueEntry* pick = nullptr;
        for (const auto& e : ready_) {
          if (e.layer.dnn_id == s.dnn->dnn_id &&
              (pick == nullptr || e.layer.layer_index < pick->layer.layer_index)) {
            pick = &e;
          }
        }
        if (pick != nullptr) grants.emplace_back(pick->layer, parts_.front());
        break;
      }
    } else if (array_idle()) {
      if (!first_layer_started_ || ready_.size() == 1) {
        auto top = task_assignment(ready_, {parts_.front()});
        grants = std::move(top);
      } else {
        const auto n = static_cast<std::int64_t>(
            std::min<std::size_t>(ready_.size(), static_cast<std::size_t>(cfg_.cols)));
        const auto widths = partition_calculation(n, cfg_.cols);
        PartitionSet split;
        std::int64_t cursor = 0;
        for (std::int64_t wdt : widths) {
          split.push_back(Partition{next_id_++, cursor, wdt, PartitionState::Free,
                                    std::nullopt});
          cursor += wdt;
        }
        PartitionSet regions = split;
        if (cursor < cfg_.cols) {
          split.push_back(Partition{next_id_++, cursor, cfg_.cols - cursor,
                                    PartitionState::Free, std::nullopt});
        }
        parts_ = std::move(split);
        emit(EventKind::Repartition, now, std::nullopt);
        grants = task_assignment(ready_, regions);
      }
    } else {
      std::vector<Partition> free_regions;
      for (const auto& p : parts_) {
        if (!p.busy()) free_regions.push_back(p);
      }
      grants = task_assignment(ready_, free_regions);
    }
    if (grants.empty()) return;

    for (const auto& [layer, region] : grants) {
      Partition& p = part(region.id);
      p.state = PartitionState::Busy;
      p.assignment = layer;
      std::erase_if(ready_, [&](const TaskQueueEntry& e) { return e.layer == layer; });
    }
    first_layer_started_ = true;
    const auto n_active = static_cast<std::int64_t>(std::count_if(
        parts_.begin(), parts_.end(), [](const Partition& p) { return p.busy(); }));

    for (const auto& [layer, region] : grants) {
      const Partition& p = part(region.id);
      const Placement where{cfg_.rows, p.col_width, cfg_.feed_model, n_active, p.col_start};
      const LayerShape& shape = w_.layer(layer);
      const LayerExecution exec =
          executor_ ? executor_(layer, shape, where) : analytical_execution(shape, where);
      if (exec.cycles < 1) {
        throw Error(ErrorKind::InvalidArgument, "layer executor returned no cycles");
      }
      running_.push_back(Running{layer, p.id, now + exec.cycles});
      trace_.layers.push_back(LayerRecord{layer, p.col_start, p.col_width, n_active, now,
                                          now + exec.cycles, exec.cycles, exec.activities});
      DnnRecord& rec = trace_.dnns[dnn_index(layer.dnn_id)];
      if (rec.first_start < 0) rec.first_start = now;
      emit(EventKind::LayerStart, now, layer);
    }
  }

  const Workload& w_;
  ArrayConfig cfg_;
  ScheduleMode mode_;
  const LayerExecutor& executor_;

  std::vector<DnnState> dnns_;
  std::vector<std::size_t> fcfs_;
  std::vector<TaskQueueEntry> ready_;
  std::vector<Running> running_;
  PartitionSet parts_;
  PartitionId next_id_ = 0;
  bool first_layer_started_ = false;
  Trace trace_;
};

}  // namespace

Trace run_schedule(const Workload& w, const ArrayConfig& cfg, ScheduleMode mode,
                   const LayerExecutor& executor) {
  const Workload checked = validated(w);
  if (cfg.rows < 1 || cfg.cols < 1) {
    throw Error(ErrorKind::InvalidArgument, "array dimensions must be >= 1");
  }
  return Scheduler(checked, cfg, mode, executor).run();
}

}  // namespace tenantsim
