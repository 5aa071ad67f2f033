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
#include <optional>
#include <string>
#include <vector>

#include "tenantsim/activity.hpp"
#include "tenantsim/pe_array.hpp"
#include "tenantsim/workload.hpp"

namespace tenantsim {

enum class ScheduleMode { Partitioned, Baseline };
std::string_view to_string(ScheduleMode mode);
ScheduleMode parse_schedule_mode(std::string_view text);

enum class EventKind { LayerStart, LayerEnd, Repartition, Merge, DnnArrival, DnnDone };
std::string_view to_string(EventKind kind);
EventKind parse_event_kind(std::string_view text);

struct ScheduleEvent {
  EventKind kind = EventKind::LayerStart;
  Cycles time = 0;
  std::optional<LayerRef> layer;
  std::string dnn_id;  // set for dnn_arrival / dnn_done
  PartitionSet partitions;  // state after the event

  bool operator==(const ScheduleEvent&) const = default;
};

struct LayerRecord {
  LayerRef layer;
  std::int64_t col_start = 0;
  std::int64_t col_width = 0;
  std::int64_t n_active = 1;
  Cycles start = 0;
  Cycles end = 0;
  Cycles cycles = 0;
  ActivityCounts activities;

  bool operator==(const LayerRecord&) const = default;
};

struct DnnRecord {
  std::string dnn_id;
  Cycles arrival = 0;
  Cycles first_start = 0;
  Cycles completion = 0;

  bool operator==(const DnnRecord&) const = default;
};

struct Trace {
  ScheduleMode mode = ScheduleMode::Partitioned;
  ArrayConfig array;
  std::string workload_signature;
  Cycles makespan = 0;
  std::vector<ScheduleEvent> events;
  std::vector<LayerRecord> layers;  // in start order
  std::vector<DnnRecord> dnns;      // in workload order
  ActivityCounts totals;

  const LayerRecord* find(const LayerRef& ref) const;
  bool operator==(const Trace&) const = default;
};

/// Stable fingerprint of a workload (FNV-1a over its canonical document).
std::string workload_signature(const Workload& w);

std::string trace_to_json(const Trace& trace);
Trace trace_from_json(const std::string& text);

/// One row per layer record.
std::string trace_to_csv(const Trace& trace);

}  // namespace tenantsim
