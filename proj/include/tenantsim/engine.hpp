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
#include <string>
#include <vector>

#include "tenantsim/energy.hpp"
#include "tenantsim/scheduler.hpp"
#include "tenantsim/trace.hpp"

namespace tenantsim {

enum class Fidelity { Analytical, Functional };
std::string_view to_string(Fidelity f);
Fidelity parse_fidelity(std::string_view text);

struct RunConfig {
  ArrayConfig array;
  ScheduleMode mode = ScheduleMode::Partitioned;
  Fidelity fidelity = Fidelity::Analytical;
  EnergyTable energy_table = EnergyTable::illustrative();
  std::uint64_t seed = 1;
  /// Largest rows*cols the functional simulator accepts.
  std::int64_t functional_cap = 64 * 64;
};

struct RunResult {
  Trace trace;
  Energy total_energy;
  std::vector<Energy> layer_energy;  // parallel to trace.layers
  std::vector<Energy> dnn_energy;    // parallel to trace.dnns
};

/// Runs every fold of one scheduled layer through the PE array with
/// seeded synthetic tensors, checks the result against a direct matrix
/// product and returns the measured cycles and activities.
/// When `pe_events` is set, every PE-level event is appended to it with
/// cycles offset by `cycle_offset`.
LayerExecution functional_execution(const LayerRef& ref, const LayerShape& layer,
                                    const Placement& where, std::uint64_t seed,
                                    std::vector<TraceEvent>* pe_events = nullptr,
                                    Cycles cycle_offset = 0);

/// Replays every layer of a trace on the PE array and returns the
/// per-cycle PE events on the trace's time axis.
std::vector<TraceEvent> replay_pe_events(const Trace& trace, const Workload& w,
                                         std::uint64_t seed);

/// Schedules `w` and prices the trace. Functional fidelity throws
/// FunctionalCapExceeded for arrays above the cap and FunctionalMismatch
/// if any output differs from the reference product.
RunResult execute(const RunConfig& run, const Workload& w);

/// Prices an existing trace.
RunResult price(Trace trace, const EnergyTable& table);

struct ModeSummary {
  ScheduleMode mode = ScheduleMode::Baseline;
  Cycles makespan = 0;
  Energy energy;
  std::int64_t busy_pe_cycles = 0;
  double utilization = 0.0;  // busy PE-cycles / (rows*cols*makespan)
  std::vector<DnnRecord> dnns;
};

struct DnnDelta {
  std::string dnn_id;
  Cycles baseline_completion = 0;
  Cycles partitioned_completion = 0;
  Cycles delta = 0;  // baseline - partitioned
};

struct ComparisonReport {
  ModeSummary baseline;
  ModeSummary partitioned;
  double time_improvement = 0.0;    // (baseline - partitioned) / baseline
  double energy_improvement = 0.0;  // same, on total energy
  std::vector<DnnDelta> per_dnn;
};

ModeSummary summarize(const RunResult& r);

/// Throws WorkloadMismatch unless both results come from the same workload
/// and array.
ComparisonReport compare(const RunResult& baseline, const RunResult& partitioned);

std::string report_to_json(const RunResult& r);
std::string report_to_csv(const RunResult& r);
std::string comparison_to_json(const ComparisonReport& c);
std::string comparison_to_csv(const ComparisonReport& c);

}  // namespace tenantsim
