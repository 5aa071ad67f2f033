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

#include "tenantsim/engine.hpp"

#include <algorithm>
#include <random>
#include <sstream>

#include "json.hpp"
#include "tenantsim/lowering.hpp"

namespace tenantsim {

using nlohmann::json;

std::string_view to_string(Fidelity f) {
  return f == Fidelity::Analytical ? "analytical" : "functional";
}

Fidelity parse_fidelity(std::string_view text) {
  if (text == "analytical") return Fidelity::Analytical;
  if (text == "functional") return Fidelity::Functional;
  throw Error(ErrorKind::InvalidArgument, "unknown fidelity '" + std::string(text) + "'");
}

namespace {

std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Small signed integers, |v| <= 7.
std::vector<Word> synthetic_tensor(std::mt19937_64& rng, std::int64_t size) {
  std::vector<Word> out(static_cast<std::size_t>(size));
  for (auto& v : out) v = static_cast<Word>(rng() % 15) - 7;
  return out;
}

}  // namespace

LayerExecution functional_execution(const LayerRef& ref, const LayerShape& layer,
                                    const Placement& where, std::uint64_t seed,
                                    std::vector<TraceEvent>* pe_events,
                                    Cycles cycle_offset) {
  const GemmDims g = lower(layer);
  const std::uint64_t name_hash = fnv1a(ref.dnn_id);
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(name_hash),
                    static_cast<std::uint32_t>(name_hash >> 32),
                    static_cast<std::uint32_t>(ref.layer_index)};
  std::mt19937_64 rng(seq);
  const auto fw = synthetic_tensor(rng, layer.M * layer.C * layer.R * layer.S);
  const auto ifmap = synthetic_tensor(rng, layer.N * layer.C * layer.H * layer.W);
  const auto weights = im2col_weights(layer, fw);  // k x m
  const auto inputs = im2col_inputs(layer, ifmap);  // t x k

  const bool interleaved = where.feed_model == FeedModel::Interleaved;
  const std::int64_t col_start = interleaved ? where.col_start : 0;
  ArrayConfig grid_cfg{where.rows, col_start + where.cols, where.feed_model};
  const PartitionId pid = 0;
  PeGrid grid(grid_cfg, {Partition{pid, col_start, where.cols, PartitionState::Busy, ref}});
  grid.enable_trace(pe_events != nullptr);

  std::vector<Word> drain(static_cast<std::size_t>(g.t * g.m), 0);
  LayerExecution exec;
  for (const Fold& f : plan_folds(g, where.rows, where.cols).folds) {
    FoldJob job;
    job.partition = pid;
    job.rows = f.rows;
    job.cols = f.cols;
    job.t = f.t;
    job.weights.resize(static_cast<std::size_t>(f.rows * f.cols));
    for (std::int64_t r = 0; r < f.rows; ++r) {
      for (std::int64_t c = 0; c < f.cols; ++c) {
        job.weights[static_cast<std::size_t>(r * f.cols + c)] =
            weights[static_cast<std::size_t>((f.row_offset + r) * g.m + f.col_offset + c)];
      }
    }
    job.inputs.resize(static_cast<std::size_t>(f.t * f.rows));
    for (std::int64_t p = 0; p < f.t; ++p) {
      for (std::int64_t r = 0; r < f.rows; ++r) {
        job.inputs[static_cast<std::size_t>(p * f.rows + r)] =
            inputs[static_cast<std::size_t>(p * g.k + f.row_offset + r)];
      }
    }
    FoldResult res = run_fold(grid, job, interleaved ? where.n_active : 1);
    exec.cycles += res.cycles;
    exec.activities += res.activities;
    for (std::int64_t p = 0; p < f.t; ++p) {
      for (std::int64_t c = 0; c < f.cols; ++c) {
        const auto at = static_cast<std::size_t>(p * g.m + f.col_offset + c);
        const Word v = res.outputs[static_cast<std::size_t>(p * f.cols + c)];
        // Later k-folds accumulate into the drain buffer.
        drain[at] = f.k_index == 0 ? v : drain[at] + v;
      }
    }
    if (f.k_index > 0) exec.activities.drain_rmw += f.cols * f.t;
  }

  if (pe_events != nullptr) {
    for (TraceEvent e : grid.trace()) {
      e.cycle += cycle_offset;
      pe_events->push_back(e);
    }
  }

  for (std::int64_t p = 0; p < g.t; ++p) {
    for (std::int64_t c = 0; c < g.m; ++c) {
      Word expect = 0;
      for (std::int64_t r = 0; r < g.k; ++r) {
        expect += inputs[static_cast<std::size_t>(p * g.k + r)] *
                  weights[static_cast<std::size_t>(r * g.m + c)];
      }
      if (drain[static_cast<std::size_t>(p * g.m + c)] != expect) {
        throw Error(ErrorKind::FunctionalMismatch,
                    ref.dnn_id + "/" + std::to_string(ref.layer_index) +
                        ": PE array output differs from reference at pixel " +
                        std::to_string(p) + " channel " + std::to_string(c));
      }
    }
  }
  return exec;
}

std::vector<TraceEvent> replay_pe_events(const Trace& trace, const Workload& w,
                                         std::uint64_t seed) {
  std::vector<TraceEvent> events;
  for (const auto& rec : trace.layers) {
    const Placement where{trace.array.rows, rec.col_width, trace.array.feed_model,
                          rec.n_active, rec.col_start};
    (void)functional_execution(rec.layer, w.layer(rec.layer), where, seed, &events,
                               rec.start);
  }
  std::stable_sort(events.begin(), events.end(),
                   [](const TraceEvent& a, const TraceEvent& b) { return a.cycle < b.cycle; });
  return events;
}

RunResult price(Trace trace, const EnergyTable& table) {
  RunResult out;
  out.dnn_energy.assign(trace.dnns.size(), Energy{});
  for (const auto& rec : trace.layers) {
    const Energy e = energy_of(rec.activities, table);
    out.layer_energy.push_back(e);
    out.total_energy += e;
    for (std::size_t d = 0; d < trace.dnns.size(); ++d) {
      if (trace.dnns[d].dnn_id == rec.layer.dnn_id) out.dnn_energy[d] += e;
    }
  }
  out.trace = std::move(trace);
  return out;
}

RunResult execute(const RunConfig& run, const Workload& w) {
  run.energy_table.require_complete();
  LayerExecutor executor;
  if (run.fidelity == Fidelity::Functional) {
    if (run.array.rows * run.array.cols > run.functional_cap) {
      throw Error(ErrorKind::FunctionalCapExceeded,
                  "functional fidelity is limited to " + std::to_string(run.functional_cap) +
                      " PEs; array has " + std::to_string(run.array.rows * run.array.cols));
    }
    const std::uint64_t seed = run.seed;
    executor = [seed](const LayerRef& ref, const LayerShape& layer, const Placement& where) {
      return functional_execution(ref, layer, where, seed);
    };
  }
  return price(run_schedule(w, run.array, run.mode, executor), run.energy_table);
}

ModeSummary summarize(const RunResult& r) {
  ModeSummary s;
  s.mode = r.trace.mode;
  s.makespan = r.trace.makespan;
  s.energy = r.total_energy;
  for (const auto& rec : r.trace.layers) {
    s.busy_pe_cycles += r.trace.array.rows * rec.col_width * rec.cycles;
  }
  const std::int64_t capacity = r.trace.array.rows * r.trace.array.cols * r.trace.makespan;
  s.utilization = capacity > 0 ? static_cast<double>(s.busy_pe_cycles) / capacity : 0.0;
  s.dnns = r.trace.dnns;
  return s;
}

namespace {

double improvement(double baseline, double partitioned) {
  return baseline > 0 ? (baseline - partitioned) / baseline : 0.0;
}

}  // namespace

ComparisonReport compare(const RunResult& baseline, const RunResult& partitioned) {
  const Trace& b = baseline.trace;
  const Trace& p = partitioned.trace;
  if (b.workload_signature != p.workload_signature || b.array.rows != p.array.rows ||
      b.array.cols != p.array.cols || b.dnns.size() != p.dnns.size()) {
    throw Error(ErrorKind::WorkloadMismatch,
                "traces come from different workloads or arrays");
  }
  ComparisonReport c;
  c.baseline = summarize(baseline);
  c.partitioned = summarize(partitioned);
  c.time_improvement = improvement(static_cast<double>(b.makespan),
                                   static_cast<double>(p.makespan));
  c.energy_improvement = improvement(static_cast<double>(baseline.total_energy.milli_pj),
                                     static_cast<double>(partitioned.total_energy.milli_pj));
  for (std::size_t d = 0; d < b.dnns.size(); ++d) {
    if (b.dnns[d].dnn_id != p.dnns[d].dnn_id) {
      throw Error(ErrorKind::WorkloadMismatch, "DNN lists differ");
    }
    c.per_dnn.push_back(DnnDelta{b.dnns[d].dnn_id, b.dnns[d].completion,
                                 p.dnns[d].completion,
                                 b.dnns[d].completion - p.dnns[d].completion});
  }
  return c;
}

namespace {

json energy_json(Energy e) { return {{"milli_pj", e.milli_pj}, {"pj", e.to_string()}}; }

json summary_json(const ModeSummary& s) {
  json dnns = json::array();
  for (const auto& d : s.dnns) {
    dnns.push_back({{"dnn_id", d.dnn_id}, {"arrival", d.arrival}, {"completion", d.completion}});
  }
  return {{"mode", to_string(s.mode)},
          {"makespan", s.makespan},
          {"energy", energy_json(s.energy)},
          {"busy_pe_cycles", s.busy_pe_cycles},
          {"utilization", s.utilization},
          {"dnns", dnns}};
}

std::string fixed(double v, int digits) {
  std::ostringstream out;
  out.setf(std::ios::fixed);
  out.precision(digits);
  out << v;
  return out.str();
}

}  // namespace

std::string report_to_json(const RunResult& r) {
  json layers = json::array();
  for (std::size_t i = 0; i < r.trace.layers.size(); ++i) {
    const auto& rec = r.trace.layers[i];
    layers.push_back({{"dnn_id", rec.layer.dnn_id},
                      {"layer_index", rec.layer.layer_index},
                      {"start", rec.start},
                      {"end", rec.end},
                      {"col_start", rec.col_start},
                      {"col_width", rec.col_width},
                      {"energy", energy_json(r.layer_energy[i])}});
  }
  json dnns = json::array();
  for (std::size_t d = 0; d < r.trace.dnns.size(); ++d) {
    dnns.push_back({{"dnn_id", r.trace.dnns[d].dnn_id},
                    {"completion", r.trace.dnns[d].completion},
                    {"energy", energy_json(r.dnn_energy[d])}});
  }
  const ModeSummary s = summarize(r);
  json doc = {{"mode", to_string(r.trace.mode)},
              {"makespan", r.trace.makespan},
              {"utilization", s.utilization},
              {"total_energy", energy_json(r.total_energy)},
              {"dnns", dnns},
              {"layers", layers}};
  return doc.dump(2) + "\n";
}

std::string report_to_csv(const RunResult& r) {
  std::ostringstream out;
  out << "scope,dnn_id,layer_index,start,end,col_start,col_width,energy_pj\n";
  for (std::size_t i = 0; i < r.trace.layers.size(); ++i) {
    const auto& rec = r.trace.layers[i];
    out << "layer," << rec.layer.dnn_id << ',' << rec.layer.layer_index << ','
        << rec.start << ',' << rec.end << ',' << rec.col_start << ',' << rec.col_width
        << ',' << r.layer_energy[i].to_string() << '\n';
  }
  for (std::size_t d = 0; d < r.trace.dnns.size(); ++d) {
    const auto& rec = r.trace.dnns[d];
    out << "dnn," << rec.dnn_id << ",," << rec.first_start << ',' << rec.completion
        << ",,," << r.dnn_energy[d].to_string() << '\n';
  }
  out << "total,,,0," << r.trace.makespan << ",0," << r.trace.array.cols << ','
      << r.total_energy.to_string() << '\n';
  return out.str();
}

std::string comparison_to_json(const ComparisonReport& c) {
  json per_dnn = json::array();
  for (const auto& d : c.per_dnn) {
    per_dnn.push_back({{"dnn_id", d.dnn_id},
                       {"baseline_completion", d.baseline_completion},
                       {"partitioned_completion", d.partitioned_completion},
                       {"delta", d.delta}});
  }
  json doc = {{"baseline", summary_json(c.baseline)},
              {"partitioned", summary_json(c.partitioned)},
              {"time_improvement", c.time_improvement},
              {"energy_improvement", c.energy_improvement},
              {"per_dnn", per_dnn}};
  return doc.dump(2) + "\n";
}

std::string comparison_to_csv(const ComparisonReport& c) {
  std::ostringstream out;
  out << "mode,makespan,energy_pj,busy_pe_cycles,utilization\n";
  for (const ModeSummary* s : {&c.baseline, &c.partitioned}) {
    out << to_string(s->mode) << ',' << s->makespan << ',' << s->energy.to_string() << ','
        << s->busy_pe_cycles << ',' << fixed(s->utilization, 6) << '\n';
  }
  out << "improvement," << fixed(c.time_improvement, 6) << ','
      << fixed(c.energy_improvement, 6) << ",,\n";
  return out.str();
}

}  // namespace tenantsim
