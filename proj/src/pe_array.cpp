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

#include "tenantsim/pe_array.hpp"

#include <algorithm>
#include <ostream>
#include <string>

namespace tenantsim {

std::string_view to_string(FeedModel model) {
  return model == FeedModel::Independent ? "independent" : "interleaved";
}

FeedModel parse_feed_model(std::string_view text) {
  if (text == "independent") return FeedModel::Independent;
  if (text == "interleaved") return FeedModel::Interleaved;
  throw Error(ErrorKind::InvalidArgument,
              "unknown feed model '" + std::string(text) + "'");
}

std::string_view to_string(PeEvent e) {
  switch (e) {
    case PeEvent::Load: return "load";
    case PeEvent::Mac: return "mac";
    case PeEvent::Pass: return "pass";
    case PeEvent::Drain: return "drain";
  }
  return "?";
}

void write_trace_csv(std::ostream& out, std::span<const TraceEvent> events) {
  out << "cycle,pe_x,pe_y,event\n";
  for (const auto& e : events) {
    out << e.cycle << ',' << e.pe_x << ',' << e.pe_y << ',' << to_string(e.event)
        << '\n';
  }
}

void check_partitions(const PartitionSet& parts, std::int64_t cols) {
  for (const auto& p : parts) {
    if (p.col_width < 1 || p.col_start < 0 || p.col_end() > cols) {
      throw Error(ErrorKind::PartitionOutOfBounds,
                  "partition " + std::to_string(p.id) + " [" +
                      std::to_string(p.col_start) + ".." +
                      std::to_string(p.col_end()) + ") outside " +
                      std::to_string(cols) + " columns");
    }
  }
  for (std::size_t i = 0; i < parts.size(); ++i) {
    for (std::size_t j = i + 1; j < parts.size(); ++j) {
      const auto& a = parts[i];
      const auto& b = parts[j];
      if (a.id == b.id) {
        throw Error(ErrorKind::OverlappingPartitions,
                    "duplicate partition id " + std::to_string(a.id));
      }
      if (a.col_start < b.col_end() && b.col_start < a.col_end()) {
        throw Error(ErrorKind::OverlappingPartitions,
                    "partitions " + std::to_string(a.id) + " and " +
                        std::to_string(b.id) + " overlap");
      }
    }
  }
}

PeGrid::PeGrid(const ArrayConfig& cfg, const PartitionSet& parts)
    : cfg_(cfg), parts_(parts) {
  if (cfg.rows < 1 || cfg.cols < 1) {
    throw Error(ErrorKind::InvalidArgument, "array dimensions must be >= 1");
  }
  check_partitions(parts_, cfg.cols);
  std::sort(parts_.begin(), parts_.end(),
            [](const Partition& a, const Partition& b) { return a.col_start < b.col_start; });
  pes_.resize(static_cast<std::size_t>(cfg.rows * cfg.cols));
  column_tags_.assign(static_cast<std::size_t>(cfg.cols), kNoPartition);
  control_.resize(parts_.size());
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    const Partition& p = parts_[i];
    control_[i].rows_used = cfg.rows;
    control_[i].cols_used = p.col_width;
    for (std::int64_t y = p.col_start; y < p.col_end(); ++y) {
      column_tags_[static_cast<std::size_t>(y)] = p.id;
      for (std::int64_t x = 0; x < cfg.rows; ++x) pes_[index(x, y)].tag = p.id;
    }
  }
}

PeGrid configure(const ArrayConfig& cfg, const PartitionSet& parts) {
  return PeGrid(cfg, parts);
}

const PeState& PeGrid::at(std::int64_t x, std::int64_t y) const {
  if (x < 0 || x >= cfg_.rows || y < 0 || y >= cfg_.cols) {
    throw Error(ErrorKind::InvalidArgument, "PE index out of range");
  }
  return pes_[index(x, y)];
}

PartitionId PeGrid::column_tag(std::int64_t y) const {
  return column_tags_.at(static_cast<std::size_t>(y));
}

std::size_t PeGrid::slot(PartitionId id) const {
  for (std::size_t i = 0; i < parts_.size(); ++i) {
    if (parts_[i].id == id) return i;
  }
  throw Error(ErrorKind::InvalidArgument, "unknown partition " + std::to_string(id));
}

const Partition& PeGrid::partition(PartitionId id) const { return parts_[slot(id)]; }

PartitionMode PeGrid::mode(PartitionId id) const { return control_[slot(id)].mode; }

void PeGrid::set_mode(PartitionId id, PartitionMode mode) {
  const std::size_t s = slot(id);
  const Partition& p = parts_[s];
  if (mode == PartitionMode::Load) {
    for (std::int64_t y = p.col_start; y < p.col_end(); ++y) {
      for (std::int64_t x = 0; x < cfg_.rows; ++x) {
        if (std::holds_alternative<PartialSum>(pes_[index(x, y)].down_reg)) {
          throw Error(ErrorKind::LoadDuringCompute,
                      "partition " + std::to_string(id) +
                          " still carries partial sums");
        }
      }
    }
    control_[s].loads_issued = 0;
  }
  control_[s].mode = mode;
}

void PeGrid::set_fold_extent(PartitionId id, std::int64_t rows_used,
                             std::int64_t cols_used) {
  const std::size_t s = slot(id);
  if (rows_used < 1 || cols_used < 1 || rows_used > cfg_.rows ||
      cols_used > parts_[s].col_width) {
    throw Error(ErrorKind::TileTooLarge,
                "tile " + std::to_string(rows_used) + "x" +
                    std::to_string(cols_used) + " does not fit partition " +
                    std::to_string(id));
  }
  control_[s].rows_used = rows_used;
  control_[s].cols_used = cols_used;
}

std::int64_t PeGrid::exit_row(std::int64_t y) const {
  const PartitionId tag = column_tags_[static_cast<std::size_t>(y)];
  if (tag == kNoPartition) return cfg_.rows - 1;
  return control_[slot(tag)].rows_used - 1;
}

ActivityCounts& PeGrid::tally(PartitionId owner) {
  for (auto& [id, counts] : tallies_) {
    if (id == owner) return counts;
  }
  tallies_.emplace_back(owner, ActivityCounts{});
  return tallies_.back().second;
}

ActivityCounts PeGrid::take_tally(PartitionId owner) {
  ActivityCounts out = tally(owner);
  tally(owner) = ActivityCounts{};
  return out;
}

void PeGrid::record(std::int64_t x, std::int64_t y, PeEvent e, PartitionId owner) {
  ActivityCounts& t = tally(owner);
  switch (e) {
    case PeEvent::Load: ++t.lr_writes; break;
    case PeEvent::Mac: ++t.mac_ops; break;
    case PeEvent::Pass: ++t.pass_hops; break;
    case PeEvent::Drain: ++t.drain_writes; break;
  }
  if (tracing_) trace_.push_back(TraceEvent{cycle_, x, y, e, owner});
}

void PeGrid::record_drain(std::int64_t col, PartitionId owner) {
  record(exit_row(col), col, PeEvent::Drain, owner);
}

std::vector<DrainOutput> PeGrid::step(
    std::span<const std::optional<Word>> column_loads,
    std::span<const Injection> injections) {
  const std::int64_t rows = cfg_.rows;
  const std::int64_t cols = cfg_.cols;
  if (!column_loads.empty() && static_cast<std::int64_t>(column_loads.size()) != cols) {
    throw Error(ErrorKind::InvalidArgument, "column_loads must have one entry per column");
  }

  std::vector<std::optional<TaggedValue>> fed(pes_.size());
  for (const auto& inj : injections) {
    if (inj.row < 0 || inj.row >= rows || inj.col < 0 || inj.col >= cols) {
      throw Error(ErrorKind::InvalidArgument, "injection outside the array");
    }
    auto& slot_ref = fed[index(inj.row, inj.col)];
    if (slot_ref) {
      throw Error(ErrorKind::FeedContention,
                  "two values fed into row " + std::to_string(inj.row) +
                      " in one cycle");
    }
    slot_ref = inj.value;
    ++tally(inj.value.tag).feed_reads;
  }

  // Top-of-column weight injections become load packets.
  std::vector<std::optional<LoadPacket>> top_packets(static_cast<std::size_t>(cols));
  for (std::int64_t y = 0; y < static_cast<std::int64_t>(column_loads.size()); ++y) {
    const auto& w = column_loads[static_cast<std::size_t>(y)];
    if (!w) continue;
    const PartitionId tag = column_tags_[static_cast<std::size_t>(y)];
    if (tag == kNoPartition) {
      throw Error(ErrorKind::InvalidArgument, "weight load into an unowned column");
    }
    Control& ctl = control_[slot(tag)];
    const Partition& part = parts_[slot(tag)];
    if (ctl.mode != PartitionMode::Load) {
      throw Error(ErrorKind::InvalidArgument,
                  "weight load into partition " + std::to_string(tag) +
                      " which is not in load mode");
    }
    if (y >= part.col_start + ctl.cols_used) {
      throw Error(ErrorKind::TileTooLarge, "weight load outside the tile columns");
    }
    // Every column of a tile is loaded in lockstep; the sequence number is
    // shared by the partition and advances once per cycle below.
    const std::int64_t dest = ctl.rows_used - 1 - ctl.loads_issued;
    if (dest < 0) {
      throw Error(ErrorKind::TileTooLarge, "more weights than tile rows");
    }
    top_packets[static_cast<std::size_t>(y)] = LoadPacket{*w, dest};
    ++tally(tag).load_reads;
  }
  for (std::size_t s = 0; s < parts_.size(); ++s) {
    const Partition& p = parts_[s];
    for (std::int64_t y = p.col_start; y < p.col_end(); ++y) {
      if (top_packets[static_cast<std::size_t>(y)]) {
        ++control_[s].loads_issued;
        break;
      }
    }
  }

  std::vector<PeState> next = pes_;
  std::vector<DrainOutput> outputs;

  for (std::int64_t x = 0; x < rows; ++x) {
    for (std::int64_t y = 0; y < cols; ++y) {
      const std::size_t i = index(x, y);
      const PeState& cur = pes_[i];
      PeState& nx = next[i];
      const PartitionId tag = cur.tag;

      std::optional<TaggedValue> in_left = fed[i];
      if (y > 0) {
        const auto& from_left = pes_[index(x, y - 1)].right_reg;
        if (from_left) {
          if (in_left) {
            throw Error(ErrorKind::FeedContention,
                        "feed port collides with a value in flight at row " +
                            std::to_string(x));
          }
          in_left = from_left;
        }
      }

      const Control* ctl = tag == kNoPartition ? nullptr : &control_[slot(tag)];
      const Partition* part = tag == kNoPartition ? nullptr : &parts_[slot(tag)];
      const bool matches = in_left && ctl != nullptr && in_left->tag == tag;
      const bool in_tile_col = ctl != nullptr && y < part->col_start + ctl->cols_used;

      // Horizontal link: forward unchanged unless this is the last tile
      // column of the stream's own partition.
      nx.right_reg.reset();
      if (in_left) {
        const bool terminate =
            matches && (!in_tile_col || y == part->col_start + ctl->cols_used - 1);
        if (!terminate && y + 1 < cols) nx.right_reg = in_left;
      }

      if (ctl != nullptr && ctl->mode == PartitionMode::Load) {
        if (matches) {
          throw Error(ErrorKind::LoadDuringCompute,
                      "feed data reached partition " + std::to_string(tag) +
                          " while it is loading");
        }
        std::optional<LoadPacket> packet;
        if (x == 0) {
          packet = top_packets[static_cast<std::size_t>(y)];
        } else if (const auto* p = std::get_if<LoadPacket>(&pes_[index(x - 1, y)].down_reg)) {
          packet = *p;
        }
        nx.down_reg = std::monostate{};
        if (packet) {
          if (packet->dest_row == x) {
            nx.load_register = packet->value;
            record(x, y, PeEvent::Load, tag);
          } else {
            nx.down_reg = *packet;
          }
        }
        if (in_left) record(x, y, PeEvent::Pass, in_left->tag);
        continue;
      }

      const std::int64_t exit = ctl != nullptr ? ctl->rows_used - 1 : rows - 1;
      const bool mul_en = matches && in_tile_col && x <= exit;
      if (x > exit) {
        nx.down_reg = std::monostate{};
      } else {
        std::optional<PartialSum> up;
        if (x > 0) {
          if (const auto* ps = std::get_if<PartialSum>(&pes_[index(x - 1, y)].down_reg)) {
            up = *ps;
          }
        }
        if (mul_en) {
          if (up && up->pixel != in_left->pixel) {
            throw Error(ErrorKind::FunctionalMismatch,
                        "partial sum misaligned at PE[" + std::to_string(x) + "," +
                            std::to_string(y) + "]");
          }
          const Word base = up ? up->value : 0;
          nx.down_reg = PartialSum{base + in_left->value * cur.load_register,
                                   in_left->pixel, tag};
          record(x, y, PeEvent::Mac, tag);
        } else if (up) {
          nx.down_reg = *up;
        } else {
          nx.down_reg = std::monostate{};
        }
        if (x == exit) {
          if (const auto* ps = std::get_if<PartialSum>(&nx.down_reg)) {
            outputs.push_back(DrainOutput{y, *ps});
          }
        }
      }
      if (in_left && !mul_en) record(x, y, PeEvent::Pass, in_left->tag);
    }
  }

  pes_ = std::move(next);
  ++cycle_;
  return outputs;
}

void PeGrid::step_load(std::span<const std::optional<Word>> column_loads) {
  (void)step(column_loads, {});
}

std::vector<DrainOutput> PeGrid::step_compute(
    std::span<const std::optional<TaggedValue>> row_inputs) {
  std::vector<Injection> injections;
  for (std::size_t x = 0; x < row_inputs.size(); ++x) {
    if (row_inputs[x]) {
      injections.push_back(Injection{static_cast<std::int64_t>(x), 0, *row_inputs[x]});
    }
  }
  return step({}, injections);
}

namespace {

struct ScheduledJob {
  const FoldJob* job = nullptr;
  std::int64_t n_active = 1;
  std::int64_t start = 0;      // global offset of the load phase
  std::int64_t entry_col = 0;  // where the stream enters
  std::int64_t col_start = 0;

  std::vector<Word> outputs;
  std::vector<bool> written;
  std::int64_t collected = 0;
  std::int64_t cycles = -1;
  std::vector<DrainOutput> pending;
};

void check_job(const PeGrid& grid, const FoldJob& job) {
  const Partition& part = grid.partition(job.partition);
  if (job.rows < 1 || job.cols < 1 || job.t < 1) {
    throw Error(ErrorKind::InvalidArgument, "tile dimensions must be >= 1");
  }
  if (job.rows > grid.rows() || job.cols > part.col_width) {
    throw Error(ErrorKind::TileTooLarge,
                "tile " + std::to_string(job.rows) + "x" + std::to_string(job.cols) +
                    " exceeds partition " + std::to_string(part.id) + " (" +
                    std::to_string(grid.rows()) + "x" +
                    std::to_string(part.col_width) + ")");
  }
  if (static_cast<std::int64_t>(job.weights.size()) != job.rows * job.cols ||
      static_cast<std::int64_t>(job.inputs.size()) != job.t * job.rows) {
    throw Error(ErrorKind::InvalidArgument, "tile data does not match its dimensions");
  }
}

std::vector<FoldResult> run_jobs(PeGrid& grid, std::vector<ScheduledJob>& jobs) {
  for (auto& sj : jobs) {
    grid.set_fold_extent(sj.job->partition, sj.job->rows, sj.job->cols);
    sj.outputs.assign(static_cast<std::size_t>(sj.job->t * sj.job->cols), 0);
    sj.written.assign(sj.outputs.size(), false);
    (void)grid.take_tally(sj.job->partition);
  }

  const std::int64_t cols = grid.cols();
  std::vector<std::optional<Word>> loads(static_cast<std::size_t>(cols));
  std::vector<Injection> injections;

  for (std::int64_t g = 0;; ++g) {
    if (std::all_of(jobs.begin(), jobs.end(),
                    [](const ScheduledJob& sj) { return sj.cycles >= 0; })) {
      break;
    }
    std::fill(loads.begin(), loads.end(), std::nullopt);
    injections.clear();

    for (auto& sj : jobs) {
      const FoldJob& job = *sj.job;
      const std::int64_t local = g - sj.start;
      if (local < 0 || sj.cycles >= 0) continue;
      if (local == 0) grid.set_mode(job.partition, PartitionMode::Load);
      if (local < job.rows) {
        // Bottom row first: cycle `local` carries row rows-1-local.
        const std::int64_t row = job.rows - 1 - local;
        for (std::int64_t c = 0; c < job.cols; ++c) {
          loads[static_cast<std::size_t>(sj.col_start + c)] =
              job.weights[static_cast<std::size_t>(row * job.cols + c)];
        }
        continue;
      }
      if (local == job.rows) grid.set_mode(job.partition, PartitionMode::Calculate);

      for (const auto& out : sj.pending) {
        const std::int64_t c = out.col - sj.col_start;
        const auto at = static_cast<std::size_t>(out.sum.pixel * job.cols + c);
        if (sj.written[at]) {
          throw Error(ErrorKind::FunctionalMismatch, "output drained twice");
        }
        sj.outputs[at] = out.sum.value;
        sj.written[at] = true;
        ++sj.collected;
        grid.record_drain(out.col, job.partition);
      }
      sj.pending.clear();
      if (sj.collected == job.t * job.cols) {
        sj.cycles = local + 1;
        continue;
      }

      const std::int64_t tau = local - job.rows;
      for (std::int64_t x = 0; x < job.rows; ++x) {
        const std::int64_t rel = tau - x;
        if (rel < 0 || rel % sj.n_active != 0) continue;
        const std::int64_t p = rel / sj.n_active;
        if (p >= job.t) continue;
        injections.push_back(Injection{
            x, sj.entry_col,
            TaggedValue{job.inputs[static_cast<std::size_t>(p * job.rows + x)],
                        job.partition, p}});
      }
    }

    const auto drained = grid.step(loads, injections);
    for (const auto& out : drained) {
      for (auto& sj : jobs) {
        if (sj.job->partition == out.sum.tag) sj.pending.push_back(out);
      }
    }
  }

  std::vector<FoldResult> results;
  results.reserve(jobs.size());
  for (auto& sj : jobs) {
    const FoldJob& job = *sj.job;
    FoldResult r;
    r.outputs = std::move(sj.outputs);
    r.cycles = sj.cycles;
    r.activities = grid.take_tally(job.partition);
    // First-touch off-chip traffic for the tile.
    r.activities.dram_reads += job.rows * job.cols + job.rows * job.t;
    r.activities.dram_writes += job.cols * job.t;
    results.push_back(std::move(r));
  }
  return results;
}

}  // namespace

FoldResult run_fold(PeGrid& grid, const FoldJob& job, std::int64_t n_active) {
  check_job(grid, job);
  if (n_active < 1) throw Error(ErrorKind::InvalidArgument, "n_active must be >= 1");
  const Partition& part = grid.partition(job.partition);
  const bool interleaved = grid.config().feed_model == FeedModel::Interleaved;
  std::vector<ScheduledJob> jobs(1);
  jobs[0].job = &job;
  jobs[0].n_active = interleaved ? n_active : 1;
  jobs[0].entry_col = interleaved ? 0 : part.col_start;
  jobs[0].col_start = part.col_start;
  return std::move(run_jobs(grid, jobs).front());
}

std::vector<FoldResult> run_concurrent(PeGrid& grid, std::span<const FoldJob> jobs) {
  std::vector<std::size_t> order(jobs.size());
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    check_job(grid, jobs[i]);
    order[i] = i;
    for (std::size_t j = 0; j < i; ++j) {
      if (jobs[j].partition == jobs[i].partition) {
        throw Error(ErrorKind::InvalidArgument, "two tiles for one partition");
      }
    }
  }
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return grid.partition(jobs[a].partition).col_start <
           grid.partition(jobs[b].partition).col_start;
  });

  const bool interleaved = grid.config().feed_model == FeedModel::Interleaved;
  const auto n = static_cast<std::int64_t>(jobs.size());
  std::vector<ScheduledJob> scheduled(jobs.size());
  for (std::size_t slot_index = 0; slot_index < order.size(); ++slot_index) {
    const FoldJob& job = jobs[order[slot_index]];
    ScheduledJob& sj = scheduled[order[slot_index]];
    const Partition& part = grid.partition(job.partition);
    sj.job = &job;
    sj.col_start = part.col_start;
    if (interleaved) {
      const auto j = static_cast<std::int64_t>(slot_index);
      sj.n_active = n;
      sj.entry_col = 0;
      sj.start = ((j - job.rows) % n + n) % n;
    } else {
      sj.entry_col = part.col_start;
    }
  }
  return run_jobs(grid, scheduled);
}

std::vector<Word> reference_matmul(const FoldJob& job) {
  std::vector<Word> out(static_cast<std::size_t>(job.t * job.cols), 0);
  for (std::int64_t p = 0; p < job.t; ++p) {
    for (std::int64_t c = 0; c < job.cols; ++c) {
      Word acc = 0;
      for (std::int64_t r = 0; r < job.rows; ++r) {
        acc += job.inputs[static_cast<std::size_t>(p * job.rows + r)] *
               job.weights[static_cast<std::size_t>(r * job.cols + c)];
      }
      out[static_cast<std::size_t>(p * job.cols + c)] = acc;
    }
  }
  return out;
}

}  // namespace tenantsim
