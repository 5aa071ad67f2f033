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

// Cycle-stepped functional model of a vertically partitioned
// weight-stationary systolic array.
//
// Inputs flow left to right along PE rows, partial sums flow top to bottom
// along PE columns. Every PE carries the static tag of the partition that
// owns its column; a horizontal value only multiplies into a PE whose tag
// matches the value's tag (Mul_En = 1), otherwise the PE forwards it
// untouched (Mul_En = 0). Weights are loaded over the same vertical links
// that carry partial sums, so a partition is either loading or computing.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <variant>
#include <vector>

#include "tenantsim/activity.hpp"
#include "tenantsim/error.hpp"
#include "tenantsim/workload.hpp"

namespace tenantsim {

using Word = std::int64_t;
using PartitionId = std::int32_t;
inline constexpr PartitionId kNoPartition = -1;

enum class FeedModel { Independent, Interleaved };

std::string_view to_string(FeedModel model);
FeedModel parse_feed_model(std::string_view text);

struct ArrayConfig {
  std::int64_t rows = 8;
  std::int64_t cols = 8;
  FeedModel feed_model = FeedModel::Independent;
  bool operator==(const ArrayConfig&) const = default;
};

enum class PartitionState { Free, Busy };

/// A contiguous, full-height range of PE columns.
struct Partition {
  PartitionId id = 0;
  std::int64_t col_start = 0;
  std::int64_t col_width = 1;
  PartitionState state = PartitionState::Free;
  std::optional<LayerRef> assignment;

  std::int64_t col_end() const { return col_start + col_width; }
  bool busy() const { return state == PartitionState::Busy; }

  bool operator==(const Partition&) const = default;
};

/// Partitions ordered by col_start.
using PartitionSet = std::vector<Partition>;

/// Throws OverlappingPartitions or PartitionOutOfBounds.
void check_partitions(const PartitionSet& parts, std::int64_t cols);

struct TaggedValue {
  Word value = 0;
  PartitionId tag = kNoPartition;
  std::int64_t pixel = 0;  // output pixel this value contributes to

  bool operator==(const TaggedValue&) const = default;
};

struct PartialSum {
  Word value = 0;
  std::int64_t pixel = 0;
  PartitionId tag = kNoPartition;

  bool operator==(const PartialSum&) const = default;
};

/// Weight travelling down a column during load, addressed to one row.
struct LoadPacket {
  Word value = 0;
  std::int64_t dest_row = 0;

  bool operator==(const LoadPacket&) const = default;
};

using VerticalLink = std::variant<std::monostate, LoadPacket, PartialSum>;

struct PeState {
  Word load_register = 0;
  PartitionId tag = kNoPartition;
  std::optional<TaggedValue> right_reg;
  VerticalLink down_reg;
};

enum class PeEvent { Load, Mac, Pass, Drain };
std::string_view to_string(PeEvent e);

struct TraceEvent {
  std::int64_t cycle = 0;
  std::int64_t pe_x = 0;  // row
  std::int64_t pe_y = 0;  // column
  PeEvent event = PeEvent::Mac;
  PartitionId owner = kNoPartition;  // partition whose data caused it
};

/// Writes `cycle,pe_x,pe_y,event` rows with a header line.
void write_trace_csv(std::ostream& out, std::span<const TraceEvent> events);

/// A value entering the array from a left-edge feed port.
struct Injection {
  std::int64_t row = 0;
  std::int64_t col = 0;  // column whose PE receives the value
  TaggedValue value;
};

struct DrainOutput {
  std::int64_t col = 0;
  PartialSum sum;
};

enum class PartitionMode { Load, Calculate };

class PeGrid {
 public:
  /// Allocates the grid and tags every column by its owning partition.
  /// Columns no partition covers are tagged kNoPartition and only pass
  /// data. Throws OverlappingPartitions / PartitionOutOfBounds.
  PeGrid(const ArrayConfig& cfg, const PartitionSet& parts);

  std::int64_t rows() const { return cfg_.rows; }
  std::int64_t cols() const { return cfg_.cols; }
  const ArrayConfig& config() const { return cfg_; }
  std::int64_t cycle() const { return cycle_; }

  const PeState& at(std::int64_t x, std::int64_t y) const;
  PartitionId column_tag(std::int64_t y) const;
  const Partition& partition(PartitionId id) const;
  const PartitionSet& partitions() const { return parts_; }

  /// Switches a partition between load and calculate. Entering load mode
  /// resets the load sequence; it throws LoadDuringCompute if any of the
  /// partition's vertical links still carries a partial sum.
  void set_mode(PartitionId id, PartitionMode mode);
  PartitionMode mode(PartitionId id) const;

  /// Restricts the partition to an r_f x c_f tile at its top-left corner.
  /// Partial sums exit at row r_f - 1; the partition's own stream stops at
  /// its column col_start + c_f - 1.
  void set_fold_extent(PartitionId id, std::int64_t rows_used,
                       std::int64_t cols_used);

  /// One clock. `column_loads[y]` injects a weight at the top of column y
  /// (its partition must be in load mode); weights are addressed bottom row
  /// first. `injections` feed the horizontal links. Returns the partial
  /// sums that reached each column's exit row this cycle.
  std::vector<DrainOutput> step(std::span<const std::optional<Word>> column_loads,
                                std::span<const Injection> injections);

  /// Load-only clock.
  void step_load(std::span<const std::optional<Word>> column_loads);

  /// Compute-only clock with row inputs entering at column 0.
  std::vector<DrainOutput> step_compute(
      std::span<const std::optional<TaggedValue>> row_inputs);

  /// Records the drain-buffer write of an output latched this cycle.
  void record_drain(std::int64_t col, PartitionId owner);

  /// Activity tally accumulated for `owner` since the last take.
  ActivityCounts take_tally(PartitionId owner);

  void enable_trace(bool on) { tracing_ = on; }
  const std::vector<TraceEvent>& trace() const { return trace_; }

 private:
  struct Control {
    PartitionMode mode = PartitionMode::Calculate;
    std::int64_t rows_used = 0;
    std::int64_t cols_used = 0;
    std::int64_t loads_issued = 0;
  };

  std::size_t index(std::int64_t x, std::int64_t y) const {
    return static_cast<std::size_t>(x * cfg_.cols + y);
  }
  std::size_t slot(PartitionId id) const;
  std::int64_t exit_row(std::int64_t y) const;
  void record(std::int64_t x, std::int64_t y, PeEvent e, PartitionId owner);
  ActivityCounts& tally(PartitionId owner);

  ArrayConfig cfg_;
  PartitionSet parts_;
  std::vector<Control> control_;
  std::vector<PeState> pes_;
  std::vector<PartitionId> column_tags_;
  std::int64_t cycle_ = 0;
  bool tracing_ = false;
  std::vector<TraceEvent> trace_;
  std::vector<std::pair<PartitionId, ActivityCounts>> tallies_;
};

/// Factory matching the `configure` operation.
PeGrid configure(const ArrayConfig& cfg, const PartitionSet& parts);

/// Row-major r_f x c_f weights and t x r_f inputs for one tile.
struct FoldJob {
  PartitionId partition = 0;
  std::int64_t rows = 1;  // r_f
  std::int64_t cols = 1;  // c_f
  std::int64_t t = 1;
  std::vector<Word> weights;  // [row][col]
  std::vector<Word> inputs;   // [pixel][row]
};

struct FoldResult {
  std::vector<Word> outputs;  // [pixel][col], t x c_f
  std::int64_t cycles = 0;
  ActivityCounts activities;
};

/// Loads one tile into `partition` and streams its inputs through: r_f
/// load cycles, then row x of pixel p enters at feed cycle
/// n_active * p + x. In independent feed mode the stream enters at the
/// partition's own left edge; in interleaved mode it enters at column 0
/// and crosses every upstream column with Mul_En = 0. Cycles are counted
/// until the last output is written to the drain buffer.
FoldResult run_fold(PeGrid& grid, const FoldJob& job, std::int64_t n_active = 1);

/// Runs one tile per partition at the same time. Interleaved mode shares
/// the left-edge row ports round-robin over the jobs (in col_start order);
/// job j starts at offset ((j - r_f) mod n) so that its feed cycles land on
/// slot j. Per-job cycles are measured from the job's own start.
std::vector<FoldResult> run_concurrent(PeGrid& grid, std::span<const FoldJob> jobs);

/// Direct dot-product reference: out[p][c] = sum_r in[p][r] * w[r][c].
std::vector<Word> reference_matmul(const FoldJob& job);

}  // namespace tenantsim
