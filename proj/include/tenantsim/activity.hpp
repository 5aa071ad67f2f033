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

#include <array>
#include <cstdint>
#include <string_view>

namespace tenantsim {

/// Per-action event tallies for one fold, layer or run.
struct ActivityCounts {
  std::int64_t mac_ops = 0;
  std::int64_t lr_writes = 0;
  std::int64_t pass_hops = 0;
  std::int64_t feed_reads = 0;
  std::int64_t load_reads = 0;
  std::int64_t drain_writes = 0;
  std::int64_t drain_rmw = 0;
  std::int64_t dram_reads = 0;
  std::int64_t dram_writes = 0;

  static constexpr std::size_t kFieldCount = 9;
  static constexpr std::array<std::string_view, kFieldCount> kFieldNames = {
      "mac_ops",      "lr_writes",  "pass_hops",
      "feed_reads",   "load_reads", "drain_writes",
      "drain_rmw",    "dram_reads", "dram_writes"};

  std::array<std::int64_t, kFieldCount> as_array() const {
    return {mac_ops,      lr_writes, pass_hops,  feed_reads, load_reads,
            drain_writes, drain_rmw, dram_reads, dram_writes};
  }

  ActivityCounts& operator+=(const ActivityCounts& o) {
    mac_ops += o.mac_ops;
    lr_writes += o.lr_writes;
    pass_hops += o.pass_hops;
    feed_reads += o.feed_reads;
    load_reads += o.load_reads;
    drain_writes += o.drain_writes;
    drain_rmw += o.drain_rmw;
    dram_reads += o.dram_reads;
    dram_writes += o.dram_writes;
    return *this;
  }

  friend ActivityCounts operator+(ActivityCounts a, const ActivityCounts& b) {
    a += b;
    return a;
  }

  bool operator==(const ActivityCounts&) const = default;
};

}  // namespace tenantsim
