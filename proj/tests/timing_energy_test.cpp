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

#include <gtest/gtest.h>

#include "support.hpp"
#include "tenantsim/energy.hpp"
#include "tenantsim/pe_array.hpp"
#include "tenantsim/timing.hpp"

namespace tenantsim {
namespace {

EnergyTable zero_table() {
  EnergyTable t;
  for (auto name : ActivityCounts::kFieldNames) t.set(name, 0.0);
  return t;
}

TEST(CyclesPerFold, Examples) {
  EXPECT_EQ(cycles_per_fold(1, 1, 1, FeedModel::Independent), 3);
  EXPECT_EQ(cycles_per_fold(4, 4, 8, FeedModel::Independent), 19);
  EXPECT_EQ(cycles_per_fold(2, 2, 3, FeedModel::Interleaved, 2, 2), 12);
  const FoldCycles split = fold_cycles(2, 2, 3, FeedModel::Interleaved, 2, 2);
  EXPECT_EQ(split.load, 2);
  EXPECT_EQ(split.feed_drain, 10);
}

TEST(CyclesPerFold, InterleavedSingleTenantAtOriginMatchesIndependent) {
  for (std::int64_t r = 1; r <= 6; ++r)
    for (std::int64_t c = 1; c <= 6; ++c)
      for (std::int64_t t = 1; t <= 6; ++t)
        EXPECT_EQ(cycles_per_fold(r, c, t, FeedModel::Interleaved, 1, 0),
                  cycles_per_fold(r, c, t, FeedModel::Independent));
}

TEST(LayerCycles, Examples) {
  const Placement p{8, 8};
  // k=4, m=4, t=8
  EXPECT_EQ(layer_cycles(LayerShape::conv(4, 2, 1, 1, 4, 2, 5), p).total, 19);
  // k=12, m=2, t=9
  const CycleEstimate e = layer_cycles(LayerShape::conv(2, 1, 3, 2, 2, 4, 4), p);
  EXPECT_EQ(e.total, 44);
  ASSERT_EQ(e.per_fold.size(), 2u);
  EXPECT_EQ(e.per_fold[0].total(), 26);
  EXPECT_EQ(e.per_fold[1].total(), 18);
  EXPECT_EQ(e.load_cycles + e.feed_drain_cycles, e.total);
  EXPECT_EQ(layer_cycles(LayerShape{}, {3, 5}).total, 3);
}

TEST(LayerCycles, NonIncreasingInPartitionWidth) {
  testing::Gen gen(12);
  for (int i = 0; i < 300; ++i) {
    const GemmDims g{gen.range(1, 30), gen.range(1, 30), gen.range(1, 20)};
    const std::int64_t rows = gen.range(1, 8);
    std::int64_t prev = gemm_cycles(g, {rows, 1}).total;
    for (std::int64_t w = 2; w <= 32; ++w) {
      const std::int64_t cur = gemm_cycles(g, {rows, w}).total;
      EXPECT_LE(cur, prev) << "k=" << g.k << " m=" << g.m << " t=" << g.t << " w=" << w;
      prev = cur;
    }
  }
}

TEST(LayerCycles, FullArrayDominatesAnyPartition) {
  testing::Gen gen(14);
  for (int i = 0; i < 300; ++i) {
    const LayerShape l = gen.layer(8);
    const std::int64_t rows = gen.range(1, 8);
    const std::int64_t cols = gen.range(1, 16);
    const std::int64_t full = layer_cycles(l, {rows, cols}).total;
    const std::int64_t start = gen.range(0, cols - 1);
    const std::int64_t width = gen.range(1, cols - start);
    for (FeedModel fm : {FeedModel::Independent, FeedModel::Interleaved}) {
      EXPECT_LE(full, layer_cycles(l, {rows, width, fm, gen.range(1, 4), start}).total);
    }
  }
}

TEST(FoldActivities, AgreeWithInstrumentedPeArray) {
  testing::Gen gen(15);
  for (FeedModel fm : {FeedModel::Independent, FeedModel::Interleaved}) {
    for (std::int64_t upstream : {0, 3}) {
      for (std::int64_t r = 1; r <= 8; ++r)
        for (std::int64_t c = 1; c <= 8; ++c)
          for (std::int64_t t = 1; t <= 8; ++t) {
            PartitionSet parts;
            if (upstream > 0) {
              parts.push_back(Partition{1, 0, upstream, PartitionState::Free, std::nullopt});
            }
            parts.push_back(Partition{0, upstream, 8, PartitionState::Busy, std::nullopt});
            PeGrid grid({8, upstream + 8, fm}, parts);
            const FoldJob job{0, r, c, t, gen.values(r * c), gen.values(t * r)};
            ASSERT_EQ(run_fold(grid, job).activities,
                      count_fold_activities(r, c, t, fm, upstream))
                << "r=" << r << " c=" << c << " t=" << t;
          }
    }
  }
}

TEST(LayerActivities, MacsEqualGemmVolume) {
  testing::Gen gen(16);
  for (int i = 0; i < 300; ++i) {
    const GemmDims g{gen.range(1, 40), gen.range(1, 40), gen.range(1, 20)};
    const ActivityCounts a =
        layer_activities(g, gen.range(1, 8), gen.range(1, 8), FeedModel::Independent, 0);
    EXPECT_EQ(a.mac_ops, g.k * g.m * g.t);
  }
}

TEST(FoldActivities, Examples) {
  const ActivityCounts a = count_fold_activities(2, 2, 3, FeedModel::Independent, 0);
  EXPECT_EQ(a.mac_ops, 12);
  EXPECT_EQ(a.lr_writes, 4);
  EXPECT_EQ(a.feed_reads, 6);
  EXPECT_EQ(a.drain_writes, 6);
  EXPECT_EQ(a.pass_hops, 0);
  EXPECT_EQ(count_fold_activities(2, 2, 3, FeedModel::Interleaved, 3).pass_hops, 18);
  EXPECT_EQ(count_fold_activities(2, 2, 3, FeedModel::Independent, 3).pass_hops, 0);
}

TEST(FoldActivities, Degenerate) {
  const ActivityCounts a = count_fold_activities(1, 1, 1, FeedModel::Independent, 0);
  EXPECT_EQ(a.mac_ops, 1);
  EXPECT_EQ(a.lr_writes, 1);
  EXPECT_EQ(a.feed_reads, 1);
  EXPECT_EQ(a.load_reads, 1);
  EXPECT_EQ(a.drain_writes, 1);
  EXPECT_EQ(a.dram_writes, 1);
  EXPECT_EQ(a.pass_hops, 0);
  EXPECT_EQ(a.drain_rmw, 0);
  // One weight plus one input word come from DRAM.
  EXPECT_EQ(a.dram_reads, 2);
}

TEST(LayerActivities, ReadModifyWriteForLaterKFolds) {
  // k=12 on 8 rows: two k-folds, the second one accumulates c_f*t = 2*9.
  const ActivityCounts a = layer_activities({12, 2, 9}, 8, 8, FeedModel::Independent, 0);
  EXPECT_EQ(a.drain_rmw, 18);
  EXPECT_EQ(a.mac_ops, 12 * 2 * 9);
}

TEST(Energy, DotProduct) {
  EnergyTable t = zero_table();
  t.set("mac_ops", 1.0);
  t.set("lr_writes", 0.5);
  ActivityCounts c;
  c.mac_ops = 10;
  c.lr_writes = 2;
  EXPECT_EQ(energy_of(c, t).to_string(), "11.000");
  EXPECT_EQ(energy_of(ActivityCounts{}, EnergyTable::illustrative()).milli_pj, 0);
}

TEST(Energy, MissingEntryRejected) {
  EnergyTable t = zero_table();
  t.unit[5].reset();  // drain_writes
  try {
    (void)energy_of(ActivityCounts{}, t);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::MissingTableEntry);
    EXPECT_NE(std::string(e.what()).find("drain_writes"), std::string::npos);
  }
  EXPECT_THROW((void)parse_energy_table(R"({"mac_ops": 1.0})"), Error);
}

TEST(Energy, TableFileRoundTrip) {
  const EnergyTable shipped = load_energy_table_file(TENANTSIM_DATA_DIR "/energy_table.json");
  const EnergyTable built = EnergyTable::illustrative();
  EXPECT_EQ(shipped.unit, built.unit);
  EXPECT_NE(shipped.description.find("not calibrated"), std::string::npos);
  EXPECT_EQ(parse_energy_table(save_energy_table(shipped)).unit, shipped.unit);
  EXPECT_THROW((void)parse_energy_table(R"({"mac": 1.0})"), Error);
  EXPECT_THROW((void)parse_energy_table(""), Error);
}

TEST(Energy, Additive) {
  testing::Gen gen(13);
  const EnergyTable t = EnergyTable::illustrative();
  for (int i = 0; i < 500; ++i) {
    ActivityCounts a, b;
    for (auto* c : {&a, &b}) {
      c->mac_ops = gen.range(0, 100000);
      c->lr_writes = gen.range(0, 1000);
      c->pass_hops = gen.range(0, 1000);
      c->feed_reads = gen.range(0, 1000);
      c->load_reads = gen.range(0, 1000);
      c->drain_writes = gen.range(0, 1000);
      c->drain_rmw = gen.range(0, 1000);
      c->dram_reads = gen.range(0, 1000);
      c->dram_writes = gen.range(0, 1000);
    }
    EXPECT_EQ(energy_of(a + b, t), energy_of(a, t) + energy_of(b, t));
  }
}

}  // namespace
}  // namespace tenantsim
