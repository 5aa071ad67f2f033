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

#include "invariants.hpp"
#include "support.hpp"
#include "tenantsim/scheduler.hpp"

namespace tenantsim {
namespace {

Partition region(PartitionId id, std::int64_t start, std::int64_t width, bool busy = false) {
  return Partition{id, start, width, busy ? PartitionState::Busy : PartitionState::Free,
                   std::nullopt};
}

TaskQueueEntry entry(const std::string& dnn, std::int64_t mac, Cycles arrival = 0) {
  return TaskQueueEntry{LayerRef{dnn, 0}, mac, arrival, arrival};
}

DnnGraph single_layer(const std::string& id, Cycles arrival, LayerShape l) {
  DnnGraph g;
  g.dnn_id = id;
  g.arrival_time = arrival;
  g.layers = {l};
  return g;
}

TEST(PartitionCalculation, Examples) {
  EXPECT_EQ(partition_calculation(4, 128), (std::vector<std::int64_t>{32, 32, 32, 32}));
  EXPECT_EQ(partition_calculation(1, 128), (std::vector<std::int64_t>{128}));
  EXPECT_EQ(partition_calculation(3, 128), (std::vector<std::int64_t>{42, 42, 42}));
  try {
    (void)partition_calculation(9, 8);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::TooManyTasks);
  }
  EXPECT_THROW((void)partition_calculation(0, 8), Error);
}

TEST(TaskAssignment, HeaviestGetsWidest) {
  const auto grants = task_assignment(
      {entry("a", 100), entry("b", 900), entry("c", 400)},
      {region(0, 0, 32), region(1, 32, 64)});
  ASSERT_EQ(grants.size(), 2u);
  EXPECT_EQ(grants[0].first.dnn_id, "b");
  EXPECT_EQ(grants[0].second.col_width, 64);
  EXPECT_EQ(grants[1].first.dnn_id, "c");
  EXPECT_EQ(grants[1].second.col_width, 32);
}

TEST(TaskAssignment, EmptyReady) {
  EXPECT_TRUE(task_assignment({}, {region(0, 0, 8)}).empty());
}

TEST(TaskAssignment, EarlierArrivalWinsTies) {
  const auto grants = task_assignment({entry("late", 50, 5), entry("early", 50, 2)},
                                      {region(0, 0, 4), region(1, 4, 12)});
  ASSERT_EQ(grants.size(), 2u);
  EXPECT_EQ(grants[0].first.dnn_id, "early");
  EXPECT_EQ(grants[0].second.col_width, 12);
}

TEST(MergeFree, AdjacentFreeCollapse) {
  const auto merged =
      merge_free({region(0, 0, 32), region(1, 32, 32), region(2, 64, 64, true)}, 128);
  ASSERT_EQ(merged.size(), 2u);
  EXPECT_EQ(merged[0].col_start, 0);
  EXPECT_EQ(merged[0].col_width, 64);
  EXPECT_FALSE(merged[0].busy());
  EXPECT_EQ(merged[1], region(2, 64, 64, true));
}

TEST(MergeFree, NonAdjacentUntouched) {
  const PartitionSet in{region(0, 0, 32), region(1, 32, 32, true), region(2, 64, 64)};
  EXPECT_EQ(merge_free(in, 128), in);
}

TEST(MergeFree, AllFreeBecomesOne) {
  const auto merged = merge_free({region(3, 0, 2), region(4, 2, 3), region(5, 5, 3)}, 8);
  ASSERT_EQ(merged.size(), 1u);
  EXPECT_EQ(merged[0].col_width, 8);
  EXPECT_EQ(merged[0].id, 3);
}

TEST(RunSchedule, SingleLayerSameInBothModes) {
  Workload w{{single_layer("only", 0, LayerShape::conv(3, 1, 2, 2, 2, 5, 5))}};
  Trace a = run_schedule(w, {8, 8}, ScheduleMode::Partitioned);
  Trace b = run_schedule(w, {8, 8}, ScheduleMode::Baseline);
  EXPECT_EQ(a.makespan, b.makespan);
  EXPECT_EQ(a.layers, b.layers);
  EXPECT_EQ(a.totals, b.totals);
  EXPECT_EQ(a.makespan, layer_cycles(w.dnns[0].layers[0], {8, 8}).total);
}

TEST(RunSchedule, SplitWhenTwoLayersBecomeReadyTogether) {
  Workload w{{single_layer("first", 0, LayerShape::conv(8, 1, 8, 1, 1, 4, 4)),
              single_layer("x", 1, LayerShape::conv(4, 1, 4, 1, 1, 3, 3)),
              single_layer("y", 1, LayerShape::conv(4, 1, 4, 1, 1, 3, 3))}};
  const Trace t = run_schedule(w, {8, 9}, ScheduleMode::Partitioned);
  ASSERT_EQ(t.layers.size(), 3u);
  EXPECT_EQ(t.layers[0].col_width, 9);
  EXPECT_EQ(t.layers[1].start, t.layers[2].start);
  EXPECT_EQ(t.layers[1].start, t.layers[0].end);
  EXPECT_EQ(t.layers[1].col_width, 4);
  EXPECT_EQ(t.layers[2].col_width, 4);
  EXPECT_EQ(t.layers[1].n_active, 2);
  EXPECT_TRUE(testing::schedule_violations(w, t).empty());
}

TEST(RunSchedule, FirstLayerTakesWholeArrayEvenWithCompetition) {
  Workload w{{single_layer("a", 0, LayerShape::conv(2, 1, 2, 1, 1, 2, 2)),
              single_layer("b", 0, LayerShape::conv(6, 1, 2, 1, 1, 2, 2))}};
  const Trace t = run_schedule(w, {4, 4}, ScheduleMode::Partitioned);
  EXPECT_EQ(t.layers[0].layer.dnn_id, "b");
  EXPECT_EQ(t.layers[0].col_width, 4);
  EXPECT_EQ(t.layers[1].start, t.layers[0].end);
}

TEST(RunSchedule, BaselineIsFirstComeFirstServed) {
  Workload w{{single_layer("late", 5, LayerShape{}), single_layer("early", 0, LayerShape{})}};
  w.dnns[1].layers.push_back(LayerShape{});
  w.dnns[1].edges = {};
  const Trace t = run_schedule(w, {4, 4}, ScheduleMode::Baseline);
  ASSERT_EQ(t.layers.size(), 3u);
  EXPECT_EQ(t.layers[0].layer, (LayerRef{"early", 0}));
  EXPECT_EQ(t.layers[1].layer, (LayerRef{"early", 1}));
  EXPECT_EQ(t.layers[2].layer, (LayerRef{"late", 0}));
  EXPECT_TRUE(testing::schedule_violations(w, t).empty());
}

TEST(RunSchedule, RejectsInvalidWorkload) {
  EXPECT_THROW((void)run_schedule(Workload{}, {4, 4}, ScheduleMode::Partitioned),
               ValidationError);
}

TEST(RunSchedule, InvariantsOnRandomWorkloads) {
  testing::Gen gen(2024);
  for (int i = 0; i < 200; ++i) {
    const Workload w = gen.workload();
    const ArrayConfig cfg{gen.range(1, 8), gen.range(1, 12),
                          gen.coin() ? FeedModel::Interleaved : FeedModel::Independent};
    for (ScheduleMode mode : {ScheduleMode::Partitioned, ScheduleMode::Baseline}) {
      const Trace t = run_schedule(w, cfg, mode);
      const auto bad = testing::schedule_violations(w, t);
      ASSERT_TRUE(bad.empty()) << bad.front();
      EXPECT_EQ(run_schedule(w, cfg, mode), t);
    }
  }
}

}  // namespace
}  // namespace tenantsim
