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

#include "tenantsim/energy.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

namespace tenantsim {

using nlohmann::json;

Energy Energy::from_pj(double pj) {
  return Energy{static_cast<std::int64_t>(std::llround(pj * 1000.0))};
}

std::string Energy::to_string() const {
  const std::int64_t whole = milli_pj / 1000;
  std::int64_t frac = milli_pj % 1000;
  std::string sign;
  if (milli_pj < 0) {
    sign = "-";
    frac = -frac;
  }
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%03lld", sign.c_str(),
                static_cast<long long>(whole < 0 ? -whole : whole),
                static_cast<long long>(frac));
  return buf;
}

namespace {

std::optional<std::size_t> field_index(std::string_view activity) {
  for (std::size_t i = 0; i < ActivityCounts::kFieldCount; ++i) {
    if (ActivityCounts::kFieldNames[i] == activity) return i;
  }
  return std::nullopt;
}

}  // namespace

void EnergyTable::set(std::string_view activity, double pj) {
  const auto i = field_index(activity);
  if (!i) {
    throw Error(ErrorKind::InvalidArgument,
                "unknown activity class '" + std::string(activity) + "'");
  }
  if (!(pj >= 0.0) || !std::isfinite(pj)) {
    throw Error(ErrorKind::InvalidArgument,
                "energy for '" + std::string(activity) + "' must be a finite value >= 0");
  }
  unit[*i] = Energy::from_pj(pj);
}

std::optional<Energy> EnergyTable::get(std::string_view activity) const {
  const auto i = field_index(activity);
  return i ? unit[*i] : std::nullopt;
}

void EnergyTable::require_complete() const {
  for (std::size_t i = 0; i < ActivityCounts::kFieldCount; ++i) {
    if (!unit[i]) {
      throw Error(ErrorKind::MissingTableEntry,
                  "energy table has no entry for '" +
                      std::string(ActivityCounts::kFieldNames[i]) + "'");
    }
  }
}

EnergyTable EnergyTable::illustrative() {
  EnergyTable t;
  t.name = "illustrative";
  t.description =
      "Illustrative per-event energies for desk-scale runs; not calibrated to "
      "45 nm or any other technology.";
  t.set("mac_ops", 0.5);
  t.set("lr_writes", 0.1);
  t.set("pass_hops", 0.05);
  t.set("feed_reads", 1.2);
  t.set("load_reads", 1.2);
  t.set("drain_writes", 1.2);
  t.set("drain_rmw", 2.4);
  t.set("dram_reads", 100.0);
  t.set("dram_writes", 100.0);
  return t;
}

EnergyTable parse_energy_table(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw Error(ErrorKind::ParseError, std::string("energy table: ") + e.what());
  }
  if (!doc.is_object()) {
    throw Error(ErrorKind::ParseError, "energy table: top level must be an object");
  }
  EnergyTable t;
  for (const auto& [key, value] : doc.items()) {
    if (key == "metadata") {
      if (!value.is_object()) {
        throw Error(ErrorKind::ParseError, "energy table: metadata must be an object");
      }
      t.name = value.value("name", "");
      t.description = value.value("description", "");
      continue;
    }
    if (!value.is_number()) {
      throw Error(ErrorKind::ParseError,
                  "energy table: '" + key + "' must be a number of pJ per event");
    }
    if (!field_index(key)) {
      throw Error(ErrorKind::ParseError, "energy table: unknown activity class '" + key + "'");
    }
    try {
      t.set(key, value.get<double>());
    } catch (const Error& e) {
      throw Error(ErrorKind::ParseError, std::string("energy table: ") + e.what());
    }
  }
  t.require_complete();
  return t;
}

EnergyTable load_energy_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open energy table '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_energy_table(buf.str());
}

std::string save_energy_table(const EnergyTable& table) {
  json doc;
  doc["metadata"] = {{"name", table.name}, {"description", table.description}};
  for (std::size_t i = 0; i < ActivityCounts::kFieldCount; ++i) {
    if (table.unit[i]) {
      doc[std::string(ActivityCounts::kFieldNames[i])] = table.unit[i]->pj();
    }
  }
  return doc.dump(2) + "\n";
}

ActivityCounts count_fold_activities(std::int64_t r_f, std::int64_t c_f,
                                     std::int64_t t, FeedModel model,
                                     std::int64_t upstream_cols) {
  if (r_f < 1 || c_f < 1 || t < 1 || upstream_cols < 0) {
    throw Error(ErrorKind::InvalidArgument, "invalid fold dimensions");
  }
  ActivityCounts a;
  a.mac_ops = r_f * c_f * t;
  a.lr_writes = r_f * c_f;
  a.load_reads = r_f * c_f;
  a.feed_reads = r_f * t;
  a.drain_writes = c_f * t;
  a.pass_hops = model == FeedModel::Interleaved ? t * r_f * upstream_cols : 0;
  a.dram_reads = r_f * c_f + r_f * t;
  a.dram_writes = c_f * t;
  return a;
}

ActivityCounts layer_activities(const GemmDims& g, std::int64_t part_rows,
                                std::int64_t part_cols, FeedModel model,
                                std::int64_t upstream_cols) {
  ActivityCounts total;
  for (const Fold& f : plan_folds(g, part_rows, part_cols).folds) {
    total += count_fold_activities(f.rows, f.cols, f.t, model, upstream_cols);
    if (f.k_index > 0) total.drain_rmw += f.cols * f.t;
  }
  return total;
}

Energy energy_of(const ActivityCounts& counts, const EnergyTable& table) {
  table.require_complete();
  const auto values = counts.as_array();
  Energy total;
  for (std::size_t i = 0; i < ActivityCounts::kFieldCount; ++i) {
    total.milli_pj += values[i] * table.unit[i]->milli_pj;
  }
  return total;
}

}  // namespace tenantsim
