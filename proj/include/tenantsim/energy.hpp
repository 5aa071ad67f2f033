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
#include <iosfwd>
#include <optional>
#include <string>

#include "tenantsim/activity.hpp"
#include "tenantsim/lowering.hpp"
#include "tenantsim/pe_array.hpp"

namespace tenantsim {

/// Energy in thousandths of a picojoule. All arithmetic is integral, so
/// sums are exact and associative.
struct Energy {
  std::int64_t milli_pj = 0;

  static Energy from_pj(double pj);
  double pj() const { return static_cast<double>(milli_pj) / 1000.0; }
  /// Fixed three-decimal rendering, e.g. "11.000".
  std::string to_string() const;

  Energy& operator+=(Energy o) {
    milli_pj += o.milli_pj;
    return *this;
  }
  friend Energy operator+(Energy a, Energy b) { return a += b; }
  auto operator<=>(const Energy&) const = default;
};

/// Unit energy per activity class. An entry left unset is missing and
/// makes energy_of fail.
struct EnergyTable {
  std::string name;
  std::string description;
  std::array<std::optional<Energy>, ActivityCounts::kFieldCount> unit{};

  void set(std::string_view activity, double pj);
  std::optional<Energy> get(std::string_view activity) const;
  /// Throws MissingTableEntry naming the first absent class.
  void require_complete() const;

  /// The table shipped with the repository. Its numbers are illustrative
  /// and not calibrated to any process technology.
  static EnergyTable illustrative();
};

/// Document form: {"metadata": {"name", "description"}, "<class>": pJ, ...}.
/// Unknown classes, negative values and missing classes are rejected.
EnergyTable parse_energy_table(const std::string& text);
EnergyTable load_energy_table_file(const std::string& path);
std::string save_energy_table(const EnergyTable& table);

/// Events for one r_f x c_f fold streaming t vectors. `upstream_cols` is
/// the number of columns left of the partition; those hops only exist
/// when streams share the left edge (interleaved feed).
ActivityCounts count_fold_activities(std::int64_t r_f, std::int64_t c_f,
                                     std::int64_t t, FeedModel model,
                                     std::int64_t upstream_cols);

/// Sum over all folds of a layer, plus drain read-modify-writes for every
/// k-fold after the first (c_f * t each).
ActivityCounts layer_activities(const GemmDims& g, std::int64_t part_rows,
                                std::int64_t part_cols, FeedModel model,
                                std::int64_t upstream_cols);

Energy energy_of(const ActivityCounts& counts, const EnergyTable& table);

}  // namespace tenantsim
