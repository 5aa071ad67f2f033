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

// Test-only oracles and generators. Nothing here calls into the library's
// lowering or PE model, so the oracles stay independent of the code under
// test.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "tenantsim/workload.hpp"

namespace tenantsim::testing {

/// Direct convolution, OFMap[n][m][p][q] flattened row-major.
inline std::vector<std::int64_t> direct_conv(const LayerShape& l,
                                             const std::vector<std::int64_t>& fw,
                                             const std::vector<std::int64_t>& ifmap) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(l.N * l.M * l.P * l.Q), 0);
  for (std::int64_t n = 0; n < l.N; ++n)
    for (std::int64_t m = 0; m < l.M; ++m)
      for (std::int64_t p = 0; p < l.P; ++p)
        for (std::int64_t q = 0; q < l.Q; ++q) {
          std::int64_t acc = 0;
          for (std::int64_t c = 0; c < l.C; ++c)
            for (std::int64_t r = 0; r < l.R; ++r)
              for (std::int64_t s = 0; s < l.S; ++s)
                acc += ifmap[static_cast<std::size_t>(((n * l.C + c) * l.H + p + r) * l.W + q + s)] *
                       fw[static_cast<std::size_t>(((m * l.C + c) * l.R + r) * l.S + s)];
          out[static_cast<std::size_t>(((n * l.M + m) * l.P + p) * l.Q + q)] = acc;
        }
  return out;
}

/// out[t][m] = sum_k a[t][k] * b[k][m].
inline std::vector<std::int64_t> matmul(const std::vector<std::int64_t>& a,
                                        const std::vector<std::int64_t>& b, std::int64_t t,
                                        std::int64_t k, std::int64_t m) {
  std::vector<std::int64_t> out(static_cast<std::size_t>(t * m), 0);
  for (std::int64_t i = 0; i < t; ++i)
    for (std::int64_t j = 0; j < m; ++j) {
      std::int64_t acc = 0;
      for (std::int64_t x = 0; x < k; ++x)
        acc += a[static_cast<std::size_t>(i * k + x)] * b[static_cast<std::size_t>(x * m + j)];
      out[static_cast<std::size_t>(i * m + j)] = acc;
    }
  return out;
}

class Gen {
 public:
  explicit Gen(std::uint64_t seed) : rng_(seed) {}

  std::int64_t range(std::int64_t lo, std::int64_t hi) {
    return std::uniform_int_distribution<std::int64_t>(lo, hi)(rng_);
  }
  bool coin() { return range(0, 1) == 1; }

  std::vector<std::int64_t> values(std::int64_t n, std::int64_t bound = 9) {
    std::vector<std::int64_t> v(static_cast<std::size_t>(n));
    for (auto& x : v) x = range(-bound, bound);
    return v;
  }

  LayerShape layer(std::int64_t max_dim = 6) {
    LayerShape l;
    l.M = range(1, max_dim);
    l.N = range(1, 2);
    l.C = range(1, max_dim);
    l.H = range(1, max_dim);
    l.W = range(1, max_dim);
    l.R = range(1, l.H);
    l.S = range(1, l.W);
    l.P = l.H - l.R + 1;
    l.Q = l.W - l.S + 1;
    return l;
  }

  /// Random DAG over n layers: edges only go from lower to higher index.
  std::vector<Edge> dag(std::size_t n) {
    std::vector<Edge> edges;
    for (std::size_t to = 1; to < n; ++to) {
      for (std::size_t from = 0; from < to; ++from) {
        if (from + 1 == to ? range(0, 3) != 0 : range(0, 5) == 0) edges.emplace_back(from, to);
      }
    }
    return edges;
  }

  Workload workload(std::size_t max_dnns = 4, std::size_t max_layers = 4,
                    std::int64_t max_arrival = 60) {
    Workload w;
    const auto n = static_cast<std::size_t>(range(1, static_cast<std::int64_t>(max_dnns)));
    for (std::size_t d = 0; d < n; ++d) {
      DnnGraph g;
      g.dnn_id = "d" + std::to_string(d);
      g.arrival_time = range(0, max_arrival);
      const auto layers = static_cast<std::size_t>(range(1, static_cast<std::int64_t>(max_layers)));
      for (std::size_t i = 0; i < layers; ++i) g.layers.push_back(layer());
      g.edges = dag(layers);
      w.dnns.push_back(std::move(g));
    }
    return w;
  }

  std::mt19937_64& engine() { return rng_; }

 private:
  std::mt19937_64 rng_;
};

}  // namespace tenantsim::testing
