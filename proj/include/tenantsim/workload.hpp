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
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "tenantsim/error.hpp"

namespace tenantsim {

using Cycles = std::int64_t;

/// Shape of one convolution (or fully-connected) layer.
///
/// Tensors are FW[M][C][R][S], IFMap[N][C][H][W] and OFMap[N][M][P][Q].
/// Unit stride and zero padding are assumed, so P = H - R + 1 and
/// Q = W - S + 1. A fully-connected layer is a convolution with R = H,
/// S = W and P = Q = 1.
struct LayerShape {
  std::int64_t M = 1;  // output channels
  std::int64_t N = 1;  // batch
  std::int64_t C = 1;  // input channels
  std::int64_t R = 1;  // filter height
  std::int64_t S = 1;  // filter width
  std::int64_t H = 1;  // input height
  std::int64_t W = 1;  // input width
  std::int64_t P = 1;  // output height
  std::int64_t Q = 1;  // output width

  /// Builds a shape with P and Q derived from H, W, R, S.
  static LayerShape conv(std::int64_t M, std::int64_t N, std::int64_t C,
                         std::int64_t R, std::int64_t S, std::int64_t H,
                         std::int64_t W);

  /// Fully-connected layer: `in_features` = C*H*W flattened as C x H x W.
  static LayerShape fully_connected(std::int64_t M, std::int64_t N,
                                    std::int64_t C, std::int64_t H,
                                    std::int64_t W);

  bool operator==(const LayerShape&) const = default;
};

struct LayerRef {
  std::string dnn_id;
  std::size_t layer_index = 0;

  auto operator<=>(const LayerRef&) const = default;
};

using Edge = std::pair<std::size_t, std::size_t>;

/// One tenant: a DAG of layers plus its arrival time.
struct DnnGraph {
  std::string dnn_id;
  Cycles arrival_time = 0;
  std::vector<LayerShape> layers;
  /// Precedence pairs (from, to). Always materialized; a file that omits
  /// `edges` gets the implied chain 0 -> 1 -> ... -> n-1.
  std::vector<Edge> edges;
  std::optional<Cycles> estimated_exec;

  /// Indices of layers that must finish before `layer` may start.
  std::vector<std::size_t> predecessors(std::size_t layer) const;
  std::vector<std::size_t> successors(std::size_t layer) const;
  /// Topological order, lowest ready index first. Requires a DAG.
  std::vector<std::size_t> topological_order() const;

  bool operator==(const DnnGraph&) const = default;
};

struct Workload {
  std::vector<DnnGraph> dnns;

  const DnnGraph* find(const std::string& dnn_id) const;
  const LayerShape& layer(const LayerRef& ref) const;
  std::size_t total_layers() const;

  bool operator==(const Workload&) const = default;
};

/// Chain edges 0->1->...->(n-1).
std::vector<Edge> chain_edges(std::size_t n_layers);

/// MAC-count priority metric M*N*C*R*S*H*W. Note this multiplies by H*W
/// rather than P*Q, so it overcounts the executed MACs; it is used only to
/// rank ready layers. Throws Error(Overflow) if the product exceeds 63 bits.
std::int64_t opr_count(const LayerShape& layer);

/// Returns every invariant violation in `w`. Empty means valid.
std::vector<ValidationIssue> validate_workload(const Workload& w);

/// Returns `w` unchanged if valid, otherwise throws ValidationError.
Workload validated(Workload w);

/// Parses a workload document and validates it. Throws Error(ParseError)
/// with line/field context on malformed input, ValidationError otherwise.
Workload load_workload(std::istream& in);
Workload load_workload_file(const std::string& path);
Workload parse_workload(const std::string& text);

/// Serializes to the workload file format. Edges, P and Q are always
/// written explicitly so the document round-trips exactly.
std::string save_workload(const Workload& w);

}  // namespace tenantsim
