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

#include "tenantsim/workload.hpp"

#include <algorithm>
#include <fstream>
#include <queue>
#include <set>
#include <sstream>

#include "json.hpp"

namespace tenantsim {

using nlohmann::json;

LayerShape LayerShape::conv(std::int64_t M, std::int64_t N, std::int64_t C,
                            std::int64_t R, std::int64_t S, std::int64_t H,
                            std::int64_t W) {
  return LayerShape{M, N, C, R, S, H, W, H - R + 1, W - S + 1};
}

LayerShape LayerShape::fully_connected(std::int64_t M, std::int64_t N,
                                       std::int64_t C, std::int64_t H,
                                       std::int64_t W) {
  return LayerShape{M, N, C, H, W, H, W, 1, 1};
}

std::vector<std::size_t> DnnGraph::predecessors(std::size_t layer) const {
  std::vector<std::size_t> out;
  for (const auto& [from, to] : edges) {
    if (to == layer) out.push_back(from);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> DnnGraph::successors(std::size_t layer) const {
  std::vector<std::size_t> out;
  for (const auto& [from, to] : edges) {
    if (from == layer) out.push_back(to);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<std::size_t> DnnGraph::topological_order() const {
  const std::size_t n = layers.size();
  std::vector<std::size_t> indegree(n, 0);
  std::vector<std::vector<std::size_t>> succ(n);
  for (const auto& [from, to] : edges) {
    if (from >= n || to >= n) continue;
    succ[from].push_back(to);
    ++indegree[to];
  }
  std::priority_queue<std::size_t, std::vector<std::size_t>, std::greater<>>
      ready;
  for (std::size_t i = 0; i < n; ++i) {
    if (indegree[i] == 0) ready.push(i);
  }
  std::vector<std::size_t> order;
  order.reserve(n);
  while (!ready.empty()) {
    const std::size_t next = ready.top();
    ready.pop();
    order.push_back(next);
    for (std::size_t s : succ[next]) {
      if (--indegree[s] == 0) ready.push(s);
    }
  }
  return order;
}

const DnnGraph* Workload::find(const std::string& dnn_id) const {
  for (const auto& dnn : dnns) {
    if (dnn.dnn_id == dnn_id) return &dnn;
  }
  return nullptr;
}

const LayerShape& Workload::layer(const LayerRef& ref) const {
  const DnnGraph* dnn = find(ref.dnn_id);
  if (dnn == nullptr || ref.layer_index >= dnn->layers.size()) {
    throw Error(ErrorKind::InvalidArgument,
                "no layer " + ref.dnn_id + "/" + std::to_string(ref.layer_index));
  }
  return dnn->layers[ref.layer_index];
}

std::size_t Workload::total_layers() const {
  std::size_t n = 0;
  for (const auto& dnn : dnns) n += dnn.layers.size();
  return n;
}

std::vector<Edge> chain_edges(std::size_t n_layers) {
  std::vector<Edge> edges;
  for (std::size_t i = 1; i < n_layers; ++i) edges.emplace_back(i - 1, i);
  return edges;
}

std::int64_t opr_count(const LayerShape& l) {
  std::int64_t acc = 1;
  for (std::int64_t f : {l.M, l.N, l.C, l.R, l.S, l.H, l.W}) {
    if (__builtin_mul_overflow(acc, f, &acc)) {
      throw Error(ErrorKind::Overflow, "MAC count overflows 63 bits");
    }
  }
  return acc;
}

namespace {

std::string layer_context(const DnnGraph& dnn, std::size_t i) {
  return "dnn '" + dnn.dnn_id + "' layer " + std::to_string(i);
}

void check_layer(const DnnGraph& dnn, std::size_t i,
                 std::vector<ValidationIssue>& issues) {
  const LayerShape& l = dnn.layers[i];
  const std::string ctx = layer_context(dnn, i);
  const std::pair<const char*, std::int64_t> fields[] = {
      {"M", l.M}, {"N", l.N}, {"C", l.C}, {"R", l.R}, {"S", l.S},
      {"H", l.H}, {"W", l.W}, {"P", l.P}, {"Q", l.Q}};
  bool positive = true;
  for (const auto& [name, value] : fields) {
    if (value < 1) {
      issues.push_back({ErrorKind::InvalidField,
                        ctx + ": " + name + "=" + std::to_string(value) +
                            " must be >= 1"});
      positive = false;
    }
  }
  if (!positive) return;
  if (l.R > l.H || l.S > l.W) {
    issues.push_back({ErrorKind::FilterExceedsInput,
                      ctx + ": filter " + std::to_string(l.R) + "x" +
                          std::to_string(l.S) + " exceeds input " +
                          std::to_string(l.H) + "x" + std::to_string(l.W)});
    return;
  }
  if (l.P != l.H - l.R + 1) {
    issues.push_back({ErrorKind::ShapeInconsistent,
                      ctx + ": P=" + std::to_string(l.P) + " (expected P=" +
                          std::to_string(l.H - l.R + 1) + ")"});
  }
  if (l.Q != l.W - l.S + 1) {
    issues.push_back({ErrorKind::ShapeInconsistent,
                      ctx + ": Q=" + std::to_string(l.Q) + " (expected Q=" +
                          std::to_string(l.W - l.S + 1) + ")"});
  }
  try {
    (void)opr_count(l);
  } catch (const Error&) {
    issues.push_back({ErrorKind::Overflow, ctx + ": MAC count overflows"});
  }
}

void check_edges(const DnnGraph& dnn, std::vector<ValidationIssue>& issues) {
  const std::size_t n = dnn.layers.size();
  bool in_range = true;
  for (const auto& [from, to] : dnn.edges) {
    if (from >= n || to >= n) {
      issues.push_back({ErrorKind::EdgeOutOfRange,
                        "dnn '" + dnn.dnn_id + "': edge (" +
                            std::to_string(from) + "," + std::to_string(to) +
                            ") references a missing layer"});
      in_range = false;
    }
  }
  if (!in_range) return;
  if (dnn.topological_order().size() != n) {
    issues.push_back({ErrorKind::CycleInPrecedence,
                      "dnn '" + dnn.dnn_id + "': precedence edges contain a cycle"});
  }
}

}  // namespace

std::vector<ValidationIssue> validate_workload(const Workload& w) {
  std::vector<ValidationIssue> issues;
  if (w.dnns.empty()) {
    issues.push_back({ErrorKind::EmptyWorkload, "workload has no DNNs"});
    return issues;
  }
  std::set<std::string> seen;
  for (const auto& dnn : w.dnns) {
    if (!seen.insert(dnn.dnn_id).second) {
      issues.push_back({ErrorKind::DuplicateDnnId,
                        "duplicate dnn_id '" + dnn.dnn_id + "'"});
    }
    if (dnn.arrival_time < 0) {
      issues.push_back({ErrorKind::InvalidField,
                        "dnn '" + dnn.dnn_id + "': arrival_time must be >= 0"});
    }
    if (dnn.layers.empty()) {
      issues.push_back({ErrorKind::NoLayers,
                        "dnn '" + dnn.dnn_id + "' has no layers"});
    }
    for (std::size_t i = 0; i < dnn.layers.size(); ++i) {
      check_layer(dnn, i, issues);
    }
    check_edges(dnn, issues);
  }
  return issues;
}

Workload validated(Workload w) {
  auto issues = validate_workload(w);
  if (!issues.empty()) throw ValidationError(std::move(issues));
  return w;
}

namespace {

[[noreturn]] void parse_fail(const std::string& ctx, const std::string& msg) {
  throw Error(ErrorKind::ParseError, ctx.empty() ? msg : ctx + ": " + msg);
}

std::int64_t read_int(const json& obj, const std::string& key,
                      const std::string& ctx) {
  const json& v = obj.at(key);
  if (!v.is_number_integer()) {
    parse_fail(ctx + "." + key, "expected an integer");
  }
  if (v.is_number_unsigned() && v.get<std::uint64_t>() >
                                    static_cast<std::uint64_t>(INT64_MAX)) {
    parse_fail(ctx + "." + key, "integer out of range");
  }
  return v.get<std::int64_t>();
}

void reject_unknown(const json& obj, std::initializer_list<const char*> known,
                    const std::string& ctx) {
  for (const auto& [key, _] : obj.items()) {
    bool ok = std::any_of(known.begin(), known.end(),
                          [&](const char* k) { return key == k; });
    if (!ok) parse_fail(ctx, "unknown field '" + key + "'");
  }
}

LayerShape parse_layer(const json& j, const std::string& ctx) {
  if (!j.is_object()) parse_fail(ctx, "expected an object");
  reject_unknown(j, {"M", "N", "C", "R", "S", "H", "W", "P", "Q"}, ctx);
  for (const char* req : {"M", "N", "C", "R", "S", "H", "W"}) {
    if (!j.contains(req)) parse_fail(ctx, std::string("missing field '") + req + "'");
  }
  LayerShape l;
  l.M = read_int(j, "M", ctx);
  l.N = read_int(j, "N", ctx);
  l.C = read_int(j, "C", ctx);
  l.R = read_int(j, "R", ctx);
  l.S = read_int(j, "S", ctx);
  l.H = read_int(j, "H", ctx);
  l.W = read_int(j, "W", ctx);
  l.P = j.contains("P") ? read_int(j, "P", ctx) : l.H - l.R + 1;
  l.Q = j.contains("Q") ? read_int(j, "Q", ctx) : l.W - l.S + 1;
  return l;
}

DnnGraph parse_dnn(const json& j, const std::string& ctx) {
  if (!j.is_object()) parse_fail(ctx, "expected an object");
  reject_unknown(j, {"dnn_id", "arrival_time", "layers", "edges", "estimated_exec"},
                 ctx);
  for (const char* req : {"dnn_id", "arrival_time", "layers"}) {
    if (!j.contains(req)) parse_fail(ctx, std::string("missing field '") + req + "'");
  }
  DnnGraph dnn;
  if (!j["dnn_id"].is_string()) parse_fail(ctx + ".dnn_id", "expected a string");
  dnn.dnn_id = j["dnn_id"].get<std::string>();
  dnn.arrival_time = read_int(j, "arrival_time", ctx);
  if (j.contains("estimated_exec")) {
    dnn.estimated_exec = read_int(j, "estimated_exec", ctx);
  }
  const json& layers = j["layers"];
  if (!layers.is_array()) parse_fail(ctx + ".layers", "expected an array");
  for (std::size_t i = 0; i < layers.size(); ++i) {
    dnn.layers.push_back(
        parse_layer(layers[i], ctx + ".layers[" + std::to_string(i) + "]"));
  }
  if (j.contains("edges")) {
    const json& edges = j["edges"];
    if (!edges.is_array()) parse_fail(ctx + ".edges", "expected an array");
    for (std::size_t i = 0; i < edges.size(); ++i) {
      const std::string ectx = ctx + ".edges[" + std::to_string(i) + "]";
      const json& e = edges[i];
      if (!e.is_array() || e.size() != 2 || !e[0].is_number_unsigned() ||
          !e[1].is_number_unsigned()) {
        parse_fail(ectx, "expected a pair of non-negative integers");
      }
      dnn.edges.emplace_back(e[0].get<std::size_t>(), e[1].get<std::size_t>());
    }
  } else {
    dnn.edges = chain_edges(dnn.layers.size());
  }
  return dnn;
}

}  // namespace

Workload parse_workload(const std::string& text) {
  if (text.find_first_not_of(" \t\r\n") == std::string::npos) {
    parse_fail("", "empty workload document");
  }
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    parse_fail("", e.what());
  }
  if (!doc.is_object()) parse_fail("", "top level must be an object");
  reject_unknown(doc, {"dnns"}, "workload");
  if (!doc.contains("dnns")) parse_fail("workload", "missing field 'dnns'");
  if (!doc["dnns"].is_array()) parse_fail("dnns", "expected an array");
  Workload w;
  for (std::size_t i = 0; i < doc["dnns"].size(); ++i) {
    w.dnns.push_back(parse_dnn(doc["dnns"][i], "dnns[" + std::to_string(i) + "]"));
  }
  return validated(std::move(w));
}

Workload load_workload(std::istream& in) {
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_workload(buf.str());
}

Workload load_workload_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open workload file '" + path + "'");
  return load_workload(in);
}

std::string save_workload(const Workload& w) {
  json dnns = json::array();
  for (const auto& dnn : w.dnns) {
    json layers = json::array();
    for (const auto& l : dnn.layers) {
      layers.push_back({{"M", l.M}, {"N", l.N}, {"C", l.C}, {"R", l.R},
                        {"S", l.S}, {"H", l.H}, {"W", l.W}, {"P", l.P},
                        {"Q", l.Q}});
    }
    json edges = json::array();
    for (const auto& [from, to] : dnn.edges) edges.push_back({from, to});
    json d = {{"dnn_id", dnn.dnn_id},
              {"arrival_time", dnn.arrival_time},
              {"layers", layers},
              {"edges", edges}};
    if (dnn.estimated_exec) d["estimated_exec"] = *dnn.estimated_exec;
    dnns.push_back(std::move(d));
  }
  return json{{"dnns", dnns}}.dump(2) + "\n";
}

}  // namespace tenantsim
