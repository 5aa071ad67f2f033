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

#include "tenantsim/trace.hpp"

#include <cstdio>
#include <sstream>

#include "json.hpp"

namespace tenantsim {

using nlohmann::json;

std::string_view to_string(ScheduleMode mode) {
  return mode == ScheduleMode::Partitioned ? "partitioned" : "baseline";
}

ScheduleMode parse_schedule_mode(std::string_view text) {
  if (text == "partitioned") return ScheduleMode::Partitioned;
  if (text == "baseline") return ScheduleMode::Baseline;
  throw Error(ErrorKind::InvalidArgument, "unknown mode '" + std::string(text) + "'");
}

namespace {

constexpr std::pair<EventKind, std::string_view> kEventNames[] = {
    {EventKind::LayerStart, "layer_start"}, {EventKind::LayerEnd, "layer_end"},
    {EventKind::Repartition, "repartition"}, {EventKind::Merge, "merge"},
    {EventKind::DnnArrival, "dnn_arrival"}, {EventKind::DnnDone, "dnn_done"}};

}  // namespace

std::string_view to_string(EventKind kind) {
  for (const auto& [k, name] : kEventNames) {
    if (k == kind) return name;
  }
  return "?";
}

EventKind parse_event_kind(std::string_view text) {
  for (const auto& [k, name] : kEventNames) {
    if (name == text) return k;
  }
  throw Error(ErrorKind::ParseError, "unknown event kind '" + std::string(text) + "'");
}

const LayerRecord* Trace::find(const LayerRef& ref) const {
  for (const auto& r : layers) {
    if (r.layer == ref) return &r;
  }
  return nullptr;
}

std::string workload_signature(const Workload& w) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : save_workload(w)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

json activities_json(const ActivityCounts& a) {
  json j = json::object();
  const auto values = a.as_array();
  for (std::size_t i = 0; i < ActivityCounts::kFieldCount; ++i) {
    j[std::string(ActivityCounts::kFieldNames[i])] = values[i];
  }
  return j;
}

ActivityCounts activities_from(const json& j) {
  ActivityCounts a;
  a.mac_ops = j.at("mac_ops").get<std::int64_t>();
  a.lr_writes = j.at("lr_writes").get<std::int64_t>();
  a.pass_hops = j.at("pass_hops").get<std::int64_t>();
  a.feed_reads = j.at("feed_reads").get<std::int64_t>();
  a.load_reads = j.at("load_reads").get<std::int64_t>();
  a.drain_writes = j.at("drain_writes").get<std::int64_t>();
  a.drain_rmw = j.at("drain_rmw").get<std::int64_t>();
  a.dram_reads = j.at("dram_reads").get<std::int64_t>();
  a.dram_writes = j.at("dram_writes").get<std::int64_t>();
  return a;
}

json partition_json(const Partition& p) {
  json j = {{"id", p.id},
            {"col_start", p.col_start},
            {"col_width", p.col_width},
            {"state", p.busy() ? "busy" : "free"}};
  if (p.assignment) {
    j["dnn_id"] = p.assignment->dnn_id;
    j["layer_index"] = p.assignment->layer_index;
  }
  return j;
}

Partition partition_from(const json& j) {
  Partition p;
  p.id = j.at("id").get<PartitionId>();
  p.col_start = j.at("col_start").get<std::int64_t>();
  p.col_width = j.at("col_width").get<std::int64_t>();
  p.state = j.at("state").get<std::string>() == "busy" ? PartitionState::Busy
                                                        : PartitionState::Free;
  if (j.contains("dnn_id")) {
    p.assignment = LayerRef{j["dnn_id"].get<std::string>(),
                            j.at("layer_index").get<std::size_t>()};
  }
  return p;
}

}  // namespace

std::string trace_to_json(const Trace& t) {
  json events = json::array();
  for (const auto& e : t.events) {
    json j = {{"kind", to_string(e.kind)}, {"time", e.time}};
    if (e.layer) {
      j["dnn_id"] = e.layer->dnn_id;
      j["layer_index"] = e.layer->layer_index;
    } else if (!e.dnn_id.empty()) {
      j["dnn_id"] = e.dnn_id;
    }
    json parts = json::array();
    for (const auto& p : e.partitions) parts.push_back(partition_json(p));
    j["partitions"] = std::move(parts);
    events.push_back(std::move(j));
  }
  json layers = json::array();
  for (const auto& r : t.layers) {
    layers.push_back({{"dnn_id", r.layer.dnn_id},
                      {"layer_index", r.layer.layer_index},
                      {"col_start", r.col_start},
                      {"col_width", r.col_width},
                      {"n_active", r.n_active},
                      {"start", r.start},
                      {"end", r.end},
                      {"cycles", r.cycles},
                      {"activities", activities_json(r.activities)}});
  }
  json dnns = json::array();
  for (const auto& d : t.dnns) {
    dnns.push_back({{"dnn_id", d.dnn_id},
                    {"arrival", d.arrival},
                    {"first_start", d.first_start},
                    {"completion", d.completion}});
  }
  json doc = {{"mode", to_string(t.mode)},
              {"array",
               {{"rows", t.array.rows},
                {"cols", t.array.cols},
                {"feed_model", to_string(t.array.feed_model)}}},
              {"workload_signature", t.workload_signature},
              {"makespan", t.makespan},
              {"totals", activities_json(t.totals)},
              {"dnns", dnns},
              {"layers", layers},
              {"events", events}};
  return doc.dump(2) + "\n";
}

Trace trace_from_json(const std::string& text) {
  try {
    const json doc = json::parse(text);
    Trace t;
    t.mode = parse_schedule_mode(doc.at("mode").get<std::string>());
    const json& a = doc.at("array");
    t.array.rows = a.at("rows").get<std::int64_t>();
    t.array.cols = a.at("cols").get<std::int64_t>();
    t.array.feed_model = parse_feed_model(a.at("feed_model").get<std::string>());
    t.workload_signature = doc.at("workload_signature").get<std::string>();
    t.makespan = doc.at("makespan").get<Cycles>();
    t.totals = activities_from(doc.at("totals"));
    for (const auto& d : doc.at("dnns")) {
      t.dnns.push_back(DnnRecord{d.at("dnn_id").get<std::string>(),
                                 d.at("arrival").get<Cycles>(),
                                 d.at("first_start").get<Cycles>(),
                                 d.at("completion").get<Cycles>()});
    }
    for (const auto& r : doc.at("layers")) {
      LayerRecord rec;
      rec.layer = LayerRef{r.at("dnn_id").get<std::string>(),
                           r.at("layer_index").get<std::size_t>()};
      rec.col_start = r.at("col_start").get<std::int64_t>();
      rec.col_width = r.at("col_width").get<std::int64_t>();
      rec.n_active = r.at("n_active").get<std::int64_t>();
      rec.start = r.at("start").get<Cycles>();
      rec.end = r.at("end").get<Cycles>();
      rec.cycles = r.at("cycles").get<Cycles>();
      rec.activities = activities_from(r.at("activities"));
      t.layers.push_back(std::move(rec));
    }
    for (const auto& e : doc.at("events")) {
      ScheduleEvent ev;
      ev.kind = parse_event_kind(e.at("kind").get<std::string>());
      ev.time = e.at("time").get<Cycles>();
      if (e.contains("layer_index")) {
        ev.layer = LayerRef{e.at("dnn_id").get<std::string>(),
                            e.at("layer_index").get<std::size_t>()};
      } else if (e.contains("dnn_id")) {
        ev.dnn_id = e["dnn_id"].get<std::string>();
      }
      for (const auto& p : e.at("partitions")) ev.partitions.push_back(partition_from(p));
      t.events.push_back(std::move(ev));
    }
    return t;
  } catch (const json::exception& e) {
    throw Error(ErrorKind::ParseError, std::string("trace: ") + e.what());
  }
}

std::string trace_to_csv(const Trace& t) {
  std::ostringstream out;
  out << "dnn_id,layer_index,col_start,col_width,n_active,start,end,cycles";
  for (auto name : ActivityCounts::kFieldNames) out << ',' << name;
  out << '\n';
  for (const auto& r : t.layers) {
    out << r.layer.dnn_id << ',' << r.layer.layer_index << ',' << r.col_start << ','
        << r.col_width << ',' << r.n_active << ',' << r.start << ',' << r.end << ','
        << r.cycles;
    for (auto v : r.activities.as_array()) out << ',' << v;
    out << '\n';
  }
  return out.str();
}

}  // namespace tenantsim
