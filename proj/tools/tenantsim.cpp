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

// Command-line front end for the multi-tenant systolic array simulator.
//
//   tenantsim run      --workload W [--mode M] [--out trace.json] [--report r.csv]
//   tenantsim compare  --workload W [--out cmp.json] [--report cmp.csv]
//   tenantsim validate --workload W
//   tenantsim gantt    (--trace T | --workload W) [--out gantt.svg]
//
// Exit codes: 0 success, 1 invalid input or failed run, 2 usage error.

#include <cstdlib>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>

#include <spdlog/sinks/stdout_color_sinks.h>
#include <spdlog/spdlog.h>

#include "CLI11.hpp"
#include "tenantsim/engine.hpp"
#include "tenantsim/gantt.hpp"
#include "tenantsim/workload.hpp"

namespace {

using namespace tenantsim;

struct Options {
  std::string workload;
  std::string trace;
  std::int64_t rows = 16;
  std::int64_t cols = 16;
  std::string mode = "partitioned";
  std::string fidelity = "analytical";
  std::string feed_model = "independent";
  std::string energy_table;
  std::uint64_t seed = 1;
  std::string out;
  std::string report;
  std::string gantt;
  std::string pe_trace;
};

void setup_logging() {
  auto logger = spdlog::stderr_color_mt("tenantsim");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  spdlog::set_level(spdlog::level::warn);
  if (const char* env = std::getenv("TENANTSIM_LOG")) {
    spdlog::set_level(spdlog::level::from_str(env));
  }
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::InvalidArgument, "cannot write '" + path + "'");
  out << content;
  spdlog::info("wrote {}", path);
}

bool is_csv(const std::string& path) {
  return path.size() >= 4 && path.compare(path.size() - 4, 4, ".csv") == 0;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorKind::ParseError, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

RunConfig run_config(const Options& o) {
  RunConfig rc;
  rc.array = ArrayConfig{o.rows, o.cols, parse_feed_model(o.feed_model)};
  rc.mode = parse_schedule_mode(o.mode);
  rc.fidelity = parse_fidelity(o.fidelity);
  rc.seed = o.seed;
  if (!o.energy_table.empty()) rc.energy_table = load_energy_table_file(o.energy_table);
  return rc;
}

void add_sim_flags(CLI::App* cmd, Options& o) {
  cmd->add_option("--workload", o.workload, "Workload JSON file")->required();
  cmd->add_option("--rows", o.rows, "PE rows")->check(CLI::PositiveNumber);
  cmd->add_option("--cols", o.cols, "PE columns")->check(CLI::PositiveNumber);
  cmd->add_option("--fidelity", o.fidelity, "analytical|functional")
      ->check(CLI::IsMember({"analytical", "functional"}));
  cmd->add_option("--feed-model", o.feed_model, "independent|interleaved")
      ->check(CLI::IsMember({"independent", "interleaved"}));
  cmd->add_option("--energy-table", o.energy_table, "Energy table JSON file");
  cmd->add_option("--seed", o.seed, "Seed for synthetic tensors");
}

int cmd_run(const Options& o) {
  const Workload w = load_workload_file(o.workload);
  const RunConfig rc = run_config(o);
  spdlog::info("running {} layers on {}x{} ({}, {})", w.total_layers(), o.rows, o.cols,
               o.mode, o.fidelity);
  const RunResult r = execute(rc, w);
  write_output(o.out, trace_to_json(r.trace));
  if (!o.report.empty()) {
    write_output(o.report, is_csv(o.report) ? report_to_csv(r) : report_to_json(r));
  }
  if (!o.gantt.empty()) write_output(o.gantt, render_gantt(r.trace));
  if (!o.pe_trace.empty()) {
    std::ostringstream csv;
    write_trace_csv(csv, replay_pe_events(r.trace, w, rc.seed));
    write_output(o.pe_trace, csv.str());
  }
  spdlog::info("makespan {} cycles, energy {} pJ", r.trace.makespan,
               r.total_energy.to_string());
  return 0;
}

int cmd_compare(const Options& o) {
  const Workload w = load_workload_file(o.workload);
  RunConfig base = run_config(o);
  base.mode = ScheduleMode::Baseline;
  RunConfig part = base;
  part.mode = ScheduleMode::Partitioned;
  // The two runs share nothing, so they can proceed side by side.
  auto baseline = std::async(std::launch::async, [&] { return execute(base, w); });
  const RunResult partitioned = execute(part, w);
  const RunResult b = baseline.get();
  const ComparisonReport c = compare(b, partitioned);
  write_output(o.out, comparison_to_json(c));
  if (!o.report.empty()) {
    write_output(o.report, is_csv(o.report) ? comparison_to_csv(c) : comparison_to_json(c));
  }
  if (!o.gantt.empty()) write_output(o.gantt, render_gantt(partitioned.trace));
  spdlog::info("time improvement {:.4f}, energy improvement {:.4f}", c.time_improvement,
               c.energy_improvement);
  return 0;
}

int cmd_validate(const Options& o) {
  const Workload w = load_workload_file(o.workload);
  std::cout << "ok: " << w.dnns.size() << " DNNs, " << w.total_layers() << " layers\n";
  return 0;
}

int cmd_gantt(const Options& o) {
  Trace trace;
  if (!o.trace.empty()) {
    trace = trace_from_json(read_file(o.trace));
  } else if (!o.workload.empty()) {
    trace = execute(run_config(o), load_workload_file(o.workload)).trace;
  } else {
    throw CLI::RequiredError("--trace or --workload");
  }
  write_output(o.out, render_gantt(trace));
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  setup_logging();
  Options o;
  CLI::App app{"Multi-tenant weight-stationary systolic array simulator", "tenantsim"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Schedule and simulate a workload");
  add_sim_flags(run, o);
  run->add_option("--mode", o.mode, "partitioned|baseline")
      ->check(CLI::IsMember({"partitioned", "baseline"}));
  run->add_option("--out", o.out, "Trace JSON output (default stdout)");
  run->add_option("--report", o.report, "Energy report (.csv or .json)");
  run->add_option("--gantt", o.gantt, "Gantt SVG output");
  run->add_option("--pe-trace", o.pe_trace, "Per-cycle PE event CSV (replays on the PE array)");

  auto* cmp = app.add_subcommand("compare", "Compare partitioned against baseline");
  add_sim_flags(cmp, o);
  cmp->add_option("--out", o.out, "Comparison JSON output (default stdout)");
  cmp->add_option("--report", o.report, "Comparison report (.csv or .json)");
  cmp->add_option("--gantt", o.gantt, "Gantt SVG of the partitioned run");

  auto* val = app.add_subcommand("validate", "Check a workload file");
  val->add_option("--workload", o.workload, "Workload JSON file")->required();

  auto* gantt = app.add_subcommand("gantt", "Render a schedule as SVG");
  gantt->add_option("--trace", o.trace, "Trace JSON produced by `run`");
  gantt->add_option("--workload", o.workload, "Workload to simulate instead of --trace");
  gantt->add_option("--rows", o.rows, "PE rows")->check(CLI::PositiveNumber);
  gantt->add_option("--cols", o.cols, "PE columns")->check(CLI::PositiveNumber);
  gantt->add_option("--mode", o.mode, "partitioned|baseline")
      ->check(CLI::IsMember({"partitioned", "baseline"}));
  gantt->add_option("--feed-model", o.feed_model, "independent|interleaved")
      ->check(CLI::IsMember({"independent", "interleaved"}));
  gantt->add_option("--out", o.out, "SVG output (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e, std::cerr, std::cerr);
    std::cerr << app.help();
    return 2;
  }

  try {
    if (*run) return cmd_run(o);
    if (*cmp) return cmd_compare(o);
    if (*val) return cmd_validate(o);
    if (*gantt) return cmd_gantt(o);
  } catch (const CLI::RequiredError& e) {
    std::cerr << "error: " << e.what() << " is required\n" << gantt->help();
    return 2;
  } catch (const ValidationError& e) {
    spdlog::error("{}", e.what());
    return 1;
  } catch (const Error& e) {
    spdlog::error("{}: {}", to_string(e.kind()), e.what());
    return 1;
  }
  return 2;
}
