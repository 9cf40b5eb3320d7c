// Copyright 2026 The Wayplan Authors
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// wayplan: generate corpora, solve instances, evaluate translators and serve
// the planning API. Exit status: 0 success, 1 domain error, 2 usage error.

#include <csignal>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <pthread.h>

#include "CLI11.hpp"
#include "json.hpp"
#include "wayplan/wayplan.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitDomain = 1;
constexpr int kExitUsage = 2;

using json = nlohmann::ordered_json;

// A failed step; carries what main needs to report it.
struct Failure {
  int exit_code;
  std::string kind;
  std::string message;
  std::string path;
};

struct Context {
  wp_context* ctx = nullptr;
  bool json_output = false;
  Context() { wp_context_new(&ctx); }
  ~Context() { wp_context_free(ctx); }
};

// Owns a string returned by the C API.
class Owned {
 public:
  Owned() = default;
  ~Owned() { wp_string_free(p_); }
  Owned(const Owned&) = delete;
  Owned& operator=(const Owned&) = delete;
  char** out() { return &p_; }
  std::string str() const { return p_ ? std::string(p_) : std::string(); }
  bool empty() const { return p_ == nullptr; }

 private:
  char* p_ = nullptr;
};

void Check(wp_context* ctx, wp_status status) {
  if (status == WP_OK) return;
  throw Failure{kExitDomain, wp_status_name(status), wp_last_error(ctx), wp_last_error_path(ctx)};
}

std::string ReadFile(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Failure{kExitDomain, "FileUnreadable", "cannot read '" + path + "'", path};
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void WriteFile(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  out << text;
  if (!out) throw Failure{kExitDomain, "FileUnreadable", "cannot write '" + path + "'", path};
}

// Writes to `path`, or stdout for "" and "-".
void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    if (!text.empty() && text.back() != '\n') std::cout << '\n';
  } else {
    WriteFile(path, text);
  }
}

void Summary(const Context& c, const json& j, const std::string& human) {
  if (c.json_output) {
    std::cout << j.dump() << '\n';
  } else if (!human.empty()) {
    std::cerr << human << '\n';
  }
}

// Request and inventory JSON for one corpus record.
struct Instance {
  std::string request;
  std::string inventory;
  std::string id;
  std::string text;
};

Instance FromCorpus(const std::string& path, const std::string& id, int index) {
  std::istringstream lines(ReadFile(path));
  std::string line;
  int n = 0;
  while (std::getline(lines, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error& e) {
      throw Failure{kExitDomain, "MalformedJson", e.what(), path};
    }
    const bool hit = id.empty() ? n == index : j.value("id", "") == id;
    ++n;
    if (!hit) continue;
    if (!j.contains("request") || !j.contains("inventory")) {
      throw Failure{kExitDomain, "SchemaViolation", "record lacks request or inventory", path};
    }
    return Instance{j["request"].dump(), j["inventory"].dump(), j.value("id", ""),
                    j.value("nl_text", "")};
  }
  throw Failure{kExitDomain, "InvalidArgument",
                id.empty() ? "corpus has no record " + std::to_string(index)
                           : "corpus has no record '" + id + "'",
                path};
}

// ---------------------------------------------------------------------------
// Subcommands.

struct GenArgs {
  std::int64_t count = 10;
  std::int64_t first = 0;
  std::string out;
  std::string csv;
  std::string column_map;
  double noise = 0.0;
};

int RunGen(Context& c, const GenArgs& a) {
  Owned jsonl;
  Owned report;
  if (a.csv.empty()) {
    if (!a.column_map.empty()) {
      throw Failure{kExitUsage, "Usage", "--column-map requires --csv", "--column-map"};
    }
    Check(c.ctx, wp_generate(c.ctx, a.first, a.count, a.noise, jsonl.out()));
  } else {
    const std::string map = a.column_map.empty() ? std::string() : ReadFile(a.column_map);
    Check(c.ctx, wp_generate_with_csv(c.ctx, a.first, a.count, a.noise, a.csv.c_str(),
                                      map.empty() ? nullptr : map.c_str(), jsonl.out(),
                                      report.out()));
  }
  Emit(a.out, jsonl.str());
  json j{{"command", "gen"}, {"records", a.count}, {"out", a.out.empty() ? "-" : a.out}};
  if (!report.empty()) j["csv"] = json::parse(report.str());
  Summary(c, j, a.out.empty() ? "" : "wrote " + std::to_string(a.count) + " records to " + a.out);
  return kExitOk;
}

struct SolveArgs {
  std::string data;
  std::string id;
  int index = 0;
  std::string request;
  std::string inventory;
  std::string mode;
  bool brute_force = false;
  bool verify = false;
  std::string lp;
  std::string out;
};

int RunSolve(Context& c, const SolveArgs& a) {
  Instance inst;
  if (!a.data.empty()) {
    if (!a.request.empty() || !a.inventory.empty()) {
      throw Failure{kExitUsage, "Usage", "use --data or --request/--inventory, not both", "--data"};
    }
    inst = FromCorpus(a.data, a.id, a.index);
  } else {
    if (a.request.empty() || a.inventory.empty()) {
      throw Failure{kExitUsage, "Usage", "need --data, or both --request and --inventory",
                    "--request"};
    }
    inst.request = ReadFile(a.request);
    inst.inventory = ReadFile(a.inventory);
  }
  const char* mode = a.mode.empty() ? nullptr : a.mode.c_str();
  if (!a.lp.empty()) {
    Owned lp;
    Check(c.ctx, wp_dump_lp(c.ctx, inst.request.c_str(), inst.inventory.c_str(), lp.out()));
    Emit(a.lp, lp.str());
  }
  Owned result;
  if (a.brute_force) {
    Check(c.ctx, wp_brute_force(c.ctx, inst.request.c_str(), inst.inventory.c_str(), mode,
                                result.out()));
  } else {
    Check(c.ctx, wp_solve(c.ctx, inst.request.c_str(), inst.inventory.c_str(), mode, result.out()));
  }
  json r = json::parse(result.str());
  if (a.verify && !r["itinerary"].is_null()) {
    Owned verdict;
    Check(c.ctx, wp_check(c.ctx, r["itinerary"].dump().c_str(), inst.request.c_str(),
                          inst.inventory.c_str(), verdict.out()));
    r["verdict"] = json::parse(verdict.str());
  }
  Emit(a.out, r.dump(2));
  json j{{"command", "solve"}, {"status", r["status"]}, {"objective", r["objective"]}};
  if (r.contains("verdict")) j["feasible"] = r["verdict"]["feasible"];
  std::string human = "status " + r["status"].get<std::string>();
  if (!r["objective"].is_null()) {
    human += ", objective " + std::to_string(r["objective"].get<double>() / 100.0) + " dollars";
  }
  if (!a.out.empty()) Summary(c, j, human);
  return kExitOk;
}

struct RoundTripArgs {
  std::string in;
  std::string report;
};

int RunRoundTrip(Context& c, const RoundTripArgs& a) {
  const std::string corpus = ReadFile(a.in);
  Owned report;
  Check(c.ctx, wp_roundtrip(c.ctx, corpus.c_str(), report.out()));
  Emit(a.report, report.str());
  const json r = json::parse(report.str());
  json j{{"command", "roundtrip"}, {"attempts", r["attempts"]}, {"em_rate", r["em_rate"]},
         {"valid_rate", r["valid_rate"]}};
  if (!a.report.empty()) {
    Summary(c, j, "round trip: " + std::to_string(r["exact"].get<std::int64_t>()) + "/" +
                      std::to_string(r["attempts"].get<std::int64_t>()) + " exact");
  }
  return r["exact"] == r["attempts"] ? kExitOk : kExitDomain;
}

struct EvalArgs {
  std::string data;
  std::string backend = "template";
  int subsets = 8;
  int threads = 1;
  std::string out;
  std::optional<std::string> markdown;
  bool timings = false;
  bool records = false;
};

int RunEval(Context& c, const EvalArgs& a) {
  const std::string corpus = ReadFile(a.data);
  Owned report;
  Owned markdown;
  Check(c.ctx, wp_evaluate(c.ctx, corpus.c_str(), a.backend.c_str(), a.subsets, a.threads,
                           a.timings ? 1 : 0, a.records ? 1 : 0, report.out(),
                           a.markdown ? markdown.out() : nullptr));
  Emit(a.out, report.str());
  if (a.markdown) Emit(*a.markdown, markdown.str());
  const json r = json::parse(report.str());
  json j{{"command", "eval"}, {"count", r["count"]}, {"em_accuracy", r["em_accuracy"]},
         {"valid_output_rate", r["valid_output_rate"]}, {"score", r["score"]}};
  if (!a.out.empty()) Summary(c, j, "evaluated " + std::to_string(r["count"].get<std::int64_t>()) + " records");
  return kExitOk;
}

struct ProfileArgs {
  std::string data;
  std::string id;
  int index = 0;
  std::string text;
  int repetitions = 100;
  std::string out;
};

int RunProfile(Context& c, const ProfileArgs& a) {
  const Instance inst = FromCorpus(a.data, a.id, a.index);
  std::string text = a.text.empty() ? inst.text : a.text;
  Owned rendered;
  if (text.empty()) {
    Check(c.ctx, wp_render_nl(c.ctx, inst.request.c_str(), 0, rendered.out()));
    text = rendered.str();
  }
  Owned timings;
  Check(c.ctx, wp_profile(c.ctx, text.c_str(), inst.inventory.c_str(), a.repetitions, timings.out()));
  Emit(a.out, timings.str());
  return kExitOk;
}

struct ServeArgs {
  std::optional<int> port;
  std::optional<std::string> dataset;
  bool wait_for_load = false;
};

int RunServe(Context& c, const ServeArgs& a) {
  if (a.port) Check(c.ctx, wp_config_set(c.ctx, "service.port", std::to_string(*a.port).c_str()));
  if (a.dataset) Check(c.ctx, wp_config_set(c.ctx, "service.dataset", a.dataset->c_str()));
  Check(c.ctx, wp_config_validate(c.ctx));

  // Route SIGINT/SIGTERM to a waiting thread instead of arbitrary workers.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGINT);
  sigaddset(&signals, SIGTERM);
  pthread_sigmask(SIG_BLOCK, &signals, nullptr);

  wp_service* svc = nullptr;
  Check(c.ctx, wp_service_new(c.ctx, &svc));
  std::unique_ptr<wp_service, void (*)(wp_service*)> guard(svc, wp_service_free);
  if (a.wait_for_load) Check(c.ctx, wp_service_wait_loaded(c.ctx, svc));
  int port = 0;
  Check(c.ctx, wp_service_start(c.ctx, svc, &port));

  Owned cfg;
  Check(c.ctx, wp_config_json(c.ctx, cfg.out()));
  const json config = json::parse(cfg.str());
  const std::string host = config["service"]["host"];
  Summary(c, json{{"command", "serve"}, {"host", host}, {"port", port}},
          "listening on http://" + host + ":" + std::to_string(port));
  std::cout.flush();

  std::thread waiter([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    wp_service_stop(svc);
  });
  wp_service_wait(svc);
  // Wake the waiter if the server stopped by itself.
  pthread_kill(waiter.native_handle(), SIGTERM);
  waiter.join();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Itinerary planning with an exact 0-1 solver.", "wayplan"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_version_flag("--version", std::string(wp_version()));

  std::string config_path;
  std::vector<std::string> overrides;
  std::optional<std::uint64_t> seed;
  bool json_output = false;
  app.add_option("--config", config_path, "Configuration file (key = value lines)")
      ->check(CLI::ExistingFile);
  app.add_option("--set", overrides, "Override one key, KEY=VALUE (repeatable)");
  app.add_option("--seed", seed, "Seed for generation and corruption");
  app.add_flag("--json", json_output, "Print a machine-readable summary on stdout");

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "Generate a JSON-lines corpus");
  gen_cmd->add_option("--count", gen.count, "Number of records")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--first", gen.first, "Index of the first record")->check(CLI::NonNegativeNumber);
  gen_cmd->add_option("--out", gen.out, "Output file (stdout when omitted)");
  gen_cmd->add_option("--csv", gen.csv, "Flight CSV used for decoy flights")->check(CLI::ExistingFile);
  gen_cmd->add_option("--column-map", gen.column_map, "JSON map from fields to CSV columns")
      ->check(CLI::ExistingFile);
  gen_cmd->add_option("--simulate-noise", gen.noise,
                      "Fraction of texts whose first and last dates are swapped")
      ->check(CLI::Range(0.0, 1.0));

  SolveArgs solve;
  auto* solve_cmd = app.add_subcommand("solve", "Solve one instance");
  solve_cmd->add_option("--data", solve.data, "Corpus file")->check(CLI::ExistingFile);
  solve_cmd->add_option("--id", solve.id, "Record id in the corpus");
  solve_cmd->add_option("--index", solve.index, "Record position in the corpus")
      ->check(CLI::NonNegativeNumber);
  solve_cmd->add_option("--request", solve.request, "Request JSON file")->check(CLI::ExistingFile);
  solve_cmd->add_option("--inventory", solve.inventory, "Inventory JSON file")
      ->check(CLI::ExistingFile);
  solve_cmd->add_option("--mode", solve.mode, "min_cost, better_hotel or better_flight")
      ->check(CLI::IsMember({"min_cost", "better_hotel", "better_flight"}));
  solve_cmd->add_flag("--brute-force", solve.brute_force, "Enumerate instead of branch and bound");
  solve_cmd->add_flag("--verify", solve.verify, "Replay the plan through the simulator");
  solve_cmd->add_option("--dump-lp", solve.lp, "Write the compiled model to this file");
  solve_cmd->add_option("--out", solve.out, "Result file (stdout when omitted)");

  RoundTripArgs rt;
  auto* rt_cmd = app.add_subcommand("roundtrip", "Render and re-parse every record");
  rt_cmd->add_option("--in", rt.in, "Corpus file")->required()->check(CLI::ExistingFile);
  rt_cmd->add_option("--report", rt.report, "Report file (stdout when omitted)");

  EvalArgs ev;
  auto* eval_cmd = app.add_subcommand("eval", "Evaluate a translator on a corpus");
  eval_cmd->add_option("--data", ev.data, "Corpus file")->required()->check(CLI::ExistingFile);
  eval_cmd->add_option("--backend", ev.backend,
                       "template, endpoint:URL or corrupt:FRACTION[:FIELD[:OP]]");
  eval_cmd->add_option("--subsets", ev.subsets, "Subsets for mean and std")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--threads", ev.threads, "Worker threads")->check(CLI::PositiveNumber);
  eval_cmd->add_option("--out", ev.out, "Report file (stdout when omitted)");
  eval_cmd->add_option("--emit-markdown", ev.markdown, "Also write markdown tables here")
      ->expected(0, 1)
      ->default_str("-");
  eval_cmd->add_flag("--timings", ev.timings, "Include phase timings");
  eval_cmd->add_flag("--records", ev.records, "Include per-record outcomes");

  ProfileArgs prof;
  auto* prof_cmd = app.add_subcommand("profile", "Time translation, loading and solving");
  prof_cmd->add_option("--data", prof.data, "Corpus file")->required()->check(CLI::ExistingFile);
  prof_cmd->add_option("--id", prof.id, "Record id in the corpus");
  prof_cmd->add_option("--index", prof.index, "Record position in the corpus")
      ->check(CLI::NonNegativeNumber);
  prof_cmd->add_option("--text", prof.text, "Request text (defaults to the record's)");
  prof_cmd->add_option("--repetitions", prof.repetitions, "Repetitions")->check(CLI::PositiveNumber);
  prof_cmd->add_option("--out", prof.out, "Timings file (stdout when omitted)");

  ServeArgs serve;
  auto* serve_cmd = app.add_subcommand("serve", "Serve POST /plan, POST /select and GET /health");
  serve_cmd->add_option("--port", serve.port, "Port (0 picks a free one)")->check(CLI::Range(0, 65535));
  serve_cmd->add_option("--dataset", serve.dataset, "Corpus whose inventories are served");
  serve_cmd->add_flag("--wait-for-load", serve.wait_for_load,
                      "Load the dataset before accepting connections");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  Context c;
  c.json_output = json_output;
  try {
    if (c.ctx == nullptr) throw Failure{kExitDomain, "Internal", "out of memory", ""};
    if (!config_path.empty()) Check(c.ctx, wp_config_load_file(c.ctx, config_path.c_str()));
    Check(c.ctx, wp_config_apply_env(c.ctx));
    for (const std::string& kv : overrides) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) {
        throw Failure{kExitUsage, "Usage", "--set expects KEY=VALUE, got '" + kv + "'", "--set"};
      }
      Check(c.ctx, wp_config_set(c.ctx, kv.substr(0, eq).c_str(), kv.substr(eq + 1).c_str()));
    }
    if (seed) Check(c.ctx, wp_config_set(c.ctx, "seed", std::to_string(*seed).c_str()));
    Check(c.ctx, wp_config_validate(c.ctx));

    if (*gen_cmd) return RunGen(c, gen);
    if (*solve_cmd) return RunSolve(c, solve);
    if (*rt_cmd) return RunRoundTrip(c, rt);
    if (*eval_cmd) return RunEval(c, ev);
    if (*prof_cmd) return RunProfile(c, prof);
    if (*serve_cmd) return RunServe(c, serve);
  } catch (const Failure& f) {
    if (c.json_output) {
      std::cout << json{{"error", f.kind}, {"message", f.message}, {"path", f.path}}.dump() << '\n';
    }
    std::cerr << "wayplan: " << f.kind << ": " << f.message << '\n';
    return f.exit_code;
  }
  return kExitUsage;
}
