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

#include "wayplan/service.hpp"

#include <chrono>
#include <ctime>
#include <fstream>
#include <set>

#include <fmt/chrono.h>
#include <fmt/format.h>

#include "hash.hpp"
#include "httplib.h"
#include "wayplan/datagen.hpp"
#include "wayplan/error.hpp"
#include "wayplan/milp.hpp"
#include "wayplan/simulate.hpp"
#include "wayplan/solver.hpp"

namespace wayplan {
namespace {

using oj = nlohmann::ordered_json;

double MillisSince(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start)
      .count();
}

std::string UtcNow() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  return fmt::format("{:%Y-%m-%dT%H:%M:%SZ}", fmt::gmtime(now));
}

HttpReply ErrorReply(int status, std::string_view error, const std::string& message,
                     const std::string& path = {}, const std::optional<TextSpan>& span = {}) {
  HttpReply r;
  r.status = status;
  r.body["error"] = error;
  r.body["message"] = message;
  if (!path.empty()) r.body["path"] = path;
  if (span) r.body["span"] = {{"begin", span->begin}, {"end", span->end}};
  return r;
}

HttpReply ErrorReply(int status, const Error& e) {
  return ErrorReply(status, ErrorCodeName(e.code()), e.what(), e.path(), e.span());
}

bool RouteMatches(const FlightOption& f, const TripLeg& leg) {
  return f.origin == leg.origin && f.destination == leg.destination &&
         f.departure.date() == leg.date;
}

// Why an instance has no itinerary, most specific cause first.
std::string InfeasibilityReason(const SymbolicRequest& request, const Inventory& candidates,
                                const ModelParams& params) {
  const Inventory kept = PrefilterOptions(request, candidates, params);
  for (std::size_t k = 0; k < request.legs.size(); ++k) {
    const TripLeg& leg = request.legs[k];
    auto count = [&](const Inventory& inv) {
      return std::count_if(inv.flights.begin(), inv.flights.end(),
                           [&](const FlightOption& f) { return RouteMatches(f, leg); });
    };
    if (count(candidates) == 0) {
      return fmt::format("no flight from {} to {} on {} in the inventory", leg.origin,
                         leg.destination, leg.date.ToString());
    }
    if (count(kept) == 0) {
      return fmt::format("no flight for leg {} ({} to {}) meets the airline requirements", k + 1,
                         leg.origin, leg.destination);
    }
  }
  for (const Stay& stay : StaysOf(request)) {
    if (stay.nights() <= 0) continue;
    auto count = [&](const Inventory& inv) {
      return std::count_if(inv.hotels.begin(), inv.hotels.end(), [&](const HotelOption& h) {
        return h.city == stay.city && h.CoversNights(stay.first_night, stay.end);
      });
    };
    if (count(candidates) == 0) {
      return fmt::format("no hotel in {} is available for nights {} to {}", stay.city,
                         stay.first_night.ToString(), (stay.end - 1).ToString());
    }
    if (count(kept) == 0) {
      return fmt::format("no hotel in {} meets the hotel requirements", stay.city);
    }
  }
  return "no combination of the remaining flights and hotels meets the budget and schedule "
         "constraints together";
}

oj StatsToJson(const SolveStats& s) {
  oj j;
  j["nodes"] = s.nodes;
  j["propagations"] = s.propagations;
  j["load_ms"] = s.load_ms;
  j["search_ms"] = s.search_ms;
  j["wall_ms"] = s.wall_ms;
  return j;
}

}  // namespace

Inventory PoolInventory(const std::vector<DatasetRecord>& records) {
  Inventory pool;
  for (const DatasetRecord& r : records) {
    for (FlightOption f : r.inventory.flights) {
      f.id = r.id + "/" + f.id;
      pool.flights.push_back(std::move(f));
    }
    for (HotelOption h : r.inventory.hotels) {
      h.id = r.id + "/" + h.id;
      pool.hotels.push_back(std::move(h));
    }
  }
  return pool;
}

Inventory CandidatesFor(const SymbolicRequest& request, const Inventory& pool,
                        const ModelParams& params, int* dropped) {
  const TimeGrid grid = BuildTimeGrid(request, params.grid);
  Inventory out;
  int off_grid = 0;
  for (const FlightOption& f : pool.flights) {
    const bool on_route = std::any_of(request.legs.begin(), request.legs.end(),
                                      [&](const TripLeg& leg) { return RouteMatches(f, leg); });
    if (!on_route) continue;
    if (!FitsGrid(FlightSlotsOf(f, grid), grid)) {
      ++off_grid;
      continue;
    }
    out.flights.push_back(f);
  }
  const std::vector<std::string> cities = CitiesOf(request);
  const std::set<std::string> city_set(cities.begin(), cities.end());
  for (const HotelOption& h : pool.hotels) {
    if (city_set.contains(h.city)) out.hotels.push_back(h);
  }
  if (dropped != nullptr) *dropped = off_grid;
  return out;
}

PlanService::PlanService(Config config, Transport* transport)
    : config_(std::move(config)), transport_(transport) {
  ValidateConfig(config_);
  if (config_.service.inventory == "generated") {
    state_ = LoadState::kReady;
    inventory_ = std::make_shared<Inventory>();
  }
}

PlanService::~PlanService() {
  if (loader_.joinable()) loader_.join();
}

void PlanService::LoadInventory() {
  if (config_.service.inventory == "generated") return;
  try {
    if (config_.service.dataset.empty()) {
      throw Error(ErrorCode::kInvalidConfig, "service.dataset is not set", "service.dataset");
    }
    const std::vector<DatasetRecord> records = ReadJsonl(config_.service.dataset);
    auto pool = std::make_shared<Inventory>(PoolInventory(records));
    std::lock_guard lock(load_mu_);
    records_ = static_cast<std::int64_t>(records.size());
    inventory_ = std::move(pool);
    state_ = LoadState::kReady;
  } catch (const Error& e) {
    std::lock_guard lock(load_mu_);
    state_ = LoadState::kFailed;
    load_error_ = e;
    throw;
  }
}

void PlanService::StartBackgroundLoad() {
  loader_ = std::thread([this] {
    try {
      LoadInventory();
    } catch (const Error&) {
      // Recorded in the load state.
    }
  });
}

void PlanService::WaitUntilLoaded() {
  if (loader_.joinable()) loader_.join();
}

std::optional<Error> PlanService::LoadFailure() const {
  std::lock_guard lock(load_mu_);
  return load_error_;
}

void PlanService::SetInventory(Inventory inventory) {
  std::lock_guard lock(load_mu_);
  records_ = 1;
  inventory_ = std::make_shared<Inventory>(std::move(inventory));
  state_ = LoadState::kReady;
}

HttpReply PlanService::Health() const {
  std::lock_guard lock(load_mu_);
  HttpReply r;
  switch (state_) {
    case LoadState::kLoading:
      r.status = 503;
      r.body["status"] = "loading";
      break;
    case LoadState::kReady:
      r.body["status"] = "ok";
      break;
    case LoadState::kFailed:
      r.status = 503;
      r.body["status"] = "error";
      r.body["error"] = load_error_ ? load_error_->what() : "";
      break;
  }
  r.body["records"] = records_;
  r.body["flights"] = inventory_ ? inventory_->flights.size() : 0;
  r.body["hotels"] = inventory_ ? inventory_->hotels.size() : 0;
  r.body["build"] = {{"name", "wayplan"},
                     {"version", "0.1.0"},
                     {"compiler", __VERSION__},
                     {"translator", config_.translator},
                     {"inventory", config_.service.inventory}};
  return r;
}

oj PlanService::SolveOption(const SymbolicRequest& request, const Inventory& candidates,
                            ObjectiveMode mode, int* http_status) const {
  ModelParams params = config_.model;
  params.mode = mode;
  oj out;
  InstanceResult s;
  try {
    s = SolveInstance(request, candidates, params, config_.solver);
  } catch (const Error& e) {
    *http_status = 400;
    out["status"] = "error";
    out["http_status"] = *http_status;
    out["error"] = ErrorCodeName(e.code());
    out["reason"] = e.what();
    return out;
  }
  out["status"] = SolveStatusName(s.result.status);
  switch (s.result.status) {
    case SolveStatus::kOptimal: {
      // Nothing leaves the service without passing the simulator.
      const Verdict v = CheckFeasible(*s.itinerary, request, candidates, params);
      if (!v.feasible()) {
        *http_status = 500;
        out["status"] = "unverified";
        out["reason"] = "solver output failed independent verification";
        out["violations"] = v.Codes();
        break;
      }
      *http_status = 200;
      out["objective"] = *s.result.objective;
      out["cost"] = CostToJson(s.itinerary->cost);
      out["itinerary"] = ItineraryToJson(*s.itinerary, &candidates);
      break;
    }
    case SolveStatus::kInfeasible:
      *http_status = 200;
      out["reason"] = InfeasibilityReason(request, candidates, params);
      break;
    case SolveStatus::kTimeLimit:
      *http_status = 504;
      out["reason"] = fmt::format("solver stopped at its limit ({} ms, {} nodes)",
                                  config_.solver.time_limit_ms, s.result.stats.nodes);
      break;
  }
  out["http_status"] = *http_status;
  out["stats"] = StatsToJson(s.result.stats);
  return out;
}

std::string PlanService::NewSessionId(const std::string& body) {
  std::lock_guard lock(session_mu_);
  const std::uint64_t n = ++session_counter_;
  const auto now = static_cast<std::uint64_t>(
      std::chrono::steady_clock::now().time_since_epoch().count());
  return fmt::format("{:016x}", SplitMix(n ^ SplitMix(Fnv1a(body) ^ now)));
}

void PlanService::LogEvent(const oj& event) {
  if (config_.service.session_log.empty()) return;
  std::ofstream out(config_.service.session_log, std::ios::app | std::ios::binary);
  out << event.dump() << '\n';
}

HttpReply PlanService::Plan(const std::string& body) {
  const auto start = std::chrono::steady_clock::now();
  std::shared_ptr<const Inventory> pool;
  {
    std::lock_guard lock(load_mu_);
    if (state_ != LoadState::kReady) {
      return ErrorReply(503, state_ == LoadState::kLoading ? "Loading" : "InventoryUnavailable",
                        state_ == LoadState::kLoading ? std::string("inventory is still loading")
                                                    : std::string(load_error_->what()));
    }
    pool = inventory_;
  }

  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return ErrorReply(400, "MalformedJson", e.what());
  }
  const bool has_text = parsed.is_object() && parsed.contains("text");
  const bool has_request = parsed.is_object() && parsed.contains("request");
  if (!parsed.is_object() || has_text == has_request || parsed.size() != 1) {
    return ErrorReply(400, "UnparsableRequest",
                      "body must be an object with exactly one of 'text' or 'request'");
  }

  oj response;
  oj timings;
  SymbolicRequest request;
  if (has_text) {
    if (!parsed["text"].is_string()) return ErrorReply(400, "UnparsableRequest", "'text' must be a string", "/text");
    const auto t0 = std::chrono::steady_clock::now();
    try {
      const Translation t =
          Translate(parsed["text"].get<std::string>(), BackendOf(config_), transport_);
      request = t.request;
      response["translation"] = {{"backend", config_.translator},
                                 {"valid_json", t.valid_json},
                                 {"attempts", t.attempts}};
    } catch (const Error& e) {
      if (e.code() == ErrorCode::kEndpointUnreachable ||
          e.code() == ErrorCode::kInvalidOutputAfterRetries) {
        HttpReply r = ErrorReply(422, e);
        r.body["error"] = "TranslationFailed";
        r.body["cause"] = ErrorCodeName(e.code());
        return r;
      }
      HttpReply r = ErrorReply(400, e);
      r.body["error"] = "UnparsableRequest";
      r.body["cause"] = ErrorCodeName(e.code());
      return r;
    }
    timings["translate_ms"] = MillisSince(t0);
  } else {
    try {
      request = RequestFromJson(parsed["request"], "/request");
    } catch (const Error& e) {
      HttpReply r = ErrorReply(400, e);
      r.body["error"] = "UnparsableRequest";
      r.body["cause"] = ErrorCodeName(e.code());
      return r;
    }
  }

  const auto t_candidates = std::chrono::steady_clock::now();
  Inventory candidates;
  int dropped = 0;
  try {
    if (config_.service.inventory == "generated") {
      GenParams gen = config_.gen;
      gen.rng_seed = config_.seed;
      candidates = CandidatesFor(request, GenInventory(gen, request), config_.model, &dropped);
    } else {
      candidates = CandidatesFor(request, *pool, config_.model, &dropped);
    }
  } catch (const Error& e) {
    HttpReply r = ErrorReply(400, e);
    r.body["error"] = "UnparsableRequest";
    r.body["cause"] = ErrorCodeName(e.code());
    return r;
  }
  timings["candidates_ms"] = MillisSince(t_candidates);

  constexpr std::array<ObjectiveMode, 3> kModes = {
      ObjectiveMode::kMinCost, ObjectiveMode::kBetterHotel, ObjectiveMode::kBetterFlight};
  std::array<oj, 3> options;
  std::array<int, 3> statuses{};
  std::array<double, 3> option_ms{};
  auto run = [&](std::size_t i) {
    const auto t0 = std::chrono::steady_clock::now();
    options[i] = SolveOption(request, candidates, kModes[i], &statuses[i]);
    option_ms[i] = MillisSince(t0);
  };
  if (config_.service.parallel_modes) {
    std::vector<std::thread> workers;
    for (std::size_t i = 0; i < kModes.size(); ++i) workers.emplace_back(run, i);
    for (auto& w : workers) w.join();
  } else {
    for (std::size_t i = 0; i < kModes.size(); ++i) run(i);
  }

  const std::string session_id = NewSessionId(body);
  Session session;
  session.request = request;
  oj option_json;
  oj option_timings;
  for (std::size_t i = 0; i < kModes.size(); ++i) {
    option_json[kPlanOptionKeys[i]] = options[i];
    option_timings[kPlanOptionKeys[i]] = option_ms[i];
    session.feasible[kPlanOptionKeys[i]] = options[i].contains("itinerary");
  }
  timings["options_ms"] = option_timings;
  timings["total_ms"] = MillisSince(start);

  response["session_id"] = session_id;
  response["request_echo"] = RequestToJson(request);
  response["candidates"] = {{"flights", candidates.flights.size()},
                            {"hotels", candidates.hotels.size()},
                            {"dropped_off_grid", dropped}};
  response["options"] = option_json;
  response["timings"] = timings;

  oj event;
  event["event"] = "plan";
  event["time"] = UtcNow();
  event["session_id"] = session_id;
  event["request"] = RequestToJson(request);
  oj status_map;
  for (std::size_t i = 0; i < kModes.size(); ++i) status_map[kPlanOptionKeys[i]] = options[i]["status"];
  event["options"] = status_map;
  {
    std::lock_guard lock(session_mu_);
    sessions_.emplace(session_id, std::move(session));
    LogEvent(event);
  }
  return HttpReply{200, std::move(response)};
}

HttpReply PlanService::Select(const std::string& body) {
  nlohmann::json parsed;
  try {
    parsed = nlohmann::json::parse(body);
  } catch (const nlohmann::json::parse_error& e) {
    return ErrorReply(400, "MalformedJson", e.what());
  }
  if (!parsed.is_object() || !parsed.contains("session_id") || !parsed.contains("option") ||
      !parsed["session_id"].is_string() || !parsed["option"].is_string() || parsed.size() != 2) {
    return ErrorReply(400, "UnparsableRequest",
                      "body must be {\"session_id\": string, \"option\": string}");
  }
  const std::string id = parsed["session_id"].get<std::string>();
  const std::string key = parsed["option"].get<std::string>();
  if (std::find_if(kPlanOptionKeys.begin(), kPlanOptionKeys.end(),
                   [&](const char* k) { return key == k; }) == kPlanOptionKeys.end()) {
    return ErrorReply(400, "UnknownOption",
                      fmt::format("option must be min_cost, better_hotel or better_flight"),
                      "/option");
  }
  std::lock_guard lock(session_mu_);
  const auto it = sessions_.find(id);
  if (it == sessions_.end()) {
    return ErrorReply(404, "UnknownSession", fmt::format("no session '{}'", id), "/session_id");
  }
  Session& s = it->second;
  if (!s.feasible[key]) {
    return ErrorReply(409, "OptionNotSelectable",
                      fmt::format("option {} has no itinerary to select", key), "/option");
  }
  if (s.selection && (*s.selection)["option"] == key) return HttpReply{200, *s.selection};
  oj ack;
  ack["session_id"] = id;
  ack["option"] = key;
  ack["status"] = "selected";
  ack["selected_at"] = UtcNow();
  s.selection = ack;
  oj event = ack;
  event["event"] = "select";
  LogEvent(event);
  return HttpReply{200, ack};
}

struct HttpServer::Impl {
  PlanService& service;
  httplib::Server server;
  std::thread thread;
  explicit Impl(PlanService& s) : service(s) {}
};

HttpServer::HttpServer(PlanService& service) : impl_(std::make_unique<Impl>(service)) {
  httplib::Server& svr = impl_->server;
  const int threads = service.config().service.threads;
  svr.new_task_queue = [threads] { return new httplib::ThreadPool(static_cast<size_t>(threads)); };
  auto send = [](httplib::Response& res, const HttpReply& reply) {
    res.status = reply.status;
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_content(reply.body.dump(), "application/json");
  };
  PlanService* s = &service;
  svr.Post("/plan", [s, send](const httplib::Request& req, httplib::Response& res) {
    send(res, s->Plan(req.body));
  });
  svr.Post("/select", [s, send](const httplib::Request& req, httplib::Response& res) {
    send(res, s->Select(req.body));
  });
  svr.Get("/health", [s, send](const httplib::Request&, httplib::Response& res) {
    send(res, s->Health());
  });
  svr.Options(R"(/.*)", [](const httplib::Request&, httplib::Response& res) {
    res.set_header("Access-Control-Allow-Origin", "*");
    res.set_header("Access-Control-Allow-Methods", "GET, POST, OPTIONS");
    res.set_header("Access-Control-Allow-Headers", "Content-Type");
    res.status = 204;
  });
}

HttpServer::~HttpServer() {
  Stop();
  Wait();
}

int HttpServer::Start(const std::string& host, int port) {
  httplib::Server& svr = impl_->server;
  int bound = port;
  if (port == 0) {
    bound = svr.bind_to_any_port(host);
  } else if (!svr.bind_to_port(host, port)) {
    bound = -1;
  }
  if (bound < 0) {
    throw Error(ErrorCode::kInvalidConfig, fmt::format("cannot bind {}:{}", host, port),
                "service.port");
  }
  impl_->thread = std::thread([&svr] { svr.listen_after_bind(); });
  // stop() is ignored until the listener is up, so don't hand out the port early.
  svr.wait_until_ready();
  return bound;
}

void HttpServer::Wait() {
  if (impl_->thread.joinable()) impl_->thread.join();
}

void HttpServer::Stop() { impl_->server.stop(); }

}  // namespace wayplan
