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

#ifndef WAYPLAN_SERVICE_HPP_
#define WAYPLAN_SERVICE_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <thread>

#include "json.hpp"
#include "wayplan/config.hpp"
#include "wayplan/dataset.hpp"
#include "wayplan/error.hpp"
#include "wayplan/inventory.hpp"
#include "wayplan/nl_bridge.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

// Option keys of a plan response, in response order.
inline constexpr std::array<const char*, 3> kPlanOptionKeys = {"min_cost", "better_hotel",
                                                               "better_flight"};

struct HttpReply {
  int status = 200;
  nlohmann::ordered_json body;
};

// Merges every record inventory of a corpus; ids become "{record}/{item}".
Inventory PoolInventory(const std::vector<DatasetRecord>& records);

// Flights on the request's routes and dates that fit its grid, plus hotels in
// its cities. `dropped` counts route-matching flights that overrun the grid.
Inventory CandidatesFor(const SymbolicRequest& request, const Inventory& pool,
                        const ModelParams& params, int* dropped = nullptr);

// Request handling without sockets. Thread-safe: handlers may run
// concurrently; only the session store is shared mutable state.
class PlanService {
 public:
  // `transport` is used by an external translator; null means HTTP.
  explicit PlanService(Config config, Transport* transport = nullptr);
  ~PlanService();

  PlanService(const PlanService&) = delete;
  PlanService& operator=(const PlanService&) = delete;

  // Loads the configured dataset. Throws FileUnreadable and the dataset's
  // parse errors; the service then reports "error" on /health.
  void LoadInventory();
  // Same, on a background thread; /health reports "loading" meanwhile.
  void StartBackgroundLoad();
  // Test hook: installs an inventory directly.
  void SetInventory(Inventory inventory);
  void WaitUntilLoaded();
  // The error that stopped loading, if any.
  std::optional<Error> LoadFailure() const;

  HttpReply Plan(const std::string& body);
  HttpReply Select(const std::string& body);
  HttpReply Health() const;

  const Config& config() const { return config_; }

 private:
  struct Session {
    SymbolicRequest request;
    std::map<std::string, bool> feasible;  // option key -> has itinerary
    std::optional<nlohmann::ordered_json> selection;
  };

  enum class LoadState { kLoading, kReady, kFailed };

  nlohmann::ordered_json SolveOption(const SymbolicRequest& request, const Inventory& candidates,
                                     ObjectiveMode mode, int* http_status) const;
  std::string NewSessionId(const std::string& body);
  void LogEvent(const nlohmann::ordered_json& event);

  Config config_;
  Transport* transport_;

  mutable std::mutex load_mu_;
  LoadState state_ = LoadState::kLoading;
  std::optional<Error> load_error_;
  std::int64_t records_ = 0;
  std::shared_ptr<const Inventory> inventory_;
  std::thread loader_;

  std::mutex session_mu_;
  std::map<std::string, Session> sessions_;
  std::uint64_t session_counter_ = 0;
};

// HTTP front end over a PlanService.
class HttpServer {
 public:
  explicit HttpServer(PlanService& service);
  ~HttpServer();

  // Binds host:port (port 0 picks a free one) and serves on a background
  // thread. Returns the bound port; throws InvalidConfig when binding fails.
  int Start(const std::string& host, int port);
  // Blocks until the server stops.
  void Wait();
  // Asks the server to stop; returns without waiting.
  void Stop();

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace wayplan

#endif  // WAYPLAN_SERVICE_HPP_
