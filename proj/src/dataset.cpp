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

#include "wayplan/dataset.hpp"

#include <fstream>
#include <sstream>
#include <utility>

#include <fmt/format.h>

#include "hash.hpp"
#include "json_read.hpp"
#include "wayplan/error.hpp"
#include "wayplan/nl_bridge.hpp"

namespace wayplan {

namespace jr = json_read;

nlohmann::ordered_json RecordToJson(const DatasetRecord& record) {
  nlohmann::ordered_json j;
  j["id"] = record.id;
  j["request"] = RequestToJson(record.request);
  j["inventory"] = InventoryToJson(record.inventory);
  if (!record.nl_text.empty()) j["nl_text"] = record.nl_text;
  j["variant_seed"] = record.variant_seed;
  return j;
}

DatasetRecord RecordFromJson(const nlohmann::json& j, const std::string& path) {
  jr::Object(j, path, {"id", "request", "inventory", "nl_text", "variant_seed"});
  DatasetRecord r;
  r.id = jr::String(jr::Require(j, "id", path), jr::Child(path, "id"));
  r.request = RequestFromJson(jr::Require(j, "request", path), jr::Child(path, "request"));
  r.inventory = InventoryFromJson(jr::Require(j, "inventory", path), jr::Child(path, "inventory"));
  if (const auto* t = jr::Find(j, "nl_text")) r.nl_text = jr::String(*t, jr::Child(path, "nl_text"));
  if (const auto* s = jr::Find(j, "variant_seed")) {
    const std::int64_t seed = jr::Integer(*s, jr::Child(path, "variant_seed"));
    if (seed < 0) jr::Fail(jr::Child(path, "variant_seed"), "must be >= 0");
    r.variant_seed = static_cast<std::uint64_t>(seed);
  }
  return r;
}

std::string RecordsToJsonl(const std::vector<DatasetRecord>& records) {
  std::string out;
  for (const DatasetRecord& r : records) {
    out += RecordToJson(r).dump();
    out += '\n';
  }
  return out;
}

std::vector<DatasetRecord> RecordsFromJsonl(std::string_view text) {
  std::vector<DatasetRecord> out;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    const std::string where = fmt::format("line {}", line_no);
    try {
      out.push_back(RecordFromJson(jr::ParseText(line)));
    } catch (const Error& e) {
      throw Error(e.code(), fmt::format("{}: {}", where, e.what()), where + e.path(), e.span());
    }
  }
  return out;
}

void WriteJsonl(const std::string& path, const std::vector<DatasetRecord>& records) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::kFileUnreadable, "cannot write '" + path + "'");
  out << RecordsToJsonl(records);
  if (!out) throw Error(ErrorCode::kFileUnreadable, "write failed for '" + path + "'");
}

std::vector<DatasetRecord> ReadJsonl(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::kFileUnreadable, "cannot read '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return RecordsFromJsonl(buffer.str());
}

void ValidateDatasetOptions(const DatasetOptions& options) {
  if (options.count < 0) throw Error(ErrorCode::kInvalidArgument, "count must be >= 0", "count");
  if (options.first_index < 0) {
    throw Error(ErrorCode::kInvalidArgument, "first_index must be >= 0", "first_index");
  }
  if (!(options.date_swap_fraction >= 0.0 && options.date_swap_fraction <= 1.0)) {
    throw Error(ErrorCode::kInvalidArgument, "date_swap_fraction must be in [0, 1]",
                "date_swap_fraction");
  }
}

SymbolicRequest SwapFirstLastDates(const SymbolicRequest& request) {
  SymbolicRequest out = request;
  if (out.legs.size() >= 2) std::swap(out.legs.front().date, out.legs.back().date);
  return out;
}

std::vector<DatasetRecord> GenerateDataset(const GenParams& params,
                                           const DatasetOptions& options) {
  ValidateGenParams(params);
  ValidateDatasetOptions(options);
  std::vector<DatasetRecord> out;
  out.reserve(static_cast<std::size_t>(options.count));
  for (std::int64_t i = 0; i < options.count; ++i) {
    const std::int64_t index = options.first_index + i;
    DatasetRecord r;
    r.id = fmt::format("r{:06}", index);
    r.request = GenRequest(params, index);
    r.inventory = GenInventory(params, r.request);
    r.variant_seed = static_cast<std::uint64_t>(index);
    if (options.render_text) {
      const double u = UnitInterval(SplitMix(params.rng_seed ^ Fnv1a(r.id) ^ 0x5eedULL));
      const bool swap = u < options.date_swap_fraction && r.request.legs.size() >= 2;
      r.nl_text = RenderNl(swap ? SwapFirstLastDates(r.request) : r.request, r.variant_seed);
    }
    out.push_back(std::move(r));
  }
  return out;
}

}  // namespace wayplan
