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

#ifndef WAYPLAN_DATASET_HPP_
#define WAYPLAN_DATASET_HPP_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"
#include "wayplan/datagen.hpp"
#include "wayplan/inventory.hpp"
#include "wayplan/request.hpp"

namespace wayplan {

// One line of a corpus file.
struct DatasetRecord {
  std::string id;
  SymbolicRequest request;
  Inventory inventory;
  std::string nl_text;  // empty when the corpus carries no text
  std::uint64_t variant_seed = 0;
  bool operator==(const DatasetRecord&) const = default;
};

nlohmann::ordered_json RecordToJson(const DatasetRecord& record);
DatasetRecord RecordFromJson(const nlohmann::json& j, const std::string& path = "");

// One compact JSON object per line, '\n' terminated.
std::string RecordsToJsonl(const std::vector<DatasetRecord>& records);
// Blank lines are skipped. Errors carry the 1-based line number in the path.
std::vector<DatasetRecord> RecordsFromJsonl(std::string_view text);

// Throws FileUnreadable.
void WriteJsonl(const std::string& path, const std::vector<DatasetRecord>& records);
std::vector<DatasetRecord> ReadJsonl(const std::string& path);

struct DatasetOptions {
  std::int64_t count = 0;
  std::int64_t first_index = 0;
  bool render_text = true;
  // Fraction of records whose text swaps the first and last travel dates,
  // mimicking date-ordering slips in generated language.
  double date_swap_fraction = 0.0;
};

void ValidateDatasetOptions(const DatasetOptions& options);

// Record i uses GenRequest(params, first_index + i), its planted inventory
// and paraphrase seed first_index + i.
std::vector<DatasetRecord> GenerateDataset(const GenParams& params,
                                           const DatasetOptions& options);

// Copy of `request` with the first and last leg dates exchanged. The result
// generally violates date ordering and is only meant for rendering.
SymbolicRequest SwapFirstLastDates(const SymbolicRequest& request);

}  // namespace wayplan

#endif  // WAYPLAN_DATASET_HPP_
