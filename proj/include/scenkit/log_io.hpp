// Copyright 2026 The scenkit Authors
//
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

#ifndef SCENKIT_LOG_IO_HPP_
#define SCENKIT_LOG_IO_HPP_

// Per-run log CSV. A `#` preamble carries the run metadata, then one header
// row and one row per frame:
//   t,ego_x,ego_y,ego_heading,ego_v,ego_a,brake_cmd,steer_cmd,
//   actor{k}_id,actor{k}_x,actor{k}_y,actor{k}_v,actor{k}_detected, ...,
//   ttc,gap,collision_flag
// Reading never throws on bad content: the returned log is marked with one
// of the reason codes below instead.

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "scenkit/simulator.hpp"

namespace scenkit {

namespace log_reason {
inline constexpr std::string_view kEmpty = "empty";
inline constexpr std::string_view kMissingMetadata = "missing_metadata";
inline constexpr std::string_view kMissingHeader = "missing_header";
inline constexpr std::string_view kMissingColumn = "missing_column";
inline constexpr std::string_view kTruncated = "truncated";
inline constexpr std::string_view kBadNumber = "bad_number";
inline constexpr std::string_view kNonFinite = "non_finite";
inline constexpr std::string_view kNonMonotoneTime = "non_monotone_time";
inline constexpr std::string_view kIrregularTimestep = "irregular_timestep";
inline constexpr std::string_view kUnreadable = "unreadable";
}  // namespace log_reason

std::string log_csv_header(const SimulationLog& log);
std::string write_log_csv(const SimulationLog& log);

// Actor headings are rebuilt from displacements; accelerations other than
// the ego's are not stored and read back as 0.
SimulationLog read_log_csv(std::string_view text);

struct IngestedLog {
  std::filesystem::path path;
  SimulationLog log;
};

// Every *.csv in `directory`, in file-name order. Throws
// std::filesystem::filesystem_error when the directory cannot be listed.
std::vector<IngestedLog> ingest_logs(const std::filesystem::path& directory);

// "<spec id>.csv"
std::string log_file_name(const SimulationLog& log);

}  // namespace scenkit

#endif  // SCENKIT_LOG_IO_HPP_
