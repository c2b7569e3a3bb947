/*
 * Copyright 2026 The fslsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *      http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef FSLSIM_RUNNER_H_
#define FSLSIM_RUNNER_H_

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "fslsim/analytics.h"
#include "fslsim/protocols.h"

namespace fslsim {

inline constexpr std::string_view kArtifactVersion = "0.1.0";
inline constexpr const char* kOutDirEnv = "FSLSIM_OUT_DIR";

// Run directory layout.
inline constexpr std::string_view kManifestFile = "manifest.json";
inline constexpr std::string_view kRecordsFile = "records.jsonl";
inline constexpr std::string_view kSummaryFile = "summary.csv";

inline constexpr std::string_view kSummaryHeader =
    "round,mean_acc,std_acc,min_acc,max_acc,upload_MiB,download_MiB";
inline constexpr std::string_view kBoundHeader = "alpha,p,bound";
inline constexpr std::string_view kCostHeader = "arch,algorithm,upload_MiB,download_MiB";

// Fixed six-decimal rendering used by every CSV and JSON-lines value.
std::string format_fixed(double v);

std::string summary_csv(std::span<const RoundRecord> records);
std::string record_json_line(const RoundRecord& record);

struct RunOptions {
  std::filesystem::path config_path;
  std::optional<std::filesystem::path> out_dir;  // falls back to $FSLSIM_OUT_DIR, then "runs/latest"
  std::size_t workers = 1;
  std::optional<uint32_t> seed_override;
};

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag);

// Writes manifest.json before round 1, appends one records.jsonl line per
// evaluation point and writes summary.csv at the end. Returns 0 on success,
// 2 for config errors and 1 for other failures; messages go to `err`.
int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err);

struct BoundOptions {
  std::size_t n = 25;
  double p_min = 0.6;
  double p_max = 0.99;
  std::size_t p_steps = 40;
  std::vector<double> alphas;
};

int cmd_bound(const BoundOptions& options, std::ostream& out, std::ostream& err);

struct CommcostOptions {
  std::optional<std::string> preset;
  std::vector<uint64_t> counts;  // used when no preset is given
  bool ideal = false;            // also print the entropy lower bound for rankings
};

int cmd_commcost(const CommcostOptions& options, std::ostream& out, std::ostream& err);

}  // namespace fslsim

#endif  // FSLSIM_RUNNER_H_
