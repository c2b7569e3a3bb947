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

#include "fslsim/runner.h"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <ctime>
#include <fstream>
#include <iostream>
#include "json.hpp"

#include "fslsim/config.h"

namespace fslsim {
namespace {

using nlohmann::ordered_json;

std::string utc_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

ordered_json config_json(const ExperimentConfig& config) {
  ordered_json j = ordered_json::object();
  const std::string text = format_config(config);
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = text.find('\n', pos);
    const std::string line = text.substr(pos, eol - pos);
    pos = eol + 1;
    const std::size_t eq = line.find(" = ");
    j[line.substr(0, eq)] = line.substr(eq + 3);
  }
  return j;
}

void write_file(const std::filesystem::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << body;
}

}  // namespace

std::string format_fixed(double v) {
  if (v == 0.0) v = 0.0;  // drop the sign of negative zero
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

std::string summary_csv(std::span<const RoundRecord> records) {
  std::string out(kSummaryHeader);
  out += '\n';
  for (const RoundRecord& r : records) {
    const AccuracyStats acc = r.accuracy.value_or(AccuracyStats{});
    out += std::to_string(r.round) + ',' + format_fixed(acc.mean) + ',' + format_fixed(acc.std) + ',' +
           format_fixed(acc.min) + ',' + format_fixed(acc.max) + ',' + format_fixed(r.upload_bits / kBitsPerMiB) +
           ',' + format_fixed(r.download_bits / kBitsPerMiB) + '\n';
  }
  return out;
}

std::string record_json_line(const RoundRecord& r) {
  // Reals are emitted as fixed-point literals so the line is reproducible.
  auto num = [](double v) { return ordered_json::parse(format_fixed(v)); };
  ordered_json j;
  j["round"] = r.round;
  j["selected"] = r.selected;
  if (r.accuracy) {
    j["mean_acc"] = num(r.accuracy->mean);
    j["std_acc"] = num(r.accuracy->std);
    j["min_acc"] = num(r.accuracy->min);
    j["max_acc"] = num(r.accuracy->max);
    j["eval_clients"] = r.accuracy->clients;
  }
  j["upload_bits"] = static_cast<uint64_t>(std::llround(r.upload_bits));
  j["download_bits"] = static_cast<uint64_t>(std::llround(r.download_bits));
  j["attack_active"] = r.attack_active;
  j["malicious_selected"] = r.malicious_selected;
  return j.dump();
}

std::filesystem::path resolve_out_dir(const std::optional<std::filesystem::path>& flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv(kOutDirEnv); env && *env) return env;
  return "runs/latest";
}

int cmd_run(const RunOptions& options, std::ostream& out, std::ostream& err) {
  ExperimentConfig config;
  try {
    config = load_config(options.config_path);
    if (options.seed_override) config.seed = *options.seed_override;
    config.validate();
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  }
  if (options.workers == 0) {
    err << "config error: workers: must be at least 1\n";
    return 2;
  }

  try {
    const std::filesystem::path dir = resolve_out_dir(options.out_dir);
    std::filesystem::create_directories(dir);
    const auto manifest_path = dir / kManifestFile;
    const auto records_path = dir / kRecordsFile;
    const auto summary_path = dir / kSummaryFile;

    ordered_json manifest;
    manifest["artifact"] = "fslsim";
    manifest["version"] = kArtifactVersion;
    manifest["config"] = config_json(config);
    manifest["config_text"] = format_config(config);
    manifest["workers"] = options.workers;
    manifest["started_at"] = utc_timestamp();
    manifest["finished_at"] = nullptr;
    manifest["outputs"] = {{"records", std::string(kRecordsFile)}, {"summary", std::string(kSummaryFile)}};
    write_file(manifest_path, manifest.dump(2) + '\n');

    std::ofstream records_out(records_path, std::ios::binary | std::ios::trunc);
    if (!records_out) throw std::runtime_error("cannot write " + records_path.string());
    const Federation federation = build_federation(config);
    const std::vector<RoundRecord> records =
        run_experiment(config, federation, options.workers, [&](const RoundRecord& r) {
          records_out << record_json_line(r) << '\n';
          records_out.flush();
          if (r.accuracy) {
            out << "round " << r.round << " mean_acc " << format_fixed(r.accuracy->mean) << '\n';
          }
        });
    records_out.close();
    write_file(summary_path, summary_csv(records));

    manifest["finished_at"] = utc_timestamp();
    write_file(manifest_path, manifest.dump(2) + '\n');
    out << "wrote " << summary_path.string() << '\n';
    return 0;
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

int cmd_bound(const BoundOptions& options, std::ostream& out, std::ostream& err) {
  if (options.alphas.empty()) {
    err << "usage error: at least one alpha is required\n";
    return 2;
  }
  try {
    if (options.p_steps == 0) throw std::invalid_argument("p_steps must be at least 1");
    if (options.p_min > options.p_max) throw std::invalid_argument("p_min must not exceed p_max");
    const std::vector<double> grid = linspace(options.p_min, options.p_max, options.p_steps);
    const std::vector<BoundRow> rows = sweep_bound(options.n, grid, options.alphas);
    out << kBoundHeader << '\n';
    for (const BoundRow& r : rows) {
      out << format_fixed(r.alpha) << ',' << format_fixed(r.p) << ',' << format_fixed(r.bound) << '\n';
    }
    return 0;
  } catch (const std::invalid_argument& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }
}

int cmd_commcost(const CommcostOptions& options, std::ostream& out, std::ostream& err) {
  ArchSpec arch;
  if (options.preset) {
    auto preset = arch_preset(*options.preset);
    if (!preset) {
      err << "usage error: unknown preset '" << *options.preset << "'\n";
      return 2;
    }
    arch = *preset;
  } else if (!options.counts.empty()) {
    arch = ArchSpec{"custom", options.counts};
    for (uint64_t c : arch.layer_param_counts) {
      if (c == 0) {
        err << "usage error: layer parameter counts must be positive\n";
        return 2;
      }
    }
  } else {
    err << "usage error: give a preset or explicit layer counts\n";
    return 2;
  }
  out << kCostHeader << '\n';
  for (const CostRow& row : cost_table(arch)) {
    out << arch.name << ',' << row.algorithm << ',' << format_fixed(row.report.upload_mib()) << ','
        << format_fixed(row.report.download_mib()) << '\n';
  }
  if (options.ideal) {
    const double mib = ideal_rank_bits(arch) / kBitsPerMiB;
    out << arch.name << ",FSL-ideal," << format_fixed(mib) << ',' << format_fixed(mib) << '\n';
  }
  return 0;
}

}  // namespace fslsim
