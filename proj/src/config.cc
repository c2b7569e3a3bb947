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

#include "fslsim/config.h"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <system_error>

namespace fslsim {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

template <typename T>
T parse_number(std::string_view key, std::string_view text) {
  T value{};
  const char* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end || text.empty()) {
    throw ConfigError(std::string(key), "cannot parse '" + std::string(text) + "' as a number");
  }
  return value;
}

std::string format_real(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, ptr);
}

template <typename E>
E parse_enum(std::string_view key, std::string_view text, std::optional<E> (*parse)(std::string_view)) {
  if (auto v = parse(text)) return *v;
  throw ConfigError(std::string(key), "unknown value '" + std::string(text) + "'");
}

std::optional<DataSource> parse_data_source(std::string_view s) {
  if (s == "blobs") return DataSource::kBlobs;
  if (s == "idx") return DataSource::kIdx;
  if (s == "csv") return DataSource::kCsv;
  return std::nullopt;
}

std::string_view to_string(DataSource s) {
  switch (s) {
    case DataSource::kBlobs: return "blobs";
    case DataSource::kIdx: return "idx";
    case DataSource::kCsv: return "csv";
  }
  return "blobs";
}

struct Field {
  std::string key;
  std::function<void(ExperimentConfig&, std::string_view)> set;
  std::function<std::string(const ExperimentConfig&)> get;
};

template <typename T>
Field size_field(std::string key, T ExperimentConfig::*member) {
  return {key, [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_number<T>(key, v); },
          [member](const ExperimentConfig& c) { return std::to_string(c.*member); }};
}

Field real_field(std::string key, double ExperimentConfig::*member) {
  return {key, [key, member](ExperimentConfig& c, std::string_view v) { c.*member = parse_number<double>(key, v); },
          [member](const ExperimentConfig& c) { return format_real(c.*member); }};
}

template <typename T, typename Get>
Field nested_number(std::string key, Get get) {
  return {key,
          [key, get](ExperimentConfig& c, std::string_view v) { get(c) = parse_number<T>(key, v); },
          [get](const ExperimentConfig& c) {
            const T value = get(const_cast<ExperimentConfig&>(c));
            if constexpr (std::is_floating_point_v<T>) {
              return format_real(value);
            } else {
              return std::to_string(value);
            }
          }};
}

void add_sgd(std::vector<Field>& fields, const std::string& prefix, SgdConfig ExperimentConfig::*member) {
  fields.push_back(nested_number<double>(prefix + ".lr", [member](ExperimentConfig& c) -> double& {
    return (c.*member).learning_rate;
  }));
  fields.push_back(nested_number<double>(prefix + ".momentum", [member](ExperimentConfig& c) -> double& {
    return (c.*member).momentum;
  }));
  fields.push_back(nested_number<double>(prefix + ".weight_decay", [member](ExperimentConfig& c) -> double& {
    return (c.*member).weight_decay;
  }));
  fields.push_back(nested_number<std::size_t>(prefix + ".batch_size", [member](ExperimentConfig& c) -> std::size_t& {
    return (c.*member).batch_size;
  }));
}

const std::vector<Field>& fields() {
  static const std::vector<Field> table = [] {
    std::vector<Field> f;
    f.push_back({"algorithm",
                 [](ExperimentConfig& c, std::string_view v) { c.algorithm = parse_enum("algorithm", v, parse_algorithm); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.algorithm)); }});
    f.push_back(size_field("rounds", &ExperimentConfig::rounds));
    f.push_back(size_field("num_clients", &ExperimentConfig::num_clients));
    f.push_back(size_field("clients_per_round", &ExperimentConfig::clients_per_round));
    f.push_back(size_field("local_epochs", &ExperimentConfig::local_epochs));
    f.push_back(real_field("k", &ExperimentConfig::k));
    f.push_back(real_field("sparsity", &ExperimentConfig::sparsity));
    f.push_back(size_field("seed", &ExperimentConfig::seed));
    f.push_back(size_field("eval_every", &ExperimentConfig::eval_every));
    f.push_back({"architecture",
                 [](ExperimentConfig& c, std::string_view v) { c.architecture = parse_architecture(v); },
                 [](const ExperimentConfig& c) { return format_architecture(c.architecture); }});
    f.push_back({"weight_init",
                 [](ExperimentConfig& c, std::string_view v) { c.weight_init = parse_enum("weight_init", v, parse_init_kind); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.weight_init)); }});
    f.push_back({"baseline_init",
                 [](ExperimentConfig& c, std::string_view v) {
                   c.baseline_init = parse_enum("baseline_init", v, parse_init_kind);
                 },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.baseline_init)); }});
    add_sgd(f, "sgd", &ExperimentConfig::sgd);
    add_sgd(f, "baseline_sgd", &ExperimentConfig::baseline_sgd);
    f.push_back(real_field("server_lr", &ExperimentConfig::server_lr));
    f.push_back({"aggregator",
                 [](ExperimentConfig& c, std::string_view v) { c.aggregator = parse_enum("aggregator", v, parse_aggregator); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.aggregator)); }});
    f.push_back({"robust_f",
                 [](ExperimentConfig& c, std::string_view v) {
                   if (v == "auto") {
                     c.robust_f.reset();
                   } else {
                     c.robust_f = parse_number<std::size_t>("robust_f", v);
                   }
                 },
                 [](const ExperimentConfig& c) { return c.robust_f ? std::to_string(*c.robust_f) : std::string("auto"); }});
    f.push_back({"attack.kind",
                 [](ExperimentConfig& c, std::string_view v) { c.attack.kind = parse_enum("attack.kind", v, parse_attack_kind); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.attack.kind)); }});
    f.push_back(nested_number<double>("attack.fraction",
                                      [](ExperimentConfig& c) -> double& { return c.attack.malicious_fraction; }));
    f.push_back(nested_number<std::size_t>("attack.malicious_epochs",
                                           [](ExperimentConfig& c) -> std::size_t& { return c.attack.malicious_epochs; }));
    f.push_back(nested_number<double>("attack.scale_factor",
                                      [](ExperimentConfig& c) -> double& { return c.attack.scale_factor; }));
    f.push_back({"attack.omega",
                 [](ExperimentConfig& c, std::string_view v) { c.attack.omega = parse_enum("attack.omega", v, parse_omega_kind); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.attack.omega)); }});
    f.push_back(nested_number<double>("attack.gamma_init",
                                      [](ExperimentConfig& c) -> double& { return c.attack.gamma_init; }));
    f.push_back(nested_number<std::size_t>("attack.gamma_iters",
                                           [](ExperimentConfig& c) -> std::size_t& { return c.attack.gamma_iters; }));
    f.push_back({"data.source",
                 [](ExperimentConfig& c, std::string_view v) { c.data.source = parse_enum("data.source", v, parse_data_source); },
                 [](const ExperimentConfig& c) { return std::string(to_string(c.data.source)); }});
    f.push_back(nested_number<double>("data.dirichlet_alpha",
                                      [](ExperimentConfig& c) -> double& { return c.data.dirichlet_alpha; }));
    f.push_back(nested_number<std::size_t>("data.blobs.classes",
                                           [](ExperimentConfig& c) -> std::size_t& { return c.data.blobs.num_classes; }));
    f.push_back(nested_number<std::size_t>("data.blobs.dims",
                                           [](ExperimentConfig& c) -> std::size_t& { return c.data.blobs.dims; }));
    f.push_back(nested_number<std::size_t>("data.blobs.samples_per_class", [](ExperimentConfig& c) -> std::size_t& {
      return c.data.blobs.samples_per_class;
    }));
    f.push_back(nested_number<double>("data.blobs.std",
                                      [](ExperimentConfig& c) -> double& { return c.data.blobs.cluster_std; }));
    f.push_back(nested_number<double>("data.blobs.separation",
                                      [](ExperimentConfig& c) -> double& { return c.data.blobs.separation; }));
    f.push_back({"data.idx_images",
                 [](ExperimentConfig& c, std::string_view v) { c.data.idx_images = std::string(v); },
                 [](const ExperimentConfig& c) { return c.data.idx_images.string(); }});
    f.push_back({"data.idx_labels",
                 [](ExperimentConfig& c, std::string_view v) { c.data.idx_labels = std::string(v); },
                 [](const ExperimentConfig& c) { return c.data.idx_labels.string(); }});
    f.push_back({"data.csv", [](ExperimentConfig& c, std::string_view v) { c.data.csv = std::string(v); },
                 [](const ExperimentConfig& c) { return c.data.csv.string(); }});
    return f;
  }();
  return table;
}

}  // namespace

std::string format_architecture(const Architecture& arch) {
  std::string out;
  for (std::size_t i = 0; i < arch.size(); ++i) {
    if (i > 0) out += ',';
    out += std::to_string(arch[i].fan_in) + ':' + std::to_string(arch[i].fan_out) + ':' +
           std::string(to_string(arch[i].activation));
  }
  return out;
}

Architecture parse_architecture(std::string_view text) {
  Architecture arch;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    const std::string_view entry = trim(text.substr(pos, comma - pos));
    const std::size_t c1 = entry.find(':');
    const std::size_t c2 = c1 == std::string_view::npos ? c1 : entry.find(':', c1 + 1);
    if (c2 == std::string_view::npos) {
      throw ConfigError("architecture", "expected fan_in:fan_out:activation, got '" + std::string(entry) + "'");
    }
    LayerSpec layer;
    layer.fan_in = parse_number<std::size_t>("architecture", trim(entry.substr(0, c1)));
    layer.fan_out = parse_number<std::size_t>("architecture", trim(entry.substr(c1 + 1, c2 - c1 - 1)));
    layer.activation = parse_enum("architecture", trim(entry.substr(c2 + 1)), parse_activation);
    arch.push_back(layer);
    pos = comma + 1;
  }
  return arch;
}

std::vector<std::string> config_keys() {
  std::vector<std::string> keys;
  for (const Field& f : fields()) keys.push_back(f.key);
  return keys;
}

ExperimentConfig parse_config(std::string_view text) {
  std::map<std::string_view, const Field*> by_key;
  for (const Field& f : fields()) by_key[f.key] = &f;

  ExperimentConfig config;
  std::set<std::string, std::less<>> seen;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const std::size_t eol = std::min(text.find('\n', pos), text.size());
    const std::string_view line = trim(text.substr(pos, eol - pos));
    pos = eol + 1;
    ++line_no;
    if (line.empty() || line.front() == '#') continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw ConfigError("line " + std::to_string(line_no), "expected key = value");
    }
    const std::string_view key = trim(line.substr(0, eq));
    const std::string_view value = trim(line.substr(eq + 1));
    auto it = by_key.find(key);
    if (it == by_key.end()) throw ConfigError(std::string(key), "unknown key");
    if (!seen.emplace(key).second) throw ConfigError(std::string(key), "duplicate key");
    it->second->set(config, value);
  }
  return config;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("config", "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string format_config(const ExperimentConfig& config) {
  std::string out;
  for (const Field& f : fields()) out += f.key + " = " + f.get(config) + '\n';
  return out;
}

}  // namespace fslsim
