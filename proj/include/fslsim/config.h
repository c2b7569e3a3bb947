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

#ifndef FSLSIM_CONFIG_H_
#define FSLSIM_CONFIG_H_

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "fslsim/protocols.h"

namespace fslsim {

// Experiment configs are flat `key = value` files. Blank lines and lines
// starting with '#' are ignored. Keys not listed by config_keys() are
// rejected, as are duplicates. The architecture is written as a comma list
// of fan_in:fan_out:activation entries, e.g. `20:64:relu,64:10:identity`.
//
// Parse errors are reported as ConfigError naming the key.
ExperimentConfig parse_config(std::string_view text);
ExperimentConfig load_config(const std::filesystem::path& path);

// Canonical text form. parse_config(format_config(c)) reproduces c exactly;
// reals are printed in shortest round-trip form.
std::string format_config(const ExperimentConfig& config);

// All accepted keys in canonical order.
std::vector<std::string> config_keys();

std::string format_architecture(const Architecture& arch);
Architecture parse_architecture(std::string_view text);

}  // namespace fslsim

#endif  // FSLSIM_CONFIG_H_
