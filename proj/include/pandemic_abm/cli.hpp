// Copyright 2026 The Pandemic ABM Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef PANDEMIC_ABM_CLI_HPP_
#define PANDEMIC_ABM_CLI_HPP_

#include <string>
#include <vector>

#include "pandemic_abm/config.hpp"

namespace pabm {

/// Scenario presets: NI (nothing), SQ (testing + self-quarantine), VACC
/// (vaccination only), CT (testing + self-quarantine + hybrid tracing), ALL
/// (CT plus vaccination). Sets the logic toggles and the results postfix.
/// Throws ConfigError for an unknown name.
ScenarioConfig apply_preset(const ScenarioConfig& base, const std::string& name);

const std::vector<std::string>& preset_names();

/// Turns off every intervention toggle.
void disable_interventions(ScenarioConfig& config);

/// Entry point of the `pandemic-abm` executable; returns the exit code.
int run_cli(int argc, char** argv);

}  // namespace pabm

#endif  // PANDEMIC_ABM_CLI_HPP_
