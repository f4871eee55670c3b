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

#ifndef PANDEMIC_ABM_AGENTS_HPP_
#define PANDEMIC_ABM_AGENTS_HPP_

#include "pandemic_abm/types.hpp"

namespace pabm {

inline constexpr int kNever = -1;

/// Column-oriented per-agent state. All columns have `size()` rows.
struct AgentArrays {
  // Disease.
  ByteArray stage;
  IntArray stage_entry_step;
  IntArray stage_duration;
  IntArray infectious_from;  // first step with nonzero infectiousness
  IntArray infected_step;    // kNever if never infected
  RealArray infectiousness_scale;
  ByteArray immunized;

  // Quarantine.
  ByteArray quarantined;
  IntArray quarantine_start;

  // Testing.
  IntArray last_test_step;
  ByteArray known_positive;
  IntArray positive_step;

  // Vaccination.
  ByteArray doses;
  IntArray dose1_step;
  ByteArray dose2_dropout;

  // Persistent standard-normal draw used for heterogeneous compliance.
  RealArray compliance_z;

  explicit AgentArrays(std::size_t n = 0);

  std::size_t size() const { return static_cast<std::size_t>(stage.size()); }
  Stage stage_of(AgentId i) const { return static_cast<Stage>(stage[i]); }
  void set_stage(AgentId i, Stage s, int step, int duration) {
    stage[i] = static_cast<std::uint8_t>(s);
    stage_entry_step[i] = step;
    stage_duration[i] = duration;
  }
  bool is_susceptible(AgentId i) const {
    return stage_of(i) == Stage::kSusceptible && !immunized[i];
  }
  bool operator==(const AgentArrays& other) const;
};

}  // namespace pabm

#endif  // PANDEMIC_ABM_AGENTS_HPP_
