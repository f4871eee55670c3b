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

#ifndef PANDEMIC_ABM_POPGEN_HPP_
#define PANDEMIC_ABM_POPGEN_HPP_

#include <span>
#include <vector>

#include "pandemic_abm/config.hpp"
#include "pandemic_abm/rng.hpp"
#include "pandemic_abm/types.hpp"

namespace pabm {

/// Synthetic population in column layout. Households are stored twice: as a
/// per-agent id and as a CSR member list (`household_offsets` has H+1
/// entries) so cliques can be enumerated without a scan.
struct Population {
  ByteArray age_group;
  IndexArray household_id;
  ByteArray occupation;
  ByteArray has_app;
  std::vector<std::uint32_t> household_offsets;
  std::vector<AgentId> household_members;

  std::size_t size() const { return static_cast<std::size_t>(age_group.size()); }
  std::size_t num_households() const {
    return household_offsets.empty() ? 0 : household_offsets.size() - 1;
  }
  std::span<const AgentId> household(std::size_t h) const {
    return {household_members.data() + household_offsets[h],
            household_offsets[h + 1] - household_offsets[h]};
  }
  bool operator==(const Population& other) const;
};

/// Draws ages, households and occupations for `config.num_agents` agents.
/// App ownership is left false; see assign_app_ownership.
Population sample_population(const ScenarioConfig& config, RngStream rng);

/// Occupation implied by an age group; -1 for working-age groups.
int fixed_occupation_for_age(const Demographics& demo, int age_group);

/// Per-age-group ownership probabilities actually used. In age-stratified
/// mode the configured table is rescaled so the population-level expected
/// rate equals `app_adoption_rate`; throws ConfigError if a rescaled
/// probability exceeds 1.
AgeTable app_ownership_probs(const Demographics& demo, const TracingPolicy& policy);

void assign_app_ownership(Population& pop, const Demographics& demo,
                          const TracingPolicy& policy, RngStream rng);

/// Index into a cumulative distribution for u in [0, 1).
int sample_categorical(std::span<const double> cumulative, double u);
std::vector<double> cumulative_of(std::span<const double> probs);

}  // namespace pabm

#endif  // PANDEMIC_ABM_POPGEN_HPP_
