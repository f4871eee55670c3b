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

#ifndef PANDEMIC_ABM_DISEASE_HPP_
#define PANDEMIC_ABM_DISEASE_HPP_

#include <vector>

#include "pandemic_abm/agents.hpp"
#include "pandemic_abm/config.hpp"
#include "pandemic_abm/networks.hpp"
#include "pandemic_abm/popgen.hpp"
#include "pandemic_abm/rng.hpp"

namespace pabm {

/// Infectiousness an agent contributes per contact today (before beta and
/// layer weight): stage multiplier times personal scale, zero during the
/// latent period.
double source_infectiousness(const AgentArrays& agents, const DiseaseParams& params,
                             AgentId j, int step);

/// Total daily hazard per agent: for every edge (i, j) with i susceptible,
/// beta * rel_infectiousness[stage_j] * scale_j * rel_susceptibility[age_i]
/// * network_weight[layer]. Zero for non-susceptible agents.
RealArray infection_hazard(const AgentArrays& agents, const Population& pop,
                           const EdgeList& edges, const DiseaseParams& params, int step);

/// Infects each susceptible agent with probability 1 - exp(-hazard) and
/// places it in its entry stage. Returns new cases in ascending order.
std::vector<AgentId> infection_step(AgentArrays& agents, const Population& pop,
                                    const EdgeList& edges, const DiseaseParams& params,
                                    int step, const RngStream& rng);

/// Moves every agent whose holding time has elapsed to its next stage.
void progression_step(AgentArrays& agents, const Population& pop,
                      const DiseaseParams& params, int step, const RngStream& rng);

/// Places exactly `stage_seed_counts[s]` uniformly chosen agents in stage s.
/// Seeded cases are infectious immediately.
void seed_initial_infections(AgentArrays& agents, const Population& pop,
                             const ScenarioConfig& config, const RngStream& rng);

/// Whole-day holding time from a gamma(mean, sd), rounded, at least 1.
int sample_duration(const DurationDist& dist, RngStream& rng);

/// Holding-time distribution for an agent entering `stage` mid-course.
const DurationDist* duration_for(Stage stage, const DurationParams& durations);

/// Successor of `current` when its holding time elapses; `u` decides the
/// age-dependent branches.
Stage next_stage(Stage current, int age_group, const DiseaseParams& params, double u);

/// Entry stage of a fresh infection.
Stage entry_stage(int age_group, const DiseaseParams& params, double u);

/// Marks agent i infected at `step`, drawing its entry stage and holding
/// time (latent period plus first infectious stage).
void infect_agent(AgentArrays& agents, const Population& pop, const DiseaseParams& params,
                  AgentId i, int step, RngStream& rng);

// ---- Reproduction number calibration -------------------------------------

/// Contact exposure of one index case over its infectious course: for each
/// distinct contact, the summed per-contact weight excluding beta. With a
/// fully susceptible population the contact is infected with probability
/// 1 - exp(-beta * weight).
struct IndexExposure {
  std::vector<double> weights;
};

/// Follows `count` index cases (uniform random agents) through one
/// generation in an otherwise susceptible population.
std::vector<IndexExposure> sample_index_exposures(const ScenarioConfig& config,
                                                  const Population& pop, int count,
                                                  RngStream rng);

/// Expected secondary infections per index case at `beta`.
double expected_secondary_infections(const std::vector<IndexExposure>& exposures,
                                     double beta);

/// Realised mean secondary count: one Bernoulli draw per contact.
double realized_secondary_infections(const std::vector<IndexExposure>& exposures,
                                     double beta, RngStream rng);

struct CalibrationResult {
  double beta = 0.0;
  double achieved_R = 0.0;
  double max_R = 0.0;  // limit as beta grows: mean distinct contacts
  int num_index_cases = 0;
  int iterations = 0;
};

class CalibrationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Finds beta so the mean number of secondary infections caused directly by
/// an index case equals `target_R`, by bisection on the expected count over
/// a fixed set of sampled index courses (common random numbers, so the
/// objective is smooth and monotone). Interventions are ignored.
CalibrationResult calibrate_beta(const ScenarioConfig& config, double target_R,
                                 RngStream rng, int num_index_cases = 20000);

}  // namespace pabm

#endif  // PANDEMIC_ABM_DISEASE_HPP_
