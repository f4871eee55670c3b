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

#include "pandemic_abm/interventions.hpp"

namespace pabm {

std::vector<AgentId> enter_quarantine(AgentArrays& agents, std::span<const AgentId> triggered,
                                      double enter_prob, double sigma, int step,
                                      const RngStream& rng, EventLog& log) {
  std::vector<AgentId> entered;
  for (const AgentId i : triggered) {
    if (agents.quarantined[i] || is_isolated_stage(agents.stage_of(i))) continue;
    const double p = personal_probability(agents, i, enter_prob, sigma);
    if (rng.uniform_at(i) >= p) continue;
    agents.quarantined[i] = 1;
    agents.quarantine_start[i] = step;
    log.add(step, EventKind::kQuarantineEnter, i);
    entered.push_back(i);
  }
  return entered;
}

void update_quarantine(AgentArrays& agents, const QuarantinePolicy& policy, int step,
                       const RngStream& rng, EventLog& log) {
  const RngStream draws = rng.split(step);
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto i = static_cast<AgentId>(k);
    if (!agents.quarantined[i]) continue;
    const int served = step - agents.quarantine_start[i];
    if (served <= 0) continue;
    if (served >= policy.days) {
      agents.quarantined[i] = 0;
      agents.infectiousness_scale[i] = 0.0;
      log.add(step, EventKind::kQuarantineComplete, i);
    } else if (draws.uniform_at(i) < policy.break_prob) {
      agents.quarantined[i] = 0;
      log.add(step, EventKind::kQuarantineBreak, i);
    }
  }
}

}  // namespace pabm
