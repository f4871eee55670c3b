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

#include <algorithm>

#include "pandemic_abm/interventions.hpp"

namespace pabm {

void VaccineSupply::produce(int step, long count) {
  if (count > 0) batches_.emplace_back(step, count);
}

void VaccineSupply::expire(int step, int shelf_life) {
  while (!batches_.empty() && step - batches_.front().first >= shelf_life) {
    batches_.pop_front();
  }
}

long VaccineSupply::available() const {
  long total = 0;
  for (const auto& [produced, count] : batches_) total += count;
  return total;
}

long VaccineSupply::take(long n) {
  long taken = 0;
  while (taken < n && !batches_.empty()) {
    const long use = std::min(n - taken, batches_.front().second);
    batches_.front().second -= use;
    taken += use;
    if (batches_.front().second == 0) batches_.pop_front();
  }
  return taken;
}

std::vector<ImmunizationOnset> ImmunizationQueue::pop_due(int step) {
  std::vector<ImmunizationOnset> due;
  while (!by_step_.empty() && by_step_.begin()->first <= step) {
    auto& batch = by_step_.begin()->second;
    due.insert(due.end(), batch.begin(), batch.end());
    by_step_.erase(by_step_.begin());
  }
  return due;
}

std::vector<AgentId> vaccination_order(const Population& pop) {
  std::vector<AgentId> order(pop.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<AgentId>(i);
  std::stable_sort(order.begin(), order.end(), [&](AgentId a, AgentId b) {
    return pop.age_group[a] > pop.age_group[b];
  });
  return order;
}

bool vaccine_eligible(const AgentArrays& agents, AgentId i) {
  return !is_isolated_stage(agents.stage_of(i)) && !agents.known_positive[i] &&
         !agents.quarantined[i];
}

bool dose1_candidate(const AgentArrays& agents, AgentId i) {
  return agents.doses[i] == 0 && vaccine_eligible(agents, i);
}

bool dose2_candidate(const AgentArrays& agents, const VaccinePolicy& policy, AgentId i,
                     int step) {
  return agents.doses[i] == 1 && !agents.dose2_dropout[i] &&
         step - agents.dose1_step[i] >= policy.dose2_gap && vaccine_eligible(agents, i);
}

VaccinationOutcome vaccination_step(AgentArrays& agents, std::span<const AgentId> order,
                                    const VaccinePolicy& policy, VaccineSupply& supply,
                                    int step, const RngStream& rng,
                                    ImmunizationQueue& onsets, EventLog& log,
                                    bool record_candidates) {
  VaccinationOutcome outcome;
  if (step < policy.start_date) return outcome;
  supply.produce(step, policy.daily_prod);
  supply.expire(step, policy.shelf_life);
  long remaining = supply.available();

  const auto administer = [&](AgentId i, int dose) {
    agents.doses[i] = static_cast<std::uint8_t>(dose);
    if (dose == 1) {
      agents.dose1_step[i] = step;
      RngStream agent_rng = rng.split(step, i);
      agents.dose2_dropout[i] = agent_rng.uniform() < policy.dose2_drop;
    }
    onsets.push(step + policy.dose_delay, {i, dose});
    log.add(step, dose == 1 ? EventKind::kDose1 : EventKind::kDose2, i);
    outcome.recipients.push_back(i);
    outcome.recipient_dose.push_back(dose);
    --remaining;
  };

  // Candidacy is fixed before anyone is dosed today, so a fresh dose 1 never
  // turns into a dose-2 candidate within the same call.
  const auto classify = [&](AgentId i) {
    if (dose1_candidate(agents, i)) return 1;
    if (dose2_candidate(agents, policy, i, step)) return 2;
    return 0;
  };

  if (policy.dose1_priority) {
    std::vector<AgentId> second;
    for (const AgentId i : order) {
      if (remaining == 0 && !record_candidates) break;
      const int cls = classify(i);
      if (cls == 1) {
        if (record_candidates) outcome.dose1_candidates.push_back(i);
        if (remaining > 0) administer(i, 1);
      } else if (cls == 2) {
        second.push_back(i);
      }
    }
    // Dose-2 candidates not yet collected lie beyond the early exit and can
    // only matter when supply is left, in which case the scan completed.
    for (const AgentId i : second) {
      if (record_candidates) outcome.dose2_candidates.push_back(i);
      if (remaining > 0) administer(i, 2);
    }
  } else {
    for (const AgentId i : order) {
      if (remaining == 0 && !record_candidates) break;
      const int cls = classify(i);
      if (cls == 0) continue;
      if (record_candidates) {
        (cls == 1 ? outcome.dose1_candidates : outcome.dose2_candidates).push_back(i);
      }
      if (remaining > 0) administer(i, cls);
    }
  }
  outcome.doses = static_cast<long>(outcome.recipients.size());
  supply.take(outcome.doses);
  return outcome;
}

void deliver_immunizations(AgentArrays& agents, const VaccinePolicy& policy,
                           ImmunizationQueue& onsets, int step, const RngStream& rng,
                           EventLog& log) {
  for (const ImmunizationOnset& onset : onsets.pop_due(step)) {
    if (agents.immunized[onset.agent]) continue;
    const double eff = onset.dose == 1 ? policy.dose1_eff : policy.dose2_eff;
    RngStream agent_rng = rng.split(step, onset.agent, onset.dose);
    if (agent_rng.uniform() < eff) {
      agents.immunized[onset.agent] = 1;
      log.add(step, EventKind::kImmunized, onset.agent, onset.dose);
    }
  }
}

}  // namespace pabm
