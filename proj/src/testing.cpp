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

std::string_view event_name(EventKind kind) {
  switch (kind) {
    case EventKind::kTestAdministered: return "test_administered";
    case EventKind::kTestResult: return "test_result";
    case EventKind::kQuarantineEnter: return "quarantine_enter";
    case EventKind::kQuarantineBreak: return "quarantine_break";
    case EventKind::kQuarantineComplete: return "quarantine_complete";
    case EventKind::kDose1: return "dose1";
    case EventKind::kDose2: return "dose2";
    case EventKind::kImmunized: return "immunized";
    case EventKind::kDctNotified: return "dct_notified";
    case EventKind::kMctReached: return "mct_reached";
  }
  return "unknown";
}

void EventLog::write_csv(std::ostream& out) const {
  out << "step,event,agent,detail\n";
  for (const Event& e : events_) {
    out << e.step << ',' << event_name(e.kind) << ',' << e.agent << ',' << e.detail << '\n';
  }
}

std::vector<PendingResult> ResultQueue::pop_due(int step) {
  std::vector<PendingResult> due;
  while (!by_step_.empty() && by_step_.begin()->first <= step) {
    auto& batch = by_step_.begin()->second;
    due.insert(due.end(), batch.begin(), batch.end());
    by_step_.erase(by_step_.begin());
  }
  return due;
}

std::size_t ResultQueue::pending() const {
  std::size_t n = 0;
  for (const auto& [step, batch] : by_step_) n += batch.size();
  return n;
}

long testing_step(AgentArrays& agents, const TestingPolicy& policy, int step,
                  const RngStream& rng, ResultQueue& queue, EventLog& log) {
  if (!policy.on_symptoms || step < policy.start_date) return 0;
  const auto delay_cdf = cumulative_of(policy.results_dates_probs);
  long administered = 0;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto i = static_cast<AgentId>(k);
    const Stage stage = agents.stage_of(i);
    if (!is_symptomatic(stage)) continue;
    const int last = agents.last_test_step[i];
    if (last != kNever && (policy.validity_days < 0 || step - last < policy.validity_days)) {
      continue;
    }
    RngStream agent_rng = rng.split(step, i);
    const double p_positive = is_infected(stage) ? policy.true_positive : policy.false_positive;
    const bool positive = agent_rng.uniform() < p_positive;
    const int delay = policy.results_dates[static_cast<std::size_t>(
        sample_categorical(delay_cdf, agent_rng.uniform()))];
    queue.push({i, step + delay, positive});
    agents.last_test_step[i] = step;
    log.add(step, EventKind::kTestAdministered, i, step + delay);
    ++administered;
  }
  return administered;
}

std::vector<AgentId> deliver_results(AgentArrays& agents, ResultQueue& queue, int step,
                                     EventLog& log) {
  std::vector<AgentId> positives;
  for (const PendingResult& r : queue.pop_due(step)) {
    log.add(step, EventKind::kTestResult, r.agent, r.positive ? 1 : 0);
    if (!r.positive) continue;
    // A result arriving after recovery or death has nothing left to flag.
    if (is_absorbing(agents.stage_of(r.agent))) continue;
    agents.known_positive[r.agent] = 1;
    agents.positive_step[r.agent] = step;
    positives.push_back(r.agent);
  }
  std::sort(positives.begin(), positives.end());
  positives.erase(std::unique(positives.begin(), positives.end()), positives.end());
  return positives;
}

void expire_known_positives(AgentArrays& agents, const TestingPolicy& policy, int step) {
  if (policy.validity_days < 0) return;
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto i = static_cast<AgentId>(k);
    if (agents.known_positive[i] && agents.infected_step[i] == kNever &&
        step - agents.positive_step[i] >= policy.validity_days) {
      agents.known_positive[i] = 0;
    }
  }
}

}  // namespace pabm
