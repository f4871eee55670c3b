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

#ifndef PANDEMIC_ABM_INTERVENTIONS_HPP_
#define PANDEMIC_ABM_INTERVENTIONS_HPP_

#include <algorithm>
#include <deque>
#include <map>
#include <span>
#include <utility>
#include <vector>

#include "pandemic_abm/agents.hpp"
#include "pandemic_abm/config.hpp"
#include "pandemic_abm/events.hpp"
#include "pandemic_abm/networks.hpp"
#include "pandemic_abm/popgen.hpp"
#include "pandemic_abm/rng.hpp"

namespace pabm {

/// Probability agent i acts on a request made with nominal probability p.
/// With sigma > 0 each agent carries a persistent offset: clamp(p + sigma*z).
inline double personal_probability(const AgentArrays& agents, AgentId i, double p,
                                   double sigma) {
  if (sigma <= 0.0) return p;
  return std::clamp(p + sigma * agents.compliance_z[i], 0.0, 1.0);
}

// ---- Testing ---------------------------------------------------------------

struct PendingResult {
  AgentId agent;
  int due_step;
  bool positive;
  bool operator==(const PendingResult&) const = default;
};

/// Results keyed by delivery step.
class ResultQueue {
 public:
  void push(const PendingResult& r) { by_step_[r.due_step].push_back(r); }
  /// Removes and returns everything due at or before `step`.
  std::vector<PendingResult> pop_due(int step);
  std::size_t pending() const;
  bool only_future(int step) const {
    return by_step_.empty() || by_step_.begin()->first > step;
  }

 private:
  std::map<int, std::vector<PendingResult>> by_step_;
};

/// Symptomatic agents without a valid prior test take one. Returns the
/// number of tests administered (one cost event each).
long testing_step(AgentArrays& agents, const TestingPolicy& policy, int step,
                  const RngStream& rng, ResultQueue& queue, EventLog& log);

/// Delivers results due today. Positive results set `known_positive`.
/// Returns the agents whose positive result arrived, ascending.
std::vector<AgentId> deliver_results(AgentArrays& agents, ResultQueue& queue, int step,
                                     EventLog& log);

/// Clears known-positive flags of never-infected agents whose result has
/// expired (validity_days >= 0 only).
void expire_known_positives(AgentArrays& agents, const TestingPolicy& policy, int step);

// ---- Self-quarantine -----------------------------------------------------

/// Each triggered agent that is alive, outside hospital and not already
/// quarantined enters with probability `enter_prob` (personalised by
/// sigma). Returns the agents that entered.
std::vector<AgentId> enter_quarantine(AgentArrays& agents, std::span<const AgentId> triggered,
                                      double enter_prob, double sigma, int step,
                                      const RngStream& rng, EventLog& log);

/// End-of-day bookkeeping: agents that have served `days` days complete
/// (infectiousness reset to zero); others break with `break_prob`. Checks
/// start the day after entry.
void update_quarantine(AgentArrays& agents, const QuarantinePolicy& policy, int step,
                       const RngStream& rng, EventLog& log);

// ---- Vaccination ---------------------------------------------------------

/// FIFO stock of produced doses.
class VaccineSupply {
 public:
  void produce(int step, long count);
  /// Drops doses produced `shelf_life` or more days before `step`.
  void expire(int step, int shelf_life);
  long available() const;
  /// Takes up to n doses, oldest first; returns the number taken.
  long take(long n);

 private:
  std::deque<std::pair<int, long>> batches_;
};

struct ImmunizationOnset {
  AgentId agent;
  int dose;
};

class ImmunizationQueue {
 public:
  void push(int due_step, ImmunizationOnset onset) { by_step_[due_step].push_back(onset); }
  std::vector<ImmunizationOnset> pop_due(int step);
  bool only_future(int step) const {
    return by_step_.empty() || by_step_.begin()->first > step;
  }

 private:
  std::map<int, std::vector<ImmunizationOnset>> by_step_;
};

struct VaccinationOutcome {
  long doses = 0;
  std::vector<AgentId> recipients;  // in administration order
  std::vector<int> recipient_dose;
  // Filled only when candidates are requested: every eligible agent of each
  // class, in priority order.
  std::vector<AgentId> dose1_candidates;
  std::vector<AgentId> dose2_candidates;
};

/// Agents sorted oldest age group first, then by index. Built once per run.
std::vector<AgentId> vaccination_order(const Population& pop);

bool vaccine_eligible(const AgentArrays& agents, AgentId i);
bool dose1_candidate(const AgentArrays& agents, AgentId i);
bool dose2_candidate(const AgentArrays& agents, const VaccinePolicy& policy, AgentId i,
                     int step);

/// Produces today's doses, expires old stock and administers the available
/// doses in priority order. Immunization trials are queued `dose_delay`
/// days ahead.
VaccinationOutcome vaccination_step(AgentArrays& agents, std::span<const AgentId> order,
                                    const VaccinePolicy& policy, VaccineSupply& supply,
                                    int step, const RngStream& rng,
                                    ImmunizationQueue& onsets, EventLog& log,
                                    bool record_candidates = false);

/// Runs the efficacy trial for onsets due today. Dose 2 is only tried for
/// agents dose 1 did not immunize.
void deliver_immunizations(AgentArrays& agents, const VaccinePolicy& policy,
                           ImmunizationQueue& onsets, int step, const RngStream& rng,
                           EventLog& log);

// ---- Contact tracing ------------------------------------------------------

/// Last `capacity_days` days of contacts, indexed per agent (CSR per day).
class InteractionLog {
 public:
  InteractionLog(std::size_t num_agents, int capacity_days);

  /// Appends one day's edges; evicts the oldest day beyond capacity.
  void log(const EdgeList& edges);

  int capacity() const { return capacity_; }
  std::vector<int> steps_held() const;

  /// Calls f(other, layer) for every logged contact of `agent` on days
  /// step-window+1 .. step.
  template <typename F>
  void for_each_contact(AgentId agent, int step, int window, F&& f) const {
    for (const Day& day : days_) {
      if (day.step > step || day.step <= step - window) continue;
      for (auto k = day.offsets[agent]; k < day.offsets[agent + 1]; ++k) {
        const std::uint32_t packed = day.neighbors[k];
        f(static_cast<AgentId>(packed & kIdMask), static_cast<Layer>(packed >> kLayerShift));
      }
    }
  }

 private:
  static constexpr std::uint32_t kLayerShift = 30;
  static constexpr std::uint32_t kIdMask = (1u << kLayerShift) - 1;

  struct Day {
    int step;
    std::vector<std::uint32_t> offsets;
    std::vector<std::uint32_t> neighbors;
  };

  std::size_t num_agents_;
  int capacity_;
  std::deque<Day> days_;
};

/// Distinct contacts of `agent` visible to the app: both endpoints own it.
std::vector<AgentId> dct_contacts(const InteractionLog& log, const Population& pop,
                                  AgentId agent, int step, int window);

/// Distinct household and occupation contacts of `agent`.
std::vector<AgentId> mct_candidates(const InteractionLog& log, AgentId agent, int step,
                                    int window);

struct TraceOutcome {
  std::vector<AgentId> reached;                     // ascending, distinct
  std::vector<std::pair<AgentId, AgentId>> links;   // (contact, index case)
  std::vector<AgentId> informed;                    // index cases that shared
  std::vector<AgentId> declined;                    // index cases that did not
};

/// Each app-owning positive informs with `inform_prob`; notified agents are
/// the union of the informers' app contacts inside the DCT window.
TraceOutcome dct_notify(const InteractionLog& log, const Population& pop,
                        std::span<const AgentId> positives, const TracingPolicy& policy,
                        int step, const RngStream& rng);

/// Interviews each positive (with the MCT inform probability); every
/// distinct household/occupation contact is recalled with
/// `mct_recall_prob` and then reached with `mct_reachable_prob`.
TraceOutcome mct_trace(const InteractionLog& log, std::span<const AgentId> positives,
                       const TracingPolicy& policy, int step, const RngStream& rng);

}  // namespace pabm

#endif  // PANDEMIC_ABM_INTERVENTIONS_HPP_
