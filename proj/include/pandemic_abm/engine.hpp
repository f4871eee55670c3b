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

#ifndef PANDEMIC_ABM_ENGINE_HPP_
#define PANDEMIC_ABM_ENGINE_HPP_

#include <array>
#include <optional>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "pandemic_abm/agents.hpp"
#include "pandemic_abm/config.hpp"
#include "pandemic_abm/costs.hpp"
#include "pandemic_abm/events.hpp"
#include "pandemic_abm/interventions.hpp"
#include "pandemic_abm/networks.hpp"
#include "pandemic_abm/popgen.hpp"
#include "pandemic_abm/rng.hpp"

namespace pabm {

// Columns of RunResult::series.
enum Series : int {
  kNewInfections = 0,
  kCumulativeInfections,
  kHospitalizedCount,
  kIcuCount,
  kDeaths,
  kRecoveredCount,
  kImmunizedCount,
  kQuarantinedCount,
  kTestsAdministered,
  kDosesAdministered,
  kCumulativeCost,
  kSusceptibleCount,
  kNumSeries
};

std::string_view series_name(int column);

/// Per-step record of one run; one row per step.
struct RunResult {
  Eigen::ArrayXXd series;          // steps x kNumSeries
  Eigen::ArrayXXd age_cumulative;  // steps x kNumAgeGroups
  Eigen::ArrayXXd stage_counts;    // steps x kNumStages
  long num_agents = 0;
  long total_tests = 0;
  long total_doses = 0;
  double test_price = 0.0;
  double dose_price = 0.0;

  int num_steps() const { return static_cast<int>(series.rows()); }
  bool operator==(const RunResult& other) const;
};

/// Toggles and policies a run actually uses, derived from the logic flags.
struct ActivePolicies {
  const TestingPolicy* test = nullptr;  // symptom-triggered test, if any
  bool quarantine = false;
  bool vaccination = false;
  VaccinePolicy vaccine;
  TracingMode tracing = TracingMode::kOff;
  double dct_comply = 0.0;
  double mct_comply = 0.0;
  const TestingPolicy* trace_test = nullptr;  // test for traced contacts
};

ActivePolicies resolve_policies(const ScenarioConfig& config);

/// Everything one run mutates.
struct World {
  const ScenarioConfig* config;
  ActivePolicies policies;
  RngStream root;
  Population population;
  EdgeList household_edges;
  AgentArrays agents;
  InteractionLog interactions;
  VaccineSupply supply;
  CostLedger ledger;
  ResultQueue results;
  ImmunizationQueue onsets;
  EventLog events;
  std::vector<AgentId> vaccine_order;
  int step = 0;  // next step to execute
  long cumulative_infections = 0;
  std::array<long, kNumAgeGroups> age_cumulative{};
  long new_infections = 0;
  long tests_today = 0;
  long doses_today = 0;
};

/// Hooks for inspection; every callback sees the world mid-step.
class RunObserver {
 public:
  virtual ~RunObserver() = default;
  virtual bool record_events() const { return false; }
  virtual bool record_vaccination_candidates() const { return false; }
  virtual void on_edges(const World&, const EdgeList&) {}
  virtual void on_vaccination(const World&, const VaccinationOutcome&) {}
  virtual void on_step_end(const World&) {}
  virtual void on_run_end(const World&) {}
};

/// Builds the population and seeds infections (day 0).
World make_world(const ScenarioConfig& config, int run_index, bool record_events = false);

/// Advances one day through the fixed phase order: contacts and infection,
/// progression, testing, quarantine of positives, vaccination, tracing,
/// quarantine of traced contacts, quarantine bookkeeping.
void step(World& world, RunObserver* observer = nullptr);

/// Appends the current state as row `row` of `result`.
void record_row(const World& world, RunResult& result, int row);

/// Runs `num_steps` steps from the seeded state; RNG root (seed, run_index).
RunResult run(const ScenarioConfig& config, int run_index, RunObserver* observer = nullptr);

/// Runs `config.num_runs` runs on up to `jobs` threads; results ordered by
/// run index, independent of scheduling.
std::vector<RunResult> run_ensemble(const ScenarioConfig& config, int jobs = 1);

struct RunScalars {
  double peak_hospitalized = 0.0;
  double peak_hospitalized_day = 0.0;
  double peak_new_infections = 0.0;
  double peak_new_infections_day = 0.0;
  double final_cumulative_fraction = 0.0;
  double total_cost = 0.0;
};

inline constexpr int kNumScalars = 6;
std::string_view scalar_name(int index);

RunScalars scalars_of(const RunResult& result);

struct Summary {
  Eigen::ArrayXXd mean;
  Eigen::ArrayXXd std;
  Eigen::ArrayXXd age_mean;
  Eigen::ArrayXXd age_std;
  std::array<double, kNumScalars> scalar_mean{};
  std::array<double, kNumScalars> scalar_std{};
  std::array<double, kNumAgeGroups> final_age_infections{};  // mean at last step
  int num_runs = 0;
  long num_agents = 0;
};

/// Pointwise mean and sample standard deviation across runs. Throws
/// std::invalid_argument for an empty list or mismatched lengths.
Summary aggregate(const std::vector<RunResult>& results);

}  // namespace pabm

#endif  // PANDEMIC_ABM_ENGINE_HPP_
