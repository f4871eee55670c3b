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

#include "pandemic_abm/engine.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "pandemic_abm/disease.hpp"

namespace pabm {
namespace {

// Sub-streams of a run root. Each module splits further by step/agent.
enum RunPurpose : int {
  kPopulationStream = 1,
  kAppStream,
  kSeedStream,
  kComplianceStream,
  kNetworkStream,
  kInfectionStream,
  kProgressionStream,
  kTestingStream,
  kPositiveQuarantineStream,
  kVaccinationStream,
  kImmunizationStream,
  kDctStream,
  kMctStream,
  kTracedQuarantineStream,
  kQuarantineUpdateStream,
  kTraceTestStream,
};

constexpr std::array<std::string_view, kNumSeries> kSeriesNames = {
    "new_infections", "cumulative_infections", "hospitalized", "icu",
    "deaths",         "recovered",             "immunized",    "quarantined",
    "tests_administered", "doses_administered", "cumulative_cost", "susceptible"};

constexpr std::array<std::string_view, kNumScalars> kScalarNames = {
    "peak_hospitalized",       "peak_hospitalized_day", "peak_new_infections",
    "peak_new_infections_day", "final_cumulative_fraction", "total_cost"};

Eligibility contact_eligibility(const AgentArrays& agents) {
  Eligibility eligible(static_cast<Eigen::Index>(agents.size()));
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto i = static_cast<AgentId>(k);
    eligible[i] = !agents.quarantined[i] && !is_isolated_stage(agents.stage_of(i));
  }
  return eligible;
}

EdgeList todays_edges(const World& w, const Eligibility& eligible) {
  const RngStream net = w.root.split(kNetworkStream);
  EdgeList edges = filter_edges(w.household_edges, eligible, w.step);
  const EdgeList occupation =
      sample_occupation_edges(w.population, w.config->network, eligible, w.step, net);
  const EdgeList random =
      sample_random_edges(w.population, w.config->network, eligible, w.step, net);
  edges.edges.insert(edges.edges.end(), occupation.edges.begin(), occupation.edges.end());
  edges.edges.insert(edges.edges.end(), random.edges.begin(), random.edges.end());
  return edges;
}

// Tests traced contacts when a test-on-trace toggle is set.
long test_traced(World& w, std::span<const AgentId> traced) {
  const TestingPolicy* policy = w.policies.trace_test;
  if (policy == nullptr || w.step < policy->start_date) return 0;
  const auto delay_cdf = cumulative_of(policy->results_dates_probs);
  const RngStream rng = w.root.split(kTraceTestStream);
  long administered = 0;
  for (const AgentId i : traced) {
    const int last = w.agents.last_test_step[i];
    if (last != kNever &&
        (policy->validity_days < 0 || w.step - last < policy->validity_days)) {
      continue;
    }
    if (is_isolated_stage(w.agents.stage_of(i))) continue;
    RngStream agent_rng = rng.split(w.step, i);
    const double p = is_infected(w.agents.stage_of(i)) ? policy->true_positive
                                                       : policy->false_positive;
    const bool positive = agent_rng.uniform() < p;
    const int delay = policy->results_dates[static_cast<std::size_t>(
        sample_categorical(delay_cdf, agent_rng.uniform()))];
    w.results.push({i, w.step + delay, positive});
    w.agents.last_test_step[i] = w.step;
    w.events.add(w.step, EventKind::kTestAdministered, i, w.step + delay);
    ++administered;
  }
  return administered;
}

std::vector<AgentId> merge_sorted(const std::vector<AgentId>& a, const std::vector<AgentId>& b) {
  std::vector<AgentId> out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

}  // namespace

std::string_view series_name(int column) {
  return kSeriesNames[static_cast<std::size_t>(column)];
}

std::string_view scalar_name(int index) { return kScalarNames[static_cast<std::size_t>(index)]; }

bool RunResult::operator==(const RunResult& o) const {
  return series.rows() == o.series.rows() && (series == o.series).all() &&
         (age_cumulative == o.age_cumulative).all() && (stage_counts == o.stage_counts).all() &&
         num_agents == o.num_agents && total_tests == o.total_tests &&
         total_doses == o.total_doses;
}

ActivePolicies resolve_policies(const ScenarioConfig& config) {
  ActivePolicies p;
  const LogicToggles& logic = config.logic;
  p.test = config.active_test();
  p.quarantine = logic.use_quarantine_logic;
  p.vaccination = logic.use_vaccination_logic;
  p.vaccine = config.vaccine;
  if (config.vaccine_budget) {
    p.vaccine = budget_scaled_policy(*config.vaccine_budget, config.vaccine, config.num_steps);
  }
  p.tracing = config.tracing.mode();
  const bool poc = config.is_poc_active();
  p.dct_comply = poc ? config.tracing.dct_channel.poc_comply_prob
                     : config.tracing.dct_channel.rtpcr_comply_prob;
  p.mct_comply = poc ? config.tracing.mct_channel.poc_comply_prob
                     : config.tracing.mct_channel.rtpcr_comply_prob;
  if (logic.use_rtpcr_test_on_ct_logic) {
    p.trace_test = &config.rtpcr;
  } else if (logic.use_poc_test_on_ct_logic) {
    p.trace_test = &config.poc;
  }
  return p;
}

World make_world(const ScenarioConfig& config, int run_index, bool record_events) {
  const RngStream root = RngStream(config.seed).split(run_index);
  const ActivePolicies policies = resolve_policies(config);
  Population pop = sample_population(config, root.split(kPopulationStream));
  if (policies.tracing != TracingMode::kOff) {
    assign_app_ownership(pop, config.demographics, config.tracing, root.split(kAppStream));
  }
  const std::size_t n = pop.size();
  const int window = policies.tracing == TracingMode::kOff ? 1 : config.tracing.window_days();

  World w{
      .config = &config,
      .policies = policies,
      .root = root,
      .population = std::move(pop),
      .household_edges = {},
      .agents = AgentArrays(n),
      .interactions = InteractionLog(n, window),
      .supply = {},
      .ledger = CostLedger(policies.test ? policies.test->cost : config.rtpcr.cost,
                           policies.vaccine.price),
      .results = {},
      .onsets = {},
      .events = EventLog(record_events),
      .vaccine_order = {},
  };
  w.household_edges = build_household_edges(w.population);
  if (policies.vaccination) w.vaccine_order = vaccination_order(w.population);

  if (config.compliance_sigma > 0.0) {
    const RngStream comp = root.split(kComplianceStream);
    for (std::size_t i = 0; i < n; ++i) {
      RngStream s = comp.split(i);
      w.agents.compliance_z[static_cast<Eigen::Index>(i)] =
          std::normal_distribution<double>(0.0, 1.0)(s);
    }
  }

  seed_initial_infections(w.agents, w.population, config, root.split(kSeedStream));
  for (std::size_t i = 0; i < n; ++i) {
    if (w.agents.infected_step[static_cast<Eigen::Index>(i)] != kNever) {
      ++w.cumulative_infections;
      ++w.age_cumulative[w.population.age_group[static_cast<Eigen::Index>(i)]];
    }
  }
  w.new_infections = w.cumulative_infections;
  return w;
}

void step(World& w, RunObserver* observer) {
  const ScenarioConfig& config = *w.config;
  const ActivePolicies& pol = w.policies;
  const int t = w.step;
  w.new_infections = 0;
  w.tests_today = 0;
  w.doses_today = 0;

  // (1) Contacts, infection, progression.
  const EdgeList edges = todays_edges(w, contact_eligibility(w.agents));
  if (observer) observer->on_edges(w, edges);
  if (pol.tracing != TracingMode::kOff) w.interactions.log(edges);
  const auto infected = infection_step(w.agents, w.population, edges, config.disease, t,
                                       w.root.split(kInfectionStream));
  w.new_infections = static_cast<long>(infected.size());
  w.cumulative_infections += w.new_infections;
  for (const AgentId i : infected) ++w.age_cumulative[w.population.age_group[i]];
  progression_step(w.agents, w.population, config.disease, t,
                   w.root.split(kProgressionStream));

  // (2) Testing of symptomatic agents; results due today arrive afterwards.
  std::vector<AgentId> positives;
  if (pol.test) {
    w.tests_today += testing_step(w.agents, *pol.test, t, w.root.split(kTestingStream),
                                  w.results, w.events);
    expire_known_positives(w.agents, *pol.test, t);
  }
  positives = deliver_results(w.agents, w.results, t, w.events);

  // (3a) Positives self-quarantine.
  if (pol.quarantine) {
    enter_quarantine(w.agents, positives, config.quarantine.enter_prob, config.compliance_sigma,
                     t, w.root.split(kPositiveQuarantineStream).split(t), w.events);
  }

  // (3b) Vaccination, then immunity trials due today.
  if (pol.vaccination) {
    const bool record = observer && observer->record_vaccination_candidates();
    const VaccinationOutcome outcome =
        vaccination_step(w.agents, w.vaccine_order, pol.vaccine, w.supply, t,
                         w.root.split(kVaccinationStream), w.onsets, w.events, record);
    w.doses_today = outcome.doses;
    if (observer) observer->on_vaccination(w, outcome);
    deliver_immunizations(w.agents, pol.vaccine, w.onsets, t,
                          w.root.split(kImmunizationStream), w.events);
  }

  // (3c)-(5c) Tracing and quarantine of traced contacts.
  if (pol.tracing != TracingMode::kOff && !positives.empty()) {
    TraceOutcome dct;
    TraceOutcome mct;
    if (config.tracing.dct) {
      dct = dct_notify(w.interactions, w.population, positives, config.tracing, t,
                       w.root.split(kDctStream));
      for (const auto& [contact, index] : dct.links) {
        w.events.add(t, EventKind::kDctNotified, contact, index);
      }
    }
    if (config.tracing.mct) {
      std::vector<AgentId> targets;
      if (pol.tracing == TracingMode::kHybrid) {
        for (const AgentId p : positives) {
          if (!w.population.has_app[p]) targets.push_back(p);
        }
        targets = merge_sorted(targets, dct.declined);
      } else {
        targets = positives;
      }
      mct = mct_trace(w.interactions, targets, config.tracing, t, w.root.split(kMctStream));
      for (const auto& [contact, index] : mct.links) {
        w.events.add(t, EventKind::kMctReached, contact, index);
      }
    }
    w.tests_today += test_traced(w, merge_sorted(dct.reached, mct.reached));
    if (pol.quarantine) {
      const RngStream q = w.root.split(kTracedQuarantineStream).split(t);
      enter_quarantine(w.agents, dct.reached, pol.dct_comply * config.quarantine.dct_enter_prob,
                       config.compliance_sigma, t, q.split(0), w.events);
      enter_quarantine(w.agents, mct.reached, pol.mct_comply * config.quarantine.mct_enter_prob,
                       config.compliance_sigma, t, q.split(1), w.events);
    }
  }

  if (pol.quarantine) {
    update_quarantine(w.agents, config.quarantine, t, w.root.split(kQuarantineUpdateStream),
                      w.events);
  }

  w.ledger.add_tests(w.tests_today);
  w.ledger.add_doses(w.doses_today);
}

void record_row(const World& w, RunResult& r, int row) {
  std::array<double, kNumStages> stages{};
  double immunized = 0.0;
  double quarantined = 0.0;
  for (std::size_t k = 0; k < w.agents.size(); ++k) {
    const auto i = static_cast<Eigen::Index>(k);
    stages[w.agents.stage[i]] += 1.0;
    immunized += w.agents.immunized[i];
    quarantined += w.agents.quarantined[i];
  }
  for (int s = 0; s < kNumStages; ++s) r.stage_counts(row, s) = stages[static_cast<std::size_t>(s)];
  const auto stage = [&](Stage s) { return stages[static_cast<std::size_t>(index_of(s))]; };
  r.series(row, kNewInfections) = static_cast<double>(w.new_infections);
  r.series(row, kCumulativeInfections) = static_cast<double>(w.cumulative_infections);
  r.series(row, kHospitalizedCount) = stage(Stage::kHospitalized) + stage(Stage::kCriticalIcu) +
                                      stage(Stage::kHospitalizedRecovering);
  r.series(row, kIcuCount) = stage(Stage::kCriticalIcu);
  r.series(row, kDeaths) = stage(Stage::kDeath);
  r.series(row, kRecoveredCount) = stage(Stage::kRecovered);
  r.series(row, kImmunizedCount) = immunized;
  r.series(row, kQuarantinedCount) = quarantined;
  r.series(row, kTestsAdministered) = static_cast<double>(w.tests_today);
  r.series(row, kDosesAdministered) = static_cast<double>(w.doses_today);
  r.series(row, kCumulativeCost) = w.ledger.total();
  r.series(row, kSusceptibleCount) = stage(Stage::kSusceptible);
  for (int g = 0; g < kNumAgeGroups; ++g) {
    r.age_cumulative(row, g) = static_cast<double>(w.age_cumulative[static_cast<std::size_t>(g)]);
  }
}

RunResult run(const ScenarioConfig& config, int run_index, RunObserver* observer) {
  const int steps = std::max(0, config.num_steps);
  RunResult result;
  result.series = Eigen::ArrayXXd::Zero(steps, kNumSeries);
  result.age_cumulative = Eigen::ArrayXXd::Zero(steps, kNumAgeGroups);
  result.stage_counts = Eigen::ArrayXXd::Zero(steps, kNumStages);
  result.num_agents = config.num_agents;

  World w = make_world(config, run_index, observer && observer->record_events());
  // Day 0 is seeding only; contacts start on day 1.
  for (int t = 0; t < steps; ++t) {
    w.step = t;
    if (t > 0) step(w, observer);
    w.ledger.close_step();
    record_row(w, result, t);
    if (observer) observer->on_step_end(w);
  }
  result.total_tests = w.ledger.tests();
  result.total_doses = w.ledger.doses();
  result.test_price = w.ledger.test_price();
  result.dose_price = w.ledger.dose_price();
  if (observer) observer->on_run_end(w);
  return result;
}

std::vector<RunResult> run_ensemble(const ScenarioConfig& config, int jobs) {
  const int runs = std::max(0, config.num_runs);
  std::vector<RunResult> results(static_cast<std::size_t>(runs));
  const int workers = std::clamp(jobs, 1, std::max(1, runs));
  if (workers == 1) {
    for (int r = 0; r < runs; ++r) results[static_cast<std::size_t>(r)] = run(config, r);
    return results;
  }
  std::atomic<int> next{0};
  std::exception_ptr failure;
  std::atomic<bool> failed{false};
  {
    std::vector<std::jthread> pool;
    for (int k = 0; k < workers; ++k) {
      pool.emplace_back([&] {
        for (int r = next++; r < runs && !failed; r = next++) {
          try {
            results[static_cast<std::size_t>(r)] = run(config, r);
          } catch (...) {
            if (!failed.exchange(true)) failure = std::current_exception();
          }
        }
      });
    }
  }
  if (failure) std::rethrow_exception(failure);
  return results;
}

RunScalars scalars_of(const RunResult& r) {
  RunScalars s;
  if (r.num_steps() == 0) return s;
  Eigen::Index day = 0;
  s.peak_hospitalized = r.series.col(kHospitalizedCount).maxCoeff(&day);
  s.peak_hospitalized_day = static_cast<double>(day);
  s.peak_new_infections = r.series.col(kNewInfections).maxCoeff(&day);
  s.peak_new_infections_day = static_cast<double>(day);
  s.final_cumulative_fraction =
      r.series(r.num_steps() - 1, kCumulativeInfections) / static_cast<double>(r.num_agents);
  s.total_cost = r.series(r.num_steps() - 1, kCumulativeCost);
  return s;
}

Summary aggregate(const std::vector<RunResult>& results) {
  if (results.empty()) throw std::invalid_argument("aggregate: no runs");
  const Eigen::Index rows = results.front().series.rows();
  for (const RunResult& r : results) {
    if (r.series.rows() != rows) {
      throw std::invalid_argument("aggregate: runs have different lengths (" +
                                  std::to_string(r.series.rows()) + " vs " +
                                  std::to_string(rows) + ")");
    }
  }
  const auto n = static_cast<double>(results.size());
  Summary s;
  s.num_runs = static_cast<int>(results.size());
  s.num_agents = results.front().num_agents;

  const auto mean_std = [&](auto member, Eigen::ArrayXXd& mean, Eigen::ArrayXXd& sd) {
    const Eigen::ArrayXXd& first = results.front().*member;
    mean = Eigen::ArrayXXd::Zero(first.rows(), first.cols());
    for (const RunResult& r : results) mean += r.*member;
    mean /= n;
    sd = Eigen::ArrayXXd::Zero(first.rows(), first.cols());
    if (results.size() > 1) {
      for (const RunResult& r : results) sd += (r.*member - mean).square();
      sd = (sd / (n - 1.0)).sqrt();
    }
  };
  mean_std(&RunResult::series, s.mean, s.std);
  mean_std(&RunResult::age_cumulative, s.age_mean, s.age_std);

  std::vector<std::array<double, kNumScalars>> per_run;
  for (const RunResult& r : results) {
    const RunScalars v = scalars_of(r);
    per_run.push_back({v.peak_hospitalized, v.peak_hospitalized_day, v.peak_new_infections,
                       v.peak_new_infections_day, v.final_cumulative_fraction, v.total_cost});
  }
  for (int k = 0; k < kNumScalars; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    double sum = 0.0;
    for (const auto& v : per_run) sum += v[idx];
    s.scalar_mean[idx] = sum / n;
    double ss = 0.0;
    for (const auto& v : per_run) ss += (v[idx] - s.scalar_mean[idx]) * (v[idx] - s.scalar_mean[idx]);
    s.scalar_std[idx] = per_run.size() > 1 ? std::sqrt(ss / (n - 1.0)) : 0.0;
  }
  if (rows > 0) {
    for (int g = 0; g < kNumAgeGroups; ++g) {
      s.final_age_infections[static_cast<std::size_t>(g)] = s.age_mean(rows - 1, g);
    }
  }
  return s;
}

}  // namespace pabm
