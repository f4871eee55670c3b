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

#include "pandemic_abm/disease.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <sstream>

namespace pabm {
namespace {

enum InfectionPurpose : int { kInfectionDraw = 0, kInfectionCourse = 1 };

constexpr std::array<std::string_view, kNumStages> kStageNames = {
    "SUSCEPTIBLE",      "ASYMPTOMATIC",   "PRESYMPTOMATIC_MILD",
    "PRESYMPTOMATIC_SEVERE", "MILD_SYMPTOMS", "SEVERE_SYMPTOMS",
    "HOSPITALIZED",     "CRITICAL_ICU",   "DEATH",
    "HOSPITALIZED_RECOVERING", "RECOVERED"};

}  // namespace

std::string_view stage_name(Stage s) { return kStageNames[static_cast<std::size_t>(s)]; }

std::string_view layer_name(Layer l) {
  switch (l) {
    case Layer::kHousehold: return "household";
    case Layer::kOccupation: return "occupation";
    case Layer::kRandom: return "random";
  }
  return "unknown";
}

AgentArrays::AgentArrays(std::size_t n) {
  const auto rows = static_cast<Eigen::Index>(n);
  stage = ByteArray::Zero(rows);
  stage_entry_step = IntArray::Zero(rows);
  stage_duration = IntArray::Zero(rows);
  infectious_from = IntArray::Constant(rows, kNever);
  infected_step = IntArray::Constant(rows, kNever);
  infectiousness_scale = RealArray::Ones(rows);
  immunized = ByteArray::Zero(rows);
  quarantined = ByteArray::Zero(rows);
  quarantine_start = IntArray::Constant(rows, kNever);
  last_test_step = IntArray::Constant(rows, kNever);
  known_positive = ByteArray::Zero(rows);
  positive_step = IntArray::Constant(rows, kNever);
  doses = ByteArray::Zero(rows);
  dose1_step = IntArray::Constant(rows, kNever);
  dose2_dropout = ByteArray::Zero(rows);
  compliance_z = RealArray::Zero(rows);
}

bool AgentArrays::operator==(const AgentArrays& o) const {
  return size() == o.size() && (stage == o.stage).all() &&
         (stage_entry_step == o.stage_entry_step).all() &&
         (stage_duration == o.stage_duration).all() &&
         (infectious_from == o.infectious_from).all() &&
         (infected_step == o.infected_step).all() &&
         (infectiousness_scale == o.infectiousness_scale).all() &&
         (immunized == o.immunized).all() && (quarantined == o.quarantined).all() &&
         (quarantine_start == o.quarantine_start).all() &&
         (last_test_step == o.last_test_step).all() &&
         (known_positive == o.known_positive).all() &&
         (positive_step == o.positive_step).all() && (doses == o.doses).all() &&
         (dose1_step == o.dose1_step).all() && (dose2_dropout == o.dose2_dropout).all() &&
         (compliance_z == o.compliance_z).all();
}

int sample_duration(const DurationDist& dist, RngStream& rng) {
  if (dist.sd <= 0.0) return std::max(1, static_cast<int>(std::lround(dist.mean)));
  const double shape = (dist.mean / dist.sd) * (dist.mean / dist.sd);
  const double scale = dist.sd * dist.sd / dist.mean;
  std::gamma_distribution<double> gamma(shape, scale);
  return std::max(1, static_cast<int>(std::lround(gamma(rng))));
}

const DurationDist* duration_for(Stage stage, const DurationParams& d) {
  switch (stage) {
    case Stage::kAsymptomatic: return &d.asymptomatic;
    case Stage::kPresymptomaticMild:
    case Stage::kPresymptomaticSevere: return &d.presymptomatic;
    case Stage::kMildSymptoms: return &d.mild;
    case Stage::kSevereSymptoms: return &d.severe_to_hospital;
    case Stage::kHospitalized: return &d.hospital;
    case Stage::kCriticalIcu: return &d.icu;
    case Stage::kHospitalizedRecovering: return &d.hospital_recovering;
    default: return nullptr;
  }
}

Stage entry_stage(int age_group, const DiseaseParams& params, double u) {
  const auto& branch = params.infection_branch[static_cast<std::size_t>(age_group)];
  if (u < branch[0]) return Stage::kAsymptomatic;
  if (u < branch[0] + branch[1]) return Stage::kPresymptomaticMild;
  return Stage::kPresymptomaticSevere;
}

Stage next_stage(Stage current, int age_group, const DiseaseParams& params, double u) {
  const auto g = static_cast<std::size_t>(age_group);
  switch (current) {
    case Stage::kAsymptomatic: return Stage::kRecovered;
    case Stage::kPresymptomaticMild: return Stage::kMildSymptoms;
    case Stage::kPresymptomaticSevere: return Stage::kSevereSymptoms;
    case Stage::kMildSymptoms: return Stage::kRecovered;
    case Stage::kSevereSymptoms:
      return u < params.hospitalize_prob[g] ? Stage::kHospitalized : Stage::kRecovered;
    case Stage::kHospitalized:
      return u < params.icu_prob[g] ? Stage::kCriticalIcu : Stage::kHospitalizedRecovering;
    case Stage::kCriticalIcu:
      return u < params.death_prob[g] ? Stage::kDeath : Stage::kHospitalizedRecovering;
    case Stage::kHospitalizedRecovering: return Stage::kRecovered;
    default: return current;
  }
}

double source_infectiousness(const AgentArrays& agents, const DiseaseParams& params,
                             AgentId j, int step) {
  if (agents.infectious_from[j] == kNever || step < agents.infectious_from[j]) return 0.0;
  return params.rel_infectiousness[agents.stage[j]] * agents.infectiousness_scale[j];
}

RealArray infection_hazard(const AgentArrays& agents, const Population& pop,
                           const EdgeList& edges, const DiseaseParams& params, int step) {
  const auto n = static_cast<Eigen::Index>(agents.size());
  RealArray source(n);
  ByteArray susceptible(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    const auto id = static_cast<AgentId>(i);
    source[i] = source_infectiousness(agents, params, id, step);
    susceptible[i] = agents.is_susceptible(id);
  }
  RealArray hazard = RealArray::Zero(n);
  for (const Edge& e : edges.edges) {
    const double w = params.network_weight[index_of(e.layer)];
    if (susceptible[e.src] && source[e.dst] > 0.0) hazard[e.src] += w * source[e.dst];
    if (susceptible[e.dst] && source[e.src] > 0.0) hazard[e.dst] += w * source[e.src];
  }
  for (Eigen::Index i = 0; i < n; ++i) {
    if (hazard[i] > 0.0) hazard[i] *= params.beta * params.rel_susceptibility[pop.age_group[i]];
  }
  return hazard;
}

void infect_agent(AgentArrays& agents, const Population& pop, const DiseaseParams& params,
                  AgentId i, int step, RngStream& rng) {
  const Stage entry = entry_stage(pop.age_group[i], params, rng.uniform());
  const int latent = sample_duration(params.durations.latent, rng);
  const int first = sample_duration(*duration_for(entry, params.durations), rng);
  agents.set_stage(i, entry, step, latent + first);
  agents.infectious_from[i] = step + latent;
  agents.infected_step[i] = step;
  agents.infectiousness_scale[i] = 1.0;
}

std::vector<AgentId> infection_step(AgentArrays& agents, const Population& pop,
                                    const EdgeList& edges, const DiseaseParams& params,
                                    int step, const RngStream& rng) {
  const RealArray hazard = infection_hazard(agents, pop, edges, params, step);
  const RngStream draws = rng.split(step, kInfectionDraw);
  std::vector<AgentId> infected;
  for (Eigen::Index i = 0; i < hazard.size(); ++i) {
    if (hazard[i] <= 0.0) continue;
    const auto id = static_cast<AgentId>(i);
    if (draws.uniform_at(id) < -std::expm1(-hazard[i])) infected.push_back(id);
  }
  for (const AgentId id : infected) {
    RngStream course = rng.split(step, kInfectionCourse, id);
    infect_agent(agents, pop, params, id, step, course);
  }
  return infected;
}

void progression_step(AgentArrays& agents, const Population& pop,
                      const DiseaseParams& params, int step, const RngStream& rng) {
  for (std::size_t k = 0; k < agents.size(); ++k) {
    const auto i = static_cast<AgentId>(k);
    const Stage current = agents.stage_of(i);
    if (current == Stage::kSusceptible || is_absorbing(current)) continue;
    if (step - agents.stage_entry_step[i] < agents.stage_duration[i]) continue;
    RngStream agent_rng = rng.split(step, i);
    const Stage next = next_stage(current, pop.age_group[i], params, agent_rng.uniform());
    const DurationDist* dist = duration_for(next, params.durations);
    agents.set_stage(i, next, step, dist ? sample_duration(*dist, agent_rng) : 0);
    if (next == Stage::kRecovered) agents.known_positive[i] = 0;
    if (next == Stage::kDeath) agents.quarantined[i] = 0;
  }
}

void seed_initial_infections(AgentArrays& agents, const Population& pop,
                             const ScenarioConfig& config, const RngStream& rng) {
  const auto n = agents.size();
  const long total =
      std::accumulate(config.stage_seed_counts.begin(), config.stage_seed_counts.end(), 0L);
  if (total != static_cast<long>(n)) {
    throw ConfigError("stage_ix_pop_dict: counts sum to " + std::to_string(total) +
                      " but num_agents is " + std::to_string(n));
  }
  std::vector<AgentId> order(n);
  std::iota(order.begin(), order.end(), AgentId{0});
  RngStream shuffle = rng.split(0);
  for (std::size_t i = n; i > 1; --i) {
    std::swap(order[i - 1], order[static_cast<std::size_t>(shuffle.below(i))]);
  }
  // Non-susceptible stages take the first slots of the permutation.
  std::size_t next = 0;
  for (int s = 1; s < kNumStages; ++s) {
    const auto stage = static_cast<Stage>(s);
    for (long c = 0; c < config.stage_seed_counts[static_cast<std::size_t>(s)]; ++c) {
      const AgentId id = order[next++];
      RngStream agent_rng = rng.split(1, id);
      const DurationDist* dist = duration_for(stage, config.disease.durations);
      agents.set_stage(id, stage, 0, dist ? sample_duration(*dist, agent_rng) : 0);
      agents.infected_step[id] = 0;
      agents.infectious_from[id] = is_infected(stage) ? 0 : kNever;
    }
  }
  (void)pop;
}

std::vector<IndexExposure> sample_index_exposures(const ScenarioConfig& config,
                                                  const Population& pop, int count,
                                                  RngStream rng) {
  const DiseaseParams& params = config.disease;
  const auto groups = occupation_groups(pop);
  std::vector<IndexExposure> out;
  out.reserve(static_cast<std::size_t>(count));
  std::vector<std::pair<AgentId, double>> raw;
  for (int c = 0; c < count; ++c) {
    RngStream case_rng = rng.split(c);
    const auto index = static_cast<AgentId>(case_rng.below(pop.size()));
    const int age = pop.age_group[index];

    Stage stage = entry_stage(age, params, case_rng.uniform());
    const int latent = sample_duration(params.durations.latent, case_rng);
    int entry_t = 0;
    int duration = latent + sample_duration(*duration_for(stage, params.durations), case_rng);

    // Mirrors the engine: contacts on day t use the stage held at the start
    // of t, progression happens after infection within the day.
    raw.clear();
    for (int t = 1; is_infected(stage); ++t) {
      const double inf = params.rel_infectiousness[index_of(stage)];
      if (t >= latent && inf > 0.0 && !is_isolated_stage(stage)) {
        for (const Contact& contact :
             sample_incident_contacts(pop, groups, config.network, index, case_rng)) {
          const double w = params.network_weight[index_of(contact.layer)] * inf *
                           params.rel_susceptibility[pop.age_group[contact.other]];
          if (w > 0.0) raw.emplace_back(contact.other, w);
        }
      }
      if (t - entry_t >= duration) {
        stage = next_stage(stage, age, params, case_rng.uniform());
        entry_t = t;
        const DurationDist* dist = duration_for(stage, params.durations);
        duration = dist ? sample_duration(*dist, case_rng) : 0;
      }
    }

    std::sort(raw.begin(), raw.end());
    IndexExposure exposure;
    for (std::size_t k = 0; k < raw.size();) {
      double total = 0.0;
      std::size_t m = k;
      for (; m < raw.size() && raw[m].first == raw[k].first; ++m) total += raw[m].second;
      exposure.weights.push_back(total);
      k = m;
    }
    out.push_back(std::move(exposure));
  }
  return out;
}

double expected_secondary_infections(const std::vector<IndexExposure>& exposures,
                                     double beta) {
  if (exposures.empty()) return 0.0;
  double total = 0.0;
  for (const auto& e : exposures) {
    for (const double w : e.weights) total += -std::expm1(-beta * w);
  }
  return total / static_cast<double>(exposures.size());
}

double realized_secondary_infections(const std::vector<IndexExposure>& exposures,
                                     double beta, RngStream rng) {
  if (exposures.empty()) return 0.0;
  long infected = 0;
  for (const auto& e : exposures) {
    for (const double w : e.weights) infected += rng.uniform() < -std::expm1(-beta * w);
  }
  return static_cast<double>(infected) / static_cast<double>(exposures.size());
}

CalibrationResult calibrate_beta(const ScenarioConfig& config, double target_R,
                                 RngStream rng, int num_index_cases) {
  CalibrationResult result;
  result.num_index_cases = num_index_cases;
  if (target_R < 0.0) throw CalibrationError("target R must be non-negative");
  if (target_R == 0.0) return result;

  const Population pop = sample_population(config, rng.split(0));
  const auto exposures = sample_index_exposures(config, pop, num_index_cases, rng.split(1));
  double contacts = 0.0;
  for (const auto& e : exposures) contacts += static_cast<double>(e.weights.size());
  result.max_R = contacts / static_cast<double>(std::max(1, num_index_cases));

  const auto objective = [&](double beta) {
    return expected_secondary_infections(exposures, beta);
  };
  double lo = 0.0;
  double hi = 1.0;
  int doublings = 0;
  while (objective(hi) < target_R) {
    if (++doublings > 60) {
      std::ostringstream msg;
      msg << "cannot bracket R=" << target_R << ": R(" << hi << ")=" << objective(hi)
          << ", attainable maximum (mean distinct contacts per index case) is "
          << result.max_R << " over " << num_index_cases << " index cases";
      throw CalibrationError(msg.str());
    }
    lo = hi;
    hi *= 2.0;
  }
  for (result.iterations = 0; result.iterations < 200; ++result.iterations) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (objective(mid) < target_R ? lo : hi) = mid;
  }
  result.beta = hi;
  result.achieved_R = objective(hi);
  return result;
}

}  // namespace pabm
