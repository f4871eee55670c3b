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

#include "pandemic_abm/popgen.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace pabm {
namespace {

enum Purpose : int { kAges = 1, kHouseholdSizes, kShuffle, kOccupations };

void require_distribution(std::span<const double> probs, const char* name) {
  double sum = 0.0;
  for (double p : probs) {
    if (p < 0.0) throw ConfigError(std::string(name) + ": negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ConfigError(std::string(name) + ": probabilities sum to " +
                      std::to_string(sum) + ", expected 1");
  }
}

}  // namespace

bool Population::operator==(const Population& o) const {
  return (age_group == o.age_group).all() && (household_id == o.household_id).all() &&
         (occupation == o.occupation).all() && (has_app == o.has_app).all() &&
         household_offsets == o.household_offsets &&
         household_members == o.household_members;
}

std::vector<double> cumulative_of(std::span<const double> probs) {
  std::vector<double> cdf(probs.size());
  std::partial_sum(probs.begin(), probs.end(), cdf.begin());
  if (!cdf.empty()) cdf.back() = 1.0;
  return cdf;
}

int sample_categorical(std::span<const double> cumulative, double u) {
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
  return static_cast<int>(std::min<std::ptrdiff_t>(
      it - cumulative.begin(), static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

int fixed_occupation_for_age(const Demographics& demo, int age_group) {
  if (age_group <= demo.child_upper_index) return kChildOccupation;
  if (age_group > demo.adult_upper_index) return kElderlyOccupation;
  return -1;
}

Population sample_population(const ScenarioConfig& config, RngStream rng) {
  const Demographics& demo = config.demographics;
  if (config.num_agents < 1) throw ConfigError("num_agents: must be >= 1");
  require_distribution(demo.age_probs, "age_ix_prob_list");
  require_distribution(demo.household_size_probs, "households_sizes_prob_list");
  require_distribution(demo.occupation_probs, "occupations_sizes_prob_list");
  if (demo.household_sizes.size() != demo.household_size_probs.size()) {
    throw ConfigError("households_sizes_list: length differs from households_sizes_prob_list");
  }

  const auto n = static_cast<std::size_t>(config.num_agents);
  Population pop;
  pop.age_group.resize(static_cast<Eigen::Index>(n));
  pop.household_id.resize(static_cast<Eigen::Index>(n));
  pop.occupation.resize(static_cast<Eigen::Index>(n));
  pop.has_app = ByteArray::Zero(static_cast<Eigen::Index>(n));

  const auto age_cdf = cumulative_of(demo.age_probs);
  RngStream age_rng = rng.split(kAges);
  for (std::size_t i = 0; i < n; ++i) {
    pop.age_group[static_cast<Eigen::Index>(i)] =
        static_cast<std::uint8_t>(sample_categorical(age_cdf, age_rng.uniform()));
  }

  // Household sizes until the population is exhausted; the last one may be
  // truncated. Members are a uniform random partition of the agents.
  const auto size_cdf = cumulative_of(demo.household_size_probs);
  RngStream size_rng = rng.split(kHouseholdSizes);
  pop.household_offsets.push_back(0);
  std::size_t filled = 0;
  while (filled < n) {
    const int k = demo.household_sizes[static_cast<std::size_t>(
        sample_categorical(size_cdf, size_rng.uniform()))];
    filled = std::min(n, filled + static_cast<std::size_t>(k));
    pop.household_offsets.push_back(static_cast<std::uint32_t>(filled));
  }
  pop.household_members.resize(n);
  std::iota(pop.household_members.begin(), pop.household_members.end(), AgentId{0});
  RngStream shuffle_rng = rng.split(kShuffle);
  for (std::size_t i = n; i > 1; --i) {
    const auto j = static_cast<std::size_t>(shuffle_rng.below(i));
    std::swap(pop.household_members[i - 1], pop.household_members[j]);
  }
  for (std::size_t h = 0; h + 1 < pop.household_offsets.size(); ++h) {
    // Sorted members make clique enumeration order independent of the shuffle.
    std::sort(pop.household_members.begin() + pop.household_offsets[h],
              pop.household_members.begin() + pop.household_offsets[h + 1]);
    for (auto k = pop.household_offsets[h]; k < pop.household_offsets[h + 1]; ++k) {
      pop.household_id[pop.household_members[k]] = static_cast<std::uint32_t>(h);
    }
  }

  const auto occupation_cdf = cumulative_of(demo.occupation_probs);
  RngStream occupation_rng = rng.split(kOccupations);
  for (std::size_t i = 0; i < n; ++i) {
    const auto idx = static_cast<Eigen::Index>(i);
    const int fixed = fixed_occupation_for_age(demo, pop.age_group[idx]);
    const double u = occupation_rng.uniform();
    pop.occupation[idx] = static_cast<std::uint8_t>(
        fixed >= 0 ? fixed : sample_categorical(occupation_cdf, u));
  }
  return pop;
}

AgeTable app_ownership_probs(const Demographics& demo, const TracingPolicy& policy) {
  AgeTable probs;
  if (!policy.use_age_dist) {
    probs.fill(policy.app_adoption_rate);
    return probs;
  }
  std::array<std::string, kNumAgeGroups> names;
  for (const auto& [name, ix] : demo.age_groups_to_ix) {
    if (ix >= 0 && ix < kNumAgeGroups) names[static_cast<std::size_t>(ix)] = name;
  }
  double expected = 0.0;
  for (int g = 0; g < kNumAgeGroups; ++g) {
    const auto it = policy.app_age_probs.find(names[static_cast<std::size_t>(g)]);
    if (it == policy.app_age_probs.end()) {
      throw ConfigError("app_user_agewise_probs_dict: missing age group " +
                        names[static_cast<std::size_t>(g)]);
    }
    probs[static_cast<std::size_t>(g)] = it->second;
    expected += it->second * demo.age_probs[static_cast<std::size_t>(g)];
  }
  const double scale = expected > 0.0 ? policy.app_adoption_rate / expected : 0.0;
  for (int g = 0; g < kNumAgeGroups; ++g) {
    auto& p = probs[static_cast<std::size_t>(g)];
    p *= scale;
    if (p > 1.0 + 1e-12) {
      throw ConfigError("app_user_agewise_probs_dict: rescaled probability for " +
                        names[static_cast<std::size_t>(g)] + " is " +
                        std::to_string(p) + " > 1 at app_adoption_rate " +
                        std::to_string(policy.app_adoption_rate));
    }
    p = std::min(p, 1.0);
  }
  return probs;
}

void assign_app_ownership(Population& pop, const Demographics& demo,
                          const TracingPolicy& policy, RngStream rng) {
  const AgeTable probs = app_ownership_probs(demo, policy);
  for (Eigen::Index i = 0; i < pop.age_group.size(); ++i) {
    pop.has_app[i] = rng.uniform_at(static_cast<std::uint64_t>(i)) <
                     probs[pop.age_group[i]];
  }
}

}  // namespace pabm
