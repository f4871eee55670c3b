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

#ifndef PANDEMIC_ABM_CONFIG_HPP_
#define PANDEMIC_ABM_CONFIG_HPP_

#include <array>
#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pandemic_abm/types.hpp"

namespace pabm {

using AgeTable = std::array<double, kNumAgeGroups>;

struct Demographics {
  std::map<std::string, int> age_groups_to_ix;
  std::map<int, long> age_ix_pop;  // census counts; informational only
  AgeTable age_probs{};
  std::vector<int> household_sizes;
  std::vector<double> household_size_probs;
  std::map<std::string, int> occupations_to_ix;
  std::array<double, kNumWorkingOccupations> occupation_probs{};
  int adult_upper_index = 6;
  int child_upper_index = 1;

  bool operator==(const Demographics&) const = default;
};

struct NetworkParams {
  double occupation_mean_contacts = 7.0;
  double random_mean_contacts = 4.0;
  double scale_random_interact = 1.0;

  double random_degree() const {
    return random_mean_contacts * scale_random_interact;
  }
  bool operator==(const NetworkParams&) const = default;
};

// Gamma holding time in days; sampled values are rounded, minimum 1.
struct DurationDist {
  double mean = 1.0;
  double sd = 1.0;
  bool operator==(const DurationDist&) const = default;
};

struct DurationParams {
  DurationDist latent{4.6, 2.4};
  DurationDist presymptomatic{1.9, 0.9};
  DurationDist asymptomatic{8.0, 3.0};
  DurationDist mild{8.0, 3.0};
  DurationDist severe_to_hospital{5.1, 2.4};
  DurationDist hospital{8.0, 4.0};
  DurationDist icu{10.0, 5.0};
  DurationDist hospital_recovering{4.0, 2.0};
  bool operator==(const DurationParams&) const = default;
};

struct DiseaseParams {
  double beta = 0.0;
  double target_R = 5.02;
  std::array<double, kNumStages> rel_infectiousness{};
  AgeTable rel_susceptibility{};
  std::array<double, kNumLayers> network_weight{};
  // Entry branch at infection: asymptomatic, mild, severe.
  std::array<std::array<double, 3>, kNumAgeGroups> infection_branch{};
  AgeTable hospitalize_prob{};  // severe -> hospitalized
  AgeTable icu_prob{};          // hospitalized -> ICU
  AgeTable death_prob{};        // ICU -> death
  DurationParams durations;

  bool operator==(const DiseaseParams&) const = default;
};

struct TestingPolicy {
  int start_date = 0;
  double true_positive = 0.99;
  double false_positive = 0.0;
  std::vector<int> results_dates{1, 2, 3};
  std::vector<double> results_dates_probs{0.3, 0.4, 0.3};
  int validity_days = -1;  // -1: valid indefinitely
  double cost = 5.0;
  bool on_symptoms = true;

  bool operator==(const TestingPolicy&) const = default;
};

struct QuarantinePolicy {
  double enter_prob = 0.8;      // after a positive result
  double dct_enter_prob = 0.8;  // after an exposure notification
  double mct_enter_prob = 0.9;  // after being reached by a manual tracer
  double break_prob = 0.01;
  int days = 14;

  bool operator==(const QuarantinePolicy&) const = default;
};

struct VaccinePolicy {
  int start_date = 10;
  long daily_prod = 300;
  int shelf_life = 2;
  int dose_delay = 14;
  bool dose1_priority = true;
  double dose1_eff = 0.9;
  int dose2_gap = 21;
  double dose2_eff = 0.95;
  double dose2_drop = 0.3;
  double price = 20.0;

  bool operator==(const VaccinePolicy&) const = default;
};

enum class TracingMode { kOff, kDct, kMct, kParallel, kHybrid };

struct TracingChannel {
  int max_contact_days = 7;
  double inform_prob = 1.0;
  double rtpcr_comply_prob = 0.8;
  double poc_comply_prob = 0.8;
  bool operator==(const TracingChannel&) const = default;
};

struct TracingPolicy {
  bool dct = false;
  bool mct = false;
  bool hybrid = false;
  double app_adoption_rate = 0.4;
  bool use_age_dist = false;
  std::map<std::string, double> app_age_probs;  // keyed by age group name
  TracingChannel dct_channel;
  TracingChannel mct_channel{7, 1.0, 0.95, 0.95};
  double mct_recall_prob = 0.7;
  double mct_reachable_prob = 0.95;

  TracingMode mode() const;
  int window_days() const;
  bool operator==(const TracingPolicy&) const = default;
};

struct LogicToggles {
  bool use_den_logic = false;
  bool use_mct_logic = false;
  bool use_rtpcr_test_logic = false;
  bool use_quarantine_logic = false;
  bool use_vaccination_logic = false;
  bool use_hybrid_logic = false;
  bool use_gps_logic = false;
  bool use_poc_test_on_ct_logic = false;
  bool use_rtpcr_test_on_ct_logic = false;
  bool poc_test_on_symptoms = false;
  bool operator==(const LogicToggles&) const = default;
};

struct ScenarioConfig {
  // Run control.
  long num_agents = 0;
  int num_steps = 0;
  int num_runs = 1;
  std::uint64_t seed = 0;
  bool use_gpu = false;  // accepted and ignored
  bool debug = false;
  std::string type = "generated";
  std::string generated_params_file_name;
  std::string results_file_postfix = "run";

  Demographics demographics;
  std::array<long, kNumStages> stage_seed_counts{};
  std::map<int, std::string> stage_names;
  int num_stages = kNumStages;

  NetworkParams network;
  DiseaseParams disease;

  TestingPolicy rtpcr;
  TestingPolicy poc{0, 0.85, 0.0, {0}, {1.0}, -1, 5.0, false};
  QuarantinePolicy quarantine;
  VaccinePolicy vaccine;
  TracingPolicy tracing;
  LogicToggles logic;

  double compliance_sigma = 0.0;
  double hospital_bed_capacity = 55.0;
  std::optional<double> vaccine_budget;

  bool operator==(const ScenarioConfig&) const = default;

  // Test used for symptomatic agents, or nullptr when testing is off.
  const TestingPolicy* active_test() const;
  bool testing_enabled() const { return active_test() != nullptr; }
  bool is_poc_active() const;
};

/// Parses and validates a scenario file. Throws ConfigError naming the key.
ScenarioConfig parse_config(const std::string& yaml_text);
ScenarioConfig parse_config(const std::string& yaml_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides);
ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides = {});

/// Validates cross-field constraints. Called by parse_config.
void validate_config(const ScenarioConfig& config);

/// Canonical YAML for a config; parse_config(serialize_config(c)) == c.
std::string serialize_config(const ScenarioConfig& config);

/// FNV-1a over the canonical serialization, as 16 hex digits.
std::string config_hash(const ScenarioConfig& config);

/// Applies `path=value` to YAML text where path is dot-separated
/// (map keys or sequence indices). Throws ConfigError if the path does not
/// resolve to an existing key.
std::string apply_override(const std::string& yaml_text, const std::string& path,
                           const std::string& value);

/// Transmission hazard per contact-day calibrated to R = 5.02 with the
/// default tables (see `pandemic-abm calibrate`).
inline constexpr double kDefaultBeta = 0.05147377486;

/// Default values for the optional disease tables.
DiseaseParams default_disease_params();

/// Copies the logic toggles into the policy structs that mirror them.
/// parse_config calls this; call it again after editing `logic` directly.
void sync_derived_fields(ScenarioConfig& config);

}  // namespace pabm

#endif  // PANDEMIC_ABM_CONFIG_HPP_
