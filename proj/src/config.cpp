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

#include "pandemic_abm/config.hpp"

#include <yaml-cpp/yaml.h>

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <numeric>
#include <set>
#include <sstream>

#include "pandemic_abm/popgen.hpp"

namespace pabm {
namespace {

constexpr double kSumTolerance = 1e-6;

std::string location(const YAML::Node& node) {
  const YAML::Mark mark = node.Mark();
  if (mark.is_null()) return "";
  return " (line " + std::to_string(mark.line + 1) + ")";
}

[[noreturn]] void fail(const std::string& key, const std::string& what) {
  throw ConfigError(key + ": " + what);
}

template <typename T>
T as(const YAML::Node& node, const std::string& key) {
  try {
    return node.as<T>();
  } catch (const YAML::Exception&) {
    fail(key, "wrong type" + location(node));
  }
}

template <typename T>
std::vector<T> as_list(const YAML::Node& node, const std::string& key) {
  if (!node.IsSequence()) fail(key, "expected a list" + location(node));
  std::vector<T> out;
  for (const auto& item : node) out.push_back(as<T>(item, key));
  return out;
}

template <typename T, std::size_t N>
std::array<T, N> as_array(const YAML::Node& node, const std::string& key) {
  const auto list = as_list<T>(node, key);
  if (list.size() != N) {
    fail(key, "expected " + std::to_string(N) + " entries, got " + std::to_string(list.size()));
  }
  std::array<T, N> out{};
  std::copy(list.begin(), list.end(), out.begin());
  return out;
}

template <typename K, typename V>
std::map<K, V> as_map(const YAML::Node& node, const std::string& key) {
  if (!node.IsMap()) fail(key, "expected a mapping" + location(node));
  std::map<K, V> out;
  for (const auto& kv : node) out[as<K>(kv.first, key)] = as<V>(kv.second, key);
  return out;
}

// One scenario-file key: how to read it and how to write it back.
struct Field {
  std::string key;
  bool required;
  std::function<void(const YAML::Node&, ScenarioConfig&)> read;
  std::function<void(YAML::Emitter&, const ScenarioConfig&)> write;
};

template <typename T>
Field scalar(std::string key, bool required, T& (*ref)(ScenarioConfig&)) {
  return {key, required,
          [key, ref](const YAML::Node& n, ScenarioConfig& c) { ref(c) = as<T>(n, key); },
          [ref](YAML::Emitter& e, const ScenarioConfig& c) {
            e << ref(const_cast<ScenarioConfig&>(c));
          }};
}

template <typename T>
Field list(std::string key, bool required, std::vector<T>& (*ref)(ScenarioConfig&)) {
  return {key, required,
          [key, ref](const YAML::Node& n, ScenarioConfig& c) { ref(c) = as_list<T>(n, key); },
          [ref](YAML::Emitter& e, const ScenarioConfig& c) {
            e << YAML::BeginSeq;
            for (const T& v : ref(const_cast<ScenarioConfig&>(c))) e << v;
            e << YAML::EndSeq;
          }};
}

template <typename T, std::size_t N>
Field array(std::string key, bool required, std::array<T, N>& (*ref)(ScenarioConfig&)) {
  return {key, required,
          [key, ref](const YAML::Node& n, ScenarioConfig& c) { ref(c) = as_array<T, N>(n, key); },
          [ref](YAML::Emitter& e, const ScenarioConfig& c) {
            e << YAML::Flow << YAML::BeginSeq;
            for (const T& v : ref(const_cast<ScenarioConfig&>(c))) e << v;
            e << YAML::EndSeq;
          }};
}

template <typename K, typename V>
Field mapping(std::string key, bool required, std::map<K, V>& (*ref)(ScenarioConfig&)) {
  return {key, required,
          [key, ref](const YAML::Node& n, ScenarioConfig& c) { ref(c) = as_map<K, V>(n, key); },
          [ref](YAML::Emitter& e, const ScenarioConfig& c) {
            e << YAML::BeginMap;
            for (const auto& [k, v] : ref(const_cast<ScenarioConfig&>(c))) {
              e << YAML::Key << k << YAML::Value << v;
            }
            e << YAML::EndMap;
          }};
}

Field duration_table() {
  using Entry = std::pair<const char*, DurationDist DurationParams::*>;
  static const std::array<Entry, 8> kEntries = {{
      {"latent", &DurationParams::latent},
      {"presymptomatic", &DurationParams::presymptomatic},
      {"asymptomatic", &DurationParams::asymptomatic},
      {"mild", &DurationParams::mild},
      {"severe_to_hospital", &DurationParams::severe_to_hospital},
      {"hospital", &DurationParams::hospital},
      {"icu", &DurationParams::icu},
      {"hospital_recovering", &DurationParams::hospital_recovering},
  }};
  const std::string key = "stage_durations";
  return {key, false,
          [key](const YAML::Node& n, ScenarioConfig& c) {
            if (!n.IsMap()) fail(key, "expected a mapping" + location(n));
            for (const auto& kv : n) {
              const auto name = as<std::string>(kv.first, key);
              const auto it = std::find_if(kEntries.begin(), kEntries.end(),
                                           [&](const Entry& e) { return name == e.first; });
              if (it == kEntries.end()) fail(key + "." + name, "unknown key" + location(kv.first));
              const auto pair = as_array<double, 2>(kv.second, key + "." + name);
              c.disease.durations.*(it->second) = {pair[0], pair[1]};
            }
          },
          [](YAML::Emitter& e, const ScenarioConfig& c) {
            e << YAML::BeginMap;
            for (const auto& [name, member] : kEntries) {
              const DurationDist& d = c.disease.durations.*member;
              e << YAML::Key << name << YAML::Value << YAML::Flow << YAML::BeginSeq << d.mean
                << d.sd << YAML::EndSeq;
            }
            e << YAML::EndMap;
          }};
}

Field branch_table() {
  const std::string key = "infection_branch_probs";
  return {key, false,
          [key](const YAML::Node& n, ScenarioConfig& c) {
            const auto rows = as_list<std::vector<double>>(n, key);
            if (rows.size() != kNumAgeGroups) fail(key, "expected 9 rows");
            for (std::size_t g = 0; g < rows.size(); ++g) {
              if (rows[g].size() != 3) fail(key, "each row needs 3 entries");
              std::copy(rows[g].begin(), rows[g].end(), c.disease.infection_branch[g].begin());
            }
          },
          [](YAML::Emitter& e, const ScenarioConfig& c) {
            e << YAML::BeginSeq;
            for (const auto& row : c.disease.infection_branch) {
              e << YAML::Flow << YAML::BeginSeq << row[0] << row[1] << row[2] << YAML::EndSeq;
            }
            e << YAML::EndSeq;
          }};
}

Field optional_budget() {
  const std::string key = "vaccine_budget";
  return {key, false,
          [key](const YAML::Node& n, ScenarioConfig& c) {
            if (n.IsNull()) {
              c.vaccine_budget.reset();
            } else {
              c.vaccine_budget = as<double>(n, key);
            }
          },
          [](YAML::Emitter& e, const ScenarioConfig& c) {
            if (c.vaccine_budget) {
              e << *c.vaccine_budget;
            } else {
              e << YAML::Null;
            }
          }};
}

// Keys in serialization order. Appendix keys first, then the optional
// extensions.
#define REF(expr) +[](ScenarioConfig& c) -> auto& { return expr; }

const std::vector<Field>& fields() {
  static const std::vector<Field> kFields = [] {
    std::vector<Field> f;
    // Demographics.
    f.push_back(scalar<int>("ADULT_Upper_Index", true, REF(c.demographics.adult_upper_index)));
    f.push_back(scalar<int>("CHILD_Upper_Index", true, REF(c.demographics.child_upper_index)));
    f.push_back(scalar<double>("R", true, REF(c.disease.target_R)));
    f.push_back(mapping<std::string, int>("age_groups_to_ix_dict", true,
                                          REF(c.demographics.age_groups_to_ix)));
    f.push_back(mapping<int, long>("age_ix_pop_dict", false, REF(c.demographics.age_ix_pop)));
    f.push_back(array<double, kNumAgeGroups>("age_ix_prob_list", true,
                                             REF(c.demographics.age_probs)));
    f.push_back(mapping<std::string, double>("app_user_agewise_probs_dict", false,
                                             REF(c.tracing.app_age_probs)));
    f.push_back(scalar<bool>("debug", false, REF(c.debug)));
    f.push_back(scalar<std::string>("genrerated_params_file_name", false,
                                    REF(c.generated_params_file_name)));
    f.push_back(list<int>("households_sizes_list", true, REF(c.demographics.household_sizes)));
    f.push_back(list<double>("households_sizes_prob_list", true,
                             REF(c.demographics.household_size_probs)));
    f.push_back(scalar<long>("num_agents", true, REF(c.num_agents)));
    f.push_back(scalar<int>("num_runs", true, REF(c.num_runs)));
    f.push_back(scalar<int>("num_stages", false, REF(c.num_stages)));
    f.push_back(scalar<int>("num_steps", true, REF(c.num_steps)));
    f.push_back(mapping<std::string, int>("occupation_ix_to_occupations_dict", true,
                                          REF(c.demographics.occupations_to_ix)));
    f.push_back(array<double, kNumWorkingOccupations>("occupations_sizes_prob_list", true,
                                                      REF(c.demographics.occupation_probs)));
    f.push_back(scalar<double>("scale_random_interact", false,
                               REF(c.network.scale_random_interact)));
    f.push_back(scalar<std::uint64_t>("seed", true, REF(c.seed)));
    f.push_back({"stage_ix_pop_dict", true,
                 [](const YAML::Node& n, ScenarioConfig& c) {
                   c.stage_seed_counts.fill(0);
                   for (const auto& [s, count] : as_map<int, long>(n, "stage_ix_pop_dict")) {
                     if (s < 0 || s >= kNumStages) {
                       fail("stage_ix_pop_dict", "stage " + std::to_string(s) + " out of range");
                     }
                     c.stage_seed_counts[static_cast<std::size_t>(s)] = count;
                   }
                 },
                 [](YAML::Emitter& e, const ScenarioConfig& c) {
                   e << YAML::BeginMap;
                   for (int s = 0; s < kNumStages; ++s) {
                     e << YAML::Key << s << YAML::Value
                       << c.stage_seed_counts[static_cast<std::size_t>(s)];
                   }
                   e << YAML::EndMap;
                 }});
    f.push_back(mapping<int, std::string>("stage_ix_to_stages_dict", false, REF(c.stage_names)));
    f.push_back(scalar<std::string>("type", false, REF(c.type)));
    f.push_back(scalar<bool>("use_gpu", false, REF(c.use_gpu)));
    // Point-of-care test.
    f.push_back(scalar<bool>("poc_test_on_symptoms", true, REF(c.logic.poc_test_on_symptoms)));
    f.push_back(scalar<int>("poc_test_start_date", true, REF(c.poc.start_date)));
    f.push_back(scalar<double>("poc_test_true_positive", true, REF(c.poc.true_positive)));
    f.push_back(scalar<double>("poc_test_false_positive", true, REF(c.poc.false_positive)));
    // RT-PCR test.
    f.push_back(scalar<int>("rtpcr_test_start_date", true, REF(c.rtpcr.start_date)));
    f.push_back(scalar<double>("test_false_positive", true, REF(c.rtpcr.false_positive)));
    f.push_back(list<int>("test_results_dates", true, REF(c.rtpcr.results_dates)));
    f.push_back(list<double>("test_results_dates_probs", true, REF(c.rtpcr.results_dates_probs)));
    f.push_back(scalar<double>("test_true_positive", true, REF(c.rtpcr.true_positive)));
    f.push_back(scalar<int>("test_validity_days", true, REF(c.rtpcr.validity_days)));
    // Digital tracing.
    f.push_back(scalar<double>("app_adoption_rate", true, REF(c.tracing.app_adoption_rate)));
    f.push_back(scalar<bool>("use_app_age_dist", true, REF(c.tracing.use_age_dist)));
    f.push_back(scalar<int>("max_den_contact_days", true,
                            REF(c.tracing.dct_channel.max_contact_days)));
    f.push_back(scalar<double>("poc_den_inform_prob", true,
                               REF(c.tracing.dct_channel.inform_prob)));
    f.push_back(scalar<double>("dct_poc_comply_prob", true,
                               REF(c.tracing.dct_channel.poc_comply_prob)));
    f.push_back(scalar<double>("dct_rtpcr_comply_prob", true,
                               REF(c.tracing.dct_channel.rtpcr_comply_prob)));
    // Manual tracing.
    f.push_back(scalar<double>("poc_mct_inform_prob", true,
                               REF(c.tracing.mct_channel.inform_prob)));
    f.push_back(scalar<int>("max_mct_contact_days", true,
                            REF(c.tracing.mct_channel.max_contact_days)));
    f.push_back(scalar<double>("mct_recall_prob", true, REF(c.tracing.mct_recall_prob)));
    f.push_back(scalar<double>("mct_reachable_prob", true, REF(c.tracing.mct_reachable_prob)));
    f.push_back(scalar<double>("mct_poc_comply_prob", true,
                               REF(c.tracing.mct_channel.poc_comply_prob)));
    f.push_back(scalar<double>("mct_rtpcr_comply_prob", true,
                               REF(c.tracing.mct_channel.rtpcr_comply_prob)));
    // Self-quarantine.
    f.push_back(scalar<double>("en_quarantine_enter_prob", true,
                               REF(c.quarantine.dct_enter_prob)));
    f.push_back(scalar<double>("mct_quarantine_enter_prob", true,
                               REF(c.quarantine.mct_enter_prob)));
    f.push_back(scalar<double>("quarantine_break_prob", true, REF(c.quarantine.break_prob)));
    f.push_back(scalar<int>("quarantine_days", true, REF(c.quarantine.days)));
    // Vaccination.
    f.push_back(scalar<long>("vaccine_daily_production", true, REF(c.vaccine.daily_prod)));
    f.push_back(scalar<double>("vaccine_drop_prob_before_second_dose", true,
                               REF(c.vaccine.dose2_drop)));
    f.push_back(scalar<double>("vaccine_first_dose_effectivness", true,
                               REF(c.vaccine.dose1_eff)));
    f.push_back(scalar<int>("vaccine_first_dose_kick_in_days", true, REF(c.vaccine.dose_delay)));
    f.push_back(scalar<bool>("vaccine_first_dose_priority", true, REF(c.vaccine.dose1_priority)));
    f.push_back(scalar<int>("vaccine_second_dose_delay", true, REF(c.vaccine.dose2_gap)));
    f.push_back(scalar<double>("vaccine_second_dose_effectiveness", true,
                               REF(c.vaccine.dose2_eff)));
    f.push_back(scalar<int>("vaccine_shelf_life", true, REF(c.vaccine.shelf_life)));
    f.push_back(scalar<int>("vaccine_start_date", true, REF(c.vaccine.start_date)));
    // Logic toggles.
    f.push_back(scalar<bool>("use_den_logic", true, REF(c.logic.use_den_logic)));
    f.push_back(scalar<bool>("use_gps_logic", true, REF(c.logic.use_gps_logic)));
    f.push_back(scalar<bool>("use_mct_logic", true, REF(c.logic.use_mct_logic)));
    f.push_back(scalar<bool>("use_hybrid_logic", true, REF(c.logic.use_hybrid_logic)));
    f.push_back(scalar<bool>("use_poc_test_on_ct_logic", true,
                             REF(c.logic.use_poc_test_on_ct_logic)));
    f.push_back(scalar<bool>("use_rtpcr_test_on_ct_logic", true,
                             REF(c.logic.use_rtpcr_test_on_ct_logic)));
    f.push_back(scalar<bool>("use_rtpcr_test_logic", true, REF(c.logic.use_rtpcr_test_logic)));
    f.push_back(scalar<bool>("use_quarantine_logic", true, REF(c.logic.use_quarantine_logic)));
    f.push_back(scalar<bool>("use_vaccination_logic", true,
                             REF(c.logic.use_vaccination_logic)));
    f.push_back(scalar<std::string>("results_file_postfix", true, REF(c.results_file_postfix)));

    // Optional extensions. Defaults are declared assumptions.
    f.push_back(scalar<double>("occupation_mean_contacts", false,
                               REF(c.network.occupation_mean_contacts)));
    f.push_back(scalar<double>("random_mean_contacts", false,
                               REF(c.network.random_mean_contacts)));
    f.push_back(scalar<double>("beta", false, REF(c.disease.beta)));
    f.push_back(array<double, kNumStages>("rel_infectiousness", false,
                                          REF(c.disease.rel_infectiousness)));
    f.push_back(array<double, kNumAgeGroups>("rel_susceptibility", false,
                                             REF(c.disease.rel_susceptibility)));
    f.push_back(array<double, kNumLayers>("network_weights", false,
                                          REF(c.disease.network_weight)));
    f.push_back(branch_table());
    f.push_back(array<double, kNumAgeGroups>("hospitalize_probs", false,
                                             REF(c.disease.hospitalize_prob)));
    f.push_back(array<double, kNumAgeGroups>("icu_probs", false, REF(c.disease.icu_prob)));
    f.push_back(array<double, kNumAgeGroups>("death_probs", false, REF(c.disease.death_prob)));
    f.push_back(duration_table());
    f.push_back(scalar<double>("quarantine_enter_prob", false, REF(c.quarantine.enter_prob)));
    f.push_back(scalar<double>("test_cost", false, REF(c.rtpcr.cost)));
    f.push_back(scalar<double>("poc_test_cost", false, REF(c.poc.cost)));
    f.push_back(list<int>("poc_test_results_dates", false, REF(c.poc.results_dates)));
    f.push_back(list<double>("poc_test_results_dates_probs", false,
                             REF(c.poc.results_dates_probs)));
    f.push_back(scalar<int>("poc_test_validity_days", false, REF(c.poc.validity_days)));
    f.push_back(scalar<double>("vaccine_price", false, REF(c.vaccine.price)));
    f.push_back(optional_budget());
    f.push_back(scalar<double>("compliance_sigma", false, REF(c.compliance_sigma)));
    f.push_back(scalar<double>("hospital_bed_capacity", false, REF(c.hospital_bed_capacity)));
    return f;
  }();
  return kFields;
}

#undef REF

const Field* find_field(const std::string& key) {
  for (const Field& f : fields()) {
    if (f.key == key) return &f;
  }
  return nullptr;
}

YAML::Node load_yaml(const std::string& text) {
  try {
    return YAML::Load(text);
  } catch (const YAML::ParserException& e) {
    throw ConfigError(std::string("malformed YAML: ") + e.what());
  }
}

void check_probability(double p, const std::string& key) {
  if (!(p >= 0.0 && p <= 1.0)) fail(key, "must be in [0, 1], got " + std::to_string(p));
}

void check_distribution(std::span<const double> probs, const std::string& key) {
  double sum = 0.0;
  for (const double p : probs) {
    if (!(p >= 0.0)) fail(key, "negative probability");
    sum += p;
  }
  if (std::abs(sum - 1.0) > kSumTolerance) {
    fail(key, "must sum to 1 (got " + std::to_string(sum) + ")");
  }
}

void check_non_negative(double v, const std::string& key) {
  if (!(v >= 0.0)) fail(key, "must be >= 0");
}

void validate_test(const TestingPolicy& t, const std::string& prefix) {
  check_probability(t.true_positive, prefix + "true_positive");
  check_probability(t.false_positive, prefix + "false_positive");
  if (t.results_dates.size() != t.results_dates_probs.size()) {
    fail(prefix + "results_dates", "length differs from the matching probability list");
  }
  if (t.results_dates.empty()) fail(prefix + "results_dates", "must not be empty");
  for (const int d : t.results_dates) {
    if (d < 0) fail(prefix + "results_dates", "offsets must be >= 0");
  }
  check_distribution(t.results_dates_probs, prefix + "results_dates_probs");
  if (t.validity_days < -1) fail(prefix + "validity_days", "must be -1 or >= 0");
  check_non_negative(t.cost, prefix + "cost");
}

}  // namespace

TracingMode TracingPolicy::mode() const {
  if (dct && mct) return hybrid ? TracingMode::kHybrid : TracingMode::kParallel;
  if (dct) return TracingMode::kDct;
  if (mct) return TracingMode::kMct;
  return TracingMode::kOff;
}

int TracingPolicy::window_days() const {
  int days = 1;
  if (dct) days = std::max(days, dct_channel.max_contact_days);
  if (mct) days = std::max(days, mct_channel.max_contact_days);
  return days;
}

const TestingPolicy* ScenarioConfig::active_test() const {
  if (logic.poc_test_on_symptoms) return &poc;
  if (logic.use_rtpcr_test_logic) return &rtpcr;
  return nullptr;
}

bool ScenarioConfig::is_poc_active() const {
  return logic.poc_test_on_symptoms || logic.use_poc_test_on_ct_logic;
}

void sync_derived_fields(ScenarioConfig& c) {
  c.tracing.dct = c.logic.use_den_logic;
  c.tracing.mct = c.logic.use_mct_logic;
  c.tracing.hybrid = c.logic.use_hybrid_logic;
  c.poc.on_symptoms = c.logic.poc_test_on_symptoms;
}

DiseaseParams default_disease_params() {
  DiseaseParams d;
  d.beta = kDefaultBeta;
  d.target_R = 5.02;
  d.rel_infectiousness = {0.0, 0.5, 1.0, 1.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0};
  d.rel_susceptibility = {0.05, 0.2, 1.0, 1.0, 1.0, 1.0, 1.2, 1.5, 1.5};
  d.network_weight = {2.0, 1.0, 1.0};
  const AgeTable asymptomatic = {0.45, 0.41, 0.37, 0.33, 0.30, 0.27, 0.24, 0.21, 0.19};
  const AgeTable severe = {0.01, 0.01, 0.03, 0.05, 0.07, 0.10, 0.15, 0.22, 0.30};
  for (int g = 0; g < kNumAgeGroups; ++g) {
    const auto k = static_cast<std::size_t>(g);
    d.infection_branch[k] = {asymptomatic[k], 1.0 - asymptomatic[k] - severe[k], severe[k]};
  }
  d.hospitalize_prob = {0.30, 0.30, 0.35, 0.40, 0.45, 0.55, 0.65, 0.75, 0.85};
  d.icu_prob = {0.05, 0.05, 0.08, 0.10, 0.15, 0.20, 0.25, 0.30, 0.30};
  d.death_prob = {0.10, 0.10, 0.15, 0.20, 0.25, 0.35, 0.45, 0.55, 0.70};
  return d;
}

void validate_config(const ScenarioConfig& c) {
  const Demographics& demo = c.demographics;
  if (c.num_agents < 1) fail("num_agents", "must be >= 1");
  if (c.num_agents >= (1L << 30)) fail("num_agents", "must be < 2^30");
  if (c.num_steps < 0) fail("num_steps", "must be >= 0");
  if (c.num_runs < 1) fail("num_runs", "must be >= 1");
  if (c.num_stages != kNumStages) fail("num_stages", "must be 11");

  if (demo.age_groups_to_ix.size() != kNumAgeGroups) {
    fail("age_groups_to_ix_dict", "must list 9 age groups");
  }
  std::set<int> age_ix;
  for (const auto& [name, ix] : demo.age_groups_to_ix) age_ix.insert(ix);
  if (age_ix.size() != kNumAgeGroups || *age_ix.begin() != 0 ||
      *age_ix.rbegin() != kNumAgeGroups - 1) {
    fail("age_groups_to_ix_dict", "indices must be 0..8, each once");
  }
  check_distribution(demo.age_probs, "age_ix_prob_list");
  if (demo.household_sizes.size() != demo.household_size_probs.size() ||
      demo.household_sizes.empty()) {
    fail("households_sizes_list", "must be non-empty and align with households_sizes_prob_list");
  }
  for (const int k : demo.household_sizes) {
    if (k < 1 || k > 6) fail("households_sizes_list", "sizes must be in 1..6");
  }
  check_distribution(demo.household_size_probs, "households_sizes_prob_list");
  std::set<int> occ_ix;
  for (const auto& [name, ix] : demo.occupations_to_ix) occ_ix.insert(ix);
  if (demo.occupations_to_ix.size() != kNumOccupations || occ_ix.size() != kNumOccupations ||
      *occ_ix.begin() != 0 || *occ_ix.rbegin() != kNumOccupations - 1) {
    fail("occupation_ix_to_occupations_dict", "must map 21 names to indices 0..20");
  }
  const auto child = demo.occupations_to_ix.find("CHILD");
  const auto elderly = demo.occupations_to_ix.find("ELDERLY");
  if (child == demo.occupations_to_ix.end() || child->second != kChildOccupation ||
      elderly == demo.occupations_to_ix.end() || elderly->second != kElderlyOccupation) {
    fail("occupation_ix_to_occupations_dict", "CHILD must be 20 and ELDERLY 19");
  }
  check_distribution(demo.occupation_probs, "occupations_sizes_prob_list");
  if (demo.child_upper_index < -1 || demo.child_upper_index >= kNumAgeGroups) {
    fail("CHILD_Upper_Index", "must be in -1..8");
  }
  if (demo.adult_upper_index < demo.child_upper_index ||
      demo.adult_upper_index >= kNumAgeGroups) {
    fail("ADULT_Upper_Index", "must be in CHILD_Upper_Index..8");
  }

  long seeded = 0;
  for (const long n : c.stage_seed_counts) {
    if (n < 0) fail("stage_ix_pop_dict", "counts must be >= 0");
    seeded += n;
  }
  if (seeded != c.num_agents) {
    fail("stage_ix_pop_dict", "counts sum to " + std::to_string(seeded) + ", expected num_agents " +
                                  std::to_string(c.num_agents));
  }

  const NetworkParams& net = c.network;
  check_non_negative(net.occupation_mean_contacts, "occupation_mean_contacts");
  check_non_negative(net.random_mean_contacts, "random_mean_contacts");
  check_non_negative(net.scale_random_interact, "scale_random_interact");

  const DiseaseParams& d = c.disease;
  check_non_negative(d.beta, "beta");
  check_non_negative(d.target_R, "R");
  for (const double v : d.rel_infectiousness) check_non_negative(v, "rel_infectiousness");
  for (const double v : d.rel_susceptibility) check_non_negative(v, "rel_susceptibility");
  for (const double v : d.network_weight) check_non_negative(v, "network_weights");
  for (const auto& row : d.infection_branch) check_distribution(row, "infection_branch_probs");
  for (int g = 0; g < kNumAgeGroups; ++g) {
    const auto k = static_cast<std::size_t>(g);
    check_probability(d.hospitalize_prob[k], "hospitalize_probs");
    check_probability(d.icu_prob[k], "icu_probs");
    check_probability(d.death_prob[k], "death_probs");
  }
  for (const DurationDist* dist :
       {&d.durations.latent, &d.durations.presymptomatic, &d.durations.asymptomatic,
        &d.durations.mild, &d.durations.severe_to_hospital, &d.durations.hospital,
        &d.durations.icu, &d.durations.hospital_recovering}) {
    if (!(dist->mean > 0.0) || !(dist->sd >= 0.0)) {
      fail("stage_durations", "means must be > 0 and sds >= 0");
    }
  }

  validate_test(c.rtpcr, "test_");
  validate_test(c.poc, "poc_test_");

  const QuarantinePolicy& q = c.quarantine;
  check_probability(q.enter_prob, "quarantine_enter_prob");
  check_probability(q.dct_enter_prob, "en_quarantine_enter_prob");
  check_probability(q.mct_enter_prob, "mct_quarantine_enter_prob");
  check_probability(q.break_prob, "quarantine_break_prob");
  if (q.days < 0) fail("quarantine_days", "must be >= 0");

  const VaccinePolicy& v = c.vaccine;
  if (v.daily_prod < 0) fail("vaccine_daily_production", "must be >= 0");
  check_probability(v.dose2_drop, "vaccine_drop_prob_before_second_dose");
  check_probability(v.dose1_eff, "vaccine_first_dose_effectivness");
  check_probability(v.dose2_eff, "vaccine_second_dose_effectiveness");
  if (v.dose_delay < 0) fail("vaccine_first_dose_kick_in_days", "must be >= 0");
  if (v.dose2_gap < 0) fail("vaccine_second_dose_delay", "must be >= 0");
  if (v.shelf_life < 0) fail("vaccine_shelf_life", "must be >= 0");
  check_non_negative(v.price, "vaccine_price");
  if (c.vaccine_budget) {
    check_non_negative(*c.vaccine_budget, "vaccine_budget");
    if (!(v.price > 0.0)) fail("vaccine_price", "must be > 0 when vaccine_budget is set");
  }

  const TracingPolicy& t = c.tracing;
  check_probability(t.app_adoption_rate, "app_adoption_rate");
  if (t.dct_channel.max_contact_days < 1) fail("max_den_contact_days", "must be >= 1");
  if (t.mct_channel.max_contact_days < 1) fail("max_mct_contact_days", "must be >= 1");
  check_probability(t.dct_channel.inform_prob, "poc_den_inform_prob");
  check_probability(t.dct_channel.poc_comply_prob, "dct_poc_comply_prob");
  check_probability(t.dct_channel.rtpcr_comply_prob, "dct_rtpcr_comply_prob");
  check_probability(t.mct_channel.inform_prob, "poc_mct_inform_prob");
  check_probability(t.mct_channel.poc_comply_prob, "mct_poc_comply_prob");
  check_probability(t.mct_channel.rtpcr_comply_prob, "mct_rtpcr_comply_prob");
  check_probability(t.mct_recall_prob, "mct_recall_prob");
  check_probability(t.mct_reachable_prob, "mct_reachable_prob");
  for (const auto& [name, p] : t.app_age_probs) {
    check_probability(p, "app_user_agewise_probs_dict." + name);
  }
  if (t.use_age_dist) (void)app_ownership_probs(demo, t);

  check_non_negative(c.compliance_sigma, "compliance_sigma");
  check_non_negative(c.hospital_bed_capacity, "hospital_bed_capacity");
}

ScenarioConfig parse_config(const std::string& yaml_text) {
  const YAML::Node root = load_yaml(yaml_text);
  if (!root.IsMap()) throw ConfigError("scenario file must be a YAML mapping");

  ScenarioConfig c;
  c.disease = default_disease_params();
  std::set<std::string> seen;
  for (const auto& kv : root) {
    const auto key = as<std::string>(kv.first, "<key>");
    const Field* field = find_field(key);
    if (field == nullptr) fail(key, "unknown key" + location(kv.first));
    if (!seen.insert(key).second) fail(key, "duplicate key" + location(kv.first));
    field->read(kv.second, c);
  }
  for (const Field& f : fields()) {
    if (f.required && !seen.contains(f.key)) fail(f.key, "missing required key");
  }
  // Warn once per process; sweeps and tests parse the same file many times.
  static std::atomic<bool> gpu_warned{false};
  static std::atomic<bool> gps_warned{false};
  if (c.use_gpu && !gpu_warned.exchange(true)) {
    std::cerr << "warning: use_gpu is accepted and ignored; running on the CPU\n";
  }
  if (c.logic.use_gps_logic && !gps_warned.exchange(true)) {
    std::cerr << "warning: use_gps_logic is not supported and is treated as false\n";
  }
  sync_derived_fields(c);
  validate_config(c);
  return c;
}

ScenarioConfig parse_config(const std::string& yaml_text,
                            const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::string text = yaml_text;
  for (const auto& [path, value] : overrides) text = apply_override(text, path, value);
  return parse_config(text);
}

ScenarioConfig load_config(const std::string& path,
                           const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path + ": cannot open");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_config(buffer.str(), overrides);
  } catch (const ConfigError& e) {
    throw ConfigError(path + ": " + e.what());
  }
}

std::string serialize_config(const ScenarioConfig& config) {
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << YAML::BeginMap;
  for (const Field& f : fields()) {
    out << YAML::Key << f.key << YAML::Value;
    f.write(out, config);
  }
  out << YAML::EndMap;
  return std::string(out.c_str()) + "\n";
}

std::string config_hash(const ScenarioConfig& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (const unsigned char ch : serialize_config(config)) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string apply_override(const std::string& yaml_text, const std::string& path,
                           const std::string& value) {
  YAML::Node root = load_yaml(yaml_text);
  std::vector<std::string> parts;
  std::stringstream ss(path);
  for (std::string part; std::getline(ss, part, '.');) parts.push_back(part);
  if (parts.empty() || parts.front().empty()) throw ConfigError("--set: empty path");

  YAML::Node parsed;
  try {
    parsed = YAML::Load(value);
  } catch (const YAML::Exception&) {
    throw ConfigError(path + ": cannot parse value '" + value + "'");
  }

  // Top-level keys known to the schema may be added; deeper paths must exist.
  if (parts.size() == 1) {
    if (!root[parts[0]] && find_field(parts[0]) == nullptr) fail(path, "unknown key");
    root[parts[0]] = parsed;
  } else {
    YAML::Node node = root[parts[0]];
    if (!node) fail(path, "path does not resolve");
    for (std::size_t k = 1; k < parts.size(); ++k) {
      const std::string& part = parts[k];
      YAML::Node child;
      if (node.IsSequence()) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(part);
        } catch (const std::exception&) {
          fail(path, "'" + part + "' is not a list index");
        }
        if (idx >= node.size()) fail(path, "index " + part + " out of range");
        child = node[idx];
      } else if (node.IsMap()) {
        // Map keys may be written as integers (stage and age tables).
        bool found = false;
        for (auto kv : node) {
          if (kv.first.Scalar() == part) {
            child = kv.second;
            found = true;
            break;
          }
        }
        if (!found) fail(path, "path does not resolve");
      } else {
        fail(path, "path does not resolve");
      }
      if (k + 1 == parts.size()) {
        child = parsed;
      } else {
        node.reset(child);
      }
    }
  }
  YAML::Emitter out;
  out.SetDoublePrecision(17);
  out << root;
  return std::string(out.c_str()) + "\n";
}

}  // namespace pabm
