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

#ifndef PANDEMIC_ABM_TYPES_HPP_
#define PANDEMIC_ABM_TYPES_HPP_

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

#include <Eigen/Core>

namespace pabm {

using AgentId = std::uint32_t;

// Column types for per-agent state. Every column has one row per agent.
using ByteArray = Eigen::Array<std::uint8_t, Eigen::Dynamic, 1>;
using IndexArray = Eigen::Array<std::uint32_t, Eigen::Dynamic, 1>;
using IntArray = Eigen::ArrayXi;
using RealArray = Eigen::ArrayXd;

inline constexpr int kNumStages = 11;
inline constexpr int kNumAgeGroups = 9;
inline constexpr int kNumWorkingOccupations = 19;
inline constexpr int kNumOccupations = 21;
inline constexpr std::uint8_t kElderlyOccupation = 19;
inline constexpr std::uint8_t kChildOccupation = 20;
inline constexpr int kNumLayers = 3;

// Codes match the stage table of the scenario file.
enum class Stage : std::uint8_t {
  kSusceptible = 0,
  kAsymptomatic = 1,
  kPresymptomaticMild = 2,
  kPresymptomaticSevere = 3,
  kMildSymptoms = 4,
  kSevereSymptoms = 5,
  kHospitalized = 6,
  kCriticalIcu = 7,
  kDeath = 8,
  kHospitalizedRecovering = 9,
  kRecovered = 10,
};

enum class Layer : std::uint8_t {
  kHousehold = 0,
  kOccupation = 1,
  kRandom = 2,
};

constexpr int index_of(Stage s) { return static_cast<int>(s); }
constexpr int index_of(Layer l) { return static_cast<int>(l); }

constexpr bool is_absorbing(Stage s) {
  return s == Stage::kDeath || s == Stage::kRecovered;
}

// Currently carrying the infection (between exposure and recovery/death).
constexpr bool is_infected(Stage s) {
  return s != Stage::kSusceptible && !is_absorbing(s);
}

constexpr bool is_symptomatic(Stage s) {
  return s == Stage::kMildSymptoms || s == Stage::kSevereSymptoms;
}

constexpr bool is_in_hospital(Stage s) {
  return s == Stage::kHospitalized || s == Stage::kCriticalIcu ||
         s == Stage::kHospitalizedRecovering;
}

// Hospital, ICU and dead agents have no network contacts.
constexpr bool is_isolated_stage(Stage s) {
  return is_in_hospital(s) || s == Stage::kDeath;
}

std::string_view stage_name(Stage s);
std::string_view layer_name(Layer l);

// Raised for any invalid scenario input; the message names the offending key.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace pabm

#endif  // PANDEMIC_ABM_TYPES_HPP_
