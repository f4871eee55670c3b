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

#include <gtest/gtest.h>

#include <cmath>

#include "test_support.hpp"

namespace pabm {
namespace {

using testing::binomial_z;
using testing::make_population;
using testing::scaled_config;

DiseaseParams unit_params(double beta) {
  DiseaseParams d = default_disease_params();
  d.beta = beta;
  d.rel_susceptibility.fill(1.0);
  d.network_weight = {1.0, 1.0, 1.0};
  return d;
}

// Agent `j` becomes an infectious mild case from step 0.
void make_infectious(AgentArrays& agents, AgentId j) {
  agents.set_stage(j, Stage::kMildSymptoms, 0, 100);
  agents.infectious_from[j] = 0;
  agents.infected_step[j] = 0;
}

TEST(Infection, ZeroHazardNeverInfects) {
  const Population pop = make_population(std::vector<int>(10, 1));
  AgentArrays agents(10);
  EdgeList edges;
  edges.edges = {{0, 1, Layer::kRandom}, {2, 3, Layer::kRandom}};
  const auto infected = infection_step(agents, pop, edges, unit_params(1.0), 1, RngStream(1));
  EXPECT_TRUE(infected.empty());
  EXPECT_TRUE((infection_hazard(agents, pop, edges, unit_params(1.0), 1) == 0.0).all());
}

TEST(Infection, EmptyEdgeListNoInfections) {
  const Population pop = make_population({2});
  AgentArrays agents(2);
  make_infectious(agents, 0);
  EXPECT_TRUE(infection_step(agents, pop, EdgeList{}, unit_params(5.0), 1, RngStream(1)).empty());
}

TEST(Infection, ImmunizedAgentIsNeverInfected) {
  const Population pop = make_population(std::vector<int>(101, 1));
  AgentArrays agents(101);
  agents.immunized[0] = 1;
  EdgeList edges;
  for (AgentId j = 1; j <= 100; ++j) {
    make_infectious(agents, j);
    edges.edges.push_back({0, j, Layer::kRandom});
  }
  for (int t = 1; t <= 20; ++t) {
    infection_step(agents, pop, edges, unit_params(10.0), t, RngStream(t));
    EXPECT_EQ(agents.stage_of(0), Stage::kSusceptible);
  }
}

TEST(Infection, SingleEdgeProbabilityMatchesClosedForm) {
  // One million susceptible agents, each with a single contact to its own
  // infectious partner: beta * multipliers = 0.1.
  constexpr AgentId pairs = 1000000;
  const Population pop = make_population(std::vector<int>(2 * pairs, 1));
  AgentArrays agents(2 * pairs);
  EdgeList edges;
  edges.edges.reserve(pairs);
  for (AgentId k = 0; k < pairs; ++k) {
    make_infectious(agents, pairs + k);
    edges.edges.push_back({k, pairs + k, Layer::kRandom});
  }
  const auto infected = infection_step(agents, pop, edges, unit_params(0.1), 1, RngStream(21));
  const double p = 1.0 - std::exp(-0.1);
  EXPECT_NEAR(p, 0.09516, 1e-5);
  EXPECT_LT(binomial_z(static_cast<double>(infected.size()), pairs, p), 3.0);
  for (const AgentId i : infected) ASSERT_LT(i, pairs);
}

TEST(Infection, HazardIsProductOfMultipliers) {
  const Population pop = make_population({2}, 5);
  AgentArrays agents(2);
  make_infectious(agents, 1);
  agents.infectiousness_scale[1] = 0.5;
  DiseaseParams d = default_disease_params();
  d.beta = 0.2;
  EdgeList edges;
  edges.edges = {{0, 1, Layer::kHousehold}};
  const RealArray h = infection_hazard(agents, pop, edges, d, 1);
  EXPECT_DOUBLE_EQ(h[0], 0.2 * d.rel_infectiousness[index_of(Stage::kMildSymptoms)] * 0.5 *
                             d.rel_susceptibility[5] * d.network_weight[0]);
  EXPECT_EQ(h[1], 0.0);
}

TEST(Infection, LatentAgentsDoNotTransmit) {
  const Population pop = make_population({2});
  AgentArrays agents(2);
  make_infectious(agents, 1);
  agents.infectious_from[1] = 5;
  EdgeList edges;
  edges.edges = {{0, 1, Layer::kHousehold}};
  EXPECT_EQ(infection_hazard(agents, pop, edges, unit_params(1.0), 4)[0], 0.0);
  EXPECT_GT(infection_hazard(agents, pop, edges, unit_params(1.0), 5)[0], 0.0);
}

TEST(Progression, RecoveredIsAbsorbing) {
  const Population pop = make_population({1});
  AgentArrays agents(1);
  agents.set_stage(0, Stage::kRecovered, 0, 0);
  for (int t = 1; t < 300; ++t) progression_step(agents, pop, unit_params(0.1), t, RngStream(1));
  EXPECT_EQ(agents.stage_of(0), Stage::kRecovered);
}

TEST(Progression, PresymptomaticMildBecomesMild) {
  const Population pop = make_population(std::vector<int>(1000, 1));
  AgentArrays agents(1000);
  for (AgentId i = 0; i < 1000; ++i) agents.set_stage(i, Stage::kPresymptomaticMild, 0, 3);
  progression_step(agents, pop, unit_params(0.1), 2, RngStream(1));
  EXPECT_TRUE((agents.stage == index_of(Stage::kPresymptomaticMild)).all());
  progression_step(agents, pop, unit_params(0.1), 3, RngStream(1));
  EXPECT_TRUE((agents.stage == index_of(Stage::kMildSymptoms)).all());
}

TEST(Progression, HospitalizationBranchFrequency) {
  constexpr AgentId n = 100000;
  const Population pop = make_population(std::vector<int>(n, 1), 4);
  DiseaseParams d = unit_params(0.1);
  d.hospitalize_prob.fill(0.5);
  AgentArrays agents(n);
  for (AgentId i = 0; i < n; ++i) agents.set_stage(i, Stage::kSevereSymptoms, 0, 1);
  progression_step(agents, pop, d, 1, RngStream(33));
  const double hospitalized = (agents.stage == index_of(Stage::kHospitalized)).count();
  EXPECT_EQ(hospitalized + (agents.stage == index_of(Stage::kRecovered)).count(), n);
  EXPECT_LT(binomial_z(hospitalized, n, 0.5), 3.0);
}

TEST(Progression, StageGraphEdges) {
  const DiseaseParams d = default_disease_params();
  EXPECT_EQ(next_stage(Stage::kAsymptomatic, 3, d, 0.5), Stage::kRecovered);
  EXPECT_EQ(next_stage(Stage::kPresymptomaticSevere, 3, d, 0.5), Stage::kSevereSymptoms);
  EXPECT_EQ(next_stage(Stage::kMildSymptoms, 3, d, 0.0), Stage::kRecovered);
  EXPECT_EQ(next_stage(Stage::kHospitalized, 3, d, 0.0), Stage::kCriticalIcu);
  EXPECT_EQ(next_stage(Stage::kHospitalized, 3, d, 0.999), Stage::kHospitalizedRecovering);
  EXPECT_EQ(next_stage(Stage::kCriticalIcu, 3, d, 0.0), Stage::kDeath);
  EXPECT_EQ(next_stage(Stage::kCriticalIcu, 3, d, 0.999), Stage::kHospitalizedRecovering);
  EXPECT_EQ(next_stage(Stage::kHospitalizedRecovering, 3, d, 0.5), Stage::kRecovered);
  EXPECT_EQ(next_stage(Stage::kDeath, 3, d, 0.5), Stage::kDeath);
}

TEST(Durations, GammaMeanAndFloor) {
  RngStream rng(4);
  const DurationDist dist{8.0, 3.0};
  double sum = 0.0;
  constexpr int n = 50000;
  for (int k = 0; k < n; ++k) {
    const int d = sample_duration(dist, rng);
    ASSERT_GE(d, 1);
    sum += d;
  }
  EXPECT_NEAR(sum / n, 8.0, 0.1);
  RngStream fixed(1);
  EXPECT_EQ(sample_duration({0.2, 0.0}, fixed), 1);
}

TEST(Seeding, AppendixCountsAtFullScale) {
  const ScenarioConfig c = scaled_config(100000, 1);
  const Population pop = sample_population(c, RngStream(1));
  AgentArrays agents(pop.size());
  seed_initial_infections(agents, pop, c, RngStream(2));
  EXPECT_EQ((agents.stage == 0).count(), 99995);
  EXPECT_EQ((agents.stage == 1).count(), 3);
  EXPECT_EQ((agents.stage == 2).count(), 2);
}

TEST(Seeding, SingleIndexCase) {
  const ScenarioConfig c = scaled_config(
      1000, 1, {{"stage_ix_pop_dict.0", "999"}, {"stage_ix_pop_dict.1", "1"}, {"stage_ix_pop_dict.2", "0"}});
  const Population pop = sample_population(c, RngStream(1));
  AgentArrays agents(pop.size());
  seed_initial_infections(agents, pop, c, RngStream(2));
  EXPECT_EQ((agents.stage != 0).count(), 1);
}

TEST(Seeding, CountMismatchIsAnError) {
  ScenarioConfig c = scaled_config(1000, 1);
  c.stage_seed_counts[0] = 10;
  const Population pop = sample_population(c, RngStream(1));
  AgentArrays agents(pop.size());
  EXPECT_THROW(seed_initial_infections(agents, pop, c, RngStream(2)), ConfigError);
}

TEST(Calibration, ZeroTargetGivesZeroBeta) {
  const ScenarioConfig c = scaled_config(2000, 1);
  EXPECT_EQ(calibrate_beta(c, 0.0, RngStream(1), 200).beta, 0.0);
}

TEST(Calibration, DoublingInfectiousnessHalvesBeta) {
  ScenarioConfig c = scaled_config(5000, 1);
  const double beta = calibrate_beta(c, 3.0, RngStream(1), 300).beta;
  for (double& r : c.disease.rel_infectiousness) r *= 2.0;
  const double halved = calibrate_beta(c, 3.0, RngStream(1), 300).beta;
  EXPECT_NEAR(halved, beta / 2.0, 1e-9 * beta);
}

TEST(Calibration, UnreachableTargetReportsDiagnostics) {
  const ScenarioConfig c = scaled_config(2000, 1);
  try {
    calibrate_beta(c, 1e6, RngStream(1), 200);
    FAIL() << "expected CalibrationError";
  } catch (const CalibrationError& e) {
    EXPECT_NE(std::string(e.what()).find("attainable maximum"), std::string::npos);
  }
}

TEST(Calibration, RemeasurementWithinTwoPercent) {
  const ScenarioConfig c = scaled_config(100000, 1);
  const CalibrationResult r = calibrate_beta(c, 5.02, RngStream(c.seed).split(1));
  EXPECT_NEAR(r.achieved_R, 5.02, 1e-6);
  // Independent population, index cases and Bernoulli draws.
  const RngStream check = RngStream(c.seed).split(2);
  const Population pop = sample_population(c, check.split(0));
  const auto exposures = sample_index_exposures(c, pop, 20000, check.split(1));
  const double remeasured = realized_secondary_infections(exposures, r.beta, check.split(2));
  EXPECT_NEAR(remeasured, 5.02, 0.02 * 5.02);
}

TEST(Calibration, ShippedBetaMatchesCalibration) {
  const ScenarioConfig c = scaled_config(100000, 1);
  const double beta = calibrate_beta(c, 5.02, RngStream(c.seed).split(0xca1b)).beta;
  EXPECT_NEAR(kDefaultBeta, beta, 1e-9);
}

}  // namespace
}  // namespace pabm
