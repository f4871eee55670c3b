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


#include "pandemic_abm/networks.hpp"

#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "test_support.hpp"

namespace pabm {
namespace {

using testing::make_population;
using testing::scaled_config;

Eligibility all_eligible(std::size_t n) { return Eligibility::Ones(static_cast<Eigen::Index>(n)); }

void expect_simple(const EdgeList& edges) {
  std::set<std::pair<AgentId, AgentId>> seen;
  for (const Edge& e : edges.edges) {
    EXPECT_LT(e.src, e.dst);
    EXPECT_TRUE(seen.emplace(e.src, e.dst).second) << e.src << "-" << e.dst;
  }
}

TEST(HouseholdLayer, CliqueOfFour) {
  EXPECT_EQ(build_household_edges(make_population({4})).size(), 6u);
}

TEST(HouseholdLayer, CliqueSum) {
  const EdgeList edges = build_household_edges(make_population({1, 2, 3}));
  EXPECT_EQ(edges.size(), 4u);
  expect_simple(edges);
  for (const Edge& e : edges.edges) EXPECT_EQ(e.layer, Layer::kHousehold);
}

TEST(HouseholdLayer, EdgeCountMatchesEnumeration) {
  const ScenarioConfig c = scaled_config(100000, 1);
  const Population pop = sample_population(c, RngStream(c.seed));
  std::size_t pairs = 0;
  for (std::size_t h = 0; h < pop.num_households(); ++h) {
    const std::size_t k = pop.household(h).size();
    pairs += k * (k - 1) / 2;
  }
  const EdgeList edges = build_household_edges(pop);
  EXPECT_EQ(edges.size(), pairs);
  for (const Edge& e : edges.edges) ASSERT_EQ(pop.household_id[e.src], pop.household_id[e.dst]);

  // Expected size under the configured distribution: N * sum p_k (k-1)k/2 / sum p_k k.
  const auto& sizes = c.demographics.household_sizes;
  const auto& probs = c.demographics.household_size_probs;
  double num = 0.0;
  double den = 0.0;
  for (std::size_t k = 0; k < sizes.size(); ++k) {
    num += probs[k] * sizes[k] * (sizes[k] - 1) / 2.0;
    den += probs[k] * sizes[k];
  }
  EXPECT_NEAR(static_cast<double>(pairs), 100000 * num / den, 0.03 * 100000 * num / den);
}

TEST(Filter, KeepsOnlyEligiblePairs) {
  const EdgeList edges = build_household_edges(make_population({4}));
  Eligibility e = all_eligible(4);
  e[2] = 0;
  const EdgeList kept = filter_edges(edges, e, 5);
  EXPECT_EQ(kept.size(), 3u);
  EXPECT_EQ(kept.step, 5);
  for (const Edge& edge : kept.edges) {
    EXPECT_NE(edge.src, 2u);
    EXPECT_NE(edge.dst, 2u);
  }
}

TEST(OccupationLayer, ZeroMeanIsEmpty) {
  NetworkParams p;
  p.occupation_mean_contacts = 0.0;
  const Population pop = make_population(std::vector<int>(50, 1));
  EXPECT_EQ(sample_occupation_edges(pop, p, all_eligible(50), 1, RngStream(1)).size(), 0u);
}

TEST(OccupationLayer, SingletonGroupHasNoEdges) {
  NetworkParams p;
  const Population pop = make_population({1});
  EXPECT_EQ(sample_occupation_edges(pop, p, all_eligible(1), 1, RngStream(1)).size(), 0u);
}

TEST(OccupationLayer, PairAlwaysConnected) {
  NetworkParams p;
  p.occupation_mean_contacts = 10.0;
  const Population pop = make_population({1, 1});
  for (int t = 1; t <= 20; ++t) {
    const EdgeList edges = sample_occupation_edges(pop, p, all_eligible(2), t, RngStream(1));
    ASSERT_EQ(edges.size(), 1u);
    EXPECT_EQ(edges.edges[0], (Edge{0, 1, Layer::kOccupation}));
  }
}

TEST(OccupationLayer, MeanDegreeOverHundredSteps) {
  NetworkParams p;
  p.occupation_mean_contacts = 5.0;
  const Population pop = make_population(std::vector<int>(1000, 1));
  double incident = 0.0;
  for (int t = 1; t <= 100; ++t) {
    const EdgeList edges = sample_occupation_edges(pop, p, all_eligible(1000), t, RngStream(6));
    expect_simple(edges);
    incident += 2.0 * static_cast<double>(edges.size());
  }
  const double mean_degree = incident / (1000.0 * 100.0);
  EXPECT_GE(mean_degree, 4.7);
  EXPECT_LE(mean_degree, 5.3);
}

TEST(OccupationLayer, EdgesStayWithinGroups) {
  const ScenarioConfig c = scaled_config(5000, 1);
  const Population pop = sample_population(c, RngStream(1));
  const EdgeList edges = sample_occupation_edges(pop, c.network, all_eligible(5000), 3, RngStream(2));
  expect_simple(edges);
  for (const Edge& e : edges.edges) ASSERT_EQ(pop.occupation[e.src], pop.occupation[e.dst]);
}

TEST(RandomLayer, ZeroScaleIsEmpty) {
  NetworkParams p;
  p.scale_random_interact = 0.0;
  const Population pop = make_population(std::vector<int>(100, 1));
  EXPECT_EQ(sample_random_edges(pop, p, all_eligible(100), 1, RngStream(1)).size(), 0u);
}

TEST(RandomLayer, PairOfTwoAlwaysMeets) {
  NetworkParams p;
  p.random_mean_contacts = 1.0;
  const Population pop = make_population({1, 1});
  for (int t = 1; t <= 20; ++t) {
    EXPECT_EQ(sample_random_edges(pop, p, all_eligible(2), t, RngStream(1)).size(), 1u);
  }
}

TEST(RandomLayer, EdgeCountBinomial) {
  NetworkParams p;
  p.random_mean_contacts = 4.0;
  const Population pop = make_population(std::vector<int>(10000, 1));
  const double pairs = 10000.0 * 9999.0 / 2.0;
  const double prob = 4.0 / 9999.0;
  const double sd = std::sqrt(pairs * prob * (1 - prob));
  for (int t = 1; t <= 5; ++t) {
    const EdgeList edges = sample_random_edges(pop, p, all_eligible(10000), t, RngStream(t));
    expect_simple(edges);
    EXPECT_NEAR(static_cast<double>(edges.size()), 20000.0, 3.0 * sd);
  }
}

TEST(RandomLayer, IneligibleAgentsExcluded) {
  NetworkParams p;
  p.random_mean_contacts = 8.0;
  const Population pop = make_population(std::vector<int>(500, 1));
  Eligibility e = all_eligible(500);
  for (int i = 0; i < 500; i += 3) e[i] = 0;
  const EdgeList edges = sample_random_edges(pop, p, e, 2, RngStream(3));
  for (const Edge& edge : edges.edges) {
    EXPECT_TRUE(e[edge.src] && e[edge.dst]);
  }
}

TEST(Layers, SameSeedAndStepSameEdges) {
  const ScenarioConfig c = scaled_config(3000, 1);
  const Population pop = sample_population(c, RngStream(1));
  const Eligibility e = all_eligible(3000);
  EXPECT_EQ(sample_occupation_edges(pop, c.network, e, 4, RngStream(5)),
            sample_occupation_edges(pop, c.network, e, 4, RngStream(5)));
  EXPECT_EQ(sample_random_edges(pop, c.network, e, 4, RngStream(5)),
            sample_random_edges(pop, c.network, e, 4, RngStream(5)));
  EXPECT_FALSE(sample_random_edges(pop, c.network, e, 4, RngStream(5)) ==
               sample_random_edges(pop, c.network, e, 5, RngStream(5)));
}

TEST(Layers, EdgeCsvFormat) {
  EdgeList edges;
  edges.step = 3;
  edges.edges = {{1, 2, Layer::kRandom}};
  std::ostringstream out;
  write_edges_csv(out, edges);
  EXPECT_EQ(out.str().substr(0, out.str().find('\n')), "step,layer,src,dst");
  EXPECT_NE(out.str().find("3,"), std::string::npos);
}

}  // namespace
}  // namespace pabm
