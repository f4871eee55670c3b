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

#ifndef PANDEMIC_ABM_NETWORKS_HPP_
#define PANDEMIC_ABM_NETWORKS_HPP_

#include <ostream>
#include <vector>

#include "pandemic_abm/config.hpp"
#include "pandemic_abm/popgen.hpp"
#include "pandemic_abm/rng.hpp"
#include "pandemic_abm/types.hpp"

namespace pabm {

// Undirected contact; samplers always emit src < dst.
struct Edge {
  AgentId src;
  AgentId dst;
  Layer layer;
  bool operator==(const Edge&) const = default;
};

struct EdgeList {
  std::vector<Edge> edges;
  int step = -1;  // -1 for the static household layer

  std::size_t size() const { return edges.size(); }
  bool operator==(const EdgeList&) const = default;
};

// Per-agent flag; nonzero means the agent may take part in contacts today.
using Eligibility = ByteArray;

/// Complete graph inside every household.
EdgeList build_household_edges(const Population& pop);

/// Keeps edges whose endpoints are both eligible.
EdgeList filter_edges(const EdgeList& edges, const Eligibility& eligible, int step);

/// Same-occupation contacts for one day. Every eligible agent proposes
/// Poisson(mean/2) partners drawn uniformly from its eligible group so the
/// expected degree is `occupation_mean_contacts`; groups no larger than
/// mean+1 are fully connected.
EdgeList sample_occupation_edges(const Population& pop, const NetworkParams& params,
                                 const Eligibility& eligible, int step,
                                 const RngStream& rng);

/// Uniform random pairs among eligible agents: each pair is present
/// independently with probability min(1, d/(n-1)), d = mean * scale.
EdgeList sample_random_edges(const Population& pop, const NetworkParams& params,
                             const Eligibility& eligible, int step,
                             const RngStream& rng);

struct Contact {
  AgentId other;
  Layer layer;
  bool operator==(const Contact&) const = default;
};

/// Contacts of a single agent for one day under the same model as the
/// samplers above, assuming every agent is eligible. The occupation layer
/// uses the exact marginal of the proposal scheme (own proposals plus a
/// Poisson-thinned count of incoming ones); the random layer draws a
/// Binomial(n-1, p) neighbour count. Used by beta calibration, which only
/// needs the index case's neighbourhood.
std::vector<Contact> sample_incident_contacts(const Population& pop,
                                              const std::vector<std::vector<AgentId>>& groups,
                                              const NetworkParams& params, AgentId agent,
                                              RngStream& rng);

/// Agents grouped by occupation code.
std::vector<std::vector<AgentId>> occupation_groups(const Population& pop);

/// CSV dump: `step,layer,src,dst`.
void write_edges_csv(std::ostream& out, const EdgeList& edges, bool header = true);

}  // namespace pabm

#endif  // PANDEMIC_ABM_NETWORKS_HPP_
