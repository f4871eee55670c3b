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

#include <algorithm>
#include <random>

namespace pabm {
namespace {

std::uint64_t pair_key(AgentId a, AgentId b) {
  if (a > b) std::swap(a, b);
  return (static_cast<std::uint64_t>(a) << 32) | b;
}

// Sorts and deduplicates pair keys whose endpoints are below `n`. Counting
// sort on the smaller endpoint, then a small sort per bucket: O(keys + n).
void sort_unique(std::vector<std::uint64_t>& keys, std::size_t n) {
  if (keys.size() < 4096) {
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());
    return;
  }
  std::vector<std::uint32_t> offsets(n + 1, 0);
  for (const std::uint64_t k : keys) ++offsets[(k >> 32) + 1];
  for (std::size_t a = 0; a < n; ++a) offsets[a + 1] += offsets[a];
  std::vector<std::uint32_t> low(keys.size());
  std::vector<std::uint32_t> fill(offsets.begin(), offsets.end() - 1);
  for (const std::uint64_t k : keys) low[fill[k >> 32]++] = static_cast<std::uint32_t>(k);
  keys.clear();
  for (std::size_t a = 0; a < n; ++a) {
    const auto begin = low.begin() + offsets[a];
    const auto end = low.begin() + offsets[a + 1];
    if (begin == end) continue;
    std::sort(begin, end);
    const auto last = std::unique(begin, end);
    for (auto it = begin; it != last; ++it) {
      keys.push_back((static_cast<std::uint64_t>(a) << 32) | *it);
    }
  }
}

void append_keys(EdgeList& out, const std::vector<std::uint64_t>& keys, Layer layer) {
  out.edges.reserve(out.edges.size() + keys.size());
  for (const std::uint64_t k : keys) {
    out.edges.push_back({static_cast<AgentId>(k >> 32), static_cast<AgentId>(k), layer});
  }
}

std::vector<AgentId> eligible_agents(const Eligibility& eligible) {
  std::vector<AgentId> out;
  out.reserve(static_cast<std::size_t>(eligible.size()));
  for (Eigen::Index i = 0; i < eligible.size(); ++i) {
    if (eligible[i]) out.push_back(static_cast<AgentId>(i));
  }
  return out;
}

// Uniform member of `members` other than the one at `self_pos`.
AgentId other_member(const std::vector<AgentId>& members, std::size_t self_pos,
                     RngStream& rng) {
  auto r = static_cast<std::size_t>(rng.below(members.size() - 1));
  if (r >= self_pos) ++r;
  return members[r];
}

void complete_graph(const std::vector<AgentId>& members, std::vector<std::uint64_t>& keys) {
  for (std::size_t a = 0; a < members.size(); ++a) {
    for (std::size_t b = a + 1; b < members.size(); ++b) {
      keys.push_back(pair_key(members[a], members[b]));
    }
  }
}

}  // namespace

EdgeList build_household_edges(const Population& pop) {
  EdgeList out;
  for (std::size_t h = 0; h < pop.num_households(); ++h) {
    const auto members = pop.household(h);
    for (std::size_t a = 0; a < members.size(); ++a) {
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        out.edges.push_back({std::min(members[a], members[b]),
                             std::max(members[a], members[b]), Layer::kHousehold});
      }
    }
  }
  return out;
}

EdgeList filter_edges(const EdgeList& edges, const Eligibility& eligible, int step) {
  EdgeList out;
  out.step = step;
  out.edges.reserve(edges.size());
  for (const Edge& e : edges.edges) {
    if (eligible[e.src] && eligible[e.dst]) out.edges.push_back(e);
  }
  return out;
}

std::vector<std::vector<AgentId>> occupation_groups(const Population& pop) {
  std::vector<std::vector<AgentId>> groups(kNumOccupations);
  for (Eigen::Index i = 0; i < pop.occupation.size(); ++i) {
    groups[pop.occupation[i]].push_back(static_cast<AgentId>(i));
  }
  return groups;
}

EdgeList sample_occupation_edges(const Population& pop, const NetworkParams& params,
                                 const Eligibility& eligible, int step,
                                 const RngStream& rng) {
  EdgeList out;
  out.step = step;
  const double mean = params.occupation_mean_contacts;
  if (mean <= 0.0) return out;

  std::vector<std::vector<AgentId>> groups(kNumOccupations);
  for (Eigen::Index i = 0; i < pop.occupation.size(); ++i) {
    if (eligible[i]) groups[pop.occupation[i]].push_back(static_cast<AgentId>(i));
  }

  // Groups are disjoint, so one deduplication pass covers them all.
  std::vector<std::uint64_t> keys;
  for (std::size_t g = 0; g < groups.size(); ++g) {
    const auto& members = groups[g];
    const std::size_t k = members.size();
    if (k < 2) continue;
    if (mean >= static_cast<double>(k - 1)) {
      complete_graph(members, keys);
    } else {
      RngStream group_rng = rng.split(step, index_of(Layer::kOccupation), g);
      std::poisson_distribution<int> proposals(mean / 2.0);
      for (std::size_t a = 0; a < k; ++a) {
        const int count = proposals(group_rng);
        for (int c = 0; c < count; ++c) {
          keys.push_back(pair_key(members[a], other_member(members, a, group_rng)));
        }
      }
    }
  }
  sort_unique(keys, pop.size());
  append_keys(out, keys, Layer::kOccupation);
  return out;
}

EdgeList sample_random_edges(const Population& pop, const NetworkParams& params,
                             const Eligibility& eligible, int step,
                             const RngStream& rng) {
  EdgeList out;
  out.step = step;
  const double degree = params.random_degree();
  const std::vector<AgentId> agents = eligible_agents(eligible);
  const std::size_t n = agents.size();
  if (n < 2 || degree <= 0.0) return out;

  RngStream layer_rng = rng.split(step, index_of(Layer::kRandom));
  const double p = std::min(1.0, degree / static_cast<double>(n - 1));
  const auto total_pairs = static_cast<long long>(n) * static_cast<long long>(n - 1) / 2;
  std::vector<std::uint64_t> keys;

  if (p >= 1.0) {
    complete_graph(agents, keys);
  } else if (total_pairs <= 200000 || p > 0.25) {
    // Small or dense: one Bernoulli trial per pair.
    for (std::size_t a = 0; a < n; ++a) {
      for (std::size_t b = a + 1; b < n; ++b) {
        if (layer_rng.uniform() < p) keys.push_back(pair_key(agents[a], agents[b]));
      }
    }
  } else {
    std::binomial_distribution<long long> count_dist(total_pairs, p);
    const auto target = static_cast<std::size_t>(count_dist(layer_rng));
    keys.reserve(target);
    while (keys.size() < target) {
      const std::size_t missing = target - keys.size();
      for (std::size_t c = 0; c < missing; ++c) {
        const auto a = static_cast<std::size_t>(layer_rng.below(n));
        keys.push_back(pair_key(agents[a], other_member(agents, a, layer_rng)));
      }
      sort_unique(keys, pop.size());
    }
  }
  append_keys(out, keys, Layer::kRandom);
  return out;
}

std::vector<Contact> sample_incident_contacts(const Population& pop,
                                              const std::vector<std::vector<AgentId>>& groups,
                                              const NetworkParams& params, AgentId agent,
                                              RngStream& rng) {
  std::vector<Contact> contacts;
  for (const AgentId other : pop.household(pop.household_id[agent])) {
    if (other != agent) contacts.push_back({other, Layer::kHousehold});
  }

  std::vector<AgentId> partners;
  const auto& group = groups[pop.occupation[agent]];
  const std::size_t k = group.size();
  const double mean = params.occupation_mean_contacts;
  if (k >= 2 && mean > 0.0) {
    const auto self_pos = static_cast<std::size_t>(
        std::lower_bound(group.begin(), group.end(), agent) - group.begin());
    if (mean >= static_cast<double>(k - 1)) {
      for (const AgentId other : group) {
        if (other != agent) partners.push_back(other);
      }
    } else {
      std::poisson_distribution<int> proposals(mean / 2.0);
      const int count = proposals(rng) + proposals(rng);
      for (int c = 0; c < count; ++c) partners.push_back(other_member(group, self_pos, rng));
      std::sort(partners.begin(), partners.end());
      partners.erase(std::unique(partners.begin(), partners.end()), partners.end());
    }
    for (const AgentId other : partners) contacts.push_back({other, Layer::kOccupation});
  }

  const std::size_t n = pop.size();
  const double degree = params.random_degree();
  if (n >= 2 && degree > 0.0) {
    partners.clear();
    const double p = std::min(1.0, degree / static_cast<double>(n - 1));
    if (p >= 1.0) {
      for (std::size_t i = 0; i < n; ++i) {
        if (i != agent) partners.push_back(static_cast<AgentId>(i));
      }
    } else {
      std::binomial_distribution<long long> count_dist(static_cast<long long>(n - 1), p);
      const auto target = static_cast<std::size_t>(count_dist(rng));
      while (partners.size() < target) {
        auto r = static_cast<AgentId>(rng.below(n - 1));
        if (r >= agent) ++r;
        if (std::find(partners.begin(), partners.end(), r) == partners.end()) {
          partners.push_back(r);
        }
      }
      std::sort(partners.begin(), partners.end());
    }
    for (const AgentId other : partners) contacts.push_back({other, Layer::kRandom});
  }
  return contacts;
}

void write_edges_csv(std::ostream& out, const EdgeList& edges, bool header) {
  if (header) out << "step,layer,src,dst\n";
  for (const Edge& e : edges.edges) {
    out << edges.step << ',' << layer_name(e.layer) << ',' << e.src << ',' << e.dst << '\n';
  }
}

}  // namespace pabm
