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

#include <algorithm>

#include "pandemic_abm/interventions.hpp"

namespace pabm {
namespace {

enum TracePurpose : int { kInform = 0, kRecall = 1, kReach = 2 };

void sort_unique(std::vector<AgentId>& v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
}

void finish(TraceOutcome& out) {
  std::sort(out.links.begin(), out.links.end());
  // One link per reached contact: the lowest-numbered index case.
  out.links.erase(std::unique(out.links.begin(), out.links.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  out.links.end());
  out.reached.clear();
  for (const auto& [contact, index] : out.links) out.reached.push_back(contact);
}

}  // namespace

InteractionLog::InteractionLog(std::size_t num_agents, int capacity_days)
    : num_agents_(num_agents), capacity_(std::max(1, capacity_days)) {}

void InteractionLog::log(const EdgeList& edges) {
  Day day;
  day.step = edges.step;
  day.offsets.assign(num_agents_ + 1, 0);
  for (const Edge& e : edges.edges) {
    ++day.offsets[e.src + 1];
    ++day.offsets[e.dst + 1];
  }
  for (std::size_t i = 0; i < num_agents_; ++i) day.offsets[i + 1] += day.offsets[i];
  day.neighbors.resize(day.offsets.back());
  std::vector<std::uint32_t> cursor(day.offsets.begin(), day.offsets.end() - 1);
  for (const Edge& e : edges.edges) {
    const auto layer = static_cast<std::uint32_t>(e.layer) << kLayerShift;
    day.neighbors[cursor[e.src]++] = layer | e.dst;
    day.neighbors[cursor[e.dst]++] = layer | e.src;
  }
  days_.push_back(std::move(day));
  while (static_cast<int>(days_.size()) > capacity_) days_.pop_front();
}

std::vector<int> InteractionLog::steps_held() const {
  std::vector<int> steps;
  for (const Day& day : days_) steps.push_back(day.step);
  return steps;
}

std::vector<AgentId> dct_contacts(const InteractionLog& log, const Population& pop,
                                  AgentId agent, int step, int window) {
  std::vector<AgentId> out;
  if (!pop.has_app[agent]) return out;
  log.for_each_contact(agent, step, window, [&](AgentId other, Layer) {
    if (pop.has_app[other]) out.push_back(other);
  });
  sort_unique(out);
  return out;
}

std::vector<AgentId> mct_candidates(const InteractionLog& log, AgentId agent, int step,
                                    int window) {
  std::vector<AgentId> out;
  log.for_each_contact(agent, step, window, [&](AgentId other, Layer layer) {
    if (layer != Layer::kRandom) out.push_back(other);
  });
  sort_unique(out);
  return out;
}

TraceOutcome dct_notify(const InteractionLog& log, const Population& pop,
                        std::span<const AgentId> positives, const TracingPolicy& policy,
                        int step, const RngStream& rng) {
  TraceOutcome out;
  const RngStream inform = rng.split(step, kInform);
  for (const AgentId p : positives) {
    if (!pop.has_app[p]) continue;
    if (inform.uniform_at(p) >= policy.dct_channel.inform_prob) {
      out.declined.push_back(p);
      continue;
    }
    out.informed.push_back(p);
    for (const AgentId c : dct_contacts(log, pop, p, step, policy.dct_channel.max_contact_days)) {
      out.links.emplace_back(c, p);
    }
  }
  finish(out);
  return out;
}

TraceOutcome mct_trace(const InteractionLog& log, std::span<const AgentId> positives,
                       const TracingPolicy& policy, int step, const RngStream& rng) {
  TraceOutcome out;
  const RngStream inform = rng.split(step, kInform);
  for (const AgentId p : positives) {
    if (inform.uniform_at(p) >= policy.mct_channel.inform_prob) {
      out.declined.push_back(p);
      continue;
    }
    out.informed.push_back(p);
    RngStream interview = rng.split(step, kRecall, p);
    for (const AgentId c : mct_candidates(log, p, step, policy.mct_channel.max_contact_days)) {
      const bool recalled = interview.uniform() < policy.mct_recall_prob;
      const bool reachable = interview.uniform() < policy.mct_reachable_prob;
      if (recalled && reachable) out.links.emplace_back(c, p);
    }
  }
  finish(out);
  return out;
}

}  // namespace pabm
