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

#ifndef PANDEMIC_ABM_EVENTS_HPP_
#define PANDEMIC_ABM_EVENTS_HPP_

#include <array>
#include <ostream>
#include <string_view>
#include <vector>

#include "pandemic_abm/types.hpp"

namespace pabm {

enum class EventKind : std::uint8_t {
  kTestAdministered,
  kTestResult,
  kQuarantineEnter,
  kQuarantineBreak,
  kQuarantineComplete,
  kDose1,
  kDose2,
  kImmunized,
  kDctNotified,
  kMctReached,
};

std::string_view event_name(EventKind kind);

// `detail` meaning per kind: test_result 1/0 positive; test_administered the
// due step; dct_notified / mct_reached the index case; others 0.
struct Event {
  int step;
  EventKind kind;
  AgentId agent;
  long detail;
  bool operator==(const Event&) const = default;
};

/// Append-only event sink. A disabled log drops events but keeps counts.
class EventLog {
 public:
  explicit EventLog(bool enabled = false) : enabled_(enabled) {}

  void add(int step, EventKind kind, AgentId agent, long detail = 0) {
    ++counts_[static_cast<std::size_t>(kind)];
    if (enabled_) events_.push_back({step, kind, agent, detail});
  }
  bool enabled() const { return enabled_; }
  const std::vector<Event>& events() const { return events_; }
  long count(EventKind kind) const { return counts_[static_cast<std::size_t>(kind)]; }

  /// CSV: `step,event,agent,detail`.
  void write_csv(std::ostream& out) const;

 private:
  bool enabled_;
  std::vector<Event> events_;
  std::array<long, 10> counts_{};
};

}  // namespace pabm

#endif  // PANDEMIC_ABM_EVENTS_HPP_
