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

#ifndef PANDEMIC_ABM_COSTS_HPP_
#define PANDEMIC_ABM_COSTS_HPP_

#include <vector>

#include "pandemic_abm/config.hpp"

namespace pabm {

/// Intervention spending for one run. Costs accrue when a test is taken or a
/// dose is injected; unused stock is free.
class CostLedger {
 public:
  CostLedger(double test_price, double dose_price)
      : test_price_(test_price), dose_price_(dose_price) {}

  void add_tests(long n) { tests_ += n; }
  void add_doses(long n) { doses_ += n; }
  /// Appends the running total for the step just finished.
  void close_step() { cumulative_.push_back(total()); }

  long tests() const { return tests_; }
  long doses() const { return doses_; }
  double test_price() const { return test_price_; }
  double dose_price() const { return dose_price_; }
  double total() const;
  const std::vector<double>& cumulative() const { return cumulative_; }

 private:
  double test_price_;
  double dose_price_;
  long tests_ = 0;
  long doses_ = 0;
  std::vector<double> cumulative_;
};

double total_cost(const CostLedger& ledger);

/// Vaccine policy whose daily production fits `budget` over the days from
/// start_date to `horizon`: floor(budget / (price * active_days)). Throws
/// ConfigError for a non-positive price or negative budget.
VaccinePolicy budget_scaled_policy(double budget, const VaccinePolicy& base, int horizon);

}  // namespace pabm

#endif  // PANDEMIC_ABM_COSTS_HPP_
