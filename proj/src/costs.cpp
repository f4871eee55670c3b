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

#include "pandemic_abm/costs.hpp"

#include <algorithm>
#include <cmath>

namespace pabm {

double CostLedger::total() const {
  return static_cast<double>(tests_) * test_price_ + static_cast<double>(doses_) * dose_price_;
}

double total_cost(const CostLedger& ledger) { return ledger.total(); }

VaccinePolicy budget_scaled_policy(double budget, const VaccinePolicy& base, int horizon) {
  if (base.price <= 0.0) throw ConfigError("vaccine_price: must be > 0 for a budget");
  if (budget < 0.0) throw ConfigError("vaccine_budget: must be >= 0");
  VaccinePolicy out = base;
  const int active_days = std::max(0, horizon - base.start_date);
  out.daily_prod =
      active_days == 0
          ? 0
          : static_cast<long>(std::floor(budget / (base.price * active_days)));
  return out;
}

}  // namespace pabm
