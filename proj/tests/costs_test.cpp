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

#include <gtest/gtest.h>

namespace pabm {
namespace {

TEST(CostLedger, NoEventsCostsNothing) {
  CostLedger ledger(5.0, 20.0);
  ledger.close_step();
  EXPECT_EQ(total_cost(ledger), 0.0);
  EXPECT_EQ(ledger.cumulative(), std::vector<double>{0.0});
}

TEST(CostLedger, ThousandTests) {
  CostLedger ledger(5.0, 20.0);
  ledger.add_tests(1000);
  EXPECT_EQ(total_cost(ledger), 5000.0);
}

TEST(CostLedger, TestsAndDosesReconcile) {
  CostLedger ledger(5.0, 20.0);
  ledger.add_tests(3);
  ledger.close_step();
  ledger.add_doses(2);
  ledger.add_tests(1);
  ledger.close_step();
  EXPECT_EQ(ledger.cumulative(), (std::vector<double>{15.0, 60.0}));
  EXPECT_EQ(ledger.total(), 5.0 * ledger.tests() + 20.0 * ledger.doses());
}

TEST(Budget, ZeroBudgetZeroProduction) {
  EXPECT_EQ(budget_scaled_policy(0.0, VaccinePolicy{}, 180).daily_prod, 0);
}

TEST(Budget, DailyProductionFromBudget) {
  VaccinePolicy base;
  base.start_date = 10;
  base.price = 20.0;
  const VaccinePolicy p = budget_scaled_policy(420000.0, base, 180);
  EXPECT_EQ(p.daily_prod, 123);  // floor(21000 / 170)
  EXPECT_EQ(p.start_date, 10);
}

TEST(Budget, ZeroPriceIsAnError) {
  VaccinePolicy base;
  base.price = 0.0;
  EXPECT_THROW(budget_scaled_policy(1000.0, base, 180), ConfigError);
  EXPECT_THROW(budget_scaled_policy(-1.0, VaccinePolicy{}, 180), ConfigError);
}

}  // namespace
}  // namespace pabm
