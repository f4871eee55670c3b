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

#ifndef PANDEMIC_ABM_OUTPUTS_HPP_
#define PANDEMIC_ABM_OUTPUTS_HPP_

#include <filesystem>
#include <fstream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pandemic_abm/config.hpp"
#include "pandemic_abm/engine.hpp"

namespace pabm {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Fixed textual form used by every writer, so equal values give equal bytes.
std::string format_number(double v);

/// Header `step`, then `<series>_mean,<series>_std` per series, then the
/// per-age cumulative columns `infections_age<g>_mean/_std`. One row per step.
void write_timeseries_csv(std::ostream& out, const Summary& summary);

/// Scalar summaries, per-age final infections and the config hash, with a
/// fixed key order.
void write_summary_json(std::ostream& out, const Summary& summary, const ScenarioConfig& config);

struct ChartLine {
  std::string label;
  Eigen::ArrayXd values;
};

/// Minimal line chart; `reference` > 0 adds a dashed horizontal line.
void write_svg_chart(std::ostream& out, const std::string& title, const std::string& y_label,
                     const std::vector<ChartLine>& lines, double reference = 0.0);

struct OutputPaths {
  std::filesystem::path timeseries;
  std::filesystem::path summary;
  std::vector<std::filesystem::path> charts;
};

/// Writes `timeseries_<postfix>.csv`, `summary_<postfix>.json` and, with
/// `plot`, SVG charts into `out_dir` (created if missing). Throws
/// OutputError naming the path on I/O failure.
OutputPaths write_outputs(const Summary& summary, const ScenarioConfig& config,
                          const std::filesystem::path& out_dir, bool plot);

/// One row per scenario: name, then mean and std of each scalar summary.
struct ComparisonRow {
  std::string scenario;
  Summary summary;
};
void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows);

/// Long format `value,metric,mean,std`.
struct SweepPoint {
  std::string value;
  Summary summary;
};
void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const std::vector<std::string>& metrics);

/// Sweep metric names: peak_hospitalizations, cumulative_infections,
/// total_cost. Returns mean and std for a metric; throws
/// std::invalid_argument for an unknown name.
std::pair<double, double> sweep_metric(const Summary& summary, const std::string& metric);

/// Opens `path` for writing or throws OutputError.
std::ofstream open_output(const std::filesystem::path& path);

}  // namespace pabm

#endif  // PANDEMIC_ABM_OUTPUTS_HPP_
