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

#include "pandemic_abm/outputs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>

#include "json.hpp"

namespace pabm {
namespace {

constexpr std::array<const char*, 6> kPalette = {"#1f77b4", "#d62728", "#2ca02c",
                                                 "#ff7f0e", "#9467bd", "#8c564b"};

std::string svg_escape(const std::string& s) {
  std::string out;
  for (const char ch : s) {
    switch (ch) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      default: out += ch;
    }
  }
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n\r") == std::string::npos) return s;
  std::string out = "\"";
  for (const char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string format_number(double v) {
  if (v == 0.0) return "0";  // folds -0
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::ofstream open_output(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw OutputError(path.string() + ": cannot open for writing");
  return out;
}

void write_timeseries_csv(std::ostream& out, const Summary& s) {
  out << "step";
  for (int k = 0; k < kNumSeries; ++k) {
    out << ',' << series_name(k) << "_mean," << series_name(k) << "_std";
  }
  for (int g = 0; g < kNumAgeGroups; ++g) {
    out << ",infections_age" << g << "_mean,infections_age" << g << "_std";
  }
  out << "\r\n";
  for (Eigen::Index t = 0; t < s.mean.rows(); ++t) {
    out << t;
    for (int k = 0; k < kNumSeries; ++k) {
      out << ',' << format_number(s.mean(t, k)) << ',' << format_number(s.std(t, k));
    }
    for (int g = 0; g < kNumAgeGroups; ++g) {
      out << ',' << format_number(s.age_mean(t, g)) << ',' << format_number(s.age_std(t, g));
    }
    out << "\r\n";
  }
}

void write_summary_json(std::ostream& out, const Summary& s, const ScenarioConfig& config) {
  nlohmann::ordered_json j;
  j["scenario"] = config.results_file_postfix;
  j["config_hash"] = config_hash(config);
  j["num_runs"] = s.num_runs;
  j["num_agents"] = s.num_agents;
  j["num_steps"] = s.mean.rows();
  for (int k = 0; k < kNumScalars; ++k) {
    const auto idx = static_cast<std::size_t>(k);
    j[std::string(scalar_name(k))] = {{"mean", s.scalar_mean[idx]}, {"std", s.scalar_std[idx]}};
  }
  nlohmann::ordered_json ages = nlohmann::ordered_json::array();
  for (int g = 0; g < kNumAgeGroups; ++g) {
    const double infected = s.final_age_infections[static_cast<std::size_t>(g)];
    ages.push_back(infected);
  }
  j["final_infections_by_age_group"] = ages;
  out << j.dump(2) << '\n';
}

void write_svg_chart(std::ostream& out, const std::string& title, const std::string& y_label,
                     const std::vector<ChartLine>& lines, double reference) {
  constexpr double kW = 720, kH = 400, kLeft = 70, kRight = 160, kTop = 40, kBottom = 50;
  const double pw = kW - kLeft - kRight;
  const double ph = kH - kTop - kBottom;
  Eigen::Index n = 0;
  double ymax = reference;
  for (const ChartLine& l : lines) {
    n = std::max(n, l.values.size());
    if (l.values.size() > 0) ymax = std::max(ymax, l.values.maxCoeff());
  }
  if (ymax <= 0.0) ymax = 1.0;
  const double xmax = std::max<double>(1.0, static_cast<double>(n - 1));
  const auto x = [&](double t) { return kLeft + pw * t / xmax; };
  const auto y = [&](double v) { return kTop + ph * (1.0 - v / ymax); };

  out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kW << "\" height=\"" << kH
      << "\" font-family=\"sans-serif\" font-size=\"12\">\n";
  out << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  out << "<text x=\"" << kW / 2 << "\" y=\"22\" text-anchor=\"middle\" font-size=\"15\">"
      << svg_escape(title) << "</text>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop + ph << "\" x2=\"" << kLeft + pw
      << "\" y2=\"" << kTop + ph << "\" stroke=\"black\"/>\n";
  out << "<line x1=\"" << kLeft << "\" y1=\"" << kTop << "\" x2=\"" << kLeft << "\" y2=\""
      << kTop + ph << "\" stroke=\"black\"/>\n";
  for (int k = 0; k <= 4; ++k) {
    const double v = ymax * k / 4.0;
    out << "<text x=\"" << kLeft - 6 << "\" y=\"" << format_number(y(v) + 4)
        << "\" text-anchor=\"end\">" << format_number(std::round(v)) << "</text>\n";
    const double t = xmax * k / 4.0;
    out << "<text x=\"" << format_number(x(t)) << "\" y=\"" << kTop + ph + 18
        << "\" text-anchor=\"middle\">" << format_number(std::round(t)) << "</text>\n";
  }
  out << "<text x=\"" << kLeft + pw / 2 << "\" y=\"" << kH - 10
      << "\" text-anchor=\"middle\">day</text>\n";
  out << "<text transform=\"translate(16," << kTop + ph / 2
      << ") rotate(-90)\" text-anchor=\"middle\">" << svg_escape(y_label) << "</text>\n";
  if (reference > 0.0) {
    out << "<line x1=\"" << kLeft << "\" y1=\"" << format_number(y(reference)) << "\" x2=\""
        << kLeft + pw << "\" y2=\"" << format_number(y(reference))
        << "\" stroke=\"gray\" stroke-dasharray=\"6,4\"/>\n";
  }
  for (std::size_t k = 0; k < lines.size(); ++k) {
    const char* color = kPalette[k % kPalette.size()];
    out << "<polyline fill=\"none\" stroke=\"" << color << "\" stroke-width=\"1.5\" points=\"";
    for (Eigen::Index t = 0; t < lines[k].values.size(); ++t) {
      out << format_number(x(static_cast<double>(t))) << ','
          << format_number(y(lines[k].values[t])) << ' ';
    }
    out << "\"/>\n";
    const double ly = kTop + 10 + 18.0 * static_cast<double>(k);
    out << "<line x1=\"" << kLeft + pw + 12 << "\" y1=\"" << ly << "\" x2=\"" << kLeft + pw + 32
        << "\" y2=\"" << ly << "\" stroke=\"" << color << "\" stroke-width=\"2\"/>\n";
    out << "<text x=\"" << kLeft + pw + 38 << "\" y=\"" << ly + 4 << "\">"
        << svg_escape(lines[k].label) << "</text>\n";
  }
  out << "</svg>\n";
}

OutputPaths write_outputs(const Summary& summary, const ScenarioConfig& config,
                          const std::filesystem::path& out_dir, bool plot) {
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw OutputError(out_dir.string() + ": " + ec.message());
  const std::string& postfix = config.results_file_postfix;

  OutputPaths paths;
  paths.timeseries = out_dir / ("timeseries_" + postfix + ".csv");
  paths.summary = out_dir / ("summary_" + postfix + ".json");
  {
    auto out = open_output(paths.timeseries);
    write_timeseries_csv(out, summary);
    if (!out) throw OutputError(paths.timeseries.string() + ": write failed");
  }
  {
    auto out = open_output(paths.summary);
    write_summary_json(out, summary, config);
    if (!out) throw OutputError(paths.summary.string() + ": write failed");
  }
  if (plot) {
    const auto chart = [&](const std::string& name, const std::string& title,
                           const std::string& y_label, std::vector<int> columns,
                           double reference) {
      std::vector<ChartLine> lines;
      for (const int c : columns) {
        lines.push_back({std::string(series_name(c)), summary.mean.col(c)});
      }
      const auto path = out_dir / (name + "_" + postfix + ".svg");
      auto out = open_output(path);
      write_svg_chart(out, title + " (" + postfix + ")", y_label, lines, reference);
      paths.charts.push_back(path);
    };
    chart("infections", "Daily new infections", "agents", {kNewInfections}, 0.0);
    chart("cumulative", "Cumulative infections", "agents", {kCumulativeInfections}, 0.0);
    const double beds =
        config.hospital_bed_capacity * static_cast<double>(config.num_agents) / 1e5;
    chart("hospital", "Hospital occupancy", "agents", {kHospitalizedCount, kIcuCount}, beds);
    chart("cost", "Cumulative cost", "USD", {kCumulativeCost}, 0.0);
  }
  return paths;
}

void write_comparison_csv(std::ostream& out, const std::vector<ComparisonRow>& rows) {
  out << "scenario";
  for (int k = 0; k < kNumScalars; ++k) {
    out << ',' << scalar_name(k) << "_mean," << scalar_name(k) << "_std";
  }
  out << "\r\n";
  for (const ComparisonRow& row : rows) {
    out << csv_field(row.scenario);
    for (int k = 0; k < kNumScalars; ++k) {
      const auto idx = static_cast<std::size_t>(k);
      out << ',' << format_number(row.summary.scalar_mean[idx]) << ','
          << format_number(row.summary.scalar_std[idx]);
    }
    out << "\r\n";
  }
}

std::pair<double, double> sweep_metric(const Summary& s, const std::string& metric) {
  const auto scalar = [&](int k) {
    return std::pair{s.scalar_mean[static_cast<std::size_t>(k)],
                     s.scalar_std[static_cast<std::size_t>(k)]};
  };
  if (metric == "peak_hospitalizations") return scalar(0);
  if (metric == "total_cost") return scalar(5);
  if (metric == "cumulative_infections") {
    const auto [mean, sd] = scalar(4);
    const auto n = static_cast<double>(s.num_agents);
    return {mean * n, sd * n};
  }
  throw std::invalid_argument("unknown sweep metric '" + metric +
                              "' (use peak_hospitalizations, cumulative_infections, total_cost)");
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepPoint>& points,
                     const std::vector<std::string>& metrics) {
  out << "value,metric,mean,std\r\n";
  for (const SweepPoint& p : points) {
    for (const std::string& m : metrics) {
      const auto [mean, sd] = sweep_metric(p.summary, m);
      out << csv_field(p.value) << ',' << m << ',' << format_number(mean) << ','
          << format_number(sd) << "\r\n";
    }
  }
}

}  // namespace pabm
