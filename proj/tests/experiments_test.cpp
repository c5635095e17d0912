// Copyright 2026 The pulsenet Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pulsenet/errors.hpp"
#include "pulsenet/experiments.hpp"

namespace pulsenet {
namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> x;
  for (int i = 0; i < n; ++i) x.push_back(a + (b - a) * i / (n - 1));
  return x;
}

TEST(CurveAnalysis, ExtremaOfACosine) {
  const auto x = linspace(-10.0, 10.0, 401);
  std::vector<double> y;
  for (double v : x) y.push_back(std::cos(v));
  // maxima at 0, +-2pi; minima at +-pi, +-3pi
  EXPECT_EQ(count_interior_extrema(y), 7);
  const auto m = local_maxima(x, y);
  ASSERT_EQ(m.size(), 3u);
  EXPECT_NEAR(m[1], 0.0, 1e-6);
  EXPECT_NEAR(fringe_spacing(x, y), 2.0 * std::numbers::pi, 1e-3);
  EXPECT_NEAR(mirror_asymmetry(x, y), 0.0, 1e-14);
}

TEST(CurveAnalysis, FlatAndMonotoneCurves) {
  EXPECT_EQ(count_interior_extrema({0.0, 0.0, 0.0, 0.0}), 0);
  EXPECT_EQ(count_interior_extrema({1.0, 2.0, 2.0, 3.0}), 0);
  EXPECT_EQ(count_interior_extrema({1.0, 2.0, 2.0, 1.0}), 1);
  const auto x = linspace(0.0, 1.0, 5);
  EXPECT_TRUE(std::isnan(fringe_spacing(x, {0, 1, 2, 3, 4})));
}

TEST(CurveAnalysis, CrossCorrelation) {
  const std::vector<double> a = {1, 2, 3, 2, 1}, b = {2, 4, 6, 4, 2}, c = {-1, -2, -3, -2, -1};
  EXPECT_NEAR(normalized_cross_correlation(a, b), 1.0, 1e-15);
  EXPECT_NEAR(normalized_cross_correlation(a, c), -1.0, 1e-15);
  EXPECT_TRUE(std::isnan(normalized_cross_correlation(a, {1, 1, 1, 1, 1})));
  EXPECT_THROW(normalized_cross_correlation(a, {1, 2}), Error);
}

TEST(CurveAnalysis, AsymmetryNeedsSymmetricGrid) {
  EXPECT_THROW(mirror_asymmetry({-1.0, 0.5}, {0.0, 0.0}), Error);
  EXPECT_DOUBLE_EQ(mirror_asymmetry({-1.0, 0.0, 1.0}, {1.0, 5.0, 1.5}), 0.5);
}

TEST(Setup, FollowsTheConfig) {
  auto c = ExperimentConfig::defaults("ramsey");
  const auto s = interferometer_setup(c, 0.5);
  EXPECT_DOUBLE_EQ(s.input.width(), c.width());
  EXPECT_DOUBLE_EQ(s.input.peak_time(), 5.0 * c.width());
  EXPECT_DOUBLE_EQ(s.capture_time, s.input.support_end() + 0.5 * c.width());
  EXPECT_EQ(s.atom.detuning, 0.5);
  EXPECT_EQ(s.photons, 9);
}

TEST(RamseyScan, NoPhotonsMeansNoExcitation) {
  auto c = ExperimentConfig::defaults("ramsey");
  c.photons = 0;
  c.delta_min = -2;
  c.delta_max = 2;
  c.delta_points = 5;
  const auto out = run_ramsey_scan(c, {1, false});
  ASSERT_EQ(out.table.rows.size(), 5u);
  for (double p : out.table.column("pe_quantum")) EXPECT_EQ(p, 0.0);
  for (double p : out.table.column("pe_classical")) EXPECT_EQ(p, 0.0);
}

TEST(RamseyScan, SinglePhotonQuantumBelowClassical) {
  auto c = ExperimentConfig::defaults("ramsey");
  c.photons = 1;
  c.delta_min = c.delta_max = 0.0;
  c.delta_points = 1;
  const auto out = run_ramsey_scan(c, {1, true});
  const double q = out.table.column("pe_quantum")[0];
  const double k = out.table.column("pe_classical")[0];
  EXPECT_GT(q, 0.0);
  EXPECT_LT(q, 1.0);
  EXPECT_GT(k, 0.0);
  ASSERT_EQ(out.trajectories.size(), 1u);
  EXPECT_EQ(out.trajectories[0].second.columns, (std::vector<std::string>{"t", "P_e"}));
}

TEST(RamseyScan, WrongScenarioIsAConfigError) {
  EXPECT_THROW(run_ramsey_scan(ExperimentConfig::defaults("delay-demo")), ConfigError);
}

TEST(DelayDemo, ByteIdenticalReruns) {
  auto c = ExperimentConfig::defaults("delay-demo");
  c.delay_supports = 0.3;
  const auto a = run_delay_demo(c).table.str();
  const auto b = run_delay_demo(c).table.str();
  EXPECT_EQ(a, b);
  EXPECT_NE(a.find("# pulsenet "), std::string::npos);
  EXPECT_NE(a.find("delay_supports = 0.29999999999999999"), std::string::npos);
}

TEST(DelayDemo, ZeroDelayPassesStraightThrough) {
  auto c = ExperimentConfig::defaults("delay-demo");
  c.delay_supports = 0.0;
  const auto out = run_delay_demo(c);
  EXPECT_EQ(out.table.column("input_flux"), out.table.column("output_flux"));
  EXPECT_NEAR(out.summary.at("fidelity"), 1.0, 1e-6);
}

TEST(OracleCompare, DecoupledAtomIsFlatZero) {
  auto c = ExperimentConfig::defaults("oracle-compare");
  c.atom_coupled = false;
  const auto out = run_oracle_compare(c);
  for (double p : out.table.column("pe_virtual_cavity")) EXPECT_NEAR(p, 0.0, 1e-12);
  for (double p : out.table.column("pe_time_bin")) EXPECT_NEAR(p, 0.0, 1e-12);
  EXPECT_TRUE(out.passed);
}

TEST(OracleCompare, RamseyCaseAgrees) {
  auto c = ExperimentConfig::defaults("oracle-compare");
  c.oracle_case = "ramsey";
  c.pulse_width.reset();  // pi/2 rule at n = 1
  const auto out = run_oracle_compare(c);
  EXPECT_LE(out.summary.at("max_deviation"), 0.01);
  EXPECT_TRUE(out.passed);
}

TEST(OracleCompare, TightToleranceFailsTheThreshold) {
  auto c = ExperimentConfig::defaults("oracle-compare");
  c.oracle_tolerance = 1e-9;
  EXPECT_FALSE(run_oracle_compare(c).passed);
}

TEST(Gnuplot, ReferencesTheCsv) {
  ExperimentOutput o;
  o.command = "ramsey-scan";
  const auto s = gnuplot_script(o, "scan.csv");
  EXPECT_NE(s.find("'scan.csv'"), std::string::npos);
  EXPECT_NE(s.find("set datafile separator ','"), std::string::npos);
}

}  // namespace
}  // namespace pulsenet
