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
#include <random>

#include "pulsenet/config.hpp"
#include "pulsenet/csv.hpp"
#include "pulsenet/errors.hpp"

namespace pulsenet {
namespace {

std::string error_of(std::string_view text) {
  try {
    ExperimentConfig::parse(text).validate();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return {};
}

TEST(Config, ParsesSections) {
  const auto c = ExperimentConfig::parse(R"(
; comment
[experiment]
scenario = ramsey
[physics]
gamma = 2
photons = 4
tau = 0.25
t_w = auto
[scan]
delta_min = -2
delta_max = 2
delta_points = 5
[integrator]
method = dopri45
step = 0.001
)");
  EXPECT_EQ(c.scenario, "ramsey");
  EXPECT_EQ(c.photons, 4);
  EXPECT_FALSE(c.pulse_width);
  EXPECT_EQ(c.integrator.method, Method::dopri45);
  EXPECT_NO_THROW(c.validate());
  // physical units: rates and times scale with gamma
  EXPECT_DOUBLE_EQ(c.delay(), 0.5);
  EXPECT_DOUBLE_EQ(c.normalized_integrator().step, 0.002);
  EXPECT_EQ(c.detunings(), (std::vector<double>{-1.0, -0.5, 0.0, 0.5, 1.0}));
}

TEST(Config, AutoWidthGivesQuarterTurnPerHalfPulse) {
  auto c = ExperimentConfig::defaults("ramsey");
  c.photons = 9;
  EXPECT_NEAR(c.width(), std::pow(std::numbers::pi, 1.5) / 72.0, 1e-15);
  c.pulse_width = 0.3;
  c.gamma = 2.0;
  EXPECT_DOUBLE_EQ(c.width(), 0.6);
}

TEST(Config, DetuningGridIsMirrorSymmetric) {
  auto c = ExperimentConfig::defaults("ramsey");
  const auto g = c.detunings();
  ASSERT_EQ(g.size(), 81u);
  EXPECT_EQ(g.front(), -4.0);
  EXPECT_EQ(g.back(), 4.0);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_EQ(g[i], -g[g.size() - 1 - i]);
  EXPECT_EQ(g[40], 0.0);
}

TEST(Config, ErrorsNameTheField) {
  EXPECT_NE(error_of("[experiment]\nscenario = ramsey\n[physics]\ngamma = -1\n").find("physics.gamma"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = ramsey\n[physics]\nphotons = many\n").find("physics.photons"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = ramsey\n[physics]\ncolour = red\n").find("physics.colour"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = sideways\n").find("experiment.scenario"), std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = ramsey\n[scan]\ndelta_min = inf\n").find("scan.delta_min"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = ramsey\n[truncation]\nwindow = 1\n").find("truncation.window"),
            std::string::npos);
  EXPECT_NE(error_of("[experiment]\nscenario = delay-demo\n[physics]\nphotons = 2\n").find("physics.photons"),
            std::string::npos);
}

TEST(Config, MissingFileIsAConfigError) { EXPECT_THROW(ExperimentConfig::load("/nonexistent/x.ini"), ConfigError); }

TEST(Config, RoundTripDefaults) {
  for (const char* s : {"ramsey", "output-analysis", "delay-demo", "oracle-compare"}) {
    const auto c = ExperimentConfig::defaults(s);
    EXPECT_EQ(ExperimentConfig::parse(c.serialize()), c) << s;
  }
}

TEST(Config, RoundTripRandomConfigs) {
  std::mt19937_64 rng(2026);
  std::uniform_real_distribution<double> pos(1e-3, 1e3);
  std::uniform_real_distribution<double> any(-1e3, 1e3);
  std::uniform_int_distribution<int> small(0, 40);
  for (int trial = 0; trial < 200; ++trial) {
    auto c = ExperimentConfig::defaults(trial % 2 ? "ramsey" : "output-analysis");
    c.seed = rng();
    c.gamma = pos(rng);
    c.photons = small(rng);
    c.tau = pos(rng);
    if (trial % 3) c.pulse_width = pos(rng);
    c.capture_margin = pos(rng);
    c.atom_coupled = trial % 5 != 0;
    c.delta_min = any(rng);
    c.delta_max = c.delta_min + pos(rng);
    c.delta_points = 1 + small(rng);
    c.window = trial % 4 == 0 ? 0 : 2 + small(rng);
    c.cap_excitations = trial % 7 != 0;
    c.integrator.method = trial % 2 ? Method::rk4 : Method::dopri45;
    c.integrator.step = pos(rng) * 1e-6;
    c.integrator.abs_tol = pos(rng) * 1e-12;
    c.integrator.rel_tol = 1.0 / 3.0 * pos(rng) * 1e-9;
    c.integrator.record_stride = 1 + small(rng);
    c.delay_supports = pos(rng);
    c.oracle_case = trial % 2 ? "ramsey" : "source-atom";
    c.oracle_bins = 50 + small(rng);
    c.oracle_tolerance = pos(rng) * 1e-5;
    c.oracle_detuning = any(rng);
    const auto back = ExperimentConfig::parse(c.serialize());
    EXPECT_EQ(back, c) << c.serialize();
    EXPECT_EQ(back.serialize(), c.serialize());
  }
}

TEST(Csv, SeventeenDigitsRoundTrip) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> d(-1e6, 1e6);
  for (int i = 0; i < 1000; ++i) {
    const double x = d(rng) * std::pow(10.0, i % 20 - 10);
    EXPECT_EQ(std::stod(format_number(x)), x);
  }
  EXPECT_EQ(format_number(-0.0), "0");
  EXPECT_EQ(format_number(0.1), "0.10000000000000001");
  EXPECT_EQ(format_number(std::nan("")), "nan");
}

TEST(Csv, LayoutAndColumns) {
  CsvTable t;
  t.comments = {"pulsenet test", ""};
  t.columns = {"a", "b"};
  t.add_row({1.0, 0.5});
  t.add_row({-2.0, 1e-20});
  EXPECT_EQ(t.str(), "# pulsenet test\n#\na,b\n1,0.5\n-2,9.9999999999999995e-21\n");
  EXPECT_EQ(t.column("b"), (std::vector<double>{0.5, 1e-20}));
  EXPECT_THROW(t.add_row({1.0}), Error);
  EXPECT_THROW(t.column("c"), UnknownLabel);
}

}  // namespace
}  // namespace pulsenet
