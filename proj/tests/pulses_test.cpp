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
#include "pulsenet/pulses.hpp"

namespace pulsenet {
namespace {

// Truncated Gaussian on [tp - 5 tw, tp + 5 tw], closed form via erf.
struct GaussianReference {
  double tp, tw;
  double norm() const { return std::erf(5.0); }
  double energy(double t) const {
    const double x = std::clamp((t - tp) / tw, -5.0, 5.0);
    return (std::erf(x) + std::erf(5.0)) / (2.0 * norm());
  }
  double amplitude(double t) const {
    if (std::abs(t - tp) > 5.0 * tw) return 0.0;
    const double x = (t - tp) / tw;
    return std::exp(-0.5 * x * x) / std::sqrt(tw * std::sqrt(std::numbers::pi) * norm());
  }
};

TEST(Gaussian, SupportAndPeak) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  EXPECT_DOUBLE_EQ(u.support_start(), 0.0);
  EXPECT_DOUBLE_EQ(u.support_end(), 10.0);
  EXPECT_DOUBLE_EQ(u.peak_time(), 5.0);
  EXPECT_DOUBLE_EQ(u.width(), 1.0);
  EXPECT_EQ(u(-0.1), cplx(0.0));
  EXPECT_EQ(u(10.1), cplx(0.0));
}

TEST(Gaussian, MatchesClosedForm) {
  const GaussianReference ref{2.0, 0.4};
  const auto u = PulseShape::gaussian(ref.tp, ref.tw);
  for (double t = 0.0; t <= 4.0; t += 0.05) {
    EXPECT_NEAR(u(t).real(), ref.amplitude(t), 1e-12) << t;
    EXPECT_NEAR(u.energy(t), ref.energy(t), 1e-9) << t;
    EXPECT_NEAR(u.remaining(t), 1.0 - ref.energy(t), 1e-9) << t;
  }
  EXPECT_NEAR(u.energy(2.0), 0.5, 1e-12);
  EXPECT_NEAR(u.energy(u.support_end()), 1.0, 1e-12);
}

TEST(Gaussian, TailsKeepRelativePrecision) {
  const GaussianReference ref{5.0, 1.0};
  const auto u = PulseShape::gaussian(ref.tp, ref.tw);
  for (double t : {0.5, 1.0, 1.5}) {
    EXPECT_NEAR(u.energy(t) / ref.energy(t), 1.0, 1e-3) << t;
    EXPECT_NEAR(u.remaining(10.0 - t) / ref.energy(t), 1.0, 1e-3) << t;
  }
}

TEST(Envelope, NormalizesArbitraryShape) {
  const auto u = PulseShape::from_envelope([](double t) { return cplx(std::sin(t), 0.0); }, 0.0, std::numbers::pi);
  EXPECT_NEAR(u.energy(std::numbers::pi), 1.0, 1e-12);
  EXPECT_NEAR(std::norm(u(std::numbers::pi / 2)), 2.0 / std::numbers::pi, 1e-12);
  EXPECT_TRUE(std::isnan(u.peak_time()));
}

TEST(Envelope, VacuumIsEmpty) {
  const auto v = PulseShape::vacuum();
  EXPECT_TRUE(v.is_vacuum());
  EXPECT_EQ(v(1.0), cplx(0.0));
  EXPECT_EQ(g_source(v)(1.0), cplx(0.0));
}

TEST(Delay, ShiftsEverything) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto v = u.delayed(3.0);
  EXPECT_DOUBLE_EQ(v.support_start(), 3.0);
  EXPECT_DOUBLE_EQ(v.peak_time(), 8.0);
  for (double t = 0.0; t < 12.0; t += 0.37) {
    EXPECT_NEAR(std::abs(v(t + 3.0) - u(t)), 0.0, 1e-12);
    EXPECT_NEAR(v.energy(t + 3.0), u.energy(t), 1e-12);
  }
  EXPECT_TRUE(v.same_as(u.delayed(3.0)));
  EXPECT_FALSE(v.same_as(u));
}

TEST(Couplings, SourceAndAbsorberClosedForm) {
  const GaussianReference ref{5.0, 1.0};
  const auto u = PulseShape::gaussian(ref.tp, ref.tw);
  const auto gs = g_source(u), ga = g_absorber(u);
  for (double t = 2.0; t <= 8.0; t += 0.25) {
    EXPECT_NEAR(gs(t).real(), ref.amplitude(t) / std::sqrt(1.0 - ref.energy(t)), 1e-7) << t;
    EXPECT_NEAR(ga(t).real(), -ref.amplitude(t) / std::sqrt(ref.energy(t)), 1e-7) << t;
  }
}

TEST(Couplings, RegularizedAtTheEdges) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const Regularization reg;
  const auto gs = g_source(u, reg), ga = g_absorber(u, reg);
  for (double t = 0.0; t <= 10.0; t += 0.01) {
    EXPECT_TRUE(std::isfinite(std::abs(gs(t))));
    EXPECT_TRUE(std::isfinite(std::abs(ga(t))));
    EXPECT_LE(std::abs(gs(t)), u.max_abs() / reg.floor * (1 + 1e-12));
  }
  // the truncated edge (u ~ 4e-6 max|u|) sits above the zero threshold; outside the support g vanishes
  EXPECT_NEAR(std::abs(gs(10.0)), std::abs(u(10.0)) / reg.floor, 1e-6);
  EXPECT_EQ(gs(10.5), cplx(0.0));
  EXPECT_EQ(ga(-0.5), cplx(0.0));
  const auto narrow = g_source(u, Regularization{1e-6, 1e-5});
  EXPECT_EQ(narrow(10.0), cplx(0.0));
}

TEST(Couplings, ComplexEnvelopeIsConjugated) {
  const auto u =
      PulseShape::from_envelope([](double t) { return std::exp(cplx(0.0, 0.3 * t)) * std::sin(t); }, 0.0, 3.0);
  const auto gs = g_source(u);
  const double t = 1.2;
  EXPECT_NEAR(std::arg(gs(t)), -0.3 * t, 1e-12);
}

TEST(Simultaneous, LongDelayReducesToTwoStages) {
  const auto v = PulseShape::gaussian(5.0, 1.0);
  const auto u = v.delayed(3.0 * v.support_length());
  const auto [out, in] = g_simultaneous(v, u);
  const auto ga = g_absorber(v), gs = g_source(u);
  double worst = 0.0;
  for (double t = 0.0; t <= u.support_end(); t += 0.01) {
    worst = std::max(worst, std::abs(in(t) - ga(t)));
    worst = std::max(worst, std::abs(out(t) - gs(t)));
  }
  EXPECT_LT(worst, 1e-6);
  EXPECT_FALSE(out.transparent());
}

TEST(Simultaneous, ZeroDelayIsTransparent) {
  const auto v = PulseShape::gaussian(5.0, 1.0);
  const auto [out, in] = g_simultaneous(v, v);
  EXPECT_TRUE(out.transparent());
  EXPECT_TRUE(in.transparent());
  EXPECT_EQ(out(5.0), cplx(0.0));
}

TEST(Simultaneous, EmittingBeforeAbsorbingViolatesCausality) {
  const auto v = PulseShape::gaussian(5.0, 1.0);
  EXPECT_THROW(g_simultaneous(v.delayed(1.0), v), CausalityViolation);
}

TEST(Theta, SinSquaredIsEnergy) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto th = theta_schedule(u);
  for (double t = 0.0; t <= 10.0; t += 0.1) {
    EXPECT_NEAR(th.sin(t) * th.sin(t), u.energy(t), 1e-14);
    EXPECT_NEAR(th.sin(t) * th.sin(t) + th.cos(t) * th.cos(t), 1.0, 1e-14);
    EXPECT_NEAR(std::sin(th(t)), th.sin(t), 1e-12);
  }
  EXPECT_NEAR(th(10.0), std::numbers::pi / 2, 1e-12);
}

TEST(Theta, ClampOnlyActsInTheTails) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto csc = regularized_trig_factor(u, TrigFactor::csc2theta, Regularization{1e-6, 1e-9});
  double worst = 0.0;
  for (double t = 0.0; t <= 10.0; t += 1e-3) worst = std::max(worst, std::abs(csc(t)));
  EXPECT_LT(worst, 10.0 * u.max_abs());
}

TEST(Theta, TrigFactors) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto th = theta_schedule(u);
  const auto csc = regularized_trig_factor(u, TrigFactor::csc2theta);
  const auto cot = regularized_trig_factor(u, TrigFactor::cot2theta);
  for (double t = 3.0; t <= 7.0; t += 0.3) {
    const double s2 = std::sin(2.0 * th(t));
    EXPECT_NEAR(csc(t).real(), u(t).real() / s2, 1e-9);
    EXPECT_NEAR(cot(t).real(), u(t).real() * std::cos(2.0 * th(t)) / s2, 1e-9);
  }
  for (double t = 0.0; t <= 10.0; t += 0.01) EXPECT_TRUE(std::isfinite(std::abs(csc(t))));
}

}  // namespace
}  // namespace pulsenet
