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

#include <array>
#include <boost/numeric/odeint.hpp>
#include <cmath>

#include "pulsenet/cascade.hpp"
#include "pulsenet/errors.hpp"
#include "pulsenet/mesolve.hpp"

namespace pulsenet {
namespace {

// Driven, damped two-level atom:
//   H = Delta s+s- + c(t) s+ + c*(t) s-,  L = sqrt(gamma) s-.
// Reference: Bloch equations for p = rho_ee and q = rho_eg integrated with Boost.Odeint.
struct Bloch {
  double delta, gamma;
  std::function<cplx(double)> drive;

  using State = std::array<double, 3>;  // p, Re q, Im q
  void operator()(const State& x, State& dx, double t) const {
    const cplx c = drive(t);
    const cplx q(x[1], x[2]);
    const double p = x[0];
    const cplx i(0.0, 1.0);
    const cplx dp = -i * (c * std::conj(q) - std::conj(c) * q) - gamma * p;
    const cplx dq = -i * (delta * q + c * (1.0 - 2.0 * p)) - 0.5 * gamma * q;
    dx = {dp.real(), dq.real(), dq.imag()};
  }

  double excited(double t_end) const {
    namespace ode = boost::numeric::odeint;
    State x{0.0, 0.0, 0.0};
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-13, 1e-13), *this, x, 0.0,
                            t_end, 1e-3);
    return x[0];
  }
};

TimeDependentSystem driven_atom(const Bloch& b) {
  const SpaceLayout layout({{"atom", 2}});
  const Operator sm = embed(sigma_minus(), layout, "atom");
  TimeDependentSystem sys;
  sys.layout = layout;
  sys.hamiltonian = TimeDependentOperator(layout);
  sys.hamiltonian.add(b.delta * (sm.adjoint() * sm));
  sys.hamiltonian.add_with_hc(b.drive, sm.adjoint());
  sys.channels.push_back({"decay", TimeDependentOperator(std::sqrt(b.gamma) * sm)});
  return sys;
}

Observable population(const SpaceLayout& layout) {
  const Operator sm = embed(sigma_minus(), layout, "atom");
  return {"P_e", TimeDependentOperator(sm.adjoint() * sm)};
}

const Bloch kPulsedAtom{0.8, 1.0, [](double t) { return cplx(1.5, 0.4) * std::exp(-(t - 2.0) * (t - 2.0)); }};

TEST(Integrate, Rk4MatchesBlochReference) {
  const auto sys = driven_atom(kPulsedAtom);
  IntegratorConfig cfg;
  cfg.step = 1e-3;
  const auto r = integrate(sys, DensityMatrix::pure(sys.layout, Eigen::Vector2cd(1, 0)), {0.0, 5.0, {1.0, 2.5, 4.0}},
                           {population(sys.layout)}, cfg);
  for (double t : {1.0, 2.5, 4.0, 5.0}) EXPECT_NEAR(r.value_at("P_e", t), kPulsedAtom.excited(t), 1e-10) << t;
}

TEST(Integrate, AdaptiveMatchesBlochReference) {
  const auto sys = driven_atom(kPulsedAtom);
  IntegratorConfig cfg;
  cfg.method = Method::dopri45;
  cfg.abs_tol = 1e-12;
  cfg.rel_tol = 1e-10;
  const auto r = integrate(sys, DensityMatrix::pure(sys.layout, Eigen::Vector2cd(1, 0)), {0.0, 5.0, {2.5}},
                           {population(sys.layout)}, cfg);
  EXPECT_NEAR(r.value_at("P_e", 2.5), kPulsedAtom.excited(2.5), 1e-8);
  EXPECT_NEAR(r.value_at("P_e", 5.0), kPulsedAtom.excited(5.0), 1e-8);
  EXPECT_GT(r.diagnostics.accepted_steps, 0);
}

TEST(Integrate, CheckpointsAreHitExactly) {
  const auto sys = driven_atom(kPulsedAtom);
  for (Method m : {Method::rk4, Method::dopri45}) {
    IntegratorConfig cfg;
    cfg.method = m;
    cfg.step = 0.01;
    const std::vector<double> cps = {0.123456789, 1.0 / 3.0, 2.718281828};
    const auto r = integrate(sys, DensityMatrix::pure(sys.layout, Eigen::Vector2cd(1, 0)), {0.0, 3.0, cps},
                             {population(sys.layout)}, cfg);
    for (double c : cps) EXPECT_NE(std::find(r.times.begin(), r.times.end(), c), r.times.end()) << c;
    EXPECT_EQ(r.times.front(), 0.0);
    EXPECT_EQ(r.times.back(), 3.0);
  }
}

TEST(Integrate, DampedCavityDecayAndFlux) {
  const SpaceLayout layout({{"mode", 4}});
  const Operator a = embed(annihilation(4), layout, "mode");
  const double kappa = 0.7;
  TimeDependentSystem sys;
  sys.layout = layout;
  sys.hamiltonian = TimeDependentOperator(layout);
  sys.channels.push_back({"leak", TimeDependentOperator(std::sqrt(kappa) * a)});
  const Observable n{"n", TimeDependentOperator(a.adjoint() * a)};
  const auto r = integrate(sys, prepare_fock(layout, "mode", 3), {0.0, 4.0, {}}, {n});
  for (std::size_t k = 0; k < r.times.size(); k += 50) {
    EXPECT_NEAR(r.track("n")[k].real(), 3.0 * std::exp(-kappa * r.times[k]), 1e-9);
    EXPECT_NEAR(r.cumulative_flux[0][k], 3.0 * (1.0 - std::exp(-kappa * r.times[k])), 1e-9);
  }
  EXPECT_NEAR(r.total_flux("leak"), 3.0 * (1.0 - std::exp(-kappa * 4.0)), 1e-9);
}

TEST(Integrate, InvariantsHold) {
  const auto u = PulseShape::gaussian(1.0, 0.2);
  const auto sys = build_source_atom(u, {1.0, 0.3}, 2);
  const auto r = integrate(sys, initial_state(sys), {0.0, 2.0, {}});
  EXPECT_LT(r.diagnostics.max_trace_drift, 1e-10);
  EXPECT_LT(r.diagnostics.max_hermiticity_defect, 1e-12);
  EXPECT_GT(r.diagnostics.min_eigenvalue, -1e-10);
  EXPECT_NEAR(r.final_state.trace().real(), 1.0, 1e-10);
}

TEST(Integrate, ExcitationBlocksAreFound) {
  const auto u = PulseShape::gaussian(1.0, 0.2);
  const auto sys = build_source_absorber(u, 2);
  const auto r = integrate(sys, initial_state(sys), {0.0, 2.0, {}});
  EXPECT_GT(r.diagnostics.blocks, 1u);
  EXPECT_LT(r.diagnostics.largest_block, static_cast<std::size_t>(sys.layout.dimension()));
}

TEST(Integrate, HugeStepDiverges) {
  const SpaceLayout layout({{"mode", 3}});
  const Operator a = embed(annihilation(3), layout, "mode");
  TimeDependentSystem sys;
  sys.layout = layout;
  sys.hamiltonian = TimeDependentOperator(layout);
  sys.channels.push_back({"leak", TimeDependentOperator(std::sqrt(1e4) * a)});
  IntegratorConfig cfg;
  cfg.step = 1.0;
  EXPECT_THROW(integrate(sys, prepare_fock(layout, "mode", 2), {0.0, 200.0, {}}, {}, cfg), Error);
}

TEST(Integrate, RejectsBadConfig) {
  IntegratorConfig cfg;
  cfg.step = -1.0;
  EXPECT_THROW(cfg.validate(), ConfigError);
  cfg = {};
  cfg.record_stride = 0;
  EXPECT_THROW(cfg.validate(), ConfigError);
}

TEST(Scan, OrderedAndIndependentOfWorkerCount) {
  ScanProblem p;
  p.system = [](double delta) {
    Bloch b = kPulsedAtom;
    b.delta = delta;
    return driven_atom(b);
  };
  p.initial_state = [](const TimeDependentSystem& s) { return DensityMatrix::pure(s.layout, Eigen::Vector2cd(1, 0)); };
  p.span = [](const TimeDependentSystem&) { return TimeSpan{0.0, 4.0, {}}; };
  p.observables = [](const TimeDependentSystem& s) { return std::vector<Observable>{population(s.layout)}; };
  p.summarize = [](const TimeDependentSystem&, const TrajectoryResult& r) {
    return std::map<std::string, double>{{"P_e", r.track("P_e").back().real()}};
  };
  const std::vector<double> grid = {-2.0, -1.0, 0.0, 1.0, 2.0};
  IntegratorConfig cfg;
  cfg.step = 0.01;
  const auto one = scan(grid, p, cfg, 1);
  const auto three = scan(grid, p, cfg, 3);
  ASSERT_EQ(one.size(), grid.size());
  for (std::size_t i = 0; i < grid.size(); ++i) {
    EXPECT_EQ(one[i].index, i);
    EXPECT_EQ(one[i].parameter, grid[i]);
    EXPECT_TRUE(one[i].ok);
    EXPECT_EQ(one[i].summary.at("P_e"), three[i].summary.at("P_e"));
  }
}

TEST(Scan, FailingPointIsFlagged) {
  ScanProblem p;
  p.system = [](double x) {
    if (x > 0.5) throw ConfigError("boom");
    return driven_atom(kPulsedAtom);
  };
  p.initial_state = [](const TimeDependentSystem& s) { return DensityMatrix::pure(s.layout, Eigen::Vector2cd(1, 0)); };
  p.span = [](const TimeDependentSystem&) { return TimeSpan{0.0, 1.0, {}}; };
  IntegratorConfig cfg;
  cfg.step = 0.01;
  const auto rows = scan({0.0, 1.0, 0.2}, p, cfg, 2);
  EXPECT_TRUE(rows[0].ok);
  EXPECT_FALSE(rows[1].ok);
  EXPECT_NE(rows[1].error.find("boom"), std::string::npos);
  EXPECT_TRUE(rows[2].ok);
}

}  // namespace
}  // namespace pulsenet
