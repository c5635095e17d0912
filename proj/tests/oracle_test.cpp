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
#include "pulsenet/oracle.hpp"

namespace pulsenet {
namespace {

// Continuum limit of the collision model for one photon in a resonant channel:
//   de/dt = -(i Delta + gamma/2) e - sqrt(gamma) u(t).
double continuum_excitation(const PulseShape& u, const AtomParams& atom, double t_end) {
  namespace ode = boost::numeric::odeint;
  using State = std::array<double, 2>;
  auto rhs = [&](const State& x, State& dx, double t) {
    const cplx e(x[0], x[1]);
    const cplx de = -(cplx(0.0, atom.detuning) + 0.5 * atom.gamma) * e - std::sqrt(atom.gamma) * u(t);
    dx = {de.real(), de.imag()};
  };
  State x{0.0, 0.0};
  ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(1e-12, 1e-12), rhs, x,
                          u.support_start(), t_end, 1e-3);
  return x[0] * x[0] + x[1] * x[1];
}

double max_deviation_from_cavity(int bins) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const AtomParams atom{1.0, 0.0};
  const auto tb = scatter_on_atom({discretize(u, bins)}, atom);
  const auto sys = build_source_atom(u, atom, 1);
  const Operator sm = embed(sigma_minus(), sys.layout, "atom");
  const auto r = integrate(sys, initial_state(sys), {u.support_start(), u.support_end(), tb.times},
                           {{"P_e", TimeDependentOperator(sm.adjoint() * sm)}});
  double worst = 0.0;
  for (std::size_t k = 0; k < tb.times.size(); ++k) {
    worst = std::max(worst, std::abs(r.value_at("P_e", tb.times[k]) - tb.excitation[k]));
  }
  return worst;
}

TEST(Discretize, UnitNormOnTheSupport) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto f = discretize(u, 200);
  EXPECT_EQ(f.size(), 200u);
  EXPECT_NEAR(f.norm(), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(f.start, 0.0);
  EXPECT_NEAR(f.dt, 0.05, 1e-15);
  EXPECT_NEAR(f.envelope(5.0).real(), u(f.bin_center(100)).real(), 1e-3);
  EXPECT_THROW(discretize(u, 49), ConfigError);
  EXPECT_NEAR(discretize(PulseShape::vacuum(), 60).norm(), 0.0, 0.0);
}

TEST(Discretize, PadAndDelay) {
  const auto f = discretize(PulseShape::gaussian(5.0, 1.0), 100);
  const auto padded = pad(f, 10, 20);
  EXPECT_EQ(padded.size(), 130u);
  EXPECT_NEAR(padded.start, f.start - 10 * f.dt, 1e-15);
  EXPECT_NEAR(padded.norm(), 1.0, 1e-14);
  const auto d = delay_bins(padded, 20);
  EXPECT_EQ(d.size(), padded.size());
  EXPECT_EQ(d.amplitudes[30], padded.amplitudes[10]);
  EXPECT_TRUE(d.warnings.empty());
  const auto clipped = delay_bins(f, 60);
  EXPECT_FALSE(clipped.warnings.empty());
  EXPECT_LT(clipped.norm(), 1.0);
}

TEST(Scatter, MatchesContinuumLimit) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  for (double delta : {0.0, 1.3}) {
    const AtomParams atom{1.0, delta};
    const auto tb = scatter_on_atom({discretize(u, 800)}, atom);
    for (double t : {3.0, 5.0, 7.0, 10.0}) {
      EXPECT_NEAR(tb.excitation_at(t), continuum_excitation(u, atom, t), 2e-3) << delta << " " << t;
    }
  }
}

TEST(Scatter, ConservesTheExcitation) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto tb = scatter_on_atom({discretize(u, 200)}, {1.0, 0.5});
  EXPECT_LT(tb.norm_defect, 1e-12);
  EXPECT_NEAR(tb.output_photons(0) + tb.excitation.back(), 1.0, 1e-12);
}

TEST(Scatter, UncoupledAtomStaysDown) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const auto tb = scatter_on_atom({discretize(u, 200)}, {1e-12, 0.0});
  for (double p : tb.excitation) EXPECT_LT(p, 1e-10);
  EXPECT_NEAR(tb.output_photons(0), 1.0, 1e-10);
}

TEST(Scatter, TwoChannelsShareTheRate) {
  const auto u = PulseShape::gaussian(5.0, 1.0);
  const double h = 1.0 / std::sqrt(2.0);
  const auto one = scatter_on_atom({discretize(u, 200)}, {1.0, 0.0});
  const auto two = scatter_on_atom({discretize(u, 200).scaled(h), discretize(u, 200).scaled(h)}, {1.0, 0.0});
  // equal splitting into two equally coupled channels is the one-channel problem
  for (std::size_t k = 0; k < one.excitation.size(); ++k) EXPECT_NEAR(one.excitation[k], two.excitation[k], 1e-12);
}

TEST(Scatter, RejectsMoreThanOnePhoton) {
  const auto f = discretize(PulseShape::gaussian(5.0, 1.0), 100);
  EXPECT_THROW(scatter_on_atom({f, f}, {1.0, 0.0}), UnsupportedConfiguration);
}

TEST(Scatter, RefinementApproachesVirtualCavity) {
  const double coarse = max_deviation_from_cavity(200);
  const double fine = max_deviation_from_cavity(400);
  EXPECT_LE(coarse, 0.01);
  EXPECT_LT(fine, coarse);
}

}  // namespace
}  // namespace pulsenet
