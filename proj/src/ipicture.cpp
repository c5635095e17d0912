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

#include "pulsenet/ipicture.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>
#include <numeric>

#include "pulsenet/errors.hpp"

namespace pulsenet {

namespace {

const cplx kI(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

Operator lowering(const SpaceLayout& layout, const std::string& label) {
  return embed(annihilation(layout.local_dim(label)), layout, label);
}

const InterferometerSetup& require_setup(const TimeDependentSystem& system, const char* scenario) {
  if (system.metadata.scenario != scenario || !system.metadata.interferometer) {
    throw UnsupportedConfiguration(
        fmt::format("expected a '{}' system, got '{}'", scenario, system.metadata.scenario));
  }
  if (system.metadata.picture != "schrodinger") {
    throw UnsupportedConfiguration("system is already in the interaction picture");
  }
  return *system.metadata.interferometer;
}

int occupation_sum(const Occupation& occ, const std::vector<int>& positions) {
  int s = 0;
  for (int p : positions) s += occ[p];
  return s;
}

std::vector<int> positions_of(const SpaceLayout& layout, const std::vector<std::string>& labels) {
  std::vector<int> out;
  for (const auto& l : labels) out.push_back(layout.position(l));
  return out;
}

}  // namespace

Operator RotationFrame::pickup_image(const SpaceLayout& layout, std::size_t i, double t) const {
  const FramePair& pair = pairs.at(i);
  return mode_superposition({{pair.theta.cos(t), lowering(layout, pair.pickup)},
                             {pair.theta.sin(t), lowering(layout, pair.carrier)}});
}

TimeDependentSystem reduce_mz(const TimeDependentSystem& mz, bool keep_reflected) {
  const InterferometerSetup& setup = require_setup(mz, "mz-delay");
  const int d = mz.layout.local_dim("mode_u");
  const auto& reg = setup.options.regularization;

  TimeDependentSystem out;
  out.metadata = mz.metadata;
  out.metadata.picture = "interaction";
  out.metadata.carrier_modes = {"mode_u"};

  if (!keep_reflected) {
    SpaceLayout layout({{"mode_u", d}, {"mode_b2", d}});
    if (setup.options.cap_excitations) layout = layout.with_excitation_cap(setup.photons);
    const auto ports = reduced_release_ports(layout, setup);
    out.layout = layout;
    out.hamiltonian = TimeDependentOperator(layout);
    out.channels = {{"t1", ports[0]}, {"t2", ports[1]}};
    out.metadata.scenario = "mz-reduced";
    return out;
  }

  SpaceLayout layout({{"mode_u", d}, {"mode_b1", d}, {"mode_b2", d}});
  if (setup.options.cap_excitations) layout = layout.with_excitation_cap(setup.photons);
  const Operator a_u = lowering(layout, "mode_u");
  const Operator b1 = lowering(layout, "mode_b1");
  const Operator b2 = lowering(layout, "mode_b2");
  const ThetaSchedule theta = theta_schedule(setup.input);
  const Coefficient u_csc = regularized_trig_factor(setup.input, TrigFactor::csc2theta, reg);
  const Coefficient g_in = conj(g_absorber(setup.input, reg).as_function());
  const Coefficient cos_t = [theta](double t) { return cplx(theta.cos(t)); };
  const Coefficient sin_t = [theta](double t) { return cplx(theta.sin(t)); };

  auto reflected = [&](double sign) {
    TimeDependentOperator op(layout);
    op.add(scaled(-2.0 * kInvSqrt2, u_csc), b1);
    op.add(scaled(sign * kInvSqrt2, g_in), b2);
    return op;
  };
  auto released = [&](const PulseShape& v, double sign) {
    const Coefficient g = scaled(kInvSqrt2, conj(g_source(v, reg).as_function()));
    TimeDependentOperator op(layout);
    op.add(times(g, cos_t), b1);
    op.add(times(g, sin_t), a_u);
    op.add(g, sign * b2);
    return op;
  };

  out.layout = layout;
  out.hamiltonian = TimeDependentOperator(layout);
  out.channels = {{"r1", reflected(1.0)},
                  {"r2", reflected(-1.0)},
                  {"t1", released(setup.long_release(), 1.0)},
                  {"t2", released(setup.short_release(), -1.0)}};
  out.metadata.scenario = "mz-interaction";
  return out;
}

TimeDependentSystem transform_output_analysis(const TimeDependentSystem& system) {
  const InterferometerSetup& setup = require_setup(system, "output-analysis");
  const PulseShape v[2] = {setup.long_release(), setup.short_release()};
  const auto& shapes = system.metadata.pickup_shapes;
  if (shapes.size() != 2 || !shapes[0].same_as(v[0]) || !shapes[1].same_as(v[1])) {
    throw UnsupportedConfiguration(
        "the interaction-picture transformation needs pickups matched to the released pulses (w_i = v_i)");
  }
  const auto& reg = setup.options.regularization;
  const SpaceLayout& layout = system.layout;
  const Operator sm = embed(sigma_minus(), layout, "atom");
  const Operator c[2] = {lowering(layout, "c1"), lowering(layout, "c2")};
  const Operator d[2] = {lowering(layout, "d1"), lowering(layout, "d2")};
  const double gamma = setup.options.atom_coupled ? setup.atom.gamma : 0.0;
  const double half_rate = std::sqrt(gamma / 2.0);

  TimeDependentSystem out;
  out.layout = layout;
  out.hamiltonian = TimeDependentOperator(layout);
  out.hamiltonian.add(setup.atom.detuning * (sm.adjoint() * sm));
  Coefficient csc[2];
  for (int i = 0; i < 2; ++i) {
    csc[i] = regularized_trig_factor(v[i], TrigFactor::csc2theta, reg);
    if (half_rate == 0.0) continue;
    const PulseShape pulse = v[i];
    const Coefficient cot = regularized_trig_factor(v[i], TrigFactor::cot2theta, reg);
    out.hamiltonian.add_with_hc([=](double t) { return kI * half_rate * std::conj(pulse(t)); },
                                c[i].adjoint() * sm);
    out.hamiltonian.add_with_hc(scaled(kI * half_rate, conj(cot)), d[i].adjoint() * sm);
  }

  const double s2 = std::numbers::sqrt2;
  TimeDependentOperator l1(layout), l2(layout);
  l1.add(scaled(-s2, csc[0]), d[0]);
  l1.add(scaled(-s2, csc[1]), d[1]);
  if (gamma > 0.0) l1.add(std::sqrt(gamma) * sm);
  l2.add(scaled(s2, csc[0]), d[0]);
  l2.add(scaled(-s2, csc[1]), d[1]);
  out.channels = {{"L1", std::move(l1)}, {"L2", std::move(l2)}};

  out.metadata = system.metadata;
  out.metadata.picture = "interaction";
  auto frame = std::make_shared<RotationFrame>();
  frame->pairs = {{"c1", "d1", theta_schedule(v[0])}, {"c2", "d2", theta_schedule(v[1])}};
  out.metadata.frame = frame;
  return out;
}

TimeDependentSystem window_truncate(const TimeDependentSystem& system, int photons, int window) {
  if (window < 2) throw TruncationError(fmt::format("photon-number window must be at least 2, got {}", window));
  if (photons < 0) throw TruncationError("photon number must be non-negative");
  if (system.metadata.carrier_modes.empty()) {
    throw UnsupportedConfiguration("window truncation needs carrier modes in the scenario metadata");
  }
  TimeDependentSystem out = system;
  out.metadata.window = WindowInfo{photons, window};
  if (window > photons) return out;

  const auto carriers = positions_of(system.layout, system.metadata.carrier_modes);
  const auto pickups = positions_of(system.layout, system.metadata.pickup_modes);
  const SpaceLayout target = system.layout.masked([&](const Occupation& occ) {
    return occupation_sum(occ, carriers) >= photons - window && occupation_sum(occ, pickups) <= window;
  });
  out = system.restricted_to(target);
  out.metadata.window = WindowInfo{photons, window};
  out.metadata.notes.push_back(fmt::format("photon-number window {} around n = {}: {} of {} states kept", window,
                                           photons, target.dimension(), system.layout.dimension()));
  return out;
}

Operator boundary_projector(const TimeDependentSystem& system) {
  const auto& info = system.metadata.window;
  if (!info || info->window > info->photons || info->photons - info->window <= 0) {
    return Operator::zero(system.layout);
  }
  const auto carriers = positions_of(system.layout, system.metadata.carrier_modes);
  const int edge = info->photons - info->window;
  return basis_projector(system.layout,
                         [&](const Occupation& occ) { return occupation_sum(occ, carriers) == edge; });
}

double constructive_port_intensity(const DensityMatrix& rho, const RotationFrame& frame, double t) {
  if (frame.pairs.size() != 2) throw UnsupportedConfiguration("constructive port needs two frame pairs");
  const Operator port = frame.pickup_image(rho.layout(), 0, t) + frame.pickup_image(rho.layout(), 1, t);
  return 0.5 * expectation(rho, port.adjoint() * port).real();
}

}  // namespace pulsenet
