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

#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pulsenet/pulses.hpp"
#include "pulsenet/timeop.hpp"

namespace pulsenet {

struct AtomParams {
  double gamma = 1.0;     // total decay rate
  double detuning = 0.0;  // Delta

  void validate() const;
};

struct BuildOptions {
  /// Local Fock dimension of every mode; 0 selects n + 1.
  int mode_dim = 0;
  /// Restrict the basis to at most n excitations (exact for all builders here).
  bool cap_excitations = true;
  /// false removes the atom-light coupling, leaving the linear network.
  bool atom_coupled = true;
  Regularization regularization{};
};

/// Source pulse u split on a beam splitter; both halves are captured and then
/// released as v2(t) = u(t - T) (short path) and v1(t) = u(t - tau - T) (long path).
struct InterferometerSetup {
  PulseShape input;
  double delay = 0.0;         // tau
  double capture_time = 0.0;  // T
  int photons = 1;            // n
  AtomParams atom{};
  BuildOptions options{};

  PulseShape long_release() const { return input.delayed(delay + capture_time); }   // v1
  PulseShape short_release() const { return input.delayed(capture_time); }          // v2
};

/// Clock of the Ramsey sequence.
struct RamseyTimeline {
  double release_start = 0.0;  // first release coupling turns on
  double first_peak = 0.0;     // peak of v2
  double second_peak = 0.0;    // peak of v1
  double readout = 0.0;        // t1 = first_peak + tau + 2 t_w
  double final_time = 0.0;     // both releases (and pickups) complete
};

RamseyTimeline ramsey_timeline(const InterferometerSetup& setup);

/// Capture time used when none is given: pulse support end plus half a width.
double default_capture_time(const PulseShape& u);

struct RotationFrame;

struct WindowInfo {
  int photons = 0;
  int window = 0;
};

struct ScenarioMetadata {
  std::string scenario;
  std::string picture = "schrodinger";
  std::map<std::string, double> parameters;
  std::vector<std::string> carrier_modes;  // modes initially holding the photons
  std::vector<std::string> pickup_modes;   // modes that collect scattered light
  std::vector<PulseShape> pickup_shapes;   // shapes the pickup cavities absorb, one per pickup
  std::optional<InterferometerSetup> interferometer;
  std::shared_ptr<const RotationFrame> frame;
  std::optional<WindowInfo> window;
  std::vector<std::string> notes;
};

struct Channel {
  std::string name;
  TimeDependentOperator op;
};

/// H(t) and the dissipators L_i(t) of one network scenario.
struct TimeDependentSystem {
  SpaceLayout layout;
  TimeDependentOperator hamiltonian;
  std::vector<Channel> channels;
  ScenarioMetadata metadata;

  Operator hamiltonian_at(double t) const { return hamiltonian.at(t); }
  Operator channel_at(std::size_t i, double t) const { return channels.at(i).op.at(t); }
  const Channel& channel(const std::string& name) const;

  /// Same scenario on a masked sub-basis of the layout.
  TimeDependentSystem restricted_to(const SpaceLayout& target) const;
};

}  // namespace pulsenet
