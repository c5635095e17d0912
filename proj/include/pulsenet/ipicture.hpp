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

// Interaction-picture reductions.
//
// A cavity pair (c, d) whose only mutual dynamics is the linear transfer of a
// pulse from c into d is described by a rotation angle theta(t) with
// sin^2 theta = E(t). Moving to the frame that follows this rotation removes
// the transfer from the Hamiltonian; what remains couples the atom to the
// rotated modes through u cot(2 theta) and u csc(2 theta) factors.

#pragma once

#include <string>
#include <vector>

#include "pulsenet/cascade.hpp"

namespace pulsenet {

struct FramePair {
  std::string carrier;  // mode that starts with the light
  std::string pickup;   // mode the light is transferred into
  ThetaSchedule theta;
};

/// Schrodinger-picture pickup d_i(t) corresponds to cos(theta_i) d_i + sin(theta_i) c_i here.
struct RotationFrame {
  std::vector<FramePair> pairs;

  /// The frame image of the Schrodinger pickup operator of pair i at time t.
  Operator pickup_image(const SpaceLayout& layout, std::size_t i, double t) const;
};

/// Mach-Zehnder delay in the interaction picture: H_I = 0, b1 dropped together
/// with the reflected channels, release channels on [mode_u, mode_b2].
/// keep_reflected = true keeps b1, r1 and r2 and the exact trigonometric factors.
TimeDependentSystem reduce_mz(const TimeDependentSystem& mz, bool keep_reflected = false);

/// Output-analysis network in the frame of the c_i -> d_i transfers.
/// Throws UnsupportedConfiguration when a pickup shape differs from its release shape.
TimeDependentSystem transform_output_analysis(const TimeDependentSystem& system);

/// Keep states with at least n - window photons in the carrier modes and at
/// most `window` in the pickup modes. window > n returns the system unchanged.
TimeDependentSystem window_truncate(const TimeDependentSystem& system, int photons, int window);

/// Projector onto the outermost kept carrier shell (n - window photons).
/// Zero when the system is not truncated.
Operator boundary_projector(const TimeDependentSystem& system);

/// Constructive-port intensity <(D1^dag + D2^dag)(D1 + D2)>/2 of an
/// interaction-picture state at time t, D_i being the frame images of d_i.
double constructive_port_intensity(const DensityMatrix& rho, const RotationFrame& frame, double t);

}  // namespace pulsenet
