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

// Cascaded-network assembly.
//
// Every scenario is put together from components connected in series: the
// output of channel j of the upstream component drives channel j of the
// downstream component. The combined coupling is L_j = L_up,j + L_down,j and
// the feed-forward Hamiltonian (i/2)(L_up,j^dag L_down,j - H.c.) removes any
// back-action of the downstream part on the upstream part.

#pragma once

#include <string>
#include <vector>

#include "pulsenet/system.hpp"

namespace pulsenet {

/// A network element: local Hamiltonian plus one coupling operator per port.
struct Component {
  std::string name;
  TimeDependentOperator hamiltonian;
  std::vector<TimeDependentOperator> ports;

  /// Passes everything through: no Hamiltonian, `ports` zero couplings.
  static Component identity(const SpaceLayout& layout, std::size_t ports);
  static Component from_system(const TimeDependentSystem& system);
};

/// Series composition; throws ChannelMismatch when port counts differ.
TimeDependentSystem series_product(const Component& upstream, const Component& downstream,
                                   std::vector<std::string> channel_names = {});

/// Output channels recombined on a static linear network: L'_i = sum_j m_ij L_j.
TimeDependentSystem mix_channels(const TimeDependentSystem& system,
                                 const std::vector<std::vector<cplx>>& mixing,
                                 std::vector<std::string> names);

// -- scenario builders --------------------------------------------------------

/// Source cavity (released into u) cascaded into an absorber cavity tuned to u.
/// Layout [source, absorber].
TimeDependentSystem build_source_absorber(const PulseShape& u, int photons, BuildOptions options = {});

/// Source cavity cascaded onto a two-level atom with one channel. Layout [atom, source].
TimeDependentSystem build_source_atom(const PulseShape& u, const AtomParams& atom, int photons = 1,
                                      BuildOptions options = {});

/// Source cavity releasing v into a delay cavity that absorbs v and re-emits
/// v(t - tau) through a second mirror, followed by an absorber tuned to
/// v(t - tau). Layout [source, delay, target]; channels "reflected", "output".
TimeDependentSystem build_delay_line(const PulseShape& v, double delay, int photons = 1,
                                     BuildOptions options = {});

/// Mach-Zehnder with unequal arms in the Schrodinger picture: three cavities
/// [mode_u, mode_v1, mode_v2], channels r1, r2 (reflected) and t1, t2 (released).
TimeDependentSystem build_mz_delay(const PulseShape& u, double delay, double capture_time, int photons = 1,
                                   BuildOptions options = {});

/// The two release channels g_out,v1^* c+ and g_out,v2^* c- of the reduced
/// interferometer, on any layout holding mode_u and mode_b2.
std::vector<TimeDependentOperator> reduced_release_ports(const SpaceLayout& layout,
                                                         const InterferometerSetup& setup);

/// Atom driven by the split and delayed pulse. Layout [atom, mode_u, mode_b2].
TimeDependentSystem build_ramsey_atom(const PulseShape& u, double delay, double capture_time,
                                      const AtomParams& atom, int photons, BuildOptions options = {});

/// The full Mach-Zehnder delay of build_mz_delay driving an atom through t1 and t2.
/// Layout [atom, mode_u, mode_v1, mode_v2]; channels r1, r2, L1, L2.
TimeDependentSystem build_mz_ramsey(const PulseShape& u, double delay, double capture_time,
                                    const AtomParams& atom, int photons, BuildOptions options = {});
/// Atom driven by two coherent pulses carrying n/2 mean photons each. Layout [atom].
TimeDependentSystem build_classical_ramsey(const AtomParams& atom, double photons, const PulseShape& v1,
                                           const PulseShape& v2);

/// Ramsey atom followed by pickup cavities d1, d2 (absorbing v1, v2) and a
/// recombining beam splitter. Layout [atom, c1, c2, d1, d2].
TimeDependentSystem build_output_analysis(const PulseShape& u, double delay, double capture_time,
                                          const AtomParams& atom, int photons, BuildOptions options = {});

/// Same network with pickups absorbing w1, w2 instead of v1, v2.
TimeDependentSystem build_output_analysis(const PulseShape& u, double delay, double capture_time,
                                          const AtomParams& atom, int photons, const PulseShape& w1,
                                          const PulseShape& w2, BuildOptions options = {});

/// <(d1^dag + d2^dag)(d1 + d2)> / 2 on a Schrodinger-picture output-analysis state.
double constructive_port_intensity(const DensityMatrix& rho);

/// Initial states: Fock |n> in the carrier mode(s) of each scenario.
DensityMatrix initial_state(const TimeDependentSystem& system);

}  // namespace pulsenet
