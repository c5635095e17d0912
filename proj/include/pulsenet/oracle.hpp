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

// Time-bin collision model in the single-excitation sector.
//
// The propagating field of each channel is cut into bins of width dt; a bin
// holds amplitude a_k for "the photon is in bin k". The atom meets the bins of
// all channels at once, one time slot after the other. Within a slot the atom
// exchanges its excitation with the collective bin mode
// B = sum_j sqrt(gamma_j) a_j / sqrt(gamma) by an exact rotation through
// sqrt(gamma dt); the rotated bins leave as output. In the continuum limit
// this is de/dt = -(i Delta + gamma/2) e - sum_j sqrt(gamma_j) a_j(t).
//
// Everything here is deliberately independent of the virtual-cavity code.

#pragma once

#include <string>
#include <vector>

#include "pulsenet/system.hpp"

namespace pulsenet {

struct TimeBinField {
  double start = 0.0;  // left edge of bin 0
  double dt = 0.0;
  std::vector<cplx> amplitudes;
  std::vector<std::string> warnings;

  std::size_t size() const { return amplitudes.size(); }
  double bin_center(std::size_t k) const { return start + (static_cast<double>(k) + 0.5) * dt; }
  double end() const { return start + static_cast<double>(amplitudes.size()) * dt; }
  double norm() const;
  /// Piecewise-constant envelope a_k / sqrt(dt).
  cplx envelope(double t) const;
  /// Photon flux |a_k|^2 / dt of the bin containing t (0 outside).
  double flux(double t) const;
  TimeBinField scaled(cplx factor) const;
};

/// N bins across the support of u; amplitudes u(t_k) sqrt(dt) renormalized to
/// unit norm. Throws ConfigError for N < 50. A vacuum pulse gives a zero vector.
TimeBinField discretize(const PulseShape& u, int bins);

/// Bins on a given grid; normalized to the pulse energy inside the grid.
TimeBinField discretize_on(const PulseShape& u, double start, double dt, int bins);

/// Extend with vacuum bins on both sides.
TimeBinField pad(const TimeBinField& field, int before, int after);

/// Shift by whole bins on a fixed horizon; vacuum enters at the front.
/// Amplitude pushed past the horizon is dropped with a warning.
TimeBinField delay_bins(const TimeBinField& field, int shift);

struct OracleOptions {
  /// Largest gamma * (collision time); slots are subdivided to respect it.
  double max_collision_strength = 0.1;
  /// Atom excitation amplitude before the first slot.
  cplx initial_excitation = 0.0;
  /// Per-channel decay rates; empty means gamma split equally.
  std::vector<double> channel_rates;
};

struct ScatterResult {
  std::vector<double> times;       // slot edges
  std::vector<double> excitation;  // P_e at the slot edges
  std::vector<cplx> atom_amplitude;
  /// Scattered output amplitudes per channel, on the subdivided grid.
  std::vector<std::vector<cplx>> outputs;
  double output_dt = 0.0;
  int substeps = 1;
  /// | |e|^2 + sum |out|^2 - initial norm |, at the end of the run.
  double norm_defect = 0.0;

  double excitation_at(double t) const;  // linear interpolation
  /// Photon number sum_k |out_k|^2 emitted into a channel.
  double output_photons(std::size_t channel) const;
};

/// Scatter the fields (one per channel, all on the same grid) on a two-level atom.
/// Throws UnsupportedConfiguration when the input holds more than one excitation.
ScatterResult scatter_on_atom(const std::vector<TimeBinField>& fields, const AtomParams& atom,
                              const OracleOptions& options = {});

}  // namespace pulsenet
