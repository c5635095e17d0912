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

// Experiment configuration: a flat INI file.
//
//   [experiment]  scenario, seed
//   [physics]     gamma, photons, tau, t_w (number or "auto"), capture_margin,
//                 atom_coupled
//   [scan]        delta_min, delta_max, delta_points
//   [truncation]  window (0 = full basis), cap_excitations
//   [integrator]  method (rk4 | dopri45), step, max_step, abs_tol, rel_tol,
//                 renormalize, symmetrize, record_stride, trace_tolerance
//   [delay]       delay_supports (tau of the delay demo, in support lengths)
//   [oracle]      case (source-atom | ramsey), bins, tolerance, detuning
//
// Times and rates may be given in any unit; gamma sets the scale and every
// quantity is converted to units of 1/gamma before use.

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "pulsenet/mesolve.hpp"

namespace pulsenet {

struct ExperimentConfig {
  std::string scenario;  // ramsey | output-analysis | delay-demo | oracle-compare
  std::uint64_t seed = 0;  // reserved; every scenario is deterministic

  double gamma = 1.0;
  int photons = 9;
  double tau = 0.5;
  std::optional<double> pulse_width;  // empty: pi^(3/2) / (8 gamma n)
  double capture_margin = 0.5;        // T = support end + margin * t_w
  bool atom_coupled = true;

  double delta_min = -4.0;
  double delta_max = 4.0;
  int delta_points = 81;

  int window = 0;
  bool cap_excitations = true;

  IntegratorConfig integrator{};

  double delay_supports = 3.0;

  std::string oracle_case = "source-atom";
  int oracle_bins = 200;
  double oracle_tolerance = 0.01;
  double oracle_detuning = 0.0;

  /// Defaults of each subcommand.
  static ExperimentConfig defaults(const std::string& scenario);
  static ExperimentConfig parse(std::string_view text);
  static ExperimentConfig load(const std::string& path);
  std::string serialize() const;
  /// Throws ConfigError naming the offending field.
  void validate() const;

  // Values in units of 1/gamma.
  double width() const;
  double delay() const { return tau * gamma; }
  std::vector<double> detunings() const;
  IntegratorConfig normalized_integrator() const;

  bool operator==(const ExperimentConfig&) const = default;
};

}  // namespace pulsenet
