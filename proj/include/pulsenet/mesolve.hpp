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

// Lindblad master-equation integration.
//
//   d rho/dt = -i[H(t), rho] + sum_i L_i rho L_i^dag - {L_i^dag L_i, rho}/2
//
// The right-hand side is applied in matrix form: X = -i H_eff rho with
// H_eff = H - (i/2) sum L^dag L, then d rho = X + X^dag + sum L rho L^dag.
// The integrated output fluxes are carried along as extra state components,
// so they are accurate to the order of the stepper.
//
// The state is stored as dense diagonal blocks. Blocks are the finest
// partition of the basis such that H_eff and rho0 never couple two blocks and
// each L_i maps a block into a single block; for the networks built here this
// is the total-excitation grading. Without such structure everything is one
// block.

#pragma once

#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "pulsenet/system.hpp"

namespace pulsenet {

enum class Method { rk4, dopri45 };

struct IntegratorConfig {
  Method method = Method::rk4;
  /// Fixed RK4 step, or the initial step of the adaptive method. 0 selects
  /// t_w/200 when the scenario has a pulse width, span/2000 otherwise.
  double step = 0.0;
  double max_step = 0.0;  // adaptive only; 0 means unlimited
  double abs_tol = 1e-10;
  double rel_tol = 1e-8;
  /// Divide by the trace after every step (logged in the diagnostics).
  bool renormalize = false;
  /// Replace rho by (rho + rho^dag)/2 when the Hermiticity defect exceeds 1e-12.
  bool symmetrize = true;
  /// Record observables every `record_stride` accepted steps (checkpoints always).
  int record_stride = 1;
  /// Number of times the smallest eigenvalue is sampled.
  int positivity_samples = 10;
  /// Trace drift that raises AccuracyError; <= 0 disables the check.
  double trace_tolerance = 1e-6;

  void validate() const;
  bool operator==(const IntegratorConfig&) const = default;
};

struct TimeSpan {
  double start = 0.0;
  double end = 0.0;
  /// Times that are hit exactly and always recorded.
  std::vector<double> checkpoints;
};

struct Observable {
  std::string name;
  TimeDependentOperator op;
};

struct Diagnostics {
  double max_trace_drift = 0.0;
  double max_hermiticity_defect = 0.0;
  double min_eigenvalue = 0.0;
  int symmetrizations = 0;
  int renormalizations = 0;
  double max_renormalization = 0.0;
  long accepted_steps = 0;
  long rejected_steps = 0;
  std::size_t blocks = 1;
  std::size_t largest_block = 0;
  std::vector<std::string> log;
};

struct TrajectoryResult {
  std::vector<double> times;
  std::map<std::string, std::vector<cplx>> tracks;
  std::vector<std::string> channel_names;
  /// Cumulative integral of <L_i^dag L_i> per channel at each recorded time.
  std::vector<std::vector<double>> cumulative_flux;
  std::vector<double> trace_drift;
  DensityMatrix final_state;
  Diagnostics diagnostics;

  /// Real part of a track at a recorded time (exact match) or linearly interpolated.
  double value_at(const std::string& name, double t) const;
  const std::vector<cplx>& track(const std::string& name) const;
  /// Total integrated flux of a channel.
  double total_flux(const std::string& channel) const;
  double total_flux() const;
};

TrajectoryResult integrate(const TimeDependentSystem& system, const DensityMatrix& rho0, const TimeSpan& span,
                           const std::vector<Observable>& observables = {}, IntegratorConfig config = {});

/// Tr(rho L^dag L).
double flux(const DensityMatrix& rho, const Operator& l);

struct ScanProblem {
  std::function<TimeDependentSystem(double)> system;
  std::function<DensityMatrix(const TimeDependentSystem&)> initial_state;
  std::function<TimeSpan(const TimeDependentSystem&)> span;
  std::function<std::vector<Observable>(const TimeDependentSystem&)> observables;
  /// Reduces a trajectory to named numbers; optional.
  std::function<std::map<std::string, double>(const TimeDependentSystem&, const TrajectoryResult&)> summarize;
};

struct ScanRow {
  std::size_t index = 0;
  double parameter = 0.0;
  bool ok = false;
  std::string error;
  std::map<std::string, double> summary;
  std::optional<TrajectoryResult> trajectory;
};

/// Independent runs over the grid on `workers` threads; rows are ordered by grid index.
/// A failing point is flagged (ok = false, error set) and the scan continues.
std::vector<ScanRow> scan(const std::vector<double>& grid, const ScanProblem& problem, IntegratorConfig config,
                          unsigned workers = 0, bool keep_trajectories = false);

}  // namespace pulsenet
