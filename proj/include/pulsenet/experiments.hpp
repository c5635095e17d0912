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

// Experiment drivers behind the command-line tool, plus the curve analysis
// used to judge Ramsey fringes.

#pragma once

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "pulsenet/config.hpp"
#include "pulsenet/csv.hpp"
#include "pulsenet/ipicture.hpp"
#include "pulsenet/mesolve.hpp"
#include "pulsenet/oracle.hpp"

namespace pulsenet {

std::string version_string();

/// Gaussian input pulse, capture time and atom of a config at one detuning (units of 1/gamma).
InterferometerSetup interferometer_setup(const ExperimentConfig& config, double detuning);

/// sigma+ sigma- on a layout holding an "atom" subsystem.
Observable excited_population(const SpaceLayout& layout);

/// P_e(t1) of the quantum Ramsey sequence (atom driven by the split Fock pulse).
double ramsey_population(const InterferometerSetup& setup, const IntegratorConfig& config,
                         TrajectoryResult* trajectory = nullptr);

/// P_e(t1) for two coherent pulses carrying n/2 photons each.
double classical_ramsey_population(const InterferometerSetup& setup, const IntegratorConfig& config,
                                   TrajectoryResult* trajectory = nullptr);

struct IntensityPoint {
  double intensity = 0.0;       // constructive port, final state
  double population_t1 = 0.0;   // P_e(t1)
  double boundary_leak = 0.0;   // largest population on the window boundary
  std::size_t dimension = 0;
  Diagnostics diagnostics;
};

/// Output-analysis run. interaction = false integrates the Schrodinger-picture network
/// (window must then be 0).
IntensityPoint intensity_point(const InterferometerSetup& setup, int window, const IntegratorConfig& config,
                               bool interaction = true);

// -- curve analysis -----------------------------------------------------------

/// Interior local extrema (sign changes of the discrete slope; flat steps ignored).
int count_interior_extrema(const std::vector<double>& y);
/// Positions of interior local maxima, refined by a parabola through three points.
std::vector<double> local_maxima(const std::vector<double>& x, const std::vector<double>& y);
/// Mean distance between neighbouring maxima (minima if fewer than two maxima); NaN if undefined.
double fringe_spacing(const std::vector<double>& x, const std::vector<double>& y);
/// Pearson correlation of two equally long curves.
double normalized_cross_correlation(const std::vector<double>& a, const std::vector<double>& b);
/// max_i |y(x_i) - y(-x_i)| for a grid symmetric about 0.
double mirror_asymmetry(const std::vector<double>& x, const std::vector<double>& y);

// -- subcommands ----------------------------------------------------------------

struct RunOptions {
  unsigned workers = 0;  // 0: all available cores
  bool dump_trajectories = false;
};

struct ExperimentOutput {
  std::string command;
  CsvTable table;
  std::map<std::string, double> summary;
  bool passed = true;  // acceptance threshold (compare mode)
  std::size_t failed_points = 0;
  std::vector<std::pair<std::string, CsvTable>> trajectories;
};

ExperimentOutput run_ramsey_scan(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentOutput run_intensity_scan(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentOutput run_delay_demo(const ExperimentConfig& config, const RunOptions& options = {});
ExperimentOutput run_oracle_compare(const ExperimentConfig& config, const RunOptions& options = {});

/// gnuplot script plotting the CSV written for `output`.
std::string gnuplot_script(const ExperimentOutput& output, const std::string& csv_path);

}  // namespace pulsenet
