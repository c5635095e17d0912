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

// Pulse envelopes and the virtual-cavity coupling schedules built from them.
//
// Envelopes u(t) carry units of time^(-1/2) and are normalized to unit energy
// over their support window. The cumulative energy E(t) and the remaining
// energy 1 - E(t) are tabulated once by composite Simpson quadrature (forward
// and backward respectively, so both tails keep full relative precision) and
// interpolated linearly.

#pragma once

#include <complex>
#include <functional>
#include <limits>
#include <memory>
#include <utility>
#include <vector>

namespace pulsenet {

using cplx = std::complex<double>;

struct Regularization {
  /// Lower clamp for the denominators sqrt(1-E), sqrt(E), sqrt(Ev-Eu), sin(2 theta).
  double floor = 1e-6;
  /// Couplings vanish where |u(t)| < zero_threshold * max|u|.
  double zero_threshold = 1e-9;
};

inline constexpr int kDefaultPulseGrid = 20000;

class PulseShape {
 public:
  /// Gaussian exp(-(t-tp)^2 / 2 tw^2) / sqrt(tw sqrt(pi)), truncated to tp +- 5 tw
  /// and renormalized.
  static PulseShape gaussian(double peak_time, double width, int grid_intervals = kDefaultPulseGrid);
  /// Arbitrary envelope on [t_start, t_end]; normalized to unit energy unless it vanishes.
  static PulseShape from_envelope(std::function<cplx(double)> envelope, double t_start, double t_end,
                                  int grid_intervals = kDefaultPulseGrid);
  /// The empty pulse, u = 0 everywhere.
  static PulseShape vacuum();

  PulseShape() : PulseShape(vacuum()) {}

  cplx operator()(double t) const;
  /// E(t) = integral of |u|^2 from the support start to t.
  double energy(double t) const;
  /// 1 - E(t), tabulated from the end of the support.
  double remaining(double t) const;

  PulseShape delayed(double tau) const;

  double support_start() const;
  double support_end() const;
  double support_length() const { return support_end() - support_start(); }
  /// Peak time and width of a Gaussian pulse (NaN for other envelopes).
  double peak_time() const;
  double width() const;
  double max_abs() const;
  bool is_vacuum() const;
  /// Same tabulated shape and same delay.
  bool same_as(const PulseShape& other) const;
  /// Nodes of the energy table on the simulation clock.
  std::vector<double> grid() const;

  struct Data;  // tabulated shape, opaque

 private:
  PulseShape(std::shared_ptr<const Data> data, double offset) : data_(std::move(data)), offset_(offset) {}

  std::shared_ptr<const Data> data_;
  double offset_ = 0.0;
};

enum class CouplingKind { source, absorber, simultaneous_out, simultaneous_in };

/// Time-dependent cavity coupling g(t) (units time^(-1/2)).
class CouplingSchedule {
 public:
  CouplingSchedule(CouplingKind kind, PulseShape emitted, PulseShape absorbed, Regularization reg,
                   bool transparent = false);

  cplx operator()(double t) const;
  std::function<cplx(double)> as_function() const;

  CouplingKind kind() const { return kind_; }
  const Regularization& regularization() const { return reg_; }
  /// Zero-delay convention for the simultaneous pair: no cavity, the input passes straight through.
  bool transparent() const { return transparent_; }

 private:
  double denominator(double t) const;

  CouplingKind kind_;
  PulseShape emitted_;   // u: shape leaving the cavity
  PulseShape absorbed_;  // v: shape entering the cavity
  Regularization reg_;
  bool transparent_;
};

/// g(t) = u*(t) / sqrt(1 - E(t)): releases a cavity mode into the pulse u.
CouplingSchedule g_source(const PulseShape& u, Regularization reg = {});
/// g(t) = -u*(t) / sqrt(E(t)): captures the pulse u into a cavity mode.
CouplingSchedule g_absorber(const PulseShape& u, Regularization reg = {});

/// Couplings of one cavity absorbing v through its input mirror while emitting u
/// through its output mirror. Returns (out, in). Throws CausalityViolation if the
/// emitted energy ever exceeds the absorbed energy. When the two energies never
/// separate (zero delay) both schedules are marked transparent and evaluate to 0.
std::pair<CouplingSchedule, CouplingSchedule> g_simultaneous(const PulseShape& v, const PulseShape& u,
                                                             Regularization reg = {});

/// theta(t) with sin^2 theta = E(t).
class ThetaSchedule {
 public:
  explicit ThetaSchedule(PulseShape u) : u_(std::move(u)) {}
  double operator()(double t) const;
  double sin(double t) const;
  double cos(double t) const;
  const PulseShape& pulse() const { return u_; }

 private:
  PulseShape u_;
};

ThetaSchedule theta_schedule(const PulseShape& u);

enum class TrigFactor { csc2theta, cot2theta };

/// u(t) csc(2 theta(t)) or u(t) cot(2 theta(t)) with sin(2 theta) clamped below at reg.floor.
std::function<cplx(double)> regularized_trig_factor(const PulseShape& u, TrigFactor kind,
                                                    Regularization reg = {});

}  // namespace pulsenet
