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

#include "pulsenet/pulses.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "pulsenet/errors.hpp"

namespace pulsenet {

struct PulseShape::Data {
  std::function<cplx(double)> raw;  // unnormalized envelope
  double scale = 0.0;               // 1 / sqrt(raw energy)
  double t_start = 0.0;
  double t_end = 0.0;
  double h = 0.0;
  std::vector<double> before;  // E at grid nodes
  std::vector<double> after;   // 1 - E at grid nodes
  double max_abs = 0.0;
  double peak = std::numeric_limits<double>::quiet_NaN();
  double width = std::numeric_limits<double>::quiet_NaN();
  bool vacuum = true;
};

namespace {

std::shared_ptr<PulseShape::Data> tabulate(std::shared_ptr<PulseShape::Data> d, int intervals) {
  if (intervals < 2) throw InvalidDimension("pulse grid needs at least 2 intervals");
  if (intervals % 2) ++intervals;
  if (!(d->t_end > d->t_start)) throw InvalidDimension("pulse support must have positive length");
  const int n = intervals;
  d->h = (d->t_end - d->t_start) / n;
  std::vector<double> f(n + 1);
  double max_abs = 0.0;
  for (int i = 0; i <= n; ++i) {
    const cplx u = d->raw(d->t_start + i * d->h);
    f[i] = std::norm(u);
    max_abs = std::max(max_abs, std::abs(u));
  }
  // Cumulative Simpson: full panels at even nodes, the quadratic partial rule
  // h/12 (5 f0 + 8 f1 - f2) at odd nodes. The tail table mirrors it from the end.
  std::vector<double> c(n + 1, 0.0), r(n + 1, 0.0);
  const double h = d->h;
  for (int k = 0; k + 2 <= n; k += 2) {
    c[k + 1] = c[k] + h / 12.0 * (5 * f[k] + 8 * f[k + 1] - f[k + 2]);
    c[k + 2] = c[k] + h / 3.0 * (f[k] + 4 * f[k + 1] + f[k + 2]);
  }
  for (int k = n; k - 2 >= 0; k -= 2) {
    r[k - 1] = r[k] + h / 12.0 * (5 * f[k] + 8 * f[k - 1] - f[k - 2]);
    r[k - 2] = r[k] + h / 3.0 * (f[k] + 4 * f[k - 1] + f[k - 2]);
  }
  const double total = c[n];
  d->vacuum = !(total > 0.0);
  d->before.assign(n + 1, 0.0);
  d->after.assign(n + 1, 1.0);
  if (!d->vacuum) {
    d->scale = 1.0 / std::sqrt(total);
    d->max_abs = max_abs * d->scale;
    double run = 0.0;
    for (int i = 0; i <= n; ++i) {
      run = std::clamp(std::max(run, c[i] / total), 0.0, 1.0);
      d->before[i] = run;
    }
    const double rtotal = r[0];
    run = 0.0;
    for (int i = n; i >= 0; --i) {
      run = std::clamp(std::max(run, r[i] / rtotal), 0.0, 1.0);
      d->after[i] = run;
    }
    d->before[n] = 1.0;
    d->after[0] = 1.0;
  }
  return d;
}

double interpolate(const std::vector<double>& table, double t0, double h, double t) {
  const double x = (t - t0) / h;
  const auto last = static_cast<double>(table.size() - 1);
  if (x <= 0.0) return table.front();
  if (x >= last) return table.back();
  const auto i = static_cast<std::size_t>(x);
  const double w = x - static_cast<double>(i);
  return (1.0 - w) * table[i] + w * table[i + 1];
}

}  // namespace

PulseShape PulseShape::gaussian(double peak_time, double width, int grid_intervals) {
  if (!(width > 0.0)) throw InvalidDimension(fmt::format("Gaussian width must be positive, got {}", width));
  auto d = std::make_shared<Data>();
  const double norm = 1.0 / std::sqrt(width * std::sqrt(std::numbers::pi));
  d->raw = [=](double t) {
    const double x = (t - peak_time) / width;
    return cplx(norm * std::exp(-0.5 * x * x), 0.0);
  };
  d->t_start = peak_time - 5.0 * width;
  d->t_end = peak_time + 5.0 * width;
  d->peak = peak_time;
  d->width = width;
  return PulseShape(tabulate(std::move(d), grid_intervals), 0.0);
}

PulseShape PulseShape::from_envelope(std::function<cplx(double)> envelope, double t_start, double t_end,
                                     int grid_intervals) {
  auto d = std::make_shared<Data>();
  d->raw = std::move(envelope);
  d->t_start = t_start;
  d->t_end = t_end;
  return PulseShape(tabulate(std::move(d), grid_intervals), 0.0);
}

PulseShape PulseShape::vacuum() {
  static const std::shared_ptr<const Data> empty = [] {
    auto d = std::make_shared<Data>();
    d->raw = [](double) { return cplx(0.0); };
    d->t_start = 0.0;
    d->t_end = 1.0;
    return tabulate(std::move(d), 2);
  }();
  return PulseShape(empty, 0.0);
}

cplx PulseShape::operator()(double t) const {
  const double s = t - offset_;
  if (data_->vacuum || s < data_->t_start || s > data_->t_end) return 0.0;
  return data_->scale * data_->raw(s);
}

double PulseShape::energy(double t) const {
  if (data_->vacuum) return 0.0;
  return interpolate(data_->before, data_->t_start, data_->h, t - offset_);
}

double PulseShape::remaining(double t) const {
  if (data_->vacuum) return 1.0;
  return interpolate(data_->after, data_->t_start, data_->h, t - offset_);
}

PulseShape PulseShape::delayed(double tau) const { return PulseShape(data_, offset_ + tau); }

double PulseShape::support_start() const { return data_->t_start + offset_; }
double PulseShape::support_end() const { return data_->t_end + offset_; }
double PulseShape::peak_time() const { return data_->peak + offset_; }
double PulseShape::width() const { return data_->width; }
double PulseShape::max_abs() const { return data_->max_abs; }
bool PulseShape::is_vacuum() const { return data_->vacuum; }
bool PulseShape::same_as(const PulseShape& other) const {
  return data_ == other.data_ && offset_ == other.offset_;
}

std::vector<double> PulseShape::grid() const {
  std::vector<double> g(data_->before.size());
  for (std::size_t i = 0; i < g.size(); ++i) g[i] = data_->t_start + offset_ + i * data_->h;
  return g;
}

// -- couplings ----------------------------------------------------------------

CouplingSchedule::CouplingSchedule(CouplingKind kind, PulseShape emitted, PulseShape absorbed,
                                   Regularization reg, bool transparent)
    : kind_(kind), emitted_(std::move(emitted)), absorbed_(std::move(absorbed)), reg_(reg),
      transparent_(transparent) {}

double CouplingSchedule::denominator(double t) const {
  double stored = 0.0;
  switch (kind_) {
    case CouplingKind::source:
      stored = emitted_.remaining(t);
      break;
    case CouplingKind::absorber:
      stored = absorbed_.energy(t);
      break;
    case CouplingKind::simultaneous_out:
    case CouplingKind::simultaneous_in: {
      // Ev - Eu, evaluated from whichever tables keep relative precision.
      const double ev = absorbed_.energy(t);
      const double eu = emitted_.energy(t);
      stored = (ev + eu < 1.0) ? ev - eu : emitted_.remaining(t) - absorbed_.remaining(t);
      break;
    }
  }
  return std::max(std::sqrt(std::max(stored, 0.0)), reg_.floor);
}

cplx CouplingSchedule::operator()(double t) const {
  if (transparent_) return 0.0;
  const bool emits = kind_ == CouplingKind::source || kind_ == CouplingKind::simultaneous_out;
  const PulseShape& shape = emits ? emitted_ : absorbed_;
  const cplx value = shape(t);
  if (std::abs(value) < reg_.zero_threshold * shape.max_abs() || value == 0.0) return 0.0;
  const cplx numerator = emits ? std::conj(value) : -std::conj(value);
  return numerator / denominator(t);
}

std::function<cplx(double)> CouplingSchedule::as_function() const {
  return [self = *this](double t) { return self(t); };
}

CouplingSchedule g_source(const PulseShape& u, Regularization reg) {
  return CouplingSchedule(CouplingKind::source, u, PulseShape::vacuum(), reg);
}

CouplingSchedule g_absorber(const PulseShape& u, Regularization reg) {
  return CouplingSchedule(CouplingKind::absorber, PulseShape::vacuum(), u, reg);
}

std::pair<CouplingSchedule, CouplingSchedule> g_simultaneous(const PulseShape& v, const PulseShape& u,
                                                             Regularization reg) {
  // Check Eu <= Ev on the union of both tables, and detect a denominator that never opens up.
  std::vector<double> times = v.grid();
  const auto ug = u.grid();
  times.insert(times.end(), ug.begin(), ug.end());
  std::sort(times.begin(), times.end());
  constexpr double kSlack = 1e-12;
  double widest = 0.0;
  for (double t : times) {
    const double gap = v.energy(t) - u.energy(t);
    if (gap < -kSlack) {
      throw CausalityViolation(
          fmt::format("emitted energy exceeds absorbed energy at t = {:.17g} (deficit {:.3g})", t, -gap), t);
    }
    widest = std::max(widest, gap);
  }
  const bool transparent = widest <= reg.floor * reg.floor;
  return {CouplingSchedule(CouplingKind::simultaneous_out, u, v, reg, transparent),
          CouplingSchedule(CouplingKind::simultaneous_in, u, v, reg, transparent)};
}

// -- rotation angles ----------------------------------------------------------

double ThetaSchedule::operator()(double t) const {
  return std::atan2(std::sqrt(u_.energy(t)), std::sqrt(u_.remaining(t)));
}
double ThetaSchedule::sin(double t) const { return std::sin((*this)(t)); }
double ThetaSchedule::cos(double t) const { return std::cos((*this)(t)); }

ThetaSchedule theta_schedule(const PulseShape& u) { return ThetaSchedule(u); }

std::function<cplx(double)> regularized_trig_factor(const PulseShape& u, TrigFactor kind, Regularization reg) {
  return [u, kind, reg](double t) -> cplx {
    const cplx value = u(t);
    if (std::abs(value) < reg.zero_threshold * u.max_abs() || value == 0.0) return 0.0;
    const double e = u.energy(t);
    const double r = u.remaining(t);
    // sin 2theta = 2 sqrt(E (1-E)), cos 2theta = (1-E) - E
    const double sin2 = std::max(2.0 * std::sqrt(std::max(e * r, 0.0)), reg.floor);
    if (kind == TrigFactor::csc2theta) return value / sin2;
    return value * (r - e) / sin2;
  };
}

}  // namespace pulsenet
