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

#include "pulsenet/oracle.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numeric>

#include "pulsenet/errors.hpp"

namespace pulsenet {

double TimeBinField::norm() const {
  double s = 0.0;
  for (const auto& a : amplitudes) s += std::norm(a);
  return std::sqrt(s);
}

cplx TimeBinField::envelope(double t) const {
  if (amplitudes.empty() || t < start || t >= end()) return 0.0;
  const auto k = std::min(static_cast<std::size_t>((t - start) / dt), amplitudes.size() - 1);
  return amplitudes[k] / std::sqrt(dt);
}

double TimeBinField::flux(double t) const { return std::norm(envelope(t)); }

TimeBinField TimeBinField::scaled(cplx factor) const {
  TimeBinField out = *this;
  for (auto& a : out.amplitudes) a *= factor;
  return out;
}

TimeBinField discretize(const PulseShape& u, int bins) {
  if (bins < 50) throw ConfigError(fmt::format("time-bin oracle needs at least 50 bins, got {}", bins));
  if (u.is_vacuum()) {
    TimeBinField f;
    f.dt = 1.0 / bins;
    f.amplitudes.assign(bins, 0.0);
    return f;
  }
  const double dt = u.support_length() / bins;
  TimeBinField f = discretize_on(u, u.support_start(), dt, bins);
  const double n = f.norm();
  if (n > 0.0) f = f.scaled(1.0 / n);
  return f;
}

TimeBinField discretize_on(const PulseShape& u, double start, double dt, int bins) {
  if (!(dt > 0.0) || bins < 1) throw ConfigError("time-bin grid needs dt > 0 and at least one bin");
  TimeBinField f;
  f.start = start;
  f.dt = dt;
  f.amplitudes.resize(bins);
  for (int k = 0; k < bins; ++k) f.amplitudes[k] = u(f.bin_center(k)) * std::sqrt(dt);
  const double n = f.norm();
  if (n > 0.0 && !u.is_vacuum()) {
    const double inside = u.energy(f.end()) - u.energy(start);
    f = f.scaled(std::sqrt(std::max(inside, 0.0)) / n);
  }
  return f;
}

TimeBinField pad(const TimeBinField& field, int before, int after) {
  if (before < 0 || after < 0) throw ConfigError("padding must be non-negative");
  TimeBinField out = field;
  out.start -= before * field.dt;
  out.amplitudes.assign(before, 0.0);
  out.amplitudes.insert(out.amplitudes.end(), field.amplitudes.begin(), field.amplitudes.end());
  out.amplitudes.insert(out.amplitudes.end(), after, 0.0);
  return out;
}

TimeBinField delay_bins(const TimeBinField& field, int shift) {
  if (shift < 0) throw CausalityViolation("bin shift must be non-negative", field.start);
  TimeBinField out = field;
  const auto n = static_cast<std::ptrdiff_t>(field.size());
  double dropped = 0.0;
  for (std::ptrdiff_t k = n - 1; k >= 0; --k) {
    const std::ptrdiff_t from = k - shift;
    out.amplitudes[k] = from >= 0 ? field.amplitudes[from] : cplx(0.0);
  }
  for (std::ptrdiff_t k = std::max<std::ptrdiff_t>(n - shift, 0); k < n; ++k) dropped += std::norm(field.amplitudes[k]);
  if (dropped > 0.0) {
    out.warnings.push_back(
        fmt::format("delay of {} bins pushed {:.3g} of the norm past the horizon", shift, dropped));
  }
  return out;
}

double ScatterResult::excitation_at(double t) const {
  if (times.empty()) return 0.0;
  if (t <= times.front()) return excitation.front();
  if (t >= times.back()) return excitation.back();
  const double dt = times[1] - times[0];
  const auto k = std::min(static_cast<std::size_t>((t - times.front()) / dt), times.size() - 2);
  const double w = (t - times[k]) / (times[k + 1] - times[k]);
  return (1.0 - w) * excitation[k] + w * excitation[k + 1];
}

double ScatterResult::output_photons(std::size_t channel) const {
  double s = 0.0;
  for (const auto& a : outputs.at(channel)) s += std::norm(a);
  return s;
}

ScatterResult scatter_on_atom(const std::vector<TimeBinField>& fields, const AtomParams& atom,
                              const OracleOptions& options) {
  atom.validate();
  if (fields.empty()) throw ChannelMismatch("scatter_on_atom needs at least one channel");
  const std::size_t channels = fields.size();
  const std::size_t bins = fields[0].size();
  const double dt = fields[0].dt;
  for (const auto& f : fields) {
    if (f.size() != bins || std::abs(f.dt - dt) > 1e-15 * dt || std::abs(f.start - fields[0].start) > 1e-12) {
      throw ChannelMismatch("all channels must share one time-bin grid");
    }
  }
  std::vector<double> rates = options.channel_rates;
  if (rates.empty()) rates.assign(channels, atom.gamma / static_cast<double>(channels));
  if (rates.size() != channels) throw ChannelMismatch("one decay rate per channel is required");
  const double gamma = std::accumulate(rates.begin(), rates.end(), 0.0);

  double initial = std::norm(options.initial_excitation);
  for (const auto& f : fields) initial += f.norm() * f.norm();
  if (initial > 1.0 + 1e-9) {
    throw UnsupportedConfiguration(
        fmt::format("time-bin oracle is limited to one excitation; input norm is {:.6g}", initial));
  }

  ScatterResult out;
  out.substeps = std::max(1, static_cast<int>(std::ceil(gamma * dt / options.max_collision_strength - 1e-12)));
  const int m = out.substeps;
  const double sub = dt / m;
  out.output_dt = sub;
  out.outputs.assign(channels, std::vector<cplx>(bins * m));
  const double angle = std::sqrt(gamma * sub);
  const double c = std::cos(angle), s = std::sin(angle);
  const cplx phase = std::exp(cplx(0.0, -atom.detuning * sub));
  std::vector<double> weight(channels);  // sqrt(gamma_j / gamma)
  for (std::size_t j = 0; j < channels; ++j) weight[j] = gamma > 0.0 ? std::sqrt(rates[j] / gamma) : 0.0;

  cplx e = options.initial_excitation;
  out.times.push_back(fields[0].start);
  out.excitation.push_back(std::norm(e));
  out.atom_amplitude.push_back(e);
  std::vector<cplx> a(channels);
  const double split = 1.0 / std::sqrt(static_cast<double>(m));
  for (std::size_t k = 0; k < bins; ++k) {
    for (int q = 0; q < m; ++q) {
      cplx b = 0.0;
      for (std::size_t j = 0; j < channels; ++j) {
        a[j] = fields[j].amplitudes[k] * split;
        b += weight[j] * a[j];
      }
      // Rotate (e, B) and leave the orthogonal bin modes untouched.
      const cplx e_new = c * e - s * b;
      const cplx b_new = s * e + c * b;
      for (std::size_t j = 0; j < channels; ++j) {
        out.outputs[j][k * m + q] = a[j] + weight[j] * (b_new - b);
      }
      e = e_new * phase;
    }
    out.times.push_back(fields[0].start + static_cast<double>(k + 1) * dt);
    out.excitation.push_back(std::norm(e));
    out.atom_amplitude.push_back(e);
  }
  double final_norm = std::norm(e);
  for (std::size_t j = 0; j < channels; ++j) final_norm += out.output_photons(j);
  out.norm_defect = std::abs(final_norm - initial);
  return out;
}

}  // namespace pulsenet
