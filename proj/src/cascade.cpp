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

#include "pulsenet/cascade.hpp"

#include <fmt/format.h>

#include <cmath>
#include <numbers>

#include "pulsenet/errors.hpp"

namespace pulsenet {

namespace {

const cplx kI(0.0, 1.0);
const double kInvSqrt2 = 1.0 / std::numbers::sqrt2;

int mode_dimension(const BuildOptions& options, int photons) {
  if (photons < 0) throw TruncationError(fmt::format("photon number must be non-negative, got {}", photons));
  const int dim = options.mode_dim > 0 ? options.mode_dim : photons + 1;
  if (dim < photons + 1) {
    throw TruncationError(fmt::format("mode dimension {} cannot hold {} photons", dim, photons));
  }
  return std::max(dim, 2);
}

SpaceLayout make_layout(std::vector<Subsystem> subsystems, const BuildOptions& options, int photons) {
  SpaceLayout layout(std::move(subsystems));
  return options.cap_excitations ? layout.with_excitation_cap(photons) : layout;
}

Coefficient coefficient_of(const CouplingSchedule& g) { return g.as_function(); }

TimeDependentOperator term(const SpaceLayout& layout, Coefficient c, const Operator& op) {
  TimeDependentOperator out(layout);
  out.add(std::move(c), op);
  return out;
}

Operator lowering(const SpaceLayout& layout, const std::string& label) {
  return embed(annihilation(layout.local_dim(label)), layout, label);
}

void require_capture(const PulseShape& u, double capture_time) {
  if (capture_time < u.support_end()) {
    throw CaptureIncomplete(fmt::format(
        "capture time T = {:.6g} ends before the input pulse support ({:.6g}); the delay cavities "
        "would release before capturing the whole pulse",
        capture_time, u.support_end()));
  }
}

void record_interferometer(ScenarioMetadata& meta, const InterferometerSetup& setup) {
  const RamseyTimeline clock = ramsey_timeline(setup);
  meta.interferometer = setup;
  meta.parameters["n"] = setup.photons;
  meta.parameters["tau"] = setup.delay;
  meta.parameters["T"] = setup.capture_time;
  meta.parameters["gamma"] = setup.atom.gamma;
  meta.parameters["delta"] = setup.atom.detuning;
  meta.parameters["t_w"] = setup.input.width();
  meta.parameters["source_peak"] = setup.input.peak_time();
  meta.parameters["release_start"] = clock.release_start;
  meta.parameters["first_peak"] = clock.first_peak;
  meta.parameters["second_peak"] = clock.second_peak;
  meta.parameters["t1"] = clock.readout;
  meta.parameters["t_final"] = clock.final_time;
  meta.notes.push_back(fmt::format(
      "capture time T = {:.17g}; released peaks at T + source peak ({:.17g}) and + tau; "
      "readout t1 = first released peak + tau + 2 t_w",
      setup.capture_time, clock.first_peak));
}

}  // namespace

// -- system / metadata helpers ------------------------------------------------

void AtomParams::validate() const {
  if (!(gamma > 0.0) || !std::isfinite(gamma)) {
    throw ConfigError(fmt::format("atom decay rate gamma must be positive, got {}", gamma));
  }
  if (!std::isfinite(detuning)) throw ConfigError("detuning must be finite");
}

double default_capture_time(const PulseShape& u) {
  const double w = std::isfinite(u.width()) ? u.width() : 0.1 * u.support_length();
  return u.support_end() + 0.5 * w;
}

RamseyTimeline ramsey_timeline(const InterferometerSetup& setup) {
  const PulseShape v2 = setup.short_release();
  const PulseShape v1 = setup.long_release();
  double peak = v2.peak_time();
  if (!std::isfinite(peak)) {
    // Energy median for non-Gaussian envelopes.
    double lo = v2.support_start(), hi = v2.support_end();
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (v2.energy(mid) < 0.5 ? lo : hi) = mid;
    }
    peak = 0.5 * (lo + hi);
  }
  const double w = std::isfinite(setup.input.width()) ? setup.input.width() : 0.1 * setup.input.support_length();
  RamseyTimeline clock;
  clock.release_start = std::min(v2.support_start(), v1.support_start());
  clock.first_peak = peak;
  clock.second_peak = peak + setup.delay;
  clock.readout = peak + setup.delay + 2.0 * w;
  clock.final_time = std::max(v1.support_end(), v2.support_end());
  return clock;
}

const Channel& TimeDependentSystem::channel(const std::string& name) const {
  for (const auto& c : channels) {
    if (c.name == name) return c;
  }
  throw UnknownLabel(fmt::format("system has no channel '{}'", name));
}

TimeDependentSystem TimeDependentSystem::restricted_to(const SpaceLayout& target) const {
  TimeDependentSystem out;
  out.layout = target;
  out.hamiltonian = hamiltonian.restricted_to(target);
  for (const auto& c : channels) out.channels.push_back({c.name, c.op.restricted_to(target)});
  out.metadata = metadata;
  return out;
}

// -- series composition -------------------------------------------------------

Component Component::identity(const SpaceLayout& layout, std::size_t ports) {
  Component c{"identity", TimeDependentOperator(layout), {}};
  c.ports.assign(ports, TimeDependentOperator(layout));
  return c;
}

Component Component::from_system(const TimeDependentSystem& system) {
  Component c{system.metadata.scenario, system.hamiltonian, {}};
  for (const auto& ch : system.channels) c.ports.push_back(ch.op);
  return c;
}

TimeDependentSystem series_product(const Component& upstream, const Component& downstream,
                                   std::vector<std::string> channel_names) {
  if (upstream.ports.size() != downstream.ports.size()) {
    throw ChannelMismatch(fmt::format("cannot cascade '{}' ({} ports) into '{}' ({} ports)", upstream.name,
                                      upstream.ports.size(), downstream.name, downstream.ports.size()));
  }
  if (!(upstream.hamiltonian.layout() == downstream.hamiltonian.layout())) {
    throw LayoutMismatch("series product: components live on different layouts");
  }
  TimeDependentSystem out;
  out.layout = upstream.hamiltonian.layout();
  out.hamiltonian = upstream.hamiltonian + downstream.hamiltonian;
  for (std::size_t j = 0; j < upstream.ports.size(); ++j) {
    const auto& up = upstream.ports[j];
    const auto& down = downstream.ports[j];
    if (!up.empty() && !down.empty()) {
      // (i/2)(L_up^dag L_down - L_down^dag L_up)
      const TimeDependentOperator forward = up.adjoint() * down;
      out.hamiltonian += cplx(0.0, 0.5) * forward;
      out.hamiltonian += cplx(0.0, -0.5) * forward.adjoint();
    }
    std::string name = j < channel_names.size() ? channel_names[j] : fmt::format("ch{}", j + 1);
    out.channels.push_back({std::move(name), up + down});
  }
  out.metadata.scenario = upstream.name + ">" + downstream.name;
  return out;
}

TimeDependentSystem mix_channels(const TimeDependentSystem& system, const std::vector<std::vector<cplx>>& mixing,
                                 std::vector<std::string> names) {
  TimeDependentSystem out = system;
  out.channels.clear();
  for (std::size_t i = 0; i < mixing.size(); ++i) {
    if (mixing[i].size() != system.channels.size()) throw ChannelMismatch("mixing matrix has wrong width");
    TimeDependentOperator op(system.layout);
    for (std::size_t j = 0; j < mixing[i].size(); ++j) {
      if (mixing[i][j] != 0.0) op += mixing[i][j] * system.channels[j].op;
    }
    out.channels.push_back({i < names.size() ? names[i] : fmt::format("out{}", i + 1), std::move(op)});
  }
  return out;
}

// -- builders -----------------------------------------------------------------

TimeDependentSystem build_source_absorber(const PulseShape& u, int photons, BuildOptions options) {
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout = make_layout({{"source", d}, {"absorber", d}}, options, photons);
  const auto g_out = g_source(u, options.regularization);
  const auto g_in = g_absorber(u, options.regularization);

  Component source{"source", TimeDependentOperator(layout), {}};
  source.ports.push_back(term(layout, conj(coefficient_of(g_out)), lowering(layout, "source")));
  Component absorber{"absorber", TimeDependentOperator(layout), {}};
  absorber.ports.push_back(term(layout, conj(coefficient_of(g_in)), lowering(layout, "absorber")));

  TimeDependentSystem sys = series_product(source, absorber, {"out"});
  sys.metadata.scenario = "source-absorber";
  sys.metadata.parameters["t_w"] = u.width();
  sys.metadata.carrier_modes = {"source"};
  sys.metadata.parameters["n"] = photons;
  return sys;
}

TimeDependentSystem build_source_atom(const PulseShape& u, const AtomParams& atom, int photons,
                                      BuildOptions options) {
  atom.validate();
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout = make_layout({{"atom", 2}, {"source", d}}, options, photons);
  const Operator sm = embed(sigma_minus(), layout, "atom");
  const auto g_out = g_source(u, options.regularization);

  Component source{"source", TimeDependentOperator(layout), {}};
  source.ports.push_back(term(layout, conj(coefficient_of(g_out)), lowering(layout, "source")));
  Component emitter{"atom", TimeDependentOperator(layout), {}};
  emitter.hamiltonian.add(atom.detuning * (sm.adjoint() * sm));
  emitter.ports.push_back(TimeDependentOperator(layout));
  if (options.atom_coupled) emitter.ports.back().add(std::sqrt(atom.gamma) * sm);

  TimeDependentSystem sys = series_product(source, emitter, {"out"});
  sys.metadata.scenario = "source-atom";
  sys.metadata.parameters["t_w"] = u.width();
  sys.metadata.carrier_modes = {"source"};
  sys.metadata.parameters["n"] = photons;
  sys.metadata.parameters["gamma"] = atom.gamma;
  sys.metadata.parameters["delta"] = atom.detuning;
  return sys;
}

TimeDependentSystem build_delay_line(const PulseShape& v, double delay, int photons, BuildOptions options) {
  if (delay < 0.0) throw CausalityViolation("a delay line cannot advance a pulse", 0.0);
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout = make_layout({{"source", d}, {"delay", d}, {"target", d}}, options, photons);
  const PulseShape u = v.delayed(delay);
  const auto g_src = g_source(v, options.regularization);
  const auto [g_out, g_in] = g_simultaneous(v, u, options.regularization);
  const auto g_target = g_absorber(u, options.regularization);
  const Operator a_src = lowering(layout, "source");
  const Operator a_delay = lowering(layout, "delay");
  const Operator a_target = lowering(layout, "target");

  Component source{"source", TimeDependentOperator(layout), {}};
  source.ports.push_back(term(layout, conj(coefficient_of(g_src)), a_src));
  Component target{"target", TimeDependentOperator(layout), {}};
  target.ports.push_back(term(layout, conj(coefficient_of(g_target)), a_target));

  TimeDependentSystem sys;
  if (g_out.transparent()) {
    // Zero delay: the cavity is bypassed and the source feeds the target directly.
    sys = series_product(source, target, {"output"});
    sys.channels.insert(sys.channels.begin(), Channel{"reflected", TimeDependentOperator(layout)});
    sys.metadata.notes.push_back("zero delay: delay cavity treated as transparent");
  } else {
    Component delay_in{"delay-in", TimeDependentOperator(layout), {}};
    delay_in.ports.push_back(term(layout, conj(coefficient_of(g_in)), a_delay));
    TimeDependentSystem stage1 = series_product(source, delay_in, {"reflected"});

    Component delay_out{"delay-out", TimeDependentOperator(layout), {}};
    delay_out.ports.push_back(term(layout, conj(coefficient_of(g_out)), a_delay));
    TimeDependentSystem stage2 = series_product(delay_out, target, {"output"});

    sys.layout = layout;
    sys.hamiltonian = stage1.hamiltonian + stage2.hamiltonian;
    sys.channels = {stage1.channels[0], stage2.channels[0]};
  }
  sys.metadata.scenario = "delay-line";
  sys.metadata.parameters["t_w"] = v.width();
  sys.metadata.carrier_modes = {"source"};
  sys.metadata.parameters["n"] = photons;
  sys.metadata.parameters["tau"] = delay;
  return sys;
}

namespace {

// Source u split 50/50 into two capture cavities that release v1 and v2.
// Channels r1, r2 (reflected off the capture cavities) and t1, t2 (released).
TimeDependentSystem mz_network(const SpaceLayout& layout, const InterferometerSetup& setup) {
  const auto& reg = setup.options.regularization;
  const Operator a_u = lowering(layout, "mode_u");
  const Operator a_v1 = lowering(layout, "mode_v1");
  const Operator a_v2 = lowering(layout, "mode_v2");
  const auto g_u = conj(coefficient_of(g_source(setup.input, reg)));
  const auto g_cap = conj(coefficient_of(g_absorber(setup.input, reg)));

  // 50/50 splitter: both ports carry g_out,u^* a_u / sqrt(2).
  Component source{"source", TimeDependentOperator(layout), {}};
  source.ports.push_back(term(layout, g_u, kInvSqrt2 * a_u));
  source.ports.push_back(term(layout, g_u, kInvSqrt2 * a_u));
  Component capture{"delay-cavities", TimeDependentOperator(layout), {}};
  capture.ports.push_back(term(layout, g_cap, a_v1));
  capture.ports.push_back(term(layout, g_cap, a_v2));

  TimeDependentSystem sys = series_product(source, capture, {"r1", "r2"});
  sys.channels.push_back({"t1", term(layout, conj(coefficient_of(g_source(setup.long_release(), reg))), a_v1)});
  sys.channels.push_back({"t2", term(layout, conj(coefficient_of(g_source(setup.short_release(), reg))), a_v2)});
  return sys;
}

}  // namespace

TimeDependentSystem build_mz_delay(const PulseShape& u, double delay, double capture_time, int photons,
                                   BuildOptions options) {
  require_capture(u, capture_time);
  if (delay < 0.0) throw CausalityViolation("relative delay must be non-negative", 0.0);
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout = make_layout({{"mode_u", d}, {"mode_v1", d}, {"mode_v2", d}}, options, photons);
  InterferometerSetup setup{u, delay, capture_time, photons, AtomParams{}, options};
  TimeDependentSystem sys = mz_network(layout, setup);
  sys.metadata.scenario = "mz-delay";
  sys.metadata.carrier_modes = {"mode_u"};
  record_interferometer(sys.metadata, setup);
  return sys;
}

std::vector<TimeDependentOperator> reduced_release_ports(const SpaceLayout& layout,
                                                         const InterferometerSetup& setup) {
  const Operator a_u = lowering(layout, "mode_u");
  const Operator b2 = lowering(layout, "mode_b2");
  const Operator c_plus = mode_superposition({{kInvSqrt2, a_u}, {kInvSqrt2, b2}});
  const Operator c_minus = mode_superposition({{kInvSqrt2, a_u}, {-kInvSqrt2, b2}});
  const auto& reg = setup.options.regularization;
  return {term(layout, conj(coefficient_of(g_source(setup.long_release(), reg))), c_plus),
          term(layout, conj(coefficient_of(g_source(setup.short_release(), reg))), c_minus)};
}

namespace {

Component atom_component(const SpaceLayout& layout, const AtomParams& atom, std::size_t ports, double share,
                         bool coupled) {
  const Operator sm = embed(sigma_minus(), layout, "atom");
  Component c{"atom", TimeDependentOperator(layout), {}};
  c.hamiltonian.add(atom.detuning * (sm.adjoint() * sm));
  for (std::size_t j = 0; j < ports; ++j) {
    c.ports.emplace_back(layout);
    if (coupled) c.ports.back().add(std::sqrt(atom.gamma * share) * sm);
  }
  return c;
}

}  // namespace

TimeDependentSystem build_ramsey_atom(const PulseShape& u, double delay, double capture_time,
                                      const AtomParams& atom, int photons, BuildOptions options) {
  atom.validate();
  require_capture(u, capture_time);
  if (delay < 0.0) throw CausalityViolation("relative delay must be non-negative", 0.0);
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout = make_layout({{"atom", 2}, {"mode_u", d}, {"mode_b2", d}}, options, photons);
  InterferometerSetup setup{u, delay, capture_time, photons, atom, options};

  Component light{"released-pulses", TimeDependentOperator(layout), reduced_release_ports(layout, setup)};
  TimeDependentSystem sys =
      series_product(light, atom_component(layout, atom, 2, 0.5, options.atom_coupled), {"L1", "L2"});
  sys.metadata.scenario = "ramsey-atom";
  sys.metadata.picture = "interaction";
  sys.metadata.carrier_modes = {"mode_u", "mode_b2"};
  record_interferometer(sys.metadata, setup);
  return sys;
}

TimeDependentSystem build_mz_ramsey(const PulseShape& u, double delay, double capture_time, const AtomParams& atom,
                                    int photons, BuildOptions options) {
  atom.validate();
  require_capture(u, capture_time);
  if (delay < 0.0) throw CausalityViolation("relative delay must be non-negative", 0.0);
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout =
      make_layout({{"atom", 2}, {"mode_u", d}, {"mode_v1", d}, {"mode_v2", d}}, options, photons);
  InterferometerSetup setup{u, delay, capture_time, photons, atom, options};
  const TimeDependentSystem mz = mz_network(layout, setup);

  // The reflected channels bypass the atom; the released ones drive it.
  Component drive = atom_component(layout, atom, 4, 0.5, options.atom_coupled);
  drive.ports[0] = TimeDependentOperator(layout);
  drive.ports[1] = TimeDependentOperator(layout);
  TimeDependentSystem sys = series_product(Component::from_system(mz), drive, {"r1", "r2", "L1", "L2"});
  sys.metadata.scenario = "mz-ramsey";
  sys.metadata.carrier_modes = {"mode_u"};
  record_interferometer(sys.metadata, setup);
  return sys;
}

TimeDependentSystem build_classical_ramsey(const AtomParams& atom, double photons, const PulseShape& v1,
                                           const PulseShape& v2) {
  atom.validate();
  if (photons < 0.0) throw ConfigError("mean photon number must be non-negative");
  const SpaceLayout layout({{"atom", 2}});
  const Operator sm = embed(sigma_minus(), layout, "atom");
  const Operator sp = sm.adjoint();
  const double amplitude = std::sqrt(photons / 2.0);
  const double coupling = std::sqrt(atom.gamma / 2.0);

  TimeDependentSystem sys;
  sys.layout = layout;
  sys.hamiltonian = TimeDependentOperator(layout);
  sys.hamiltonian.add(atom.detuning * (sp * sm));
  // i sqrt(gamma/2) (alpha sigma+ - alpha^* sigma-), alpha = sqrt(n/2) (v1 + v2)
  sys.hamiltonian.add_with_hc(
      [=](double t) { return kI * coupling * amplitude * (v1(t) + v2(t)); }, sp);
  sys.channels.push_back({"decay", term(layout, {}, std::sqrt(atom.gamma) * sm)});
  sys.metadata.scenario = "classical-ramsey";
  sys.metadata.parameters["n"] = photons;
  sys.metadata.parameters["gamma"] = atom.gamma;
  sys.metadata.parameters["delta"] = atom.detuning;
  return sys;
}

TimeDependentSystem build_output_analysis(const PulseShape& u, double delay, double capture_time,
                                          const AtomParams& atom, int photons, BuildOptions options) {
  InterferometerSetup setup{u, delay, capture_time, photons, atom, options};
  return build_output_analysis(u, delay, capture_time, atom, photons, setup.long_release(),
                               setup.short_release(), options);
}

TimeDependentSystem build_output_analysis(const PulseShape& u, double delay, double capture_time,
                                          const AtomParams& atom, int photons, const PulseShape& w1,
                                          const PulseShape& w2, BuildOptions options) {
  atom.validate();
  require_capture(u, capture_time);
  if (delay < 0.0) throw CausalityViolation("relative delay must be non-negative", 0.0);
  const int d = mode_dimension(options, photons);
  const SpaceLayout layout =
      make_layout({{"atom", 2}, {"c1", d}, {"c2", d}, {"d1", d}, {"d2", d}}, options, photons);
  InterferometerSetup setup{u, delay, capture_time, photons, atom, options};
  const auto& reg = options.regularization;
  const PulseShape v1 = setup.long_release();
  const PulseShape v2 = setup.short_release();

  Component light{"released-pulses", TimeDependentOperator(layout), {}};
  light.ports.push_back(term(layout, conj(coefficient_of(g_source(v1, reg))), lowering(layout, "c1")));
  light.ports.push_back(term(layout, conj(coefficient_of(g_source(v2, reg))), lowering(layout, "c2")));
  TimeDependentSystem scattered = series_product(light, atom_component(layout, atom, 2, 0.5, options.atom_coupled));

  Component pickups{"pickups", TimeDependentOperator(layout), {}};
  pickups.ports.push_back(term(layout, conj(coefficient_of(g_absorber(w1, reg))), lowering(layout, "d1")));
  pickups.ports.push_back(term(layout, conj(coefficient_of(g_absorber(w2, reg))), lowering(layout, "d2")));
  TimeDependentSystem captured = series_product(Component::from_system(scattered), pickups);

  // Recombining beam splitter with the relative minus sign on the second port.
  TimeDependentSystem sys =
      mix_channels(captured, {{kInvSqrt2, kInvSqrt2}, {-kInvSqrt2, kInvSqrt2}}, {"L1", "L2"});
  sys.metadata = ScenarioMetadata{};
  sys.metadata.scenario = "output-analysis";
  sys.metadata.carrier_modes = {"c1", "c2"};
  sys.metadata.pickup_modes = {"d1", "d2"};
  sys.metadata.pickup_shapes = {w1, w2};
  record_interferometer(sys.metadata, setup);
  return sys;
}

double constructive_port_intensity(const DensityMatrix& rho) {
  const SpaceLayout& layout = rho.layout();
  const Operator port = lowering(layout, "d1") + lowering(layout, "d2");
  return 0.5 * expectation(rho, port.adjoint() * port).real();
}

DensityMatrix initial_state(const TimeDependentSystem& system) {
  const auto& meta = system.metadata;
  const int n = static_cast<int>(meta.parameters.count("n") ? meta.parameters.at("n") : 0.0);
  if (meta.scenario == "output-analysis") return prepare_binomial_split(system.layout, meta.carrier_modes, n);
  if (!meta.carrier_modes.empty()) return prepare_fock(system.layout, meta.carrier_modes.front(), n);
  return prepare_pure(system.layout, {{Occupation(system.layout.size(), 0), 1.0}});
}

}  // namespace pulsenet
