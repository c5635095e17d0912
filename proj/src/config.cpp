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

#include "pulsenet/config.hpp"

#include <fmt/format.h>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include "pulsenet/csv.hpp"
#include "pulsenet/errors.hpp"

namespace pulsenet {

namespace pt = boost::property_tree;

namespace {

const std::set<std::string> kScenarios = {"ramsey", "output-analysis", "delay-demo", "oracle-compare"};

const std::set<std::string> kKeys = {
    "experiment.scenario",     "experiment.seed",         "physics.gamma",          "physics.photons",
    "physics.tau",             "physics.t_w",             "physics.capture_margin", "physics.atom_coupled",
    "scan.delta_min",          "scan.delta_max",          "scan.delta_points",      "truncation.window",
    "truncation.cap_excitations", "integrator.method",    "integrator.step",        "integrator.max_step",
    "integrator.abs_tol",      "integrator.rel_tol",      "integrator.renormalize", "integrator.symmetrize",
    "integrator.record_stride", "integrator.trace_tolerance", "delay.delay_supports", "oracle.case",
    "oracle.bins",             "oracle.tolerance",        "oracle.detuning"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

double to_double(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  double x = 0.0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: expected a number, got '{}'", key, raw));
  }
  return x;
}

long long to_integer(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  long long x = 0;
  const auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), x);
  if (ec != std::errc() || ptr != v.data() + v.size() || v.empty()) {
    throw ConfigError(fmt::format("{}: expected an integer, got '{}'", key, raw));
  }
  return x;
}

bool to_bool(const std::string& key, const std::string& raw) {
  const std::string v = trim(raw);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError(fmt::format("{}: expected true or false, got '{}'", key, raw));
}

const char* bool_text(bool b) { return b ? "true" : "false"; }

}  // namespace

ExperimentConfig ExperimentConfig::defaults(const std::string& scenario) {
  ExperimentConfig c;
  c.scenario = scenario;
  if (scenario == "output-analysis") {
    c.window = 4;
  } else if (scenario == "delay-demo" || scenario == "oracle-compare") {
    c.photons = 1;
    c.pulse_width = 1.0;
    c.delta_min = c.delta_max = 0.0;
    c.delta_points = 1;
  }
  return c;
}

ExperimentConfig ExperimentConfig::parse(std::string_view text) {
  pt::ptree tree;
  std::istringstream in{std::string(text)};
  try {
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config syntax error: {}", e.message()));
  }
  for (const auto& [section, body] : tree) {
    if (body.empty() && !body.data().empty()) {
      throw ConfigError(fmt::format("{}: key outside of any section", section));
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!kKeys.count(full)) throw ConfigError(fmt::format("{}: unknown configuration key", full));
    }
  }

  auto get = [&](const std::string& key) -> std::optional<std::string> {
    if (auto v = tree.get_optional<std::string>(pt::ptree::path_type(key, '.'))) return trim(*v);
    return std::nullopt;
  };

  const auto scenario = get("experiment.scenario");
  ExperimentConfig c = defaults(scenario.value_or(""));
  if (auto v = get("experiment.seed")) {
    const auto [ptr, ec] = std::from_chars(v->data(), v->data() + v->size(), c.seed);
    if (ec != std::errc() || ptr != v->data() + v->size() || v->empty()) {
      throw ConfigError(fmt::format("experiment.seed: expected a non-negative integer, got '{}'", *v));
    }
  }
  if (auto v = get("physics.gamma")) c.gamma = to_double("physics.gamma", *v);
  if (auto v = get("physics.photons")) c.photons = static_cast<int>(to_integer("physics.photons", *v));
  if (auto v = get("physics.tau")) c.tau = to_double("physics.tau", *v);
  if (auto v = get("physics.t_w")) {
    if (*v == "auto") {
      c.pulse_width.reset();
    } else {
      c.pulse_width = to_double("physics.t_w", *v);
    }
  }
  if (auto v = get("physics.capture_margin")) c.capture_margin = to_double("physics.capture_margin", *v);
  if (auto v = get("physics.atom_coupled")) c.atom_coupled = to_bool("physics.atom_coupled", *v);
  if (auto v = get("scan.delta_min")) c.delta_min = to_double("scan.delta_min", *v);
  if (auto v = get("scan.delta_max")) c.delta_max = to_double("scan.delta_max", *v);
  if (auto v = get("scan.delta_points")) c.delta_points = static_cast<int>(to_integer("scan.delta_points", *v));
  if (auto v = get("truncation.window")) c.window = static_cast<int>(to_integer("truncation.window", *v));
  if (auto v = get("truncation.cap_excitations")) {
    c.cap_excitations = to_bool("truncation.cap_excitations", *v);
  }
  if (auto v = get("integrator.method")) {
    if (*v == "rk4") {
      c.integrator.method = Method::rk4;
    } else if (*v == "dopri45") {
      c.integrator.method = Method::dopri45;
    } else {
      throw ConfigError(fmt::format("integrator.method: expected rk4 or dopri45, got '{}'", *v));
    }
  }
  if (auto v = get("integrator.step")) c.integrator.step = to_double("integrator.step", *v);
  if (auto v = get("integrator.max_step")) c.integrator.max_step = to_double("integrator.max_step", *v);
  if (auto v = get("integrator.abs_tol")) c.integrator.abs_tol = to_double("integrator.abs_tol", *v);
  if (auto v = get("integrator.rel_tol")) c.integrator.rel_tol = to_double("integrator.rel_tol", *v);
  if (auto v = get("integrator.renormalize")) c.integrator.renormalize = to_bool("integrator.renormalize", *v);
  if (auto v = get("integrator.symmetrize")) c.integrator.symmetrize = to_bool("integrator.symmetrize", *v);
  if (auto v = get("integrator.record_stride")) {
    c.integrator.record_stride = static_cast<int>(to_integer("integrator.record_stride", *v));
  }
  if (auto v = get("integrator.trace_tolerance")) {
    c.integrator.trace_tolerance = to_double("integrator.trace_tolerance", *v);
  }
  if (auto v = get("delay.delay_supports")) c.delay_supports = to_double("delay.delay_supports", *v);
  if (auto v = get("oracle.case")) c.oracle_case = *v;
  if (auto v = get("oracle.bins")) c.oracle_bins = static_cast<int>(to_integer("oracle.bins", *v));
  if (auto v = get("oracle.tolerance")) c.oracle_tolerance = to_double("oracle.tolerance", *v);
  if (auto v = get("oracle.detuning")) c.oracle_detuning = to_double("oracle.detuning", *v);
  return c;
}

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ConfigError(fmt::format("cannot read config file '{}'", path));
  std::ostringstream s;
  s << f.rdbuf();
  return parse(s.str());
}

std::string ExperimentConfig::serialize() const {
  std::string o;
  auto line = [&](const std::string& k, const std::string& v) { o += k + " = " + v + "\n"; };
  o += "[experiment]\n";
  line("scenario", scenario);
  line("seed", std::to_string(seed));
  o += "\n[physics]\n";
  line("gamma", format_number(gamma));
  line("photons", std::to_string(photons));
  line("tau", format_number(tau));
  line("t_w", pulse_width ? format_number(*pulse_width) : "auto");
  line("capture_margin", format_number(capture_margin));
  line("atom_coupled", bool_text(atom_coupled));
  o += "\n[scan]\n";
  line("delta_min", format_number(delta_min));
  line("delta_max", format_number(delta_max));
  line("delta_points", std::to_string(delta_points));
  o += "\n[truncation]\n";
  line("window", std::to_string(window));
  line("cap_excitations", bool_text(cap_excitations));
  o += "\n[integrator]\n";
  line("method", integrator.method == Method::rk4 ? "rk4" : "dopri45");
  line("step", format_number(integrator.step));
  line("max_step", format_number(integrator.max_step));
  line("abs_tol", format_number(integrator.abs_tol));
  line("rel_tol", format_number(integrator.rel_tol));
  line("renormalize", bool_text(integrator.renormalize));
  line("symmetrize", bool_text(integrator.symmetrize));
  line("record_stride", std::to_string(integrator.record_stride));
  line("trace_tolerance", format_number(integrator.trace_tolerance));
  o += "\n[delay]\n";
  line("delay_supports", format_number(delay_supports));
  o += "\n[oracle]\n";
  line("case", oracle_case);
  line("bins", std::to_string(oracle_bins));
  line("tolerance", format_number(oracle_tolerance));
  line("detuning", format_number(oracle_detuning));
  return o;
}

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& field, const std::string& why) {
    throw ConfigError(fmt::format("{}: {}", field, why));
  };
  if (!kScenarios.count(scenario)) {
    fail("experiment.scenario", fmt::format("unknown scenario '{}' (ramsey, output-analysis, delay-demo, "
                                            "oracle-compare)",
                                            scenario));
  }
  if (!(gamma > 0.0) || !std::isfinite(gamma)) fail("physics.gamma", "must be a positive rate");
  if (photons < 0) fail("physics.photons", "must be non-negative");
  if (!(tau >= 0.0) || !std::isfinite(tau)) fail("physics.tau", "must be non-negative");
  if (pulse_width && (!(*pulse_width > 0.0) || !std::isfinite(*pulse_width))) {
    fail("physics.t_w", "must be positive or 'auto'");
  }
  if (!(capture_margin >= 0.0) || !std::isfinite(capture_margin)) {
    fail("physics.capture_margin", "must be non-negative");
  }
  if (!std::isfinite(delta_min) || !std::isfinite(delta_max)) fail("scan.delta_min", "grid must be finite");
  if (delta_points < 1) fail("scan.delta_points", "must be at least 1");
  if (delta_points > 1 && !(delta_max > delta_min)) fail("scan.delta_max", "must exceed scan.delta_min");
  if (window < 0 || window == 1) fail("truncation.window", "must be 0 (full basis) or at least 2");
  if (integrator.step < 0.0 || !std::isfinite(integrator.step)) fail("integrator.step", "must be >= 0");
  if (integrator.max_step < 0.0) fail("integrator.max_step", "must be >= 0");
  if (!(integrator.abs_tol > 0.0)) fail("integrator.abs_tol", "must be positive");
  if (!(integrator.rel_tol > 0.0)) fail("integrator.rel_tol", "must be positive");
  if (integrator.record_stride < 1) fail("integrator.record_stride", "must be at least 1");
  if (!(delay_supports >= 0.0) || !std::isfinite(delay_supports)) fail("delay.delay_supports", "must be >= 0");
  if (oracle_case != "source-atom" && oracle_case != "ramsey") {
    fail("oracle.case", "must be source-atom or ramsey");
  }
  if (oracle_bins < 50) fail("oracle.bins", "must be at least 50");
  if (!(oracle_tolerance > 0.0)) fail("oracle.tolerance", "must be positive");
  if (!std::isfinite(oracle_detuning)) fail("oracle.detuning", "must be finite");
  if ((scenario == "delay-demo" || scenario == "oracle-compare") && photons != 1) {
    fail("physics.photons", fmt::format("the {} scenario is single-photon only", scenario));
  }
}

double ExperimentConfig::width() const {
  if (pulse_width) return *pulse_width * gamma;
  // pi/2 rule: each half of an n-photon pulse rotates the atom by pi/2.
  const double n = std::max(photons, 1);
  return std::pow(std::numbers::pi, 1.5) / (8.0 * n);
}

std::vector<double> ExperimentConfig::detunings() const {
  std::vector<double> grid;
  if (delta_points == 1) return {delta_min / gamma};
  const double center = 0.5 * (delta_min + delta_max);
  const double half = 0.5 * (delta_max - delta_min);
  for (int i = 0; i < delta_points; ++i) {
    // Integer numerator: mirrored points come out as exact negatives.
    const double s = static_cast<double>(2 * i - (delta_points - 1)) / (delta_points - 1);
    grid.push_back((center + half * s) / gamma);
  }
  return grid;
}

IntegratorConfig ExperimentConfig::normalized_integrator() const {
  IntegratorConfig c = integrator;
  c.step *= gamma;
  c.max_step *= gamma;
  return c;
}

}  // namespace pulsenet
