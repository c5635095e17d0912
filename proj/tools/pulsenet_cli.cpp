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

// pulsenet command-line tool.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure,
// 4 acceptance threshold missed (oracle-compare).

#include <fmt/format.h>

#include <CLI11.hpp>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "pulsenet/errors.hpp"
#include "pulsenet/experiments.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalFailure = 3;
constexpr int kAcceptanceFailure = 4;

struct Flags {
  std::string config;
  std::string out;
  unsigned workers = 0;
  bool plot_script = false;
  bool dump_trajectories = false;
};

pulsenet::ExperimentConfig load_config(const Flags& flags, const std::string& scenario) {
  auto config = flags.config.empty() ? pulsenet::ExperimentConfig::defaults(scenario)
                                     : pulsenet::ExperimentConfig::load(flags.config);
  if (config.scenario.empty()) config.scenario = scenario;
  config.validate();
  return config;
}

void write_text(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw pulsenet::Error(fmt::format("cannot open '{}' for writing", path));
  f << text;
}

int emit(const pulsenet::ExperimentOutput& output, const Flags& flags) {
  const std::string path = flags.out.empty() ? output.command + ".csv" : flags.out;
  output.table.write(path);
  if (flags.plot_script) {
    write_text(std::filesystem::path(path).replace_extension(".gp").string(),
               pulsenet::gnuplot_script(output, std::filesystem::path(path).filename().string()));
  }
  if (flags.dump_trajectories) {
    const auto stem = std::filesystem::path(path).replace_extension("").string();
    for (const auto& [name, table] : output.trajectories) table.write(stem + "." + name + ".csv");
  }
  fmt::print("wrote {} ({} rows)\n", path, output.table.rows.size());
  for (const auto& [key, value] : output.summary) fmt::print("  {} = {}\n", key, pulsenet::format_number(value));
  if (output.failed_points > 0) {
    fmt::print(stderr, "{} scan point(s) failed; see the CSV header\n", output.failed_points);
    return kNumericalFailure;
  }
  if (!output.passed) {
    fmt::print(stderr, "acceptance threshold missed\n");
    return kAcceptanceFailure;
  }
  return kOk;
}

template <class Fn>
int guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const pulsenet::ConfigError& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const pulsenet::CaptureIncomplete& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const pulsenet::UnsupportedConfiguration& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const pulsenet::CausalityViolation& e) {
    fmt::print(stderr, "config error: {}\n", e.what());
    return kConfigError;
  } catch (const std::exception& e) {
    fmt::print(stderr, "numerical failure: {}\n", e.what());
    return kNumericalFailure;
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Quantum pulses through cascaded virtual-cavity networks"};
  app.set_version_flag("--version", pulsenet::version_string());
  app.require_subcommand(1);
  Flags flags;

  struct Command {
    const char* name;
    const char* scenario;
    const char* help;
    pulsenet::ExperimentOutput (*run)(const pulsenet::ExperimentConfig&, const pulsenet::RunOptions&);
  };
  const Command commands[] = {
      {"ramsey-scan", "ramsey", "P_e(t1) versus detuning, quantum and classical drive", pulsenet::run_ramsey_scan},
      {"intensity-scan", "output-analysis", "constructive-port photon number versus detuning",
       pulsenet::run_intensity_scan},
      {"delay-demo", "delay-demo", "single photon through a virtual-cavity delay line", pulsenet::run_delay_demo},
      {"oracle-compare", "oracle-compare", "virtual cavities against the time-bin model",
       pulsenet::run_oracle_compare},
  };
  int status = kOk;
  for (const auto& c : commands) {
    auto* sub = app.add_subcommand(c.name, c.help);
    sub->add_option("--config", flags.config, "INI configuration file (defaults when omitted)");
    sub->add_option("--out", flags.out, "CSV output path (default <command>.csv)");
    sub->add_option("--workers", flags.workers, "worker threads for scans (0 = all cores)");
    sub->add_flag("--emit-plot-script", flags.plot_script, "also write a gnuplot script next to the CSV");
    sub->add_flag("--dump-trajectories", flags.dump_trajectories, "write per-point trajectories");
    sub->callback([&flags, &status, c] {
      status = guarded([&] {
        const auto config = load_config(flags, c.scenario);
        return emit(c.run(config, {flags.workers, flags.dump_trajectories}), flags);
      });
    });
  }
  auto* validate = app.add_subcommand("validate-config", "parse and validate a configuration file");
  validate->add_option("--config", flags.config, "INI configuration file")->required();
  validate->callback([&] {
    status = guarded([&] {
      auto config = pulsenet::ExperimentConfig::load(flags.config);
      config.validate();
      fmt::print("{}", config.serialize());
      return kOk;
    });
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfigError;
  }
  return status;
}
