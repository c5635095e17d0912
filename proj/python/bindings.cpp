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

// Python module pulsenet._core.

#include <pybind11/complex.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "pulsenet/errors.hpp"
#include "pulsenet/experiments.hpp"

namespace py = pybind11;
using namespace pulsenet;

namespace {

py::dict to_dict(const ExperimentOutput& out) {
  py::dict d;
  d["command"] = out.command;
  d["comments"] = out.table.comments;
  d["columns"] = out.table.columns;
  d["rows"] = out.table.rows;
  d["summary"] = out.summary;
  d["passed"] = out.passed;
  d["failed_points"] = out.failed_points;
  d["csv"] = out.table.str();
  return d;
}

template <ExperimentOutput (*Run)(const ExperimentConfig&, const RunOptions&)>
py::dict run(const ExperimentConfig& config, unsigned workers) {
  ExperimentOutput out;
  {
    py::gil_scoped_release release;
    out = Run(config, {workers, false});
  }
  return to_dict(out);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Quantum pulses through cascaded virtual-cavity networks";
  m.attr("__version__") = PULSENET_VERSION;

  auto base = py::register_exception<Error>(m, "Error");
  py::register_exception<ConfigError>(m, "ConfigError", base.ptr());
  py::register_exception<CausalityViolation>(m, "CausalityViolation", base.ptr());
  py::register_exception<CaptureIncomplete>(m, "CaptureIncomplete", base.ptr());
  py::register_exception<UnsupportedConfiguration>(m, "UnsupportedConfiguration", base.ptr());
  py::register_exception<TruncationError>(m, "TruncationError", base.ptr());
  py::register_exception<DivergenceError>(m, "DivergenceError", base.ptr());
  py::register_exception<AccuracyError>(m, "AccuracyError", base.ptr());

  py::class_<ExperimentConfig>(m, "ExperimentConfig")
      .def_static("defaults", &ExperimentConfig::defaults, py::arg("scenario"))
      .def_static("parse", [](const std::string& text) { return ExperimentConfig::parse(text); })
      .def_static("load", &ExperimentConfig::load, py::arg("path"))
      .def("serialize", &ExperimentConfig::serialize)
      .def("validate", &ExperimentConfig::validate)
      .def("width", &ExperimentConfig::width)
      .def("detunings", &ExperimentConfig::detunings)
      .def_readwrite("scenario", &ExperimentConfig::scenario)
      .def_readwrite("gamma", &ExperimentConfig::gamma)
      .def_readwrite("photons", &ExperimentConfig::photons)
      .def_readwrite("tau", &ExperimentConfig::tau)
      .def_readwrite("pulse_width", &ExperimentConfig::pulse_width)
      .def_readwrite("capture_margin", &ExperimentConfig::capture_margin)
      .def_readwrite("atom_coupled", &ExperimentConfig::atom_coupled)
      .def_readwrite("delta_min", &ExperimentConfig::delta_min)
      .def_readwrite("delta_max", &ExperimentConfig::delta_max)
      .def_readwrite("delta_points", &ExperimentConfig::delta_points)
      .def_readwrite("window", &ExperimentConfig::window)
      .def_readwrite("delay_supports", &ExperimentConfig::delay_supports)
      .def_readwrite("oracle_case", &ExperimentConfig::oracle_case)
      .def_readwrite("oracle_bins", &ExperimentConfig::oracle_bins)
      .def_readwrite("oracle_tolerance", &ExperimentConfig::oracle_tolerance)
      .def("__eq__", [](const ExperimentConfig& a, const ExperimentConfig& b) { return a == b; });

  m.def("run_ramsey_scan", &run<run_ramsey_scan>, py::arg("config"), py::arg("workers") = 0);
  m.def("run_intensity_scan", &run<run_intensity_scan>, py::arg("config"), py::arg("workers") = 0);
  m.def("run_delay_demo", &run<run_delay_demo>, py::arg("config"), py::arg("workers") = 0);
  m.def("run_oracle_compare", &run<run_oracle_compare>, py::arg("config"), py::arg("workers") = 0);

  py::class_<PulseShape>(m, "PulseShape")
      .def_static("gaussian", &PulseShape::gaussian, py::arg("peak_time"), py::arg("width"),
                  py::arg("grid_intervals") = kDefaultPulseGrid)
      .def("__call__", &PulseShape::operator())
      .def("energy", &PulseShape::energy)
      .def("remaining", &PulseShape::remaining)
      .def("delayed", &PulseShape::delayed)
      .def_property_readonly("support", [](const PulseShape& u) {
        return std::make_pair(u.support_start(), u.support_end());
      });
  m.def("g_source", [](const PulseShape& u) { return g_source(u).as_function(); });
  m.def("g_absorber", [](const PulseShape& u) { return g_absorber(u).as_function(); });

  m.def("count_interior_extrema", &count_interior_extrema);
  m.def("fringe_spacing", &fringe_spacing);
  m.def("normalized_cross_correlation", &normalized_cross_correlation);
  m.def("mirror_asymmetry", &mirror_asymmetry);
  m.def("format_number", &format_number);
}
