/*
 * Copyright 2026 The hbmsim Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 * http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <string>
#include <utility>
#include <vector>

#include "hbmsim/addrmap.hpp"
#include "hbmsim/engine.hpp"
#include "hbmsim/error.hpp"
#include "hbmsim/harness.hpp"

namespace py = pybind11;
using namespace hbmsim;

namespace {

py::tuple artifact(const Artifact& a) {
  py::dict files;
  for (const auto& [name, body] : a.files) files[py::str(name)] = py::str(body);
  return py::make_tuple(dump(a.summary), files);
}

Json parse_json(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw ValidationError("config", std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace

PYBIND11_MODULE(_hbmsim, m) {
  m.doc() = "HBM and DDR4 benchmarking simulator";

  static py::exception<Error> error(m, "Error");
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ValidationError& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), e.kind(), e.field()).ptr());
    } catch (const Error& e) {
      PyErr_SetObject(error.ptr(), py::make_tuple(e.what(), e.kind(), "").ptr());
    }
  });

  m.def("list_presets", [] {
    std::vector<std::pair<std::string, std::string>> out;
    for (const auto& p : list_presets()) out.emplace_back(p.name, p.description);
    return out;
  });
  m.def("run_preset", [](const std::string& name) { return artifact(run_preset(name)); },
        py::arg("name"));
  m.def("run_config", [](const std::string& text) {
    const auto cfg = parse_config(parse_json(text));
    return artifact(cfg.sweep ? sweep(cfg) : run_experiment(cfg));
  }, py::arg("config_json"));
  m.def("normalize_config", [](const std::string& text) {
    return dump(to_json(parse_config(parse_json(text))));
  }, py::arg("config_json"));
  m.def("gen_address", [](std::uint64_t A, std::uint32_t B, std::uint64_t S, std::uint64_t W,
                          std::uint64_t N, std::uint64_t i) {
    return gen_address(RstConfig{A, B, S, W, N}, i);
  }, py::arg("A"), py::arg("B"), py::arg("S"), py::arg("W"), py::arg("N"), py::arg("i"));
  m.def("decode", [](const std::string& policy, const std::string& memory, std::uint64_t addr) {
    const auto kind = parse_memory_kind(memory);
    const auto d = MappingPolicy::parse(policy, kind).decode(addr);
    return py::dict(py::arg("row") = d.row, py::arg("bank_group") = d.bank_group,
                    py::arg("bank") = d.bank, py::arg("column") = d.column);
  }, py::arg("policy"), py::arg("memory"), py::arg("addr"));
}
