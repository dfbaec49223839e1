// Copyright 2026 The hybrid-hhl Authors
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

#include <cstdio>
#include <map>
#include <sstream>

#include "hhl/circuits.hpp"
#include "hhl/errors.hpp"

namespace hhl {

namespace {

std::string angle(double v) {
  if (v == 0.0) v = 0.0;  // drops the sign of -0
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string q(int i) { return "q[" + std::to_string(i) + "]"; }

}  // namespace

std::string emit_qasm(const CompiledCircuit& compiled) {
  const Circuit& c = compiled.circuit();
  std::vector<std::string> reg_order;
  std::map<std::string, int> reg_size;
  for (const Gate& g : c.gates()) {
    if (!g.is_measure()) continue;
    auto [it, inserted] = reg_size.try_emplace(g.creg, 0);
    if (inserted) reg_order.push_back(g.creg);
    it->second = std::max(it->second, g.cbit + 1);
  }

  std::ostringstream out;
  out << "OPENQASM 2.0;\n";
  out << "include \"qelib1.inc\";\n";
  out << "qreg q[" << c.num_qubits() << "];\n";
  for (const auto& name : reg_order) out << "creg " << name << "[" << reg_size[name] << "];\n";

  for (const Gate& g : c.gates()) {
    switch (g.kind) {
      case GateKind::CNOT:
        out << "cx " << q(g.controls[0]) << "," << q(g.targets[0]) << ";\n";
        break;
      case GateKind::H:
      case GateKind::X:
        out << gate_name(g.kind) << " " << q(g.targets[0]) << ";\n";
        break;
      case GateKind::Rx:
      case GateKind::Ry:
      case GateKind::Rz:
        out << gate_name(g.kind) << "(" << angle(g.params[0]) << ") " << q(g.targets[0]) << ";\n";
        break;
      case GateKind::U3:
        out << "u3(" << angle(g.params[0]) << "," << angle(g.params[1]) << "," << angle(g.params[2])
            << ") " << q(g.targets[0]) << ";\n";
        break;
      case GateKind::Measure:
        out << "measure " << q(g.targets[0]) << " -> " << g.creg << "[" << g.cbit << "];\n";
        break;
      default:
        throw CompileError("gate " + std::string(gate_name(g.kind)) + " is not in the QASM basis");
    }
  }
  return out.str();
}

}  // namespace hhl
