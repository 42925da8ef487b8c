// Copyright 2026 The zxforge Authors
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

#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "zxforge/diagram.hpp"
#include "zxforge/io.hpp"

namespace zxforge {

enum class GateType { H, Z, X, CNOT, CZ, INIT0 };

struct Gate {
    GateType type = GateType::H;
    int q = 0;  // target of single-qubit gates
    int c = 0;  // control of two-qubit gates
    int t = 0;  // target of two-qubit gates
    int phase = 0;

    static Gate h(int q) { return {GateType::H, q, 0, 0, 0}; }
    static Gate z(int q, int phase) { return {GateType::Z, q, 0, 0, phase}; }
    static Gate x(int q, int phase) { return {GateType::X, q, 0, 0, phase}; }
    static Gate cnot(int c, int t) { return {GateType::CNOT, 0, c, t, 0}; }
    static Gate cz(int c, int t) { return {GateType::CZ, 0, c, t, 0}; }
    static Gate init0(int q) { return {GateType::INIT0, q, 0, 0, 0}; }
};

struct GateList {
    int qubits = 0;
    std::vector<Gate> gates;
};

/// Translates a gate list. Qubit i gets boundaries `q{i}_in` and `q{i}_out`; INIT0 replaces the input
/// boundary with a degree-1 X(0) spider and must precede every other gate on its qubit.
inline Diagram from_gates(const GateList &gl) {
    if (gl.qubits < 0) {
        throw std::invalid_argument("negative qubit count");
    }
    auto n = static_cast<std::size_t>(gl.qubits);
    std::vector<bool> init(n, false);
    std::vector<bool> touched(n, false);
    auto check = [&](int q) {
        if (q < 0 || q >= gl.qubits) {
            throw std::invalid_argument("qubit index " + std::to_string(q) + " out of range");
        }
        return static_cast<std::size_t>(q);
    };
    for (const Gate &g : gl.gates) {
        if (g.type == GateType::INIT0) {
            std::size_t q = check(g.q);
            if (touched[q] || init[q]) {
                throw std::invalid_argument("INIT0 on qubit " + std::to_string(q) + " after other gates");
            }
            init[q] = true;
        } else if (g.type == GateType::CNOT || g.type == GateType::CZ) {
            if (g.c == g.t) {
                throw std::invalid_argument("two-qubit gate with equal control and target");
            }
            touched[check(g.c)] = touched[check(g.t)] = true;
        } else {
            touched[check(g.q)] = true;
        }
    }
    Diagram d;
    std::vector<NodeIndex> last(n);
    for (std::size_t q = 0; q < n; ++q) {
        last[q] = init[q] ? d.add_node(Node::x(0)) : d.add_node(Node::boundary("q" + std::to_string(q) + "_in"));
    }
    auto append = [&](std::size_t q, Node node) {
        NodeIndex v = d.add_node(std::move(node));
        d.add_wire(last[q], v);
        last[q] = v;
        return v;
    };
    for (const Gate &g : gl.gates) {
        switch (g.type) {
            case GateType::INIT0:
                break;
            case GateType::H:
                append(static_cast<std::size_t>(g.q), Node::hbox(180));
                break;
            case GateType::Z:
                append(static_cast<std::size_t>(g.q), Node::z(g.phase));
                break;
            case GateType::X:
                append(static_cast<std::size_t>(g.q), Node::x(g.phase));
                break;
            case GateType::CNOT: {
                NodeIndex a = append(static_cast<std::size_t>(g.c), Node::z(0));
                NodeIndex b = append(static_cast<std::size_t>(g.t), Node::x(0));
                d.add_wire(a, b);
                break;
            }
            case GateType::CZ: {
                NodeIndex a = append(static_cast<std::size_t>(g.c), Node::z(0));
                NodeIndex b = append(static_cast<std::size_t>(g.t), Node::z(0));
                NodeIndex h = d.add_node(Node::hbox(180));
                d.add_wire(a, h);
                d.add_wire(h, b);
                break;
            }
        }
    }
    for (std::size_t q = 0; q < n; ++q) {
        NodeIndex out = d.add_node(Node::boundary("q" + std::to_string(q) + "_out"));
        d.add_wire(last[q], out);
    }
    d.validate();
    return normalize(std::move(d));
}

/// INIT0 on every qubit, H on qubit 0, then CNOT(i, i+1).
inline Diagram ghz(int n) {
    if (n < 2) {
        throw std::invalid_argument("ghz needs n >= 2");
    }
    GateList gl{n, {}};
    for (int q = 0; q < n; ++q) {
        gl.gates.push_back(Gate::init0(q));
    }
    gl.gates.push_back(Gate::h(0));
    for (int q = 0; q + 1 < n; ++q) {
        gl.gates.push_back(Gate::cnot(q, q + 1));
    }
    return from_gates(gl);
}

/// One-qubit teleportation with outcomes a, b. Boundaries `in` and `out`.
/// in - Z(0)[CNOT control] - H - X(a*180) effect; the CNOT target X(0) carries the X(b*180) effect and
/// the Bell-pair cup, which continues through X(b*180), Z(a*180) to `out`.
inline Diagram teleportation(int a, int b) {
    if ((a != 0 && a != 1) || (b != 0 && b != 1)) {
        throw std::invalid_argument("teleportation outcomes must be 0 or 1");
    }
    Diagram d;
    NodeIndex in = d.add_node(Node::boundary("in"));
    NodeIndex out = d.add_node(Node::boundary("out"));
    NodeIndex ctrl = d.add_node(Node::z(0));
    NodeIndex targ = d.add_node(Node::x(0));
    NodeIndex h = d.add_node(Node::hbox(180));
    NodeIndex m0 = d.add_node(Node::x(180 * a));
    NodeIndex m1 = d.add_node(Node::x(180 * b));
    NodeIndex cx = d.add_node(Node::x(180 * b));
    NodeIndex cz = d.add_node(Node::z(180 * a));
    d.add_wire(in, ctrl);
    d.add_wire(ctrl, targ);
    d.add_wire(ctrl, h);
    d.add_wire(h, m0);
    d.add_wire(targ, m1);
    d.add_wire(targ, cx);
    d.add_wire(cx, cz);
    d.add_wire(cz, out);
    return d;
}

/// Two-qubit QFT without the final swap: H(0), controlled-S(0,1), H(1).
inline Diagram qft2() {
    GateList gl{2,
                {Gate::h(0), Gate::z(0, 45), Gate::z(1, 45), Gate::cnot(0, 1), Gate::z(1, 315), Gate::cnot(0, 1),
                 Gate::h(1)}};
    return from_gates(gl);
}

/// Complete graph of n Z(0) spiders with Hadamard edges; spider i carries boundary `b{i}`.
inline Diagram kn_hadamard(int n) {
    if (n < 0) {
        throw std::invalid_argument("kn_hadamard needs n >= 0");
    }
    Diagram d;
    std::vector<NodeIndex> s;
    for (int i = 0; i < n; ++i) {
        s.push_back(d.add_node(Node::z(0)));
        NodeIndex b = d.add_node(Node::boundary("b" + std::to_string(i)));
        d.add_wire(s.back(), b);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            NodeIndex h = d.add_node(Node::hbox(180));
            d.add_wire(s[static_cast<std::size_t>(i)], h);
            d.add_wire(h, s[static_cast<std::size_t>(j)]);
        }
    }
    return d;
}

/// Representative Pauli-pushing instance: Pauli phases on both qubits around a CNOT.
inline Diagram pauli_pushing() {
    GateList gl{2,
                {Gate::x(0, 180), Gate::z(1, 180), Gate::cnot(0, 1), Gate::z(0, 180), Gate::x(1, 180)}};
    return from_gates(gl);
}

inline GateList gates_from_json(const nlohmann::json &j) {
    try {
        GateList gl;
        gl.qubits = j.at("qubits").get<int>();
        for (const auto &g : j.at("gates")) {
            std::string name = g.at("g").get<std::string>();
            Gate gate;
            if (name == "H") {
                gate = Gate::h(g.at("q").get<int>());
            } else if (name == "Z") {
                gate = Gate::z(g.at("q").get<int>(), g.value("phase", 180));
            } else if (name == "X") {
                gate = Gate::x(g.at("q").get<int>(), g.value("phase", 180));
            } else if (name == "CNOT") {
                gate = Gate::cnot(g.at("c").get<int>(), g.at("t").get<int>());
            } else if (name == "CZ") {
                gate = Gate::cz(g.at("c").get<int>(), g.at("t").get<int>());
            } else if (name == "INIT0") {
                gate = Gate::init0(g.at("q").get<int>());
            } else {
                throw ParseError("unknown gate '" + name + "'");
            }
            gl.gates.push_back(gate);
        }
        return gl;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("gate list JSON: ") + e.what());
    }
}

}  // namespace zxforge
