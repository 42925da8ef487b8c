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

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "json.hpp"
#include "zxforge/diagram.hpp"

namespace zxforge {

class ParseError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

inline nlohmann::json diagram_to_json(const Diagram &d) {
    nlohmann::json nodes = nlohmann::json::array();
    for (NodeIndex i = 0; i < d.node_count(); ++i) {
        const Node &n = d.node(i);
        nlohmann::json j;
        j["id"] = i;
        switch (n.type) {
            case NodeType::spider:
                j["kind"] = n.color == Color::Z ? "z" : "x";
                j["phase"] = n.phase.degrees();
                break;
            case NodeType::hbox:
                j["kind"] = "h";
                j["phase"] = n.phase.degrees();
                break;
            case NodeType::boundary:
                j["kind"] = "boundary";
                j["name"] = n.name;
                break;
        }
        nodes.push_back(std::move(j));
    }
    nlohmann::json wires = nlohmann::json::array();
    for (const Wire &w : d.wires()) {
        wires.push_back({w.a, w.b});
    }
    return {{"nodes", std::move(nodes)}, {"wires", std::move(wires)}};
}

inline Diagram diagram_from_json(const nlohmann::json &j) {
    try {
        std::vector<NodeSpec> nodes;
        for (const auto &n : j.at("nodes")) {
            NodeSpec s;
            s.id = n.at("id").get<long long>();
            std::string kind = n.at("kind").get<std::string>();
            int phase = n.value("phase", kind == "h" ? 180 : 0);
            if (kind == "z") {
                s.node = Node::z(phase);
            } else if (kind == "x") {
                s.node = Node::x(phase);
            } else if (kind == "h") {
                s.node = Node::hbox(phase);
            } else if (kind == "boundary") {
                s.node = Node::boundary(n.value("name", std::string()));
            } else {
                throw ParseError("unknown node kind '" + kind + "'");
            }
            nodes.push_back(std::move(s));
        }
        std::vector<std::pair<long long, long long>> wires;
        for (const auto &w : j.at("wires")) {
            wires.emplace_back(w.at(0).get<long long>(), w.at(1).get<long long>());
        }
        return make_diagram(nodes, wires);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("diagram JSON: ") + e.what());
    }
}

inline nlohmann::json read_json_file(const std::string &path) {
    std::ifstream in(path);
    if (!in) {
        throw ParseError("cannot open '" + path + "'");
    }
    try {
        return nlohmann::json::parse(in);
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(path + ": " + e.what());
    }
}

inline void write_text_file(const std::string &path, const std::string &text) {
    std::ofstream out(path);
    if (!out) {
        throw std::runtime_error("cannot write '" + path + "'");
    }
    out << text;
}

}  // namespace zxforge
