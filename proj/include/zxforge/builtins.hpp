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

#include <algorithm>
#include <map>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "zxforge/match.hpp"
#include "zxforge/native.hpp"
#include "zxforge/rule.hpp"

namespace zxforge {

enum class NativeKind { lcomp, pivot, toggle };

/// A schema rule or one of the algorithmic rules, with its gating.
struct AnyRule {
    std::string name;
    Gating gating;
    std::variant<Rule, NativeKind> body;
};

namespace detail {

// Schema sources of the builtin rules. "<*>X" is a group with the anonymous label.
inline const std::map<std::string, std::string> &builtin_sources() {
    static const std::map<std::string, std::string> src = {
        {"f", R"j({"name":"f",
            "lhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["L","<p>P"]},
                   {"kind":"spider","color":"C","phase":"B","endpoints":["L","<q>Q"]}],
            "guard":["AB = A+B"],
            "rhs":[{"kind":"spider","color":"C","phase":"AB","endpoints":["<p>P","<q>Q"]}]})j"},
        {"id", R"j({"name":"id",
            "lhs":[{"kind":"spider","color":"C","phase":0,"endpoints":["L1","L2"]}],
            "connect":[["L1","L2"]]})j"},
        {"hh", R"j({"name":"hh",
            "lhs":[{"kind":"h","phase":180,"endpoints":["L1","L2"]},
                   {"kind":"h","phase":180,"endpoints":["L2","L3"]}],
            "connect":[["L1","L3"]]})j"},
        {"hopf", R"j({"name":"hopf",
            "lhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["L1","L2","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["L1","L2","<q>Q"]}],
            "guard":["C1*C2 == -1"],
            "rhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["<q>Q"]}]})j"},
        {"pi", R"j({"name":"pi",
            "lhs":[{"kind":"spider","color":"C1","phase":180,"endpoints":["L1","L2"]},
                   {"kind":"spider","color":"C2","phase":"A","endpoints":["L2","<*>L3"]}],
            "guard":["AA = -A","C1*C2 == -1"],
            "rhs":[{"kind":"spider","color":"C2","phase":"AA","endpoints":["L1","<*>K"]},
                   {"kind":"spider","color":"C1","phase":180,"endpoints":["K","L3"],"replicate":"*"}]})j"},
        {"c", R"j({"name":"c",
            "lhs":[{"kind":"spider","color":"C1","phase":0,"endpoints":["L1"]},
                   {"kind":"spider","color":"C2","phase":"A","endpoints":["L1","<*>L2"]}],
            "guard":["int(A)","C1*C2 == -1"],
            "rhs":[{"kind":"spider","color":"C1","phase":0,"endpoints":["L2"],"replicate":"*"}]})j"},
        {"c_pi", R"j({"name":"c_pi",
            "lhs":[{"kind":"spider","color":"C1","phase":"P","endpoints":["L1"]},
                   {"kind":"spider","color":"C2","phase":"A","endpoints":["L1","<*>L2"]}],
            "guard":["P+P == 0","C1*C2 == -1"],
            "rhs":[{"kind":"spider","color":"C1","phase":"P","endpoints":["L2"],"replicate":"*"}]})j"},
        {"h", R"j({"name":"h",
            "lhs":[{"kind":"spider","color":"C","phase":"A","endpoints":[{"wire":"L1","group":"","min":1}]},
                   {"kind":"h","phase":180,"endpoints":["L1","L2"],"replicate":"*"}],
            "guard":["int(A)","CC = -C"],
            "rhs":[{"kind":"spider","color":"CC","phase":"A","endpoints":["<*>L2"]}]})j"},
        {"b", R"j({"name":"b",
            "lhs":[{"kind":"z","phase":0,"endpoints":["<M>L1","L2"]},
                   {"kind":"x","phase":0,"endpoints":["L2","<N>L3"]}],
            "rhs":[{"kind":"x","phase":0,"endpoints":["L1","<N>K"],"replicate":"M"},
                   {"kind":"z","phase":0,"endpoints":["<M>K","L3"],"replicate":"N"}]})j"},
        {"idgen_g", R"j({"name":"idgen_g",
            "lhs":[{"kind":"spider","color":"C1","phase":"A1","endpoints":["L","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"A2","endpoints":["L","<q>Q"]}],
            "rhs":[{"kind":"spider","color":"C1","phase":"A1","endpoints":["<p>P","K1"]},
                   {"kind":"spider","color":"C2","phase":"A2","endpoints":["<q>Q","K2"]},
                   {"kind":"z","phase":0,"endpoints":["K1","K2"]}],
            "gating":{"budget":"idgen_g"}})j"},
        // Bridges two spiders through a fresh Z(0); not an equation, kept for path-count comparison.
        {"idgen_g_literal", R"j({"name":"idgen_g_literal",
            "lhs":[{"kind":"spider","color":"C1","phase":"A1","endpoints":[{"wire":"P","group":"p","min":1}]},
                   {"kind":"spider","color":"C2","phase":"A2","endpoints":[{"wire":"Q","group":"q","min":1}]}],
            "rhs":[{"kind":"spider","color":"C1","phase":"A1","endpoints":["<p>P","K1"]},
                   {"kind":"spider","color":"C2","phase":"A2","endpoints":["<q>Q","K2"]},
                   {"kind":"z","phase":0,"endpoints":["K1","K2"]}],
            "gating":{"budget":"idgen_g"}})j"},
        {"zh1", R"j({"name":"zh1",
            "lhs":[{"kind":"x","phase":"A","endpoints":["L1","L2"]},
                   {"kind":"h","phase":180,"endpoints":["L2","<*>L3"]}],
            "guard":["int(A)"],
            "rhs":[{"kind":"h","phase":180,"endpoints":["L1","<*>K"]},
                   {"kind":"h","phase":"A","endpoints":["<*>L4"]},
                   {"kind":"z","phase":0,"endpoints":["K","L3","L4"],"replicate":"*"}]})j"},
        {"zh2", R"j({"name":"zh2",
            "lhs":[{"kind":"z","phase":0,"endpoints":["L1"]},
                   {"kind":"h","phase":"A","endpoints":["<*>L2"]}],
            "guard":["int(A)"],
            "rhs":[{"kind":"z","phase":0,"endpoints":["L1","L3","L4"]},
                   {"kind":"x","phase":180,"endpoints":["L3","L5"]},
                   {"kind":"z","phase":0,"endpoints":["L2","L6","L7"],"replicate":"*"},
                   {"kind":"h","phase":"A","endpoints":["L5","<*>L6"]},
                   {"kind":"h","phase":"A","endpoints":["L4","<*>L7"]}]})j"},
        {"zh3", R"j({"name":"zh3",
            "lhs":[{"kind":"z","phase":0,"endpoints":["L1","L2","L3"],"replicate":"*"},
                   {"kind":"h","phase":"A","endpoints":["<*>L1"]},
                   {"kind":"h","phase":"B","endpoints":["<*>L2"]}],
            "guard":["int(A)","int(B)","AB = A+B"],
            "rhs":[{"kind":"h","phase":"AB","endpoints":["<*>L3"]}]})j"},
        {"f_rev", R"j({"name":"f_rev",
            "lhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["<p>P","<q>Q"]}],
            "rhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["<p>P","K"]},
                   {"kind":"spider","color":"C","phase":0,"endpoints":["K","<q>Q"]}],
            "gating":{"budget":"f_rev"}})j"},
        {"id_rev", R"j({"name":"id_rev",
            "lhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["L","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["L","<q>Q"]}],
            "rhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["K1","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["K2","<q>Q"]},
                   {"kind":"z","phase":0,"endpoints":["K1","K2"]}],
            "gating":{"budget":"id_rev"}})j"},
        {"hh_rev", R"j({"name":"hh_rev",
            "lhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["L","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["L","<q>Q"]}],
            "rhs":[{"kind":"spider","color":"C1","phase":"A","endpoints":["K1","<p>P"]},
                   {"kind":"spider","color":"C2","phase":"B","endpoints":["K2","<q>Q"]},
                   {"kind":"h","phase":180,"endpoints":["K1","M"]},
                   {"kind":"h","phase":180,"endpoints":["M","K2"]}],
            "gating":{"budget":"hh_rev"}})j"},
        {"c_rev", R"j({"name":"c_rev",
            "lhs":[{"kind":"spider","color":"C1","phase":0,"endpoints":["L"]}],
            "guard":["C2 = -C1"],
            "rhs":[{"kind":"spider","color":"C1","phase":0,"endpoints":["K"]},
                   {"kind":"spider","color":"C2","phase":0,"endpoints":["K","L"]}],
            "gating":{"budget":"c_rev"}})j"},
        {"loop", R"j({"name":"loop",
            "lhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["L","L","<*>R"]}],
            "rhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["<*>R"]}]})j"},
        {"hloop", R"j({"name":"hloop",
            "lhs":[{"kind":"spider","color":"C","phase":"A","endpoints":["L1","L2","<*>R"]},
                   {"kind":"h","phase":180,"endpoints":["L1","L2"]}],
            "guard":["AA = A+180"],
            "rhs":[{"kind":"spider","color":"C","phase":"AA","endpoints":["<*>R"]}]})j"},
        {"lemma_ih3", R"j({"name":"lemma_ih3",
            "lhs":[{"kind":"z","phase":0,"endpoints":["A1","B1","<p>P"]},
                   {"kind":"z","phase":0,"endpoints":["A2","C1","<q>Q"]},
                   {"kind":"z","phase":0,"endpoints":["B2","C2","<r>R"]},
                   {"kind":"h","phase":180,"endpoints":["A1","A2"]},
                   {"kind":"h","phase":180,"endpoints":["B1","B2"]},
                   {"kind":"h","phase":180,"endpoints":["C1","C2"]}],
            "rhs":[{"kind":"z","phase":90,"endpoints":["<p>P","X1"]},
                   {"kind":"z","phase":90,"endpoints":["<q>Q","X2"]},
                   {"kind":"z","phase":90,"endpoints":["<r>R","X3"]},
                   {"kind":"h","phase":180,"endpoints":["X1","Y1"]},
                   {"kind":"h","phase":180,"endpoints":["X2","Y2"]},
                   {"kind":"h","phase":180,"endpoints":["X3","Y3"]},
                   {"kind":"z","phase":90,"endpoints":["Y1","Y2","Y3"]}],
            "gating":{"token":"t_ih"}})j"},
        {"lemma_ext", R"j({"name":"lemma_ext",
            "lhs":[{"kind":"z","phase":90,"endpoints":["Y1","Y2","Y3"]},
                   {"kind":"h","phase":180,"endpoints":["X1","Y1"]},
                   {"kind":"h","phase":180,"endpoints":["X2","Y2"]},
                   {"kind":"h","phase":180,"endpoints":["X3","Y3"]},
                   {"kind":"z","phase":90,"endpoints":["X1","V1","<p>P"]},
                   {"kind":"z","phase":90,"endpoints":["X2","V2","<q>Q"]},
                   {"kind":"z","phase":90,"endpoints":["X3","V3","<r>R"]},
                   {"kind":"h","phase":180,"endpoints":["V1","W1"]},
                   {"kind":"h","phase":180,"endpoints":["V2","W2"]},
                   {"kind":"h","phase":180,"endpoints":["V3","W3"]},
                   {"kind":"z","phase":0,"endpoints":["W1","W2","W3","<s>S"]}],
            "rhs":[{"kind":"z","phase":90,"endpoints":["Z1","Z2","Z3","Z4"]},
                   {"kind":"h","phase":180,"endpoints":["U1","Z1"]},
                   {"kind":"h","phase":180,"endpoints":["U2","Z2"]},
                   {"kind":"h","phase":180,"endpoints":["U3","Z3"]},
                   {"kind":"h","phase":180,"endpoints":["U4","Z4"]},
                   {"kind":"z","phase":90,"endpoints":["U1","<p>P"]},
                   {"kind":"z","phase":90,"endpoints":["U2","<q>Q"]},
                   {"kind":"z","phase":90,"endpoints":["U3","<r>R"]},
                   {"kind":"z","phase":90,"endpoints":["U4","<s>S"]}],
            "gating":{"token":"t_ext"}})j"},
    };
    return src;
}

}  // namespace detail

/// Names of the builtin schema rules, plus "lcomp", "pivot" and "h_toggle".
inline std::vector<std::string> builtin_names() {
    std::vector<std::string> out;
    for (const auto &[name, src] : detail::builtin_sources()) {
        out.push_back(name);
    }
    out.push_back("h_toggle");
    out.push_back("lcomp");
    out.push_back("pivot");
    std::sort(out.begin(), out.end());
    return out;
}

inline const Rule &builtin_schema(const std::string &name) {
    static const std::map<std::string, Rule> cache = [] {
        std::map<std::string, Rule> m;
        for (const auto &[n, src] : detail::builtin_sources()) {
            m.emplace(n, parse_rule(src));
        }
        return m;
    }();
    auto it = cache.find(name);
    if (it == cache.end()) {
        throw std::invalid_argument("unknown builtin rule '" + name + "'");
    }
    return it->second;
}

/// Builtin rule by name. "h_toggle" is the Hadamard-toggling colour change.
inline AnyRule builtin_rule(const std::string &name) {
    if (name == "lcomp") {
        return {name, {}, NativeKind::lcomp};
    }
    if (name == "pivot") {
        return {name, {}, NativeKind::pivot};
    }
    if (name == "h_toggle") {
        return {name, {}, NativeKind::toggle};
    }
    const Rule &r = builtin_schema(name);
    return {name, r.gating, r};
}

inline AnyRule wrap_rule(const Rule &r) { return {r.name, r.gating, r}; }

/// Every result of applying the rule once, in match order.
inline std::vector<Diagram> rewrite_all(const AnyRule &rule, const Diagram &d, bool normalize_result = false) {
    std::vector<Diagram> out;
    auto finish = [&](Diagram x) { out.push_back(normalize_result ? normalize(std::move(x)) : std::move(x)); };
    if (const Rule *r = std::get_if<Rule>(&rule.body)) {
        for (const Match &m : find_matches(*r, d)) {
            finish(apply(*r, m, d));
        }
        return out;
    }
    switch (std::get<NativeKind>(rule.body)) {
        case NativeKind::lcomp:
            for (NodeIndex s : lcomp_sites(d)) {
                finish(local_complement(d, s));
            }
            break;
        case NativeKind::pivot:
            for (auto [u, v] : pivot_sites(d)) {
                finish(pivot(d, u, v));
            }
            break;
        case NativeKind::toggle:
            for (NodeIndex s : toggle_sites(d)) {
                finish(color_toggle(d, s));
            }
            break;
    }
    return out;
}

}  // namespace zxforge
