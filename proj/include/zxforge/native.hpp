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
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zxforge/diagram.hpp"

namespace zxforge {

class PreconditionError : public std::invalid_argument {
  public:
    using std::invalid_argument::invalid_argument;
};

namespace detail {

// Z-spider neighbours reached through two-legged H(180) boxes: (neighbour, hbox).
inline std::optional<std::vector<std::pair<NodeIndex, NodeIndex>>> hadamard_neighbours(
    const Diagram &d, const std::vector<std::vector<HalfEdge>> &inc, NodeIndex s) {
    const Node &n = d.node(s);
    if (!n.is_spider() || n.color != Color::Z) {
        return std::nullopt;
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (HalfEdge h : inc[s]) {
        NodeIndex hb = d.node_of(Diagram::partner(h));
        if (hb == s || !d.node(hb).is_h180() || inc[hb].size() != 2) {
            return std::nullopt;
        }
        HalfEdge far = inc[hb][0] == Diagram::partner(h) ? inc[hb][1] : inc[hb][0];
        NodeIndex t = d.node_of(Diagram::partner(far));
        if (t == s || t == hb || !d.node(t).is_spider() || d.node(t).color != Color::Z) {
            return std::nullopt;
        }
        out.emplace_back(t, hb);
    }
    std::vector<NodeIndex> ts;
    for (auto [t, hb] : out) {
        ts.push_back(t);
    }
    std::sort(ts.begin(), ts.end());
    if (std::adjacent_find(ts.begin(), ts.end()) != ts.end()) {
        return std::nullopt;
    }
    std::sort(out.begin(), out.end());
    return out;
}

// Removes nodes and applies Hadamard-edge toggles and phase shifts in one pass.
inline Diagram rebuild(const Diagram &d, const std::vector<bool> &drop,
                       const std::vector<std::pair<NodeIndex, NodeIndex>> &toggles,
                       const std::map<NodeIndex, Phase> &shift) {
    auto inc = d.incidence();
    std::vector<bool> gone = drop;
    std::vector<std::pair<NodeIndex, NodeIndex>> add;
    for (auto [a, b] : toggles) {
        // An existing direct Hadamard edge a - H - b is removed, otherwise one is added.
        bool removed = false;
        for (HalfEdge h : inc[a]) {
            NodeIndex hb = d.node_of(Diagram::partner(h));
            if (gone[hb] || !d.node(hb).is_h180() || inc[hb].size() != 2) {
                continue;
            }
            HalfEdge far = inc[hb][0] == Diagram::partner(h) ? inc[hb][1] : inc[hb][0];
            if (d.node_of(Diagram::partner(far)) == b) {
                gone[hb] = true;
                removed = true;
                break;
            }
        }
        if (!removed) {
            add.emplace_back(a, b);
        }
    }
    Diagram out = d;
    for (auto [v, p] : shift) {
        out.node(v).phase += p;
    }
    std::vector<NodeIndex> remap(d.node_count(), 0);
    NodeIndex next = 0;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        remap[v] = gone[v] ? 0 : next++;
    }
    out.remove_nodes(gone);
    for (auto [a, b] : add) {
        NodeIndex hb = out.add_node(Node::hbox(180));
        out.add_wire(remap[a], hb);
        out.add_wire(hb, remap[b]);
    }
    return out;
}

}  // namespace detail

/// Local complementation at a Z-spider with phase 90 or 270 whose wires are all Hadamard edges to
/// distinct Z-spiders. Removes s, toggles edges among its neighbours and subtracts its phase from them.
inline Diagram local_complement(const Diagram &d, NodeIndex s) {
    auto inc = d.incidence();
    auto nb = detail::hadamard_neighbours(d, inc, s);
    if (!nb || !d.node(s).phase.is_proper_clifford()) {
        throw PreconditionError("lcomp: node " + std::to_string(s) + " is not a graph-like Z(+-90) spider");
    }
    std::vector<bool> drop(d.node_count(), false);
    drop[s] = true;
    std::vector<std::pair<NodeIndex, NodeIndex>> toggles;
    std::map<NodeIndex, Phase> shift;
    for (std::size_t i = 0; i < nb->size(); ++i) {
        drop[(*nb)[i].second] = true;
        shift[(*nb)[i].first] = -d.node(s).phase;
        for (std::size_t j = i + 1; j < nb->size(); ++j) {
            toggles.emplace_back((*nb)[i].first, (*nb)[j].first);
        }
    }
    return detail::rebuild(d, drop, toggles, shift);
}

/// Pivot along the Hadamard edge between Z-spiders u and v with phases in {0, 180}.
inline Diagram pivot(const Diagram &d, NodeIndex u, NodeIndex v) {
    auto inc = d.incidence();
    auto nu = detail::hadamard_neighbours(d, inc, u);
    auto nv = detail::hadamard_neighbours(d, inc, v);
    auto fail = [&]() {
        return PreconditionError("pivot: nodes " + std::to_string(u) + "," + std::to_string(v) +
                                 " are not adjacent graph-like Z(0/180) spiders");
    };
    if (u == v || !nu || !nv || !d.node(u).phase.is_pauli() || !d.node(v).phase.is_pauli()) {
        throw fail();
    }
    auto has = [](const std::vector<std::pair<NodeIndex, NodeIndex>> &l, NodeIndex x) {
        return std::any_of(l.begin(), l.end(), [x](const auto &p) { return p.first == x; });
    };
    if (!has(*nu, v)) {
        throw fail();
    }
    std::vector<bool> drop(d.node_count(), false);
    drop[u] = drop[v] = true;
    std::vector<NodeIndex> only_u, only_v, both;
    for (auto [t, hb] : *nu) {
        drop[hb] = true;
        if (t != v) {
            (has(*nv, t) ? both : only_u).push_back(t);
        }
    }
    for (auto [t, hb] : *nv) {
        drop[hb] = true;
        if (t != u && !has(*nu, t)) {
            only_v.push_back(t);
        }
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> toggles;
    auto cross = [&](const std::vector<NodeIndex> &a, const std::vector<NodeIndex> &b) {
        for (NodeIndex x : a) {
            for (NodeIndex y : b) {
                toggles.emplace_back(x, y);
            }
        }
    };
    cross(only_u, only_v);
    cross(only_u, both);
    cross(only_v, both);
    std::map<NodeIndex, Phase> shift;
    Phase pu = d.node(u).phase;
    Phase pv = d.node(v).phase;
    for (NodeIndex x : only_u) {
        shift[x] = pv;
    }
    for (NodeIndex x : only_v) {
        shift[x] = pu;
    }
    for (NodeIndex x : both) {
        shift[x] = pu + pv + Phase(180);
    }
    return detail::rebuild(d, drop, toggles, shift);
}

/// Colour change that toggles Hadamards: wires of s through a two-legged H(180) lose it, the other
/// wires gain one, and s changes colour. Requires at least one such H and no loops at s.
inline Diagram color_toggle(const Diagram &d, NodeIndex s) {
    auto inc = d.incidence();
    if (!d.node(s).is_spider()) {
        throw PreconditionError("toggle: node " + std::to_string(s) + " is not a spider");
    }
    std::vector<NodeIndex> far(inc[s].size());
    std::vector<NodeIndex> via(inc[s].size(), s);
    bool any_h = false;
    for (std::size_t i = 0; i < inc[s].size(); ++i) {
        HalfEdge p = Diagram::partner(inc[s][i]);
        NodeIndex t = d.node_of(p);
        if (t == s) {
            throw PreconditionError("toggle: node " + std::to_string(s) + " has a self-loop");
        }
        far[i] = t;
        if (d.node(t).is_h180() && inc[t].size() == 2) {
            HalfEdge other = inc[t][0] == p ? inc[t][1] : inc[t][0];
            NodeIndex u = d.node_of(Diagram::partner(other));
            if (u == s) {
                throw PreconditionError("toggle: node " + std::to_string(s) + " has an H-loop");
            }
            via[i] = t;
            far[i] = u;
            any_h = true;
        }
    }
    if (!any_h) {
        throw PreconditionError("toggle: node " + std::to_string(s) + " has no Hadamard wire");
    }
    // Rebuild: drop s and its H-boxes, then re-create s with the flipped colour.
    std::vector<bool> drop(d.node_count(), false);
    drop[s] = true;
    for (NodeIndex v : via) {
        if (v != s) {
            drop[v] = true;
        }
    }
    Diagram out = d;
    std::vector<NodeIndex> remap(d.node_count(), 0);
    NodeIndex next = 0;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        remap[v] = drop[v] ? 0 : next++;
    }
    out.remove_nodes(drop);
    Node flipped = d.node(s);
    flipped.color = flip(flipped.color);
    NodeIndex ns = out.add_node(flipped);
    for (std::size_t i = 0; i < far.size(); ++i) {
        if (via[i] != s) {
            out.add_wire(ns, remap[far[i]]);
        } else {
            NodeIndex hb = out.add_node(Node::hbox(180));
            out.add_wire(ns, hb);
            out.add_wire(hb, remap[far[i]]);
        }
    }
    return out;
}

/// Spiders where local_complement applies, in index order.
inline std::vector<NodeIndex> lcomp_sites(const Diagram &d) {
    auto inc = d.incidence();
    std::vector<NodeIndex> out;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (d.node(v).is_spider() && d.node(v).phase.is_proper_clifford() && detail::hadamard_neighbours(d, inc, v)) {
            out.push_back(v);
        }
    }
    return out;
}

/// Pairs (u < v) where pivot applies.
inline std::vector<std::pair<NodeIndex, NodeIndex>> pivot_sites(const Diagram &d) {
    auto inc = d.incidence();
    std::vector<std::pair<NodeIndex, NodeIndex>> out;
    for (NodeIndex u = 0; u < d.node_count(); ++u) {
        if (!d.node(u).is_spider() || !d.node(u).phase.is_pauli()) {
            continue;
        }
        auto nu = detail::hadamard_neighbours(d, inc, u);
        if (!nu) {
            continue;
        }
        for (auto [v, hb] : *nu) {
            if (v > u && d.node(v).phase.is_pauli() && detail::hadamard_neighbours(d, inc, v)) {
                out.emplace_back(u, v);
            }
        }
    }
    return out;
}

/// Spiders where color_toggle applies.
inline std::vector<NodeIndex> toggle_sites(const Diagram &d) {
    std::vector<NodeIndex> out;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (!d.node(v).is_spider()) {
            continue;
        }
        try {
            (void)color_toggle(d, v);
            out.push_back(v);
        } catch (const PreconditionError &) {
        }
    }
    return out;
}

}  // namespace zxforge
