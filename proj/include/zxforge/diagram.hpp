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
#include <cstdint>
#include <map>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zxforge/phase.hpp"

namespace zxforge {

enum class NodeType : std::uint8_t { spider, hbox, boundary };

struct Node {
    NodeType type = NodeType::spider;
    Color color = Color::Z;  // meaningful for spiders only
    Phase phase;             // meaningful for spiders and H-boxes
    std::string name;        // meaningful for boundaries only

    static Node spider(Color c, Phase p) { return {NodeType::spider, c, p, {}}; }
    static Node z(Phase p = 0) { return spider(Color::Z, p); }
    static Node x(Phase p = 0) { return spider(Color::X, p); }
    static Node hbox(Phase p = 180) { return {NodeType::hbox, Color::Z, p, {}}; }
    static Node boundary(std::string n) { return {NodeType::boundary, Color::Z, 0, std::move(n)}; }

    [[nodiscard]] bool is_spider() const { return type == NodeType::spider; }
    [[nodiscard]] bool is_hbox() const { return type == NodeType::hbox; }
    [[nodiscard]] bool is_boundary() const { return type == NodeType::boundary; }
    /// Arity is not checked here.
    [[nodiscard]] bool is_h180() const { return type == NodeType::hbox && phase == Phase(180); }

    bool operator==(const Node &) const = default;
};

using NodeIndex = std::uint32_t;
/// Half-edge 2*w + e is end e of wire w. Its partner is h ^ 1.
using HalfEdge = std::uint32_t;

struct Wire {
    NodeIndex a = 0;
    NodeIndex b = 0;
    bool operator==(const Wire &) const = default;
};

enum class DiagramErrorKind { dangling_endpoint, boundary_degree, duplicate_id };

class DiagramError : public std::runtime_error {
  public:
    DiagramError(DiagramErrorKind k, const std::string &what) : std::runtime_error(what), kind(k) {}
    DiagramErrorKind kind;
};

/// Raised when a size limit (states, tensor legs, partitions) is exceeded.
class ResourceLimit : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Undirected multigraph of spiders, H-boxes and boundaries. Nodes are addressed by dense index.
class Diagram {
  public:
    NodeIndex add_node(Node n) {
        nodes_.push_back(std::move(n));
        return static_cast<NodeIndex>(nodes_.size() - 1);
    }

    std::size_t add_wire(NodeIndex a, NodeIndex b) {
        if (a >= nodes_.size() || b >= nodes_.size()) {
            throw DiagramError(DiagramErrorKind::dangling_endpoint, "wire endpoint out of range");
        }
        wires_.push_back({a, b});
        return wires_.size() - 1;
    }

    [[nodiscard]] const std::vector<Node> &nodes() const { return nodes_; }
    [[nodiscard]] const std::vector<Wire> &wires() const { return wires_; }
    [[nodiscard]] const Node &node(NodeIndex i) const { return nodes_.at(i); }
    Node &node(NodeIndex i) { return nodes_.at(i); }
    [[nodiscard]] std::size_t node_count() const { return nodes_.size(); }
    [[nodiscard]] std::size_t wire_count() const { return wires_.size(); }

    [[nodiscard]] NodeIndex node_of(HalfEdge h) const {
        const Wire &w = wires_[h >> 1];
        return (h & 1) ? w.b : w.a;
    }
    static constexpr HalfEdge partner(HalfEdge h) { return h ^ 1U; }

    /// Half-edges per node, in wire order. A self-loop contributes two entries.
    [[nodiscard]] std::vector<std::vector<HalfEdge>> incidence() const {
        std::vector<std::vector<HalfEdge>> inc(nodes_.size());
        for (std::size_t w = 0; w < wires_.size(); ++w) {
            inc[wires_[w].a].push_back(static_cast<HalfEdge>(2 * w));
            inc[wires_[w].b].push_back(static_cast<HalfEdge>(2 * w + 1));
        }
        return inc;
    }

    [[nodiscard]] std::vector<std::size_t> degrees() const {
        std::vector<std::size_t> deg(nodes_.size(), 0);
        for (const Wire &w : wires_) {
            ++deg[w.a];
            ++deg[w.b];
        }
        return deg;
    }

    [[nodiscard]] std::size_t degree(NodeIndex i) const {
        std::size_t d = 0;
        for (const Wire &w : wires_) {
            d += (w.a == i) + (w.b == i);
        }
        return d;
    }

    [[nodiscard]] std::size_t count(NodeType t) const {
        return static_cast<std::size_t>(
            std::count_if(nodes_.begin(), nodes_.end(), [t](const Node &n) { return n.type == t; }));
    }
    [[nodiscard]] std::size_t spider_count() const { return count(NodeType::spider); }
    [[nodiscard]] std::size_t hbox_count() const { return count(NodeType::hbox); }
    [[nodiscard]] std::size_t boundary_count() const { return count(NodeType::boundary); }

    /// Boundary node indices ordered by name, then index.
    [[nodiscard]] std::vector<NodeIndex> boundaries() const {
        std::vector<NodeIndex> out;
        for (NodeIndex i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].is_boundary()) {
                out.push_back(i);
            }
        }
        std::stable_sort(out.begin(), out.end(),
                         [&](NodeIndex a, NodeIndex b) { return nodes_[a].name < nodes_[b].name; });
        return out;
    }

    /// Drops the given nodes and every wire touching them, compacting indices in order.
    void remove_nodes(const std::vector<bool> &drop) {
        std::vector<NodeIndex> remap(nodes_.size(), 0);
        std::vector<Node> kept;
        for (NodeIndex i = 0; i < nodes_.size(); ++i) {
            if (!drop[i]) {
                remap[i] = static_cast<NodeIndex>(kept.size());
                kept.push_back(std::move(nodes_[i]));
            }
        }
        std::vector<Wire> kw;
        for (const Wire &w : wires_) {
            if (!drop[w.a] && !drop[w.b]) {
                kw.push_back({remap[w.a], remap[w.b]});
            }
        }
        nodes_ = std::move(kept);
        wires_ = std::move(kw);
    }

    void remove_wires(const std::vector<bool> &drop) {
        std::vector<Wire> kw;
        for (std::size_t w = 0; w < wires_.size(); ++w) {
            if (!drop[w]) {
                kw.push_back(wires_[w]);
            }
        }
        wires_ = std::move(kw);
    }

    /// Throws if a boundary does not have exactly one wire.
    void validate() const {
        auto deg = degrees();
        for (NodeIndex i = 0; i < nodes_.size(); ++i) {
            if (nodes_[i].is_boundary() && deg[i] != 1) {
                throw DiagramError(DiagramErrorKind::boundary_degree,
                                   "boundary '" + nodes_[i].name + "' has degree " + std::to_string(deg[i]));
            }
        }
    }

    bool operator==(const Diagram &) const = default;

  private:
    std::vector<Node> nodes_;
    std::vector<Wire> wires_;
};

/// Node with a caller-chosen identifier, as found in diagram files.
struct NodeSpec {
    long long id = 0;
    Node node;
};

/// Builds a validated diagram. Node order is preserved; ids are mapped to dense indices.
inline Diagram make_diagram(const std::vector<NodeSpec> &nodes,
                            const std::vector<std::pair<long long, long long>> &wires) {
    Diagram d;
    std::map<long long, NodeIndex> index;
    for (const NodeSpec &n : nodes) {
        if (!index.emplace(n.id, d.add_node(n.node)).second) {
            throw DiagramError(DiagramErrorKind::duplicate_id, "duplicate node id " + std::to_string(n.id));
        }
    }
    for (const auto &[a, b] : wires) {
        auto ia = index.find(a);
        auto ib = index.find(b);
        if (ia == index.end() || ib == index.end()) {
            throw DiagramError(DiagramErrorKind::dangling_endpoint,
                               "wire [" + std::to_string(a) + "," + std::to_string(b) + "] references an undeclared id");
        }
        d.add_wire(ia->second, ib->second);
    }
    d.validate();
    return d;
}

namespace detail {

inline bool find_self_loop(const Diagram &d, std::size_t &wire) {
    for (std::size_t w = 0; w < d.wire_count(); ++w) {
        const Wire &e = d.wires()[w];
        if (e.a == e.b && d.node(e.a).is_spider()) {
            wire = w;
            return true;
        }
    }
    return false;
}

inline bool find_h_loop(const Diagram &d, const std::vector<std::vector<HalfEdge>> &inc, NodeIndex &hbox,
                        NodeIndex &spider) {
    for (NodeIndex h = 0; h < d.node_count(); ++h) {
        if (!d.node(h).is_h180() || inc[h].size() != 2) {
            continue;
        }
        NodeIndex s0 = d.node_of(Diagram::partner(inc[h][0]));
        NodeIndex s1 = d.node_of(Diagram::partner(inc[h][1]));
        if (s0 == s1 && s0 != h && d.node(s0).is_spider()) {
            hbox = h;
            spider = s0;
            return true;
        }
    }
    return false;
}

}  // namespace detail

/// Removes plain self-loops on spiders and H(180) self-loops (adding 180 to the spider), to a fixpoint.
inline Diagram normalize(Diagram d) {
    for (;;) {
        std::size_t w = 0;
        if (detail::find_self_loop(d, w)) {
            std::vector<bool> drop(d.wire_count(), false);
            drop[w] = true;
            d.remove_wires(drop);
            continue;
        }
        NodeIndex h = 0;
        NodeIndex s = 0;
        if (detail::find_h_loop(d, d.incidence(), h, s)) {
            d.node(s).phase += Phase(180);
            std::vector<bool> drop(d.node_count(), false);
            drop[h] = true;
            d.remove_nodes(drop);
            continue;
        }
        return d;
    }
}

/// True if normalize would change nothing.
inline bool is_normalized(const Diagram &d) {
    std::size_t w = 0;
    NodeIndex h = 0;
    NodeIndex s = 0;
    return !detail::find_self_loop(d, w) && !detail::find_h_loop(d, d.incidence(), h, s);
}

}  // namespace zxforge
