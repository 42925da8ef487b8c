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
#include <functional>
#include <numeric>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "zxforge/diagram.hpp"

namespace zxforge {

enum class BoundaryLabels { named, anonymous };

struct CanonOptions {
    BoundaryLabels boundaries = BoundaryLabels::named;
};

/// Byte string equal for two diagrams iff they are isomorphic (attributes preserved).
struct CanonicalKey {
    std::string bytes;
    bool operator==(const CanonicalKey &) const = default;
    auto operator<=>(const CanonicalKey &) const = default;
};

namespace detail {

struct NodeLabel {
    int type = 0;
    int color = 0;
    int phase = 0;
    std::string name;
    auto operator<=>(const NodeLabel &) const = default;
};

inline NodeLabel label_of(const Node &n, const CanonOptions &opt) {
    NodeLabel l;
    l.type = static_cast<int>(n.type);
    if (n.is_spider()) {
        l.color = sign(n.color);
    }
    if (!n.is_boundary()) {
        l.phase = n.phase.degrees();
    } else if (opt.boundaries == BoundaryLabels::named) {
        l.name = n.name;
    }
    return l;
}

class Canonizer {
  public:
    Canonizer(const Diagram &d, const CanonOptions &opt) : d_(d), n_(d.node_count()), adj_(n_) {
        for (const Wire &w : d.wires()) {
            adj_[w.a].push_back(w.b);
            adj_[w.b].push_back(w.a);
        }
        labels_.reserve(n_);
        for (const Node &node : d.nodes()) {
            labels_.push_back(label_of(node, opt));
        }
        std::vector<NodeLabel> distinct = labels_;
        std::sort(distinct.begin(), distinct.end());
        distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
        std::vector<int> colors(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            colors[v] = static_cast<int>(std::lower_bound(distinct.begin(), distinct.end(), labels_[v]) - distinct.begin());
        }
        root_ = refine(std::move(colors));
    }

    CanonicalKey run() {
        if (n_ > 0) {
            std::vector<NodeIndex> path;
            search(root_, path);
        }
        return {encode_key()};
    }

  private:
    using Coloring = std::vector<int>;

    // Equitable refinement. Colours are ranks of (colour, sorted neighbour colours).
    Coloring refine(Coloring c) const {
        std::size_t cells = count_cells(c);
        std::vector<std::vector<int>> sig(n_);
        std::vector<std::size_t> order(n_);
        for (;;) {
            for (std::size_t v = 0; v < n_; ++v) {
                sig[v].clear();
                sig[v].push_back(c[v]);
                for (NodeIndex u : adj_[v]) {
                    sig[v].push_back(c[u]);
                }
                std::sort(sig[v].begin() + 1, sig[v].end());
            }
            std::iota(order.begin(), order.end(), 0);
            std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return sig[a] < sig[b]; });
            Coloring next(n_);
            int rank = 0;
            for (std::size_t i = 0; i < n_; ++i) {
                if (i > 0 && sig[order[i]] != sig[order[i - 1]]) {
                    rank = static_cast<int>(i);
                }
                next[order[i]] = rank;
            }
            std::size_t next_cells = count_cells(next);
            c = std::move(next);
            if (next_cells == cells) {
                return c;
            }
            cells = next_cells;
        }
    }

    static std::size_t count_cells(const Coloring &c) {
        std::vector<int> s = c;
        std::sort(s.begin(), s.end());
        return static_cast<std::size_t>(std::unique(s.begin(), s.end()) - s.begin());
    }

    // Sorted (min,max) position pairs; colours of a discrete partition are positions.
    std::vector<std::uint32_t> leaf_code(const Coloring &c) const {
        std::vector<std::uint32_t> code;
        code.reserve(2 * d_.wire_count());
        std::vector<std::pair<std::uint32_t, std::uint32_t>> edges;
        edges.reserve(d_.wire_count());
        for (const Wire &w : d_.wires()) {
            auto a = static_cast<std::uint32_t>(c[w.a]);
            auto b = static_cast<std::uint32_t>(c[w.b]);
            edges.emplace_back(std::min(a, b), std::max(a, b));
        }
        std::sort(edges.begin(), edges.end());
        for (auto [a, b] : edges) {
            code.push_back(a);
            code.push_back(b);
        }
        return code;
    }

    // Returns the depth to unwind to: a value smaller than the current depth aborts this subtree.
    std::size_t search(const Coloring &c, std::vector<NodeIndex> &path) {
        std::size_t depth = path.size();
        // Target cell: smallest colour value held by more than one vertex.
        std::vector<std::size_t> size(n_, 0);
        for (int x : c) {
            ++size[static_cast<std::size_t>(x)];
        }
        int target = -1;
        for (std::size_t x = 0; x < n_; ++x) {
            if (size[x] > 1) {
                target = static_cast<int>(x);
                break;
            }
        }
        if (target < 0) {
            return visit_leaf(c, path);
        }
        std::vector<NodeIndex> cell;
        for (std::size_t v = 0; v < n_; ++v) {
            if (c[v] == target) {
                cell.push_back(static_cast<NodeIndex>(v));
            }
        }
        std::vector<NodeIndex> explored;
        for (NodeIndex v : cell) {
            bool on_first_path = have_first_ && path.size() < first_path_.size() &&
                                 std::equal(path.begin(), path.end(), first_path_.begin());
            if (on_first_path && !explored.empty() && same_orbit(explored, v, path)) {
                continue;
            }
            Coloring next(n_);
            for (std::size_t u = 0; u < n_; ++u) {
                next[u] = 2 * c[u] + 1;
            }
            next[v] = 2 * c[v];
            path.push_back(v);
            std::size_t back = search(refine(std::move(next)), path);
            path.pop_back();
            explored.push_back(v);
            if (back < depth) {
                return back;
            }
        }
        return depth;
    }

    std::size_t visit_leaf(const Coloring &c, const std::vector<NodeIndex> &path) {
        std::vector<std::uint32_t> code = leaf_code(c);
        if (!have_first_) {
            have_first_ = true;
            first_path_ = path;
            first_code_ = code;
            first_leaf_ = c;
            best_code_ = std::move(code);
            best_leaf_ = c;
            return path.size();
        }
        if (code == first_code_) {
            record_automorphism(first_leaf_, c);
            std::size_t common = 0;
            while (common < path.size() && common < first_path_.size() && path[common] == first_path_[common]) {
                ++common;
            }
            return common;
        }
        if (code < best_code_) {
            best_code_ = std::move(code);
            best_leaf_ = c;
        } else if (code == best_code_) {
            record_automorphism(best_leaf_, c);
        }
        return path.size();
    }

    // gamma maps v to the vertex holding v's position in the other leaf.
    void record_automorphism(const Coloring &a, const Coloring &b) {
        std::vector<NodeIndex> at(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            at[static_cast<std::size_t>(b[v])] = static_cast<NodeIndex>(v);
        }
        std::vector<NodeIndex> gamma(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            gamma[v] = at[static_cast<std::size_t>(a[v])];
        }
        generators_.push_back(std::move(gamma));
    }

    // Orbit test under the generators that fix the current path pointwise.
    bool same_orbit(const std::vector<NodeIndex> &explored, NodeIndex v, const std::vector<NodeIndex> &path) const {
        std::vector<NodeIndex> parent(n_);
        std::iota(parent.begin(), parent.end(), 0);
        std::function<NodeIndex(NodeIndex)> find = [&](NodeIndex x) {
            while (parent[x] != x) {
                parent[x] = parent[parent[x]];
                x = parent[x];
            }
            return x;
        };
        bool any = false;
        for (const auto &g : generators_) {
            bool fixes = std::all_of(path.begin(), path.end(), [&](NodeIndex p) { return g[p] == p; });
            if (!fixes) {
                continue;
            }
            any = true;
            for (std::size_t x = 0; x < n_; ++x) {
                NodeIndex ra = find(static_cast<NodeIndex>(x));
                NodeIndex rb = find(g[x]);
                if (ra != rb) {
                    parent[ra] = rb;
                }
            }
        }
        if (!any) {
            return false;
        }
        NodeIndex rv = find(v);
        return std::any_of(explored.begin(), explored.end(), [&](NodeIndex u) { return find(u) == rv; });
    }

    std::string encode_key() const {
        std::vector<std::size_t> at(n_);
        for (std::size_t v = 0; v < n_; ++v) {
            at[static_cast<std::size_t>(best_leaf_.empty() ? 0 : best_leaf_[v])] = v;
        }
        std::string out;
        auto put = [&out](std::int64_t x) {
            out += std::to_string(x);
            out += ',';
        };
        put(static_cast<std::int64_t>(n_));
        put(static_cast<std::int64_t>(d_.wire_count()));
        out += '|';
        for (std::size_t p = 0; p < n_; ++p) {
            const NodeLabel &l = labels_[at[p]];
            put(l.type);
            put(l.color);
            put(l.phase);
            if (!l.name.empty() || l.type == static_cast<int>(NodeType::boundary)) {
                put(static_cast<std::int64_t>(l.name.size()));
                out += l.name;
            }
            out += ';';
        }
        out += '|';
        for (std::uint32_t x : best_code_) {
            put(x);
        }
        return out;
    }

    const Diagram &d_;
    std::size_t n_;
    std::vector<std::vector<NodeIndex>> adj_;
    std::vector<NodeLabel> labels_;
    Coloring root_;

    bool have_first_ = false;
    std::vector<NodeIndex> first_path_;
    std::vector<std::uint32_t> first_code_;
    Coloring first_leaf_;
    std::vector<std::uint32_t> best_code_;
    Coloring best_leaf_;
    std::vector<std::vector<NodeIndex>> generators_;
};

}  // namespace detail

inline CanonicalKey canonical_key(const Diagram &d, const CanonOptions &opt = {}) {
    return detail::Canonizer(d, opt).run();
}

/// Brute-force isomorphism test for small diagrams (at most 8 nodes).
inline bool iso_oracle(const Diagram &a, const Diagram &b, const CanonOptions &opt = {}) {
    std::size_t n = a.node_count();
    if (n > 8 || b.node_count() > 8) {
        throw std::invalid_argument("iso_oracle supports at most 8 nodes");
    }
    if (n != b.node_count() || a.wire_count() != b.wire_count()) {
        return false;
    }
    std::vector<std::pair<NodeIndex, NodeIndex>> eb;
    for (const Wire &w : b.wires()) {
        eb.emplace_back(std::min(w.a, w.b), std::max(w.a, w.b));
    }
    std::sort(eb.begin(), eb.end());
    std::vector<NodeIndex> perm(n);
    std::iota(perm.begin(), perm.end(), 0);
    do {
        bool ok = true;
        for (std::size_t v = 0; v < n && ok; ++v) {
            ok = detail::label_of(a.node(static_cast<NodeIndex>(v)), opt) == detail::label_of(b.node(perm[v]), opt);
        }
        if (!ok) {
            continue;
        }
        std::vector<std::pair<NodeIndex, NodeIndex>> ea;
        for (const Wire &w : a.wires()) {
            NodeIndex x = perm[w.a];
            NodeIndex y = perm[w.b];
            ea.emplace_back(std::min(x, y), std::max(x, y));
        }
        std::sort(ea.begin(), ea.end());
        if (ea == eb) {
            return true;
        }
    } while (std::next_permutation(perm.begin(), perm.end()));
    return false;
}

}  // namespace zxforge
