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
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zxforge/diagram.hpp"
#include "zxforge/rule.hpp"

namespace zxforge {

inline constexpr std::size_t kDefaultPartitionCap = std::size_t{1} << 16;

/// (label, index) pairs sorted by label.
using IndexTuple = std::vector<std::pair<std::string, std::size_t>>;

/// One way of embedding a rule's left-hand side.
struct Match {
    /// Node per left-hand shape; unused for replicated shapes.
    std::vector<NodeIndex> nodes;
    /// Instance nodes per replicated left-hand shape (empty otherwise).
    std::vector<std::vector<NodeIndex>> instances;
    /// Half-edges per shape and endpoint. Fixed endpoints of plain shapes hold one entry; groups hold
    /// one entry per group index; fixed endpoints of replicated shapes hold one entry per instance.
    std::vector<std::vector<std::vector<HalfEdge>>> edges;
    std::map<std::string, std::size_t> cardinality;
    Binding binding;
    std::uint64_t fingerprint = 0;
};

inline std::uint64_t fingerprint(const Diagram &d) {
    std::uint64_t h = 1469598103934665603ULL;
    auto mix = [&h](std::uint64_t x) {
        h ^= x;
        h *= 1099511628211ULL;
    };
    mix(d.node_count());
    for (const Node &n : d.nodes()) {
        mix(static_cast<std::uint64_t>(n.type));
        mix(static_cast<std::uint64_t>(sign(n.color) + 2));
        mix(static_cast<std::uint64_t>(n.phase.degrees()));
        for (char c : n.name) {
            mix(static_cast<unsigned char>(c));
        }
    }
    mix(d.wire_count());
    for (const Wire &w : d.wires()) {
        mix(w.a);
        mix(w.b);
    }
    return h;
}

namespace detail {

struct EndpointInfo {
    WireRole role = WireRole::context;
    Occurrence other;  // the other occurrence of the variable
};

class MatchSearch {
  public:
    MatchSearch(const Rule &r, const Diagram &d, std::size_t cap)
        : r_(r), d_(d), inc_(d.incidence()), cap_(cap), n_shapes_(r.lhs.size()) {
        auto occ = wire_occurrences(r);
        info_.resize(n_shapes_);
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            for (std::size_t e = 0; e < r.lhs[s].endpoints.size(); ++e) {
                const auto &list = occ.at(r.lhs[s].endpoints[e].wire);
                EndpointInfo info;
                info.role = wire_role(list);
                for (const Occurrence &o : list) {
                    if (!(o.lhs && o.node == static_cast<int>(s) && o.endpoint == static_cast<int>(e))) {
                        info.other = o;
                    }
                }
                // A variable used twice on the same endpoint cannot happen; a self-loop uses two endpoints.
                info_[s].push_back(info);
            }
        }
        plan_order();
        node_of_shape_.assign(n_shapes_, kNone);
        used_.assign(d.node_count(), false);
        edges_.resize(n_shapes_);
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            edges_[s].resize(r.lhs[s].endpoints.size());
        }
    }

    std::vector<Match> run() {
        step(0);
        return std::move(out_);
    }

  private:
    static constexpr NodeIndex kNone = std::numeric_limits<NodeIndex>::max();

    bool is_primary(std::size_t s) const { return !r_.lhs[s].replicate.has_value(); }
    bool is_group(std::size_t s, std::size_t e) const { return r_.lhs[s].endpoints[e].group.has_value(); }

    // Primaries are ordered so that each one, where possible, is reached through a consumed wire.
    void plan_order() {
        std::vector<bool> placed(n_shapes_, false);
        for (;;) {
            std::size_t pick = n_shapes_;
            for (std::size_t s = 0; s < n_shapes_ && pick == n_shapes_; ++s) {
                if (!is_primary(s) || placed[s]) {
                    continue;
                }
                for (const EndpointInfo &info : info_[s]) {
                    if (info.role == WireRole::consumed && info.other.node >= 0 &&
                        placed[static_cast<std::size_t>(info.other.node)]) {
                        pick = s;
                        break;
                    }
                }
            }
            if (pick == n_shapes_) {
                for (std::size_t s = 0; s < n_shapes_; ++s) {
                    if (is_primary(s) && !placed[s]) {
                        pick = s;
                        break;
                    }
                }
            }
            if (pick == n_shapes_) {
                return;
            }
            placed[pick] = true;
            order_.push_back(pick);
        }
    }

    bool unify_attr(const Expr &pattern, long long actual, ValueType type) {
        if (pattern.is_lit()) {
            return values_equal({pattern.value, type}, {actual, type});
        }
        auto it = binding_.find(pattern.name);
        if (it == binding_.end()) {
            binding_[pattern.name] = {actual, type};
            return true;
        }
        return values_equal(it->second, {actual, type});
    }

    bool unify(const NodeShape &shape, const Node &n) {
        if (shape.kind == ShapeKind::spider) {
            if (!n.is_spider() || !unify_attr(shape.color, sign(n.color), ValueType::color)) {
                return false;
            }
        } else if (!n.is_hbox()) {
            return false;
        }
        return unify_attr(shape.phase, n.phase.degrees(), ValueType::phase);
    }

    // Half-edge an endpoint is forced onto by an already assigned partner occurrence, if any.
    bool forced_edge(std::size_t s, std::size_t e, HalfEdge &h) const {
        const EndpointInfo &info = info_[s][e];
        if (info.role != WireRole::consumed || info.other.node < 0) {
            return false;
        }
        auto os = static_cast<std::size_t>(info.other.node);
        auto oe = static_cast<std::size_t>(info.other.endpoint);
        if (!is_primary(os) || is_group(os, oe) || edges_[os][oe].empty()) {
            return false;
        }
        h = Diagram::partner(edges_[os][oe][0]);
        return true;
    }

    void step(std::size_t k) {
        if (k == order_.size()) {
            finish();
            return;
        }
        std::size_t s = order_[k];
        const NodeShape &shape = r_.lhs[s];
        std::vector<NodeIndex> candidates;
        bool restricted = false;
        for (std::size_t e = 0; e < shape.endpoints.size() && !restricted; ++e) {
            HalfEdge h = 0;
            if (!is_group(s, e) && forced_edge(s, e, h)) {
                candidates.push_back(d_.node_of(h));
                restricted = true;
            }
        }
        if (!restricted) {
            for (std::size_t e = 0; e < shape.endpoints.size() && !restricted; ++e) {
                const EndpointInfo &info = info_[s][e];
                if (info.role != WireRole::consumed || info.other.node < 0) {
                    continue;
                }
                auto os = static_cast<std::size_t>(info.other.node);
                auto oe = static_cast<std::size_t>(info.other.endpoint);
                if (is_primary(os) && node_of_shape_[os] != kNone && is_group(os, oe)) {
                    std::set<NodeIndex> c;
                    for (HalfEdge h : edges_[os][oe]) {
                        c.insert(d_.node_of(Diagram::partner(h)));
                    }
                    candidates.assign(c.begin(), c.end());
                    restricted = true;
                }
            }
        }
        if (!restricted) {
            candidates.resize(d_.node_count());
            std::iota(candidates.begin(), candidates.end(), 0);
        }
        for (NodeIndex n : candidates) {
            if (used_[n]) {
                continue;
            }
            Binding saved = binding_;
            if (unify(shape, d_.node(n))) {
                used_[n] = true;
                node_of_shape_[s] = n;
                std::vector<bool> taken(inc_[n].size(), false);
                assign_fixed(k, s, n, 0, taken);
                node_of_shape_[s] = kNone;
                used_[n] = false;
            }
            binding_ = std::move(saved);
        }
    }

    void assign_fixed(std::size_t k, std::size_t s, NodeIndex n, std::size_t e, std::vector<bool> &taken) {
        const NodeShape &shape = r_.lhs[s];
        while (e < shape.endpoints.size() && is_group(s, e)) {
            ++e;
        }
        if (e == shape.endpoints.size()) {
            distribute(k, s, n, taken);
            return;
        }
        const auto &hs = inc_[n];
        HalfEdge forced = 0;
        bool has_forced = forced_edge(s, e, forced);
        for (std::size_t i = 0; i < hs.size(); ++i) {
            if (taken[i] || (has_forced && hs[i] != forced)) {
                continue;
            }
            taken[i] = true;
            edges_[s][e] = {hs[i]};
            assign_fixed(k, s, n, e + 1, taken);
            edges_[s][e].clear();
            taken[i] = false;
        }
    }

    // Spreads the remaining half-edges of n over the groups of shape s.
    void distribute(std::size_t k, std::size_t s, NodeIndex n, const std::vector<bool> &taken) {
        const NodeShape &shape = r_.lhs[s];
        std::vector<HalfEdge> rest;
        for (std::size_t i = 0; i < inc_[n].size(); ++i) {
            if (!taken[i]) {
                rest.push_back(inc_[n][i]);
            }
        }
        std::vector<std::size_t> groups;
        for (std::size_t e = 0; e < shape.endpoints.size(); ++e) {
            if (is_group(s, e)) {
                groups.push_back(e);
            }
        }
        if (groups.empty()) {
            if (rest.empty()) {
                step(k + 1);
            }
            return;
        }
        double combos = std::pow(static_cast<double>(groups.size()), static_cast<double>(rest.size()));
        if (combos > static_cast<double>(cap_)) {
            throw ResourceLimit("rule '" + r_.name + "': group partition enumeration exceeds cap of " +
                                std::to_string(cap_));
        }
        std::vector<std::size_t> choice(rest.size(), 0);
        // Advances choice in lexicographic order, last position fastest; false when exhausted.
        auto advance = [&]() {
            for (std::size_t i = rest.size(); i > 0; --i) {
                if (++choice[i - 1] < groups.size()) {
                    return true;
                }
                choice[i - 1] = 0;
            }
            return false;
        };
        do {
            for (std::size_t g : groups) {
                edges_[s][g].clear();
            }
            for (std::size_t i = 0; i < rest.size(); ++i) {
                edges_[s][groups[choice[i]]].push_back(rest[i]);
            }
            auto saved_card = card_;
            bool ok = true;
            for (std::size_t g : groups) {
                const Endpoint &ep = shape.endpoints[g];
                std::size_t size = edges_[s][g].size();
                if (size < ep.min) {
                    ok = false;
                    break;
                }
                auto [it, inserted] = card_.emplace(*ep.group, size);
                if (!inserted && it->second != size) {
                    ok = false;
                    break;
                }
            }
            if (ok) {
                step(k + 1);
            }
            card_ = std::move(saved_card);
        } while (advance());
        for (std::size_t g : groups) {
            edges_[s][g].clear();
        }
    }

    // All plain shapes are placed: match replicated shapes, fix group orders, test the guard.
    void finish() {
        replicated_.clear();
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            if (!is_primary(s)) {
                replicated_.push_back(s);
            }
        }
        auto saved_edges = edges_;
        auto saved_card = card_;
        auto saved_binding = binding_;
        instances_.assign(n_shapes_, {});
        derived_.assign(n_shapes_, {});
        derived_owner_.assign(n_shapes_, {});
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            derived_[s].assign(r_.lhs[s].endpoints.size(), {});
            derived_owner_[s].assign(r_.lhs[s].endpoints.size(), n_shapes_);
        }
        if (prepare_replicated()) {
            match_instances(0, 0);
        }
        edges_ = std::move(saved_edges);
        card_ = std::move(saved_card);
        binding_ = std::move(saved_binding);
    }

    // Locates the anchor group of every replicated shape and fixes the label cardinality.
    bool prepare_replicated() {
        anchor_.assign(n_shapes_, {n_shapes_, 0});
        anchor_endpoint_.assign(n_shapes_, 0);
        for (std::size_t s : replicated_) {
            const NodeShape &shape = r_.lhs[s];
            bool found = false;
            for (std::size_t e = 0; e < shape.endpoints.size() && !found; ++e) {
                const EndpointInfo &info = info_[s][e];
                if (info.role == WireRole::consumed && info.other.node >= 0 &&
                    is_primary(static_cast<std::size_t>(info.other.node))) {
                    anchor_[s] = {static_cast<std::size_t>(info.other.node), static_cast<std::size_t>(info.other.endpoint)};
                    anchor_endpoint_[s] = e;
                    found = true;
                }
            }
            auto [as, ae] = anchor_[s];
            std::size_t size = edges_[as][ae].size();
            auto [it, inserted] = card_.emplace(*shape.replicate, size);
            if (!inserted && it->second != size) {
                return false;
            }
        }
        return true;
    }

    void match_instances(std::size_t ri, std::size_t i) {
        if (ri == replicated_.size()) {
            finalize();
            return;
        }
        std::size_t s = replicated_[ri];
        auto [as, ae] = anchor_[s];
        if (i == edges_[as][ae].size()) {
            match_instances(ri + 1, 0);
            return;
        }
        const NodeShape &shape = r_.lhs[s];
        HalfEdge anchor_h = Diagram::partner(edges_[as][ae][i]);
        NodeIndex n = d_.node_of(anchor_h);
        if (used_[n] || inc_[n].size() != shape.endpoints.size()) {
            return;
        }
        Binding saved = binding_;
        if (unify(shape, d_.node(n))) {
            used_[n] = true;
            instances_[s].push_back(n);
            std::vector<bool> taken(inc_[n].size(), false);
            std::size_t ai = static_cast<std::size_t>(std::find(inc_[n].begin(), inc_[n].end(), anchor_h) - inc_[n].begin());
            taken[ai] = true;
            edges_[s][anchor_endpoint_[s]].push_back(anchor_h);
            assign_instance(ri, i, s, n, 0, taken);
            edges_[s][anchor_endpoint_[s]].pop_back();
            instances_[s].pop_back();
            used_[n] = false;
        }
        binding_ = std::move(saved);
    }

    void assign_instance(std::size_t ri, std::size_t i, std::size_t s, NodeIndex n, std::size_t e, std::vector<bool> &taken) {
        const NodeShape &shape = r_.lhs[s];
        if (e == anchor_endpoint_[s]) {
            ++e;
        }
        if (e >= shape.endpoints.size()) {
            match_instances(ri, i + 1);
            return;
        }
        const EndpointInfo &info = info_[s][e];
        const auto &hs = inc_[n];
        for (std::size_t x = 0; x < hs.size(); ++x) {
            if (taken[x]) {
                continue;
            }
            HalfEdge h = hs[x];
            bool derived = false;
            std::size_t ds = 0;
            std::size_t de = 0;
            if (info.role == WireRole::consumed) {
                auto os = static_cast<std::size_t>(info.other.node);
                auto oe = static_cast<std::size_t>(info.other.endpoint);
                if (os == s) {
                    // Loop inside one instance: the partner half-edge must belong to the other endpoint.
                    if (oe < e) {
                        if (edges_[s][oe].size() <= i || edges_[s][oe][i] != Diagram::partner(h)) {
                            continue;
                        }
                    } else if (std::find(hs.begin(), hs.end(), Diagram::partner(h)) == hs.end()) {
                        continue;
                    }
                } else {
                    HalfEdge p = Diagram::partner(h);
                    const auto &group = edges_[os][oe];
                    const auto &claimed = derived_[os][oe];
                    if (std::find(group.begin(), group.end(), p) == group.end() ||
                        std::find(claimed.begin(), claimed.end(), p) != claimed.end()) {
                        continue;
                    }
                    derived = true;
                    ds = os;
                    de = oe;
                }
            }
            taken[x] = true;
            edges_[s][e].push_back(h);
            if (derived) {
                derived_[ds][de].push_back(Diagram::partner(h));
                derived_owner_[ds][de] = s;
            }
            assign_instance(ri, i, s, n, e + 1, taken);
            if (derived) {
                derived_[ds][de].pop_back();
            }
            edges_[s][e].pop_back();
            taken[x] = false;
        }
    }

    // Fixes the index order of every group and enumerates pairings that the structure leaves open.
    void finalize() {
        auto saved_edges = edges_;
        Binding b = binding_;
        bool ok = eval_guard(r_.guard, b);
        if (ok) {
            ok = order_groups();
        }
        if (ok) {
            emit_permutations(b);
        }
        edges_ = std::move(saved_edges);
    }

    using GroupRef = std::pair<std::size_t, std::size_t>;

    bool order_groups() {
        // Groups whose order is derived from replicated instances.
        std::set<GroupRef> ordered;
        std::vector<std::vector<GroupRef>> classes;
        std::map<GroupRef, std::size_t> class_of;
        auto add_to_class = [&](GroupRef g, std::size_t c) {
            class_of[g] = c;
            classes[c].push_back(g);
        };
        for (std::size_t s : replicated_) {
            GroupRef a = anchor_[s];
            if (!class_of.count(a)) {
                classes.emplace_back();
                add_to_class(a, classes.size() - 1);
            }
            ordered.insert(a);
            std::size_t c = class_of[a];
            for (std::size_t ds = 0; ds < n_shapes_; ++ds) {
                for (std::size_t de = 0; de < derived_[ds].size(); ++de) {
                    if (derived_owner_[ds][de] == s && !derived_[ds][de].empty() && !class_of.count({ds, de})) {
                        edges_[ds][de] = derived_[ds][de];
                        ordered.insert({ds, de});
                        add_to_class({ds, de}, c);
                    }
                }
            }
        }
        // Consumed wires between two groups of plain shapes tie their orders.
        bool changed = true;
        while (changed) {
            changed = false;
            for (std::size_t s = 0; s < n_shapes_; ++s) {
                if (!is_primary(s)) {
                    continue;
                }
                for (std::size_t e = 0; e < info_[s].size(); ++e) {
                    const EndpointInfo &info = info_[s][e];
                    if (!is_group(s, e) || info.role != WireRole::consumed) {
                        continue;
                    }
                    auto os = static_cast<std::size_t>(info.other.node);
                    auto oe = static_cast<std::size_t>(info.other.endpoint);
                    if (!is_primary(os)) {
                        continue;
                    }
                    GroupRef me{s, e};
                    GroupRef them{os, oe};
                    if (ordered.count(me) && ordered.count(them)) {
                        for (std::size_t i = 0; i < edges_[s][e].size(); ++i) {
                            if (edges_[os][oe][i] != Diagram::partner(edges_[s][e][i])) {
                                return false;
                            }
                        }
                        continue;
                    }
                    if (!ordered.count(me) && !ordered.count(them)) {
                        ordered.insert(me);
                        classes.emplace_back();
                        add_to_class(me, classes.size() - 1);
                    }
                    GroupRef src = ordered.count(me) ? me : them;
                    GroupRef dst = ordered.count(me) ? them : me;
                    std::vector<HalfEdge> next;
                    for (HalfEdge h : edges_[src.first][src.second]) {
                        HalfEdge p = Diagram::partner(h);
                        const auto &pool = edges_[dst.first][dst.second];
                        if (std::find(pool.begin(), pool.end(), p) == pool.end()) {
                            return false;
                        }
                        next.push_back(p);
                    }
                    edges_[dst.first][dst.second] = std::move(next);
                    ordered.insert(dst);
                    add_to_class(dst, class_of[src]);
                    changed = true;
                }
            }
        }
        // Remaining groups are free: each forms its own class.
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            if (!is_primary(s)) {
                continue;
            }
            for (std::size_t e = 0; e < info_[s].size(); ++e) {
                if (is_group(s, e) && !class_of.count({s, e})) {
                    classes.emplace_back();
                    add_to_class({s, e}, classes.size() - 1);
                }
            }
        }
        // The first class of each label is the reference; later classes with that label are permuted.
        free_classes_.clear();
        std::set<std::string> seen;
        std::vector<std::size_t> by_first(classes.size());
        std::iota(by_first.begin(), by_first.end(), 0);
        std::sort(by_first.begin(), by_first.end(), [&](std::size_t a, std::size_t b) {
            return *std::min_element(classes[a].begin(), classes[a].end()) <
                   *std::min_element(classes[b].begin(), classes[b].end());
        });
        for (std::size_t c : by_first) {
            GroupRef g = classes[c].front();
            const std::string &label = *r_.lhs[g.first].endpoints[g.second].group;
            if (!seen.insert(label).second && edges_[g.first][g.second].size() > 1) {
                free_classes_.push_back(classes[c]);
            }
        }
        class_anchors_.clear();
        for (const auto &cls : free_classes_) {
            std::vector<std::size_t> reps;
            for (std::size_t s : replicated_) {
                if (std::find(cls.begin(), cls.end(), anchor_[s]) != cls.end()) {
                    reps.push_back(s);
                }
            }
            class_anchors_.push_back(reps);
        }
        return true;
    }

    void emit_permutations(const Binding &b) {
        std::vector<std::vector<std::size_t>> perms;
        double total = 1;
        for (const auto &cls : free_classes_) {
            std::size_t k = edges_[cls.front().first][cls.front().second].size();
            std::vector<std::size_t> p(k);
            std::iota(p.begin(), p.end(), 0);
            perms.push_back(p);
            for (std::size_t i = 2; i <= k; ++i) {
                total *= static_cast<double>(i);
            }
        }
        if (total > static_cast<double>(cap_)) {
            throw ResourceLimit("rule '" + r_.name + "': group pairing enumeration exceeds cap");
        }
        for (;;) {
            emit(b, perms);
            std::size_t c = perms.size();
            bool advanced = false;
            while (c > 0) {
                --c;
                if (std::next_permutation(perms[c].begin(), perms[c].end())) {
                    advanced = true;
                    break;
                }
            }
            if (!advanced) {
                return;
            }
        }
    }

    void emit(const Binding &b, const std::vector<std::vector<std::size_t>> &perms) {
        Match m;
        m.nodes.assign(n_shapes_, kNone);
        m.instances = instances_;
        m.edges = edges_;
        for (std::size_t s = 0; s < n_shapes_; ++s) {
            if (is_primary(s)) {
                m.nodes[s] = node_of_shape_[s];
            }
        }
        for (std::size_t c = 0; c < free_classes_.size(); ++c) {
            const auto &p = perms[c];
            for (GroupRef g : free_classes_[c]) {
                const auto &src = edges_[g.first][g.second];
                auto &dst = m.edges[g.first][g.second];
                for (std::size_t i = 0; i < p.size(); ++i) {
                    dst[i] = src[p[i]];
                }
            }
            for (std::size_t s : class_anchors_[c]) {
                for (std::size_t e = 0; e < edges_[s].size(); ++e) {
                    for (std::size_t i = 0; i < p.size(); ++i) {
                        m.edges[s][e][i] = edges_[s][e][p[i]];
                    }
                }
                for (std::size_t i = 0; i < p.size(); ++i) {
                    m.instances[s][i] = instances_[s][p[i]];
                }
            }
        }
        m.cardinality = card_;
        m.binding = b;
        m.fingerprint = fingerprint(d_);
        out_.push_back(std::move(m));
    }

    const Rule &r_;
    const Diagram &d_;
    std::vector<std::vector<HalfEdge>> inc_;
    std::size_t cap_;
    std::size_t n_shapes_;
    std::vector<std::vector<EndpointInfo>> info_;
    std::vector<std::size_t> order_;

    std::vector<NodeIndex> node_of_shape_;
    std::vector<bool> used_;
    std::vector<std::vector<std::vector<HalfEdge>>> edges_;
    std::map<std::string, std::size_t> card_;
    Binding binding_;

    std::vector<std::size_t> replicated_;
    std::vector<GroupRef> anchor_;
    std::vector<std::size_t> anchor_endpoint_;
    std::vector<std::vector<NodeIndex>> instances_;
    std::vector<std::vector<std::vector<HalfEdge>>> derived_;
    std::vector<std::vector<std::size_t>> derived_owner_;
    std::vector<std::vector<GroupRef>> free_classes_;
    std::vector<std::vector<std::size_t>> class_anchors_;

    std::vector<Match> out_;
};

}  // namespace detail

/// All matches of r in d, in a deterministic order.
inline std::vector<Match> find_matches(const Rule &r, const Diagram &d, std::size_t partition_cap = kDefaultPartitionCap) {
    return detail::MatchSearch(r, d, partition_cap).run();
}

namespace detail {

inline IndexTuple make_tuple_of(const NodeShape &n, const Endpoint &e, std::size_t inst, std::size_t gi) {
    IndexTuple t;
    if (n.replicate) {
        t.emplace_back(*n.replicate, inst);
    }
    if (e.group) {
        t.emplace_back(*e.group, gi);
    }
    std::sort(t.begin(), t.end());
    return t;
}

}  // namespace detail

/// Rewrites d at m. The match must come from find_matches(r, d).
inline Diagram apply(const Rule &r, const Match &m, const Diagram &d, bool normalize_result = false) {
    if (m.fingerprint != fingerprint(d)) {
        throw std::invalid_argument("apply: match does not belong to this diagram");
    }
    const std::size_t W = d.wire_count();
    std::vector<bool> matched(d.node_count(), false);
    for (std::size_t s = 0; s < r.lhs.size(); ++s) {
        if (r.lhs[s].replicate) {
            for (NodeIndex n : m.instances[s]) {
                matched[n] = true;
            }
        } else {
            matched[m.nodes[s]] = true;
        }
    }

    Diagram out;
    std::vector<NodeIndex> remap(d.node_count(), 0);
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (!matched[v]) {
            remap[v] = out.add_node(d.node(v));
        }
    }

    // Right-hand ports, keyed by wire variable and index tuple.
    std::vector<NodeIndex> port_node;
    std::map<std::pair<std::string, IndexTuple>, std::vector<std::size_t>> ports;
    auto card = [&](const std::string &label) {
        auto it = m.cardinality.find(label);
        if (it == m.cardinality.end()) {
            throw std::logic_error("apply: unknown quantifier label '" + label + "'");
        }
        return it->second;
    };
    for (const NodeShape &shape : r.rhs) {
        std::size_t count = shape.replicate ? card(*shape.replicate) : 1;
        for (std::size_t inst = 0; inst < count; ++inst) {
            Node node;
            Phase phase(static_cast<int>(eval_expr(shape.phase, m.binding).v % 360));
            if (shape.kind == ShapeKind::spider) {
                node = Node::spider(color_from_sign(static_cast<int>(eval_expr(shape.color, m.binding).v)), phase);
            } else {
                node = Node::hbox(phase);
            }
            NodeIndex id = out.add_node(node);
            for (const Endpoint &e : shape.endpoints) {
                std::size_t k = e.group ? card(*e.group) : 1;
                for (std::size_t gi = 0; gi < k; ++gi) {
                    ports[{e.wire, detail::make_tuple_of(shape, e, inst, gi)}].push_back(port_node.size());
                    port_node.push_back(id);
                }
            }
        }
    }

    // Link graph over matched half-edges, surviving half-edges and right-hand ports.
    const std::size_t total = 2 * W + port_node.size();
    std::vector<std::vector<std::size_t>> links(total);
    auto link = [&](std::size_t a, std::size_t b) {
        links[a].push_back(b);
        links[b].push_back(a);
    };
    std::vector<bool> wire_kept(W, true);
    for (std::size_t w = 0; w < W; ++w) {
        if (matched[d.wires()[w].a] || matched[d.wires()[w].b]) {
            wire_kept[w] = false;
            link(2 * w, 2 * w + 1);
        }
    }
    std::map<std::string, std::string> connect_partner;
    for (const auto &[a, b] : r.connect) {
        connect_partner[a] = b;
        connect_partner[b] = a;
    }
    std::map<std::pair<std::string, IndexTuple>, HalfEdge> lhs_context;
    auto occ = wire_occurrences(r);
    for (std::size_t s = 0; s < r.lhs.size(); ++s) {
        const NodeShape &shape = r.lhs[s];
        for (std::size_t e = 0; e < shape.endpoints.size(); ++e) {
            const Endpoint &ep = shape.endpoints[e];
            if (wire_role(occ.at(ep.wire)) != WireRole::context) {
                continue;
            }
            const auto &hs = m.edges[s][e];
            for (std::size_t i = 0; i < hs.size(); ++i) {
                IndexTuple t = shape.replicate ? detail::make_tuple_of(shape, ep, i, 0) : detail::make_tuple_of(shape, ep, 0, i);
                lhs_context[{ep.wire, t}] = hs[i];
            }
        }
    }
    for (const auto &[key, h] : lhs_context) {
        auto cp = connect_partner.find(key.first);
        if (cp != connect_partner.end()) {
            if (key.first < cp->second) {
                link(h, lhs_context.at({cp->second, key.second}));
            }
            continue;
        }
        auto it = ports.find(key);
        if (it == ports.end() || it->second.size() != 1) {
            throw std::logic_error("apply: context wire '" + key.first + "' has no right-hand port");
        }
        link(h, 2 * W + it->second[0]);
    }
    for (const auto &[key, list] : ports) {
        if (list.size() == 2) {
            link(2 * W + list[0], 2 * W + list[1]);
        }
    }

    for (std::size_t w = 0; w < W; ++w) {
        if (wire_kept[w]) {
            out.add_wire(remap[d.wires()[w].a], remap[d.wires()[w].b]);
        }
    }
    auto is_real = [&](std::size_t x) { return x >= 2 * W || !matched[d.node_of(static_cast<HalfEdge>(x))]; };
    auto node_at = [&](std::size_t x) {
        return x >= 2 * W ? port_node[x - 2 * W] : remap[d.node_of(static_cast<HalfEdge>(x))];
    };
    std::vector<bool> done(total, false);
    auto walk = [&](std::size_t start) {
        std::size_t prev = total;
        std::size_t cur = start;
        for (;;) {
            done[cur] = true;
            std::size_t next = total;
            for (std::size_t y : links[cur]) {
                if (y != prev || links[cur].size() == 1) {
                    next = y;
                    break;
                }
            }
            if (next == total) {
                throw std::logic_error("apply: dangling link");
            }
            prev = cur;
            cur = next;
            if (is_real(cur)) {
                done[cur] = true;
                return cur;
            }
            if (links[cur].size() != 2) {
                throw std::logic_error("apply: broken link chain");
            }
        }
    };
    for (std::size_t x = 0; x < total; ++x) {
        if (done[x] || !is_real(x)) {
            continue;
        }
        if (x < 2 * W && wire_kept[x >> 1]) {
            continue;
        }
        if (links[x].size() != 1) {
            throw std::logic_error("apply: port without exactly one link");
        }
        std::size_t end = walk(x);
        out.add_wire(node_at(x), node_at(end));
    }
    return normalize_result ? normalize(std::move(out)) : out;
}

}  // namespace zxforge
