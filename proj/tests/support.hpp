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
#include <complex>
#include <cstddef>
#include <random>
#include <string>
#include <vector>

#include "zxforge/builtins.hpp"
#include "zxforge/diagram.hpp"
#include "zxforge/tensor.hpp"

namespace zxforge::testing {

struct RandomSpec {
    std::size_t min_nodes = 1;
    std::size_t max_nodes = 5;
    std::size_t max_wires = 8;
    std::size_t max_boundaries = 3;
    double hbox_weight = 0.25;
    double non_h180_weight = 0.0;      // share of H-boxes with a phase other than 180
    std::vector<int> phases = {0, 90, 180, 270};
    bool self_loops = false;
    bool graph_like = false;  // Z spiders joined only through 2-ary H(180) boxes
};

/// Random valid diagram: spiders and H-boxes joined by random wires, boundaries of degree 1.
inline Diagram random_diagram(std::mt19937_64 &rng, const RandomSpec &spec) {
    std::uniform_int_distribution<std::size_t> nodes_d(spec.min_nodes, spec.max_nodes);
    std::uniform_int_distribution<std::size_t> bnd_d(0, spec.max_boundaries);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    std::uniform_int_distribution<std::size_t> phase_d(0, spec.phases.size() - 1);
    Diagram d;
    std::size_t n = nodes_d(rng);
    if (spec.graph_like) {
        for (std::size_t i = 0; i < n; ++i) {
            d.add_node(Node::z(spec.phases[phase_d(rng)]));
        }
        std::size_t used = 0;
        for (std::size_t i = 0; i < n && used < spec.max_boundaries; ++i) {
            if (u(rng) < 0.6) {
                NodeIndex b = d.add_node(Node::boundary("b" + std::to_string(used++)));
                d.add_wire(static_cast<NodeIndex>(i), b);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t j = i + 1; j < n; ++j) {
                if (d.wire_count() + 2 <= spec.max_wires && u(rng) < 0.5) {
                    NodeIndex h = d.add_node(Node::hbox(180));
                    d.add_wire(static_cast<NodeIndex>(i), h);
                    d.add_wire(h, static_cast<NodeIndex>(j));
                }
            }
        }
        return d;
    }
    for (std::size_t i = 0; i < n; ++i) {
        if (u(rng) < spec.hbox_weight) {
            d.add_node(Node::hbox(u(rng) < spec.non_h180_weight ? spec.phases[phase_d(rng)] : 180));
        } else {
            d.add_node(u(rng) < 0.5 ? Node::z(spec.phases[phase_d(rng)]) : Node::x(spec.phases[phase_d(rng)]));
        }
    }
    std::size_t budget = spec.max_wires;
    std::size_t nb = std::min(bnd_d(rng), budget);
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (std::size_t k = 0; k < nb; ++k) {
        NodeIndex b = d.add_node(Node::boundary("b" + std::to_string(k)));
        d.add_wire(b, static_cast<NodeIndex>(pick(rng)));
    }
    budget -= nb;
    std::uniform_int_distribution<std::size_t> wires_d(0, budget);
    std::size_t nw = wires_d(rng);
    for (std::size_t k = 0; k < nw; ++k) {
        auto a = static_cast<NodeIndex>(pick(rng));
        auto b = static_cast<NodeIndex>(pick(rng));
        if (a == b && !spec.self_loops) {
            continue;
        }
        d.add_wire(a, b);
    }
    return d;
}

/// Generator settings that make redexes of `rule` reasonably frequent.
inline RandomSpec spec_for_rule(const std::string &rule) {
    RandomSpec spec;
    spec.max_wires = 10;
    if (rule == "lcomp" || rule == "pivot" || rule == "h_toggle" || rule == "lemma_ih3") {
        spec.graph_like = true;
        spec.max_nodes = 5;
    }
    if (rule.rfind("zh", 0) == 0) {
        spec.hbox_weight = 0.5;
        spec.non_h180_weight = 0.5;
    }
    if (rule == "loop" || rule == "hloop") {
        spec.self_loops = true;
    }
    return spec;
}

struct SoundnessStats {
    std::size_t diagrams = 0;  // generated diagrams with at least one redex
    std::size_t attempts = 0;
    std::size_t rewrites = 0;
    std::size_t unsound = 0;
    std::size_t skipped = 0;  // diagrams dropped because a result was too large for the dense tensor
};

/// Draws random diagrams with at most 10 wires until `want` of them contain a redex of `rule`, and
/// compares the tensor of every one-step result with the original.
inline SoundnessStats check_soundness(const AnyRule &rule, std::size_t want, std::uint64_t seed,
                                      std::size_t max_attempts = 400000) {
    std::mt19937_64 rng(seed);
    RandomSpec spec = spec_for_rule(rule.name);
    SoundnessStats st;
    while (st.diagrams < want && st.attempts < max_attempts) {
        ++st.attempts;
        Diagram d = random_diagram(rng, spec);
        if (d.wire_count() > 10) {
            continue;
        }
        std::vector<Diagram> out = rewrite_all(rule, d);
        if (out.empty()) {
            continue;
        }
        ComplexMatrix before = tensor(d);
        std::vector<ComplexMatrix> after;
        try {
            for (const Diagram &e : out) {
                after.push_back(tensor(e));
            }
        } catch (const ResourceLimit &) {
            ++st.skipped;  // a result exceeds the dense tensor limits; draw another diagram
            continue;
        }
        ++st.diagrams;
        for (const ComplexMatrix &m : after) {
            ++st.rewrites;
            if (!equal_up_to_scalar(before, m, 1e-9)) {
                ++st.unsound;
            }
        }
    }
    return st;
}

/// Every valid diagram with at most max_nodes nodes over `alphabet` and at most max_wires wires, one
/// per node-label multiset and wire multiset. Boundaries are named "a", "b", ... in node order.
inline std::vector<Diagram> exhaustive_corpus(std::size_t max_nodes, std::size_t max_wires,
                                              const std::vector<Node> &alphabet) {
    std::vector<Diagram> out;
    for (std::size_t n = 0; n <= max_nodes; ++n) {
        std::vector<std::pair<NodeIndex, NodeIndex>> pairs;
        for (NodeIndex i = 0; i < n; ++i) {
            for (NodeIndex j = i; j < n; ++j) {
                pairs.emplace_back(i, j);
            }
        }
        std::vector<std::size_t> labels(n, 0);
        for (;;) {
            // Wire multisets as non-decreasing index sequences into `pairs`.
            for (std::size_t w = 0; w <= max_wires; ++w) {
                if (w > 0 && pairs.empty()) {
                    break;
                }
                std::vector<std::size_t> pick(w, 0);
                for (;;) {
                    Diagram d;
                    char name = 'a';
                    for (std::size_t v = 0; v < n; ++v) {
                        Node node = alphabet[labels[v]];
                        if (node.is_boundary()) {
                            node.name = std::string(1, name++);
                        }
                        d.add_node(node);
                    }
                    for (std::size_t p : pick) {
                        d.add_wire(pairs[p].first, pairs[p].second);
                    }
                    auto deg = d.degrees();
                    bool ok = true;
                    for (std::size_t v = 0; v < n; ++v) {
                        ok = ok && (!d.node(static_cast<NodeIndex>(v)).is_boundary() || deg[v] == 1);
                    }
                    if (ok) {
                        out.push_back(std::move(d));
                    }
                    std::size_t k = w;
                    while (k > 0 && pick[k - 1] == pairs.size() - 1) {
                        --k;
                    }
                    if (k == 0) {
                        break;
                    }
                    std::size_t v = pick[k - 1] + 1;
                    for (std::size_t i = k - 1; i < w; ++i) {
                        pick[i] = v;
                    }
                }
            }
            std::size_t k = n;
            while (k > 0 && labels[k - 1] == alphabet.size() - 1) {
                --k;
            }
            if (k == 0) {
                break;
            }
            std::size_t v = labels[k - 1] + 1;
            for (std::size_t i = k - 1; i < n; ++i) {
                labels[i] = v;
            }
        }
    }
    return out;
}

/// Reference semantics by direct summation over all wire values. Shares no code with tensor():
/// each spider or H-box contributes its generator value, boundaries read the bit of their wire.
inline ComplexMatrix brute_tensor(const Diagram &d) {
    const double pi = std::acos(-1.0);
    std::vector<NodeIndex> bnd;
    for (NodeIndex v = 0; v < d.node_count(); ++v) {
        if (d.node(v).is_boundary()) {
            bnd.push_back(v);
        }
    }
    std::sort(bnd.begin(), bnd.end(), [&](NodeIndex a, NodeIndex b) { return d.node(a).name < d.node(b).name; });
    auto ends_in = [](const std::string &n) { return n == "in" || (n.size() > 3 && n.substr(n.size() - 3) == "_in"); };
    bool named = std::any_of(bnd.begin(), bnd.end(), [&](NodeIndex b) { return ends_in(d.node(b).name); });
    std::vector<std::size_t> rows, cols;
    for (std::size_t k = 0; k < bnd.size(); ++k) {
        bool input = named ? ends_in(d.node(bnd[k]).name) : k >= (bnd.size() + 1) / 2;
        (input ? cols : rows).push_back(k);
    }
    std::size_t W = d.wire_count();
    ComplexMatrix m;
    m.rows = std::size_t{1} << rows.size();
    m.cols = std::size_t{1} << cols.size();
    m.data.assign(m.rows * m.cols, Complex(0));
    for (std::size_t x = 0; x < (std::size_t{1} << W); ++x) {
        auto bit = [&](std::size_t w) { return static_cast<int>((x >> w) & 1U); };
        Complex amp(1);
        std::vector<int> leg_value(bnd.size(), 0);
        for (NodeIndex v = 0; v < d.node_count() && amp != Complex(0); ++v) {
            const Node &n = d.node(v);
            std::vector<int> vals;
            for (std::size_t w = 0; w < W; ++w) {
                if (d.wires()[w].a == v) {
                    vals.push_back(bit(w));
                }
                if (d.wires()[w].b == v) {
                    vals.push_back(bit(w));
                }
            }
            Complex e = std::polar(1.0, n.phase.degrees() * pi / 180.0);
            int ones = static_cast<int>(std::count(vals.begin(), vals.end(), 1));
            int legs = static_cast<int>(vals.size());
            if (n.is_boundary()) {
                auto k = static_cast<std::size_t>(std::find(bnd.begin(), bnd.end(), v) - bnd.begin());
                leg_value[k] = vals.at(0);
            } else if (n.is_hbox()) {
                amp *= ones == legs ? e : Complex(1);
            } else if (n.color == Color::Z) {
                amp *= (ones == 0 ? Complex(1) : Complex(0)) + (ones == legs ? e : Complex(0));
            } else {
                // X spider in the computational basis: |+...+> + e|-...->, up to 2^(-legs/2).
                amp *= Complex(1) + e * (ones % 2 ? -1.0 : 1.0);
            }
        }
        std::size_t r = 0, c = 0;
        for (std::size_t k : rows) {
            r = 2 * r + static_cast<std::size_t>(leg_value[k]);
        }
        for (std::size_t k : cols) {
            c = 2 * c + static_cast<std::size_t>(leg_value[k]);
        }
        m.data[r * m.cols + c] += amp;
    }
    return m;
}

}  // namespace zxforge::testing
