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

#include <gtest/gtest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "support.hpp"
#include "zxforge/canonical.hpp"
#include "zxforge/circuits.hpp"

namespace zxforge {
namespace {

// Same diagram with nodes and wires shuffled and wire ends swapped at random.
Diagram scramble(const Diagram &d, std::mt19937_64 &rng) {
    std::vector<NodeIndex> perm(d.node_count());
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    std::vector<NodeIndex> inv(perm.size());
    for (std::size_t i = 0; i < perm.size(); ++i) {
        inv[perm[i]] = static_cast<NodeIndex>(i);
    }
    Diagram out;
    for (NodeIndex v : perm) {
        out.add_node(d.node(v));
    }
    std::vector<Wire> wires = d.wires();
    std::shuffle(wires.begin(), wires.end(), rng);
    std::bernoulli_distribution coin(0.5);
    for (const Wire &w : wires) {
        if (coin(rng)) {
            out.add_wire(inv[w.b], inv[w.a]);
        } else {
            out.add_wire(inv[w.a], inv[w.b]);
        }
    }
    return out;
}

TEST(Canonical, InvariantUnderRelabelingProperty) {
    std::mt19937_64 rng(3);
    testing::RandomSpec spec;
    spec.max_nodes = 7;
    spec.max_wires = 12;
    spec.self_loops = true;
    for (int i = 0; i < 500; ++i) {
        Diagram d = testing::random_diagram(rng, spec);
        CanonicalKey k = canonical_key(d);
        for (int j = 0; j < 3; ++j) {
            EXPECT_EQ(canonical_key(scramble(d, rng)), k) << "case " << i;
        }
    }
}

TEST(Canonical, SymmetricGraphsProperty) {
    // Highly symmetric inputs exercise automorphism pruning.
    std::mt19937_64 rng(5);
    for (int n = 2; n <= 7; ++n) {
        Diagram k = kn_hadamard(n);
        CanonicalKey key = canonical_key(k);
        for (int j = 0; j < 5; ++j) {
            EXPECT_EQ(canonical_key(scramble(k, rng)), key);
        }
    }
    Diagram cycle;
    for (int i = 0; i < 8; ++i) {
        cycle.add_node(Node::z());
    }
    for (NodeIndex i = 0; i < 8; ++i) {
        cycle.add_wire(i, (i + 1) % 8);
    }
    Diagram two_squares;
    for (int i = 0; i < 8; ++i) {
        two_squares.add_node(Node::z());
    }
    for (NodeIndex i = 0; i < 8; ++i) {
        two_squares.add_wire(i, (i / 4) * 4 + (i + 1) % 4);
    }
    EXPECT_NE(canonical_key(cycle), canonical_key(two_squares));
    EXPECT_EQ(canonical_key(scramble(cycle, rng)), canonical_key(cycle));
}

TEST(Canonical, DistinguishesAttributes) {
    Diagram a = make_diagram({{1, Node::z(90)}, {2, Node::x()}}, {{1, 2}});
    Diagram b = make_diagram({{1, Node::z(270)}, {2, Node::x()}}, {{1, 2}});
    Diagram c = make_diagram({{1, Node::x(90)}, {2, Node::x()}}, {{1, 2}});
    Diagram e = make_diagram({{1, Node::z(90)}, {2, Node::x()}}, {{1, 2}, {1, 2}});
    EXPECT_NE(canonical_key(a), canonical_key(b));
    EXPECT_NE(canonical_key(a), canonical_key(c));
    EXPECT_NE(canonical_key(a), canonical_key(e));
}

TEST(Canonical, BoundaryNamesOptional) {
    Diagram a = make_diagram({{1, Node::boundary("p")}, {2, Node::z()}, {3, Node::boundary("q")}, {4, Node::x()}},
                             {{1, 2}, {3, 4}});
    Diagram b = make_diagram({{1, Node::boundary("q")}, {2, Node::z()}, {3, Node::boundary("p")}, {4, Node::x()}},
                             {{1, 2}, {3, 4}});
    EXPECT_NE(canonical_key(a), canonical_key(b));
    CanonOptions anon{BoundaryLabels::anonymous};
    EXPECT_EQ(canonical_key(a, anon), canonical_key(b, anon));
    EXPECT_FALSE(iso_oracle(a, b));
    EXPECT_TRUE(iso_oracle(a, b, anon));
}

TEST(Canonical, AgreesWithOracleOnRandomPairs) {
    std::mt19937_64 rng(9);
    testing::RandomSpec spec;
    spec.max_nodes = 5;
    spec.max_wires = 6;
    spec.max_boundaries = 2;
    spec.phases = {0, 180};
    spec.self_loops = true;
    std::vector<Diagram> pool;
    for (int i = 0; i < 300; ++i) {
        Diagram d = testing::random_diagram(rng, spec);
        if (d.node_count() <= 8) {
            pool.push_back(std::move(d));
        }
    }
    for (std::size_t i = 0; i < pool.size(); ++i) {
        for (std::size_t j = i; j < pool.size(); j += 7) {
            EXPECT_EQ(canonical_key(pool[i]) == canonical_key(pool[j]), iso_oracle(pool[i], pool[j]));
        }
    }
}

TEST(Canonical, ExhaustiveSmallCorpus) {
    std::vector<Diagram> corpus =
        testing::exhaustive_corpus(3, 4, {Node::z(), Node::x(), Node::hbox(), Node::boundary("")});
    ASSERT_GT(corpus.size(), 100U);
    std::map<CanonicalKey, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        classes[canonical_key(corpus[i])].push_back(i);
    }
    std::vector<std::size_t> reps;
    for (const auto &[key, members] : classes) {
        for (std::size_t m : members) {
            EXPECT_TRUE(iso_oracle(corpus[members[0]], corpus[m]));
        }
        reps.push_back(members[0]);
    }
    for (std::size_t i = 0; i < reps.size(); ++i) {
        for (std::size_t j = i + 1; j < reps.size(); ++j) {
            EXPECT_FALSE(iso_oracle(corpus[reps[i]], corpus[reps[j]]));
        }
    }
}

TEST(Canonical, OracleRefusesLargeInputs) {
    Diagram d = kn_hadamard(4);  // 4 spiders, 4 boundaries, 6 H-boxes
    EXPECT_THROW(iso_oracle(d, d), std::invalid_argument);
}

TEST(Canonical, EmptyDiagram) {
    EXPECT_EQ(canonical_key(Diagram{}), canonical_key(Diagram{}));
    EXPECT_TRUE(iso_oracle(Diagram{}, Diagram{}));
}

}  // namespace
}  // namespace zxforge
