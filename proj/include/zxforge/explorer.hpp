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
#include <atomic>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zxforge/builtins.hpp"
#include "zxforge/canonical.hpp"
#include "zxforge/io.hpp"

namespace zxforge {

/// How self-loops left by a rewrite are removed.
enum class LoopPolicy {
    step,   // spider self-loops as separate `loop` transitions; H self-loops stay unless `hloop` is listed
    eager,  // by normalize() right after every rewrite
};

struct ExploreOptions {
    std::size_t max_states = 1000000;
    std::size_t max_depth = std::numeric_limits<std::size_t>::max();
    unsigned threads = 1;
    BoundaryLabels boundaries = BoundaryLabels::anonymous;
    LoopPolicy loops = LoopPolicy::step;
};

struct State {
    Diagram diagram;
    std::map<std::string, int> budgets;
    std::vector<std::string> tokens;  // front is the next allowed token

    bool operator==(const State &) const = default;
};

struct RuleSet {
    std::vector<AnyRule> rules;

    /// Builtins by name; "h" resolves to "h_toggle" when toggle is set.
    static RuleSet builtins(const std::vector<std::string> &names, bool toggle_h = false) {
        RuleSet rs;
        for (const std::string &n : names) {
            rs.rules.push_back(builtin_rule(toggle_h && n == "h" ? "h_toggle" : n));
        }
        return rs;
    }

    /// Makes the named rule budget-gated on a counter of the same name.
    void set_budgeted(const std::string &name) {
        for (AnyRule &r : rules) {
            if (r.name == name) {
                r.gating = {Gating::Kind::budget, name};
            }
        }
    }

    [[nodiscard]] bool contains(const std::string &name) const {
        return std::any_of(rules.begin(), rules.end(), [&](const AnyRule &r) { return r.name == name; });
    }
};

/// Identity of a state: canonical diagram key plus budgets and remaining tokens.
inline std::string state_key(const State &s, const ExploreOptions &opt) {
    std::string k = canonical_key(s.diagram, {opt.boundaries}).bytes;
    k += "#";
    for (const auto &[name, v] : s.budgets) {
        k += name + "=" + std::to_string(v) + ";";
    }
    k += "#";
    for (const std::string &t : s.tokens) {
        k += t + ";";
    }
    return k;
}

struct Successor {
    std::string rule;
    State state;
    std::string key;
};

namespace detail {

inline bool gate_open(const AnyRule &r, const State &s) {
    switch (r.gating.kind) {
        case Gating::Kind::none:
            return true;
        case Gating::Kind::budget: {
            auto it = s.budgets.find(r.gating.name);
            return it != s.budgets.end() && it->second > 0;
        }
        case Gating::Kind::token:
            return !s.tokens.empty() && s.tokens.front() == r.gating.name;
    }
    return false;
}

inline State consume_gate(const AnyRule &r, const State &s, Diagram d) {
    State next{std::move(d), s.budgets, s.tokens};
    if (r.gating.kind == Gating::Kind::budget) {
        --next.budgets[r.gating.name];
    } else if (r.gating.kind == Gating::Kind::token) {
        next.tokens.erase(next.tokens.begin());
    }
    return next;
}

}  // namespace detail

/// One-step successors sorted by (rule name, target key), duplicates collapsed.
inline std::vector<Successor> successors(const State &s, const RuleSet &rs, const ExploreOptions &opt = {}) {
    std::vector<const AnyRule *> rules;
    for (const AnyRule &r : rs.rules) {
        rules.push_back(&r);
    }
    static const AnyRule loop_rule = builtin_rule("loop");
    if (opt.loops == LoopPolicy::step && !rs.contains("loop")) {
        rules.push_back(&loop_rule);
    }
    std::vector<Successor> out;
    for (const AnyRule *r : rules) {
        if (!detail::gate_open(*r, s)) {
            continue;
        }
        for (Diagram &d : rewrite_all(*r, s.diagram, opt.loops == LoopPolicy::eager)) {
            State next = detail::consume_gate(*r, s, std::move(d));
            std::string key = state_key(next, opt);
            out.push_back({r->name, std::move(next), std::move(key)});
        }
    }
    std::stable_sort(out.begin(), out.end(), [](const Successor &a, const Successor &b) {
        return std::tie(a.rule, a.key) < std::tie(b.rule, b.key);
    });
    out.erase(std::unique(out.begin(), out.end(),
                          [](const Successor &a, const Successor &b) { return a.rule == b.rule && a.key == b.key; }),
              out.end());
    return out;
}

struct Transition {
    std::size_t from = 0;
    std::string rule;
    std::size_t to = 0;
    bool operator==(const Transition &) const = default;
};

struct StateSpace {
    std::vector<State> states;
    std::vector<std::size_t> depth;
    std::vector<Transition> transitions;
    std::vector<bool> expanded;
    bool exhaustive = true;

    /// Outgoing transition indices per state, in insertion order.
    [[nodiscard]] std::vector<std::vector<std::size_t>> out_edges() const {
        std::vector<std::vector<std::size_t>> out(states.size());
        for (std::size_t t = 0; t < transitions.size(); ++t) {
            out[transitions[t].from].push_back(t);
        }
        return out;
    }
};

/// Expanded states without outgoing transitions.
inline std::vector<std::size_t> final_states(const StateSpace &sp) {
    std::vector<bool> has_out(sp.states.size(), false);
    for (const Transition &t : sp.transitions) {
        has_out[t.from] = true;
    }
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < sp.states.size(); ++i) {
        if (sp.expanded[i] && !has_out[i]) {
            out.push_back(i);
        }
    }
    return out;
}

/// Breadth-first exploration. Numbering is by discovery order and does not depend on `threads`.
inline StateSpace explore(State init, const RuleSet &rs, const ExploreOptions &opt = {}) {
    if (opt.loops == LoopPolicy::eager) {
        init.diagram = normalize(std::move(init.diagram));
    }
    StateSpace sp;
    std::unordered_map<std::string, std::size_t> index;
    index.emplace(state_key(init, opt), 0);
    sp.states.push_back(std::move(init));
    sp.depth.push_back(0);
    sp.expanded.push_back(false);
    std::vector<std::size_t> frontier = {0};
    unsigned threads = std::max(1U, opt.threads);
    bool full = false;
    while (!frontier.empty()) {
        std::vector<std::vector<Successor>> results(frontier.size());
        auto work = [&](std::atomic<std::size_t> &next) {
            for (;;) {
                std::size_t i = next.fetch_add(1);
                if (i >= frontier.size()) {
                    return;
                }
                results[i] = successors(sp.states[frontier[i]], rs, opt);
            }
        };
        std::atomic<std::size_t> next{0};
        if (threads == 1 || frontier.size() == 1) {
            work(next);
        } else {
            std::vector<std::thread> pool;
            for (unsigned t = 0; t < threads; ++t) {
                pool.emplace_back(work, std::ref(next));
            }
            for (std::thread &t : pool) {
                t.join();
            }
        }
        std::vector<std::size_t> next_frontier;
        for (std::size_t i = 0; i < frontier.size(); ++i) {
            std::size_t from = frontier[i];
            if (sp.depth[from] >= opt.max_depth || full) {
                if (!results[i].empty()) {
                    sp.exhaustive = false;
                }
                continue;
            }
            bool complete = true;
            std::vector<Transition> pending;
            for (Successor &s : results[i]) {
                auto it = index.find(s.key);
                std::size_t to = 0;
                if (it != index.end()) {
                    to = it->second;
                } else if (sp.states.size() >= opt.max_states) {
                    complete = false;
                    continue;
                } else {
                    to = sp.states.size();
                    index.emplace(std::move(s.key), to);
                    sp.states.push_back(std::move(s.state));
                    sp.depth.push_back(sp.depth[from] + 1);
                    sp.expanded.push_back(false);
                    next_frontier.push_back(to);
                }
                pending.push_back({from, s.rule, to});
            }
            if (!complete) {
                sp.exhaustive = false;
                full = true;
                continue;
            }
            sp.expanded[from] = true;
            sp.transitions.insert(sp.transitions.end(), pending.begin(), pending.end());
        }
        frontier = std::move(next_frontier);
    }
    return sp;
}

struct Path {
    std::vector<std::size_t> states;
    std::vector<std::string> rules;  // rules[i] leads from states[i] to states[i+1]
};

/// Shortest path from state 0 to the first state (in BFS order, ties by id) satisfying pred.
template <typename Pred>
std::optional<Path> shortest_path(const StateSpace &sp, Pred pred) {
    if (sp.states.empty()) {
        return std::nullopt;
    }
    auto out = sp.out_edges();
    std::vector<std::size_t> parent(sp.states.size(), std::numeric_limits<std::size_t>::max());
    std::vector<std::size_t> via(sp.states.size(), 0);
    std::vector<bool> seen(sp.states.size(), false);
    seen[0] = true;
    std::vector<std::size_t> level = {0};
    while (!level.empty()) {
        std::vector<std::size_t> hits;
        for (std::size_t s : level) {
            if (pred(sp, s)) {
                hits.push_back(s);
            }
        }
        if (!hits.empty()) {
            std::size_t target = *std::min_element(hits.begin(), hits.end());
            Path p;
            for (std::size_t s = target;; s = parent[s]) {
                p.states.push_back(s);
                if (s == 0) {
                    break;
                }
                p.rules.push_back(sp.transitions[via[s]].rule);
            }
            std::reverse(p.states.begin(), p.states.end());
            std::reverse(p.rules.begin(), p.rules.end());
            return p;
        }
        std::vector<std::size_t> next;
        std::sort(level.begin(), level.end());
        for (std::size_t s : level) {
            std::vector<std::size_t> edges = out[s];
            std::sort(edges.begin(), edges.end(), [&](std::size_t a, std::size_t b) {
                return std::tie(sp.transitions[a].to, sp.transitions[a].rule) <
                       std::tie(sp.transitions[b].to, sp.transitions[b].rule);
            });
            for (std::size_t t : edges) {
                std::size_t to = sp.transitions[t].to;
                if (!seen[to]) {
                    seen[to] = true;
                    parent[to] = s;
                    via[to] = t;
                    next.push_back(to);
                }
            }
        }
        level = std::move(next);
    }
    return std::nullopt;
}

// -------------------------------------------------------------------------------------------------
// Export

inline std::string to_dot(const StateSpace &sp) {
    std::vector<bool> is_final(sp.states.size(), false);
    for (std::size_t f : final_states(sp)) {
        is_final[f] = true;
    }
    std::ostringstream os;
    os << "digraph {\n";
    for (std::size_t i = 0; i < sp.states.size(); ++i) {
        os << "  s" << i << " [shape=circle" << (is_final[i] ? ", peripheries=2" : "") << "];\n";
    }
    for (const Transition &t : sp.transitions) {
        os << "  s" << t.from << " -> s" << t.to << " [label=\"" << t.rule << "\"];\n";
    }
    os << "}\n";
    return os.str();
}

inline nlohmann::json space_to_json(const StateSpace &sp) {
    nlohmann::json states = nlohmann::json::array();
    for (std::size_t i = 0; i < sp.states.size(); ++i) {
        const State &s = sp.states[i];
        nlohmann::json budgets = nlohmann::json::object();
        for (const auto &[k, v] : s.budgets) {
            budgets[k] = v;
        }
        states.push_back({{"id", i},
                          {"depth", sp.depth[i]},
                          {"expanded", static_cast<bool>(sp.expanded[i])},
                          {"diagram", diagram_to_json(s.diagram)},
                          {"budgets", budgets},
                          {"tokens", s.tokens}});
    }
    nlohmann::json transitions = nlohmann::json::array();
    for (const Transition &t : sp.transitions) {
        transitions.push_back({t.from, t.rule, t.to});
    }
    return {{"exhaustive", sp.exhaustive},
            {"states", std::move(states)},
            {"transitions", std::move(transitions)},
            {"finals", final_states(sp)}};
}

inline StateSpace space_from_json(const nlohmann::json &j) {
    try {
        StateSpace sp;
        sp.exhaustive = j.at("exhaustive").get<bool>();
        for (const auto &s : j.at("states")) {
            State st;
            st.diagram = diagram_from_json(s.at("diagram"));
            for (const auto &[k, v] : s.at("budgets").items()) {
                st.budgets[k] = v.get<int>();
            }
            st.tokens = s.at("tokens").get<std::vector<std::string>>();
            sp.states.push_back(std::move(st));
            sp.depth.push_back(s.at("depth").get<std::size_t>());
            sp.expanded.push_back(s.at("expanded").get<bool>());
        }
        for (const auto &t : j.at("transitions")) {
            Transition tr{t.at(0).get<std::size_t>(), t.at(1).get<std::string>(), t.at(2).get<std::size_t>()};
            if (tr.from >= sp.states.size() || tr.to >= sp.states.size()) {
                throw ParseError("transition references a missing state");
            }
            sp.transitions.push_back(std::move(tr));
        }
        return sp;
    } catch (const nlohmann::json::exception &e) {
        throw ParseError(std::string("state space JSON: ") + e.what());
    }
}

}  // namespace zxforge
