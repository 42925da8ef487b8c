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
#include <cctype>
#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <ostream>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "zxforge/explorer.hpp"
#include "zxforge/io.hpp"

namespace zxforge {

class CheckError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

enum class Cmp { lt, le, eq, ne, ge, gt };

struct Prop {
    enum class Kind { final, spiders, hboxes, wires, budget, token_head };
    Kind kind = Kind::final;
    Cmp cmp = Cmp::eq;
    long long value = 0;
    std::string name;  // budget or token name
};

struct Formula;
using FormulaPtr = std::shared_ptr<const Formula>;

struct Formula {
    // R (release) only appears after negation normal form.
    enum class Op { truth, falsity, prop, neg, conj, disj, next, eventually, always, until, release };
    Op op = Op::truth;
    Prop prop;
    FormulaPtr lhs;
    FormulaPtr rhs;
};

namespace detail {

inline FormulaPtr mk(Formula::Op op, FormulaPtr a = nullptr, FormulaPtr b = nullptr) {
    auto f = std::make_shared<Formula>();
    f->op = op;
    f->lhs = std::move(a);
    f->rhs = std::move(b);
    return f;
}

inline const char *cmp_text(Cmp c) {
    switch (c) {
        case Cmp::lt: return "<";
        case Cmp::le: return "<=";
        case Cmp::eq: return "=";
        case Cmp::ne: return "!=";
        case Cmp::ge: return ">=";
        case Cmp::gt: return ">";
    }
    return "?";
}

inline bool compare(long long a, Cmp c, long long b) {
    switch (c) {
        case Cmp::lt: return a < b;
        case Cmp::le: return a <= b;
        case Cmp::eq: return a == b;
        case Cmp::ne: return a != b;
        case Cmp::ge: return a >= b;
        case Cmp::gt: return a > b;
    }
    return false;
}

}  // namespace detail

inline std::string to_string(const Prop &p) {
    switch (p.kind) {
        case Prop::Kind::final: return "final";
        case Prop::Kind::spiders: return std::string("spiders") + detail::cmp_text(p.cmp) + std::to_string(p.value);
        case Prop::Kind::hboxes: return std::string("hboxes") + detail::cmp_text(p.cmp) + std::to_string(p.value);
        case Prop::Kind::wires: return std::string("wires") + detail::cmp_text(p.cmp) + std::to_string(p.value);
        case Prop::Kind::budget:
            return "budget(" + p.name + ")" + detail::cmp_text(p.cmp) + std::to_string(p.value);
        case Prop::Kind::token_head: return "token_head(" + p.name + ")";
    }
    return "?";
}

/// Fully parenthesised; doubles as a structural key.
inline std::string to_string(const FormulaPtr &f) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::truth: return "true";
        case Op::falsity: return "false";
        case Op::prop: return to_string(f->prop);
        case Op::neg: return "!" + to_string(f->lhs);
        case Op::conj: return "(" + to_string(f->lhs) + " & " + to_string(f->rhs) + ")";
        case Op::disj: return "(" + to_string(f->lhs) + " | " + to_string(f->rhs) + ")";
        case Op::next: return "X " + to_string(f->lhs);
        case Op::eventually: return "<>" + to_string(f->lhs);
        case Op::always: return "[]" + to_string(f->lhs);
        case Op::until: return "(" + to_string(f->lhs) + " U " + to_string(f->rhs) + ")";
        case Op::release: return "(" + to_string(f->lhs) + " R " + to_string(f->rhs) + ")";
    }
    return "?";
}

namespace detail {

// or   := and ('|' and)*   ; '->' binds weaker than '|', right associative
// and  := until ('&' until)*
// until:= unary ('U' until)?
// unary:= ('!' | 'X' | '<>' | '[]') unary | atom
class FormulaParser {
  public:
    explicit FormulaParser(std::string text) : s_(std::move(text)) {}

    FormulaPtr parse() {
        FormulaPtr f = implication();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + s_.substr(pos_, 1) + "'");
        }
        return f;
    }

  private:
    std::string s_;
    std::size_t pos_ = 0;

    [[noreturn]] void fail(const std::string &what) const {
        throw ParseError("formula: " + what + " at offset " + std::to_string(pos_));
    }

    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }

    bool eat(const std::string &tok) {
        skip();
        if (s_.compare(pos_, tok.size(), tok) == 0) {
            pos_ += tok.size();
            return true;
        }
        return false;
    }

    // Keyword check that does not split identifiers.
    bool eat_word(const std::string &w) {
        skip();
        if (s_.compare(pos_, w.size(), w) != 0) {
            return false;
        }
        std::size_t end = pos_ + w.size();
        if (end < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[end])) || s_[end] == '_')) {
            return false;
        }
        pos_ = end;
        return true;
    }

    FormulaPtr implication() {
        FormulaPtr a = disjunction();
        if (eat("->")) {
            FormulaPtr b = implication();
            return mk(Formula::Op::disj, mk(Formula::Op::neg, a), b);
        }
        return a;
    }

    FormulaPtr disjunction() {
        FormulaPtr a = conjunction();
        while (eat("|")) {
            a = mk(Formula::Op::disj, a, conjunction());
        }
        return a;
    }

    FormulaPtr conjunction() {
        FormulaPtr a = until();
        while (eat("&")) {
            a = mk(Formula::Op::conj, a, until());
        }
        return a;
    }

    FormulaPtr until() {
        FormulaPtr a = unary();
        if (eat_word("U")) {
            return mk(Formula::Op::until, a, until());
        }
        return a;
    }

    FormulaPtr unary() {
        skip();
        if (s_.compare(pos_, 2, "!=") != 0 && eat("!")) {
            return mk(Formula::Op::neg, unary());
        }
        if (eat("<>")) {
            return mk(Formula::Op::eventually, unary());
        }
        if (eat("[]")) {
            return mk(Formula::Op::always, unary());
        }
        if (eat_word("X")) {
            return mk(Formula::Op::next, unary());
        }
        return atom();
    }

    std::string identifier() {
        skip();
        std::size_t start = pos_;
        while (pos_ < s_.size() &&
               (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_' || s_[pos_] == '-')) {
            if (s_[pos_] == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
                break;
            }
            ++pos_;
        }
        if (start == pos_) {
            fail("expected identifier");
        }
        return s_.substr(start, pos_ - start);
    }

    Cmp comparison() {
        skip();
        for (auto [tok, c] : {std::pair{"<=", Cmp::le}, {">=", Cmp::ge}, {"!=", Cmp::ne}, {"==", Cmp::eq},
                              {"=", Cmp::eq}, {"<", Cmp::lt}, {">", Cmp::gt}}) {
            if (eat(tok)) {
                return c;
            }
        }
        fail("expected comparison");
    }

    long long integer() {
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && s_[pos_] == '-') {
            ++pos_;
        }
        while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
        std::string digits = s_.substr(start, pos_ - start);
        if (digits.empty() || digits == "-") {
            fail("expected integer");
        }
        try {
            return std::stoll(digits);
        } catch (const std::out_of_range &) {
            fail("integer out of range");
        }
    }

    std::string argument() {
        if (!eat("(")) {
            fail("expected '('");
        }
        std::string name = identifier();
        if (!eat(")")) {
            fail("expected ')'");
        }
        return name;
    }

    FormulaPtr atom() {
        if (eat("(")) {
            FormulaPtr f = implication();
            if (!eat(")")) {
                fail("expected ')'");
            }
            return f;
        }
        std::string w = identifier();
        if (w == "true") {
            return mk(Formula::Op::truth);
        }
        if (w == "false") {
            return mk(Formula::Op::falsity);
        }
        auto f = std::make_shared<Formula>();
        f->op = Formula::Op::prop;
        if (w == "final") {
            f->prop.kind = Prop::Kind::final;
        } else if (w == "spiders" || w == "hboxes" || w == "wires") {
            f->prop.kind = w == "spiders" ? Prop::Kind::spiders
                           : w == "hboxes" ? Prop::Kind::hboxes
                                           : Prop::Kind::wires;
            f->prop.cmp = comparison();
            f->prop.value = integer();
        } else if (w == "budget") {
            f->prop.kind = Prop::Kind::budget;
            f->prop.name = argument();
            f->prop.cmp = comparison();
            f->prop.value = integer();
        } else if (w == "token_head") {
            f->prop.kind = Prop::Kind::token_head;
            f->prop.name = argument();
        } else {
            fail("unknown proposition '" + w + "'");
        }
        return f;
    }
};

}  // namespace detail

inline FormulaPtr parse_formula(const std::string &text) { return detail::FormulaParser(text).parse(); }

/// Truth of a proposition at state `id`; `final` means expanded with no outgoing transition.
inline bool eval_prop(const Prop &p, const StateSpace &sp, std::size_t id, bool is_final) {
    const State &s = sp.states.at(id);
    switch (p.kind) {
        case Prop::Kind::final: return is_final;
        case Prop::Kind::spiders:
            return detail::compare(static_cast<long long>(s.diagram.spider_count()), p.cmp, p.value);
        case Prop::Kind::hboxes:
            return detail::compare(static_cast<long long>(s.diagram.hbox_count()), p.cmp, p.value);
        case Prop::Kind::wires:
            return detail::compare(static_cast<long long>(s.diagram.wire_count()), p.cmp, p.value);
        case Prop::Kind::budget: {
            auto it = s.budgets.find(p.name);
            return detail::compare(it == s.budgets.end() ? 0 : it->second, p.cmp, p.value);
        }
        case Prop::Kind::token_head: return !s.tokens.empty() && s.tokens.front() == p.name;
    }
    return false;
}

/// Boolean combination of propositions at one state; temporal operators are rejected.
inline bool eval_state_formula(const FormulaPtr &f, const StateSpace &sp, std::size_t id, bool is_final) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::truth: return true;
        case Op::falsity: return false;
        case Op::prop: return eval_prop(f->prop, sp, id, is_final);
        case Op::neg: return !eval_state_formula(f->lhs, sp, id, is_final);
        case Op::conj:
            return eval_state_formula(f->lhs, sp, id, is_final) && eval_state_formula(f->rhs, sp, id, is_final);
        case Op::disj:
            return eval_state_formula(f->lhs, sp, id, is_final) || eval_state_formula(f->rhs, sp, id, is_final);
        default: throw std::invalid_argument("temporal operator in a state formula");
    }
}

namespace detail {

inline FormulaPtr nnf(const FormulaPtr &f, bool negate) {
    using Op = Formula::Op;
    switch (f->op) {
        case Op::truth: return mk(negate ? Op::falsity : Op::truth);
        case Op::falsity: return mk(negate ? Op::truth : Op::falsity);
        case Op::prop: return negate ? mk(Op::neg, f) : f;
        case Op::neg: return nnf(f->lhs, !negate);
        case Op::conj: return mk(negate ? Op::disj : Op::conj, nnf(f->lhs, negate), nnf(f->rhs, negate));
        case Op::disj: return mk(negate ? Op::conj : Op::disj, nnf(f->lhs, negate), nnf(f->rhs, negate));
        case Op::next: return mk(Op::next, nnf(f->lhs, negate));
        case Op::eventually:  // <>a = true U a
            return negate ? mk(Op::release, mk(Op::falsity), nnf(f->lhs, true))
                          : mk(Op::until, mk(Op::truth), nnf(f->lhs, false));
        case Op::always:  // []a = false R a
            return negate ? mk(Op::until, mk(Op::truth), nnf(f->lhs, true))
                          : mk(Op::release, mk(Op::falsity), nnf(f->lhs, false));
        case Op::until: return mk(negate ? Op::release : Op::until, nnf(f->lhs, negate), nnf(f->rhs, negate));
        case Op::release: return mk(negate ? Op::until : Op::release, nnf(f->lhs, negate), nnf(f->rhs, negate));
    }
    return f;
}

// Generalised Buchi automaton from the on-the-fly tableau; state labels are conjunctions of literals.
struct Buchi {
    struct Node {
        std::set<std::size_t> incoming;  // kInit marks initial nodes
        std::set<std::string> old_set;
        std::set<std::string> next_set;
    };
    static constexpr std::size_t kInit = static_cast<std::size_t>(-1);

    std::vector<Node> nodes;
    std::map<std::string, FormulaPtr> formulas;
    std::vector<std::set<std::size_t>> accepting;  // one set per until subformula
};

class TableauBuilder {
  public:
    Buchi build(const FormulaPtr &f) {
        Pending init;
        init.incoming = {Buchi::kInit};
        init.fresh = {intern(f)};
        expand(std::move(init));
        std::set<std::string> untils;
        for (const auto &[k, g] : out_.formulas) {
            if (g->op == Formula::Op::until) {
                untils.insert(k);
            }
        }
        for (const std::string &u : untils) {
            std::set<std::size_t> acc;
            std::string goal = to_string(out_.formulas.at(u)->rhs);
            for (std::size_t i = 0; i < out_.nodes.size(); ++i) {
                const auto &old = out_.nodes[i].old_set;
                if (!old.contains(u) || old.contains(goal)) {
                    acc.insert(i);
                }
            }
            out_.accepting.push_back(std::move(acc));
        }
        return std::move(out_);
    }

  private:
    struct Pending {
        std::set<std::size_t> incoming;
        std::set<std::string> fresh;
        std::set<std::string> old_set;
        std::set<std::string> next_set;
    };

    Buchi out_;

    std::string intern(const FormulaPtr &f) {
        std::string k = to_string(f);
        out_.formulas.emplace(k, f);
        return k;
    }

    static std::string negation_key(const FormulaPtr &lit) {
        return lit->op == Formula::Op::neg ? to_string(lit->lhs) : to_string(mk(Formula::Op::neg, lit));
    }

    void expand(Pending node) {
        using Op = Formula::Op;
        if (node.fresh.empty()) {
            for (auto &existing : out_.nodes) {
                if (existing.old_set == node.old_set && existing.next_set == node.next_set) {
                    existing.incoming.insert(node.incoming.begin(), node.incoming.end());
                    return;
                }
            }
            std::size_t id = out_.nodes.size();
            out_.nodes.push_back({node.incoming, node.old_set, node.next_set});
            Pending succ;
            succ.incoming = {id};
            succ.fresh = node.next_set;
            expand(std::move(succ));
            return;
        }
        std::string key = *node.fresh.begin();
        node.fresh.erase(node.fresh.begin());
        FormulaPtr eta = out_.formulas.at(key);
        auto add_fresh = [&](Pending &p, const FormulaPtr &g) {
            std::string k = intern(g);
            if (!p.old_set.contains(k)) {
                p.fresh.insert(k);
            }
        };
        switch (eta->op) {
            case Op::falsity:
                return;
            case Op::truth:
            case Op::prop:
            case Op::neg:
                if (node.old_set.contains(negation_key(eta))) {
                    return;
                }
                node.old_set.insert(key);
                expand(std::move(node));
                return;
            case Op::conj:
                node.old_set.insert(key);
                add_fresh(node, eta->lhs);
                add_fresh(node, eta->rhs);
                expand(std::move(node));
                return;
            case Op::next:
                node.old_set.insert(key);
                node.next_set.insert(intern(eta->lhs));
                expand(std::move(node));
                return;
            case Op::disj:
            case Op::until:
            case Op::release: {
                node.old_set.insert(key);
                Pending a = node;
                Pending b = std::move(node);
                if (eta->op == Op::disj) {
                    add_fresh(a, eta->lhs);
                    add_fresh(b, eta->rhs);
                } else if (eta->op == Op::until) {
                    add_fresh(a, eta->lhs);
                    a.next_set.insert(key);
                    add_fresh(b, eta->rhs);
                } else {
                    add_fresh(a, eta->rhs);
                    a.next_set.insert(key);
                    add_fresh(b, eta->lhs);
                    add_fresh(b, eta->rhs);
                }
                expand(std::move(a));
                expand(std::move(b));
                return;
            }
            default:
                throw std::logic_error("formula not in negation normal form");
        }
    }
};

}  // namespace detail

struct LassoStep {
    std::size_t from = 0;
    std::string rule;  // "final" for the completion self-loop
    std::size_t to = 0;
};

/// Infinite run prefix.cycle^omega; the cycle starts and ends at the same state.
struct Lasso {
    std::vector<LassoStep> prefix;
    std::vector<LassoStep> cycle;
};

struct CheckResult {
    bool holds = true;
    std::optional<Lasso> counterexample;
};

/// Kripke structure of a frozen space: transitions plus a `final` self-loop on every final state.
struct Kripke {
    std::vector<std::vector<std::pair<std::string, std::size_t>>> succ;
    std::vector<bool> is_final;

    explicit Kripke(const StateSpace &sp) : succ(sp.states.size()), is_final(sp.states.size(), false) {
        for (const Transition &t : sp.transitions) {
            succ[t.from].emplace_back(t.rule, t.to);
        }
        for (std::size_t f : final_states(sp)) {
            is_final[f] = true;
            succ[f].emplace_back("final", f);
        }
    }
};

/// Checks `f` on every infinite run from state 0. Throws CheckError on a non-exhaustive space.
inline CheckResult check(const StateSpace &sp, const FormulaPtr &f) {
    if (!sp.exhaustive || sp.states.empty()) {
        throw CheckError("model checking needs an exhaustive, non-empty state space");
    }
    Kripke k(sp);
    detail::Buchi a = detail::TableauBuilder().build(detail::nnf(f, true));
    std::size_t nacc = a.accepting.size();
    std::size_t layers = std::max<std::size_t>(1, nacc);

    // Node labels: literals a state must satisfy.
    auto label_ok = [&](std::size_t q, std::size_t s) {
        for (const std::string &key : a.nodes[q].old_set) {
            const FormulaPtr &g = a.formulas.at(key);
            if (g->op == Formula::Op::prop && !eval_prop(g->prop, sp, s, k.is_final[s])) {
                return false;
            }
            if (g->op == Formula::Op::neg && eval_prop(g->lhs->prop, sp, s, k.is_final[s])) {
                return false;
            }
        }
        return true;
    };
    std::vector<std::vector<std::size_t>> a_succ(a.nodes.size());
    std::vector<std::size_t> a_init;
    for (std::size_t q = 0; q < a.nodes.size(); ++q) {
        for (std::size_t p : a.nodes[q].incoming) {
            if (p == detail::Buchi::kInit) {
                a_init.push_back(q);
            } else {
                a_succ[p].push_back(q);
            }
        }
    }
    std::vector<std::vector<bool>> in_acc(layers, std::vector<bool>(a.nodes.size(), nacc == 0));
    for (std::size_t i = 0; i < nacc; ++i) {
        for (std::size_t q : a.accepting[i]) {
            in_acc[i][q] = true;
        }
    }

    // Product state (s, q, layer) packed into one index.
    std::size_t nq = a.nodes.size();
    auto pack = [&](std::size_t s, std::size_t q, std::size_t l) { return (s * nq + q) * layers + l; };
    auto kripke_of = [&](std::size_t x) { return x / (nq * layers); };
    auto accepting = [&](std::size_t x) {
        std::size_t l = x % layers;
        std::size_t q = (x / layers) % nq;
        return l == 0 && in_acc[0][q];
    };
    // Successors as (product state, rule).
    auto successors_of = [&](std::size_t x) {
        std::size_t s = kripke_of(x);
        std::size_t q = (x / layers) % nq;
        std::size_t l = x % layers;
        std::size_t nl = in_acc[l][q] ? (l + 1) % layers : l;
        std::vector<std::pair<std::size_t, const std::string *>> out;
        for (const auto &[rule, t] : k.succ[s]) {
            for (std::size_t q2 : a_succ[q]) {
                if (label_ok(q2, t)) {
                    out.emplace_back(pack(t, q2, nl), &rule);
                }
            }
        }
        return out;
    };

    struct Frame {
        std::size_t x;
        std::vector<std::pair<std::size_t, const std::string *>> succ;
        std::size_t next = 0;
        const std::string *via = nullptr;  // rule on the edge into x
    };
    std::set<std::size_t> outer_seen;
    std::set<std::size_t> inner_seen;

    auto to_steps = [&](const std::vector<Frame> &stack) {
        std::vector<LassoStep> steps;
        for (std::size_t i = 1; i < stack.size(); ++i) {
            steps.push_back({kripke_of(stack[i - 1].x), *stack[i].via, kripke_of(stack[i].x)});
        }
        return steps;
    };

    // Inner search for a cycle through seed; returns the cycle steps.
    auto inner = [&](std::size_t seed) -> std::optional<std::vector<LassoStep>> {
        std::vector<Frame> stack;
        stack.push_back({seed, successors_of(seed), 0, nullptr});
        while (!stack.empty()) {
            Frame &top = stack.back();
            if (top.next == top.succ.size()) {
                stack.pop_back();
                continue;
            }
            auto [y, rule] = top.succ[top.next++];
            if (y == seed) {
                std::vector<LassoStep> steps = to_steps(stack);
                steps.push_back({kripke_of(stack.back().x), *rule, kripke_of(seed)});
                return steps;
            }
            if (inner_seen.insert(y).second) {
                stack.push_back({y, successors_of(y), 0, rule});
            }
        }
        return std::nullopt;
    };

    for (std::size_t q0 : a_init) {
        if (!label_ok(q0, 0)) {
            continue;
        }
        std::size_t root = pack(0, q0, 0);
        if (!outer_seen.insert(root).second) {
            continue;
        }
        std::vector<Frame> stack;
        stack.push_back({root, successors_of(root), 0, nullptr});
        while (!stack.empty()) {
            Frame &top = stack.back();
            if (top.next < top.succ.size()) {
                auto [y, rule] = top.succ[top.next++];
                if (outer_seen.insert(y).second) {
                    stack.push_back({y, successors_of(y), 0, rule});
                }
                continue;
            }
            if (accepting(top.x)) {
                if (auto cyc = inner(top.x)) {
                    Lasso lasso;
                    lasso.prefix = to_steps(stack);
                    lasso.cycle = std::move(*cyc);
                    return {false, std::move(lasso)};
                }
            }
            stack.pop_back();
        }
    }
    return {true, std::nullopt};
}

inline CheckResult check(const StateSpace &sp, const std::string &formula) {
    return check(sp, parse_formula(formula));
}

/// Whether some state reachable from state 0 satisfies the state formula p.
inline bool reachable(const StateSpace &sp, const FormulaPtr &p) {
    if (sp.states.empty()) {
        return false;
    }
    Kripke k(sp);
    std::vector<bool> seen(sp.states.size(), false);
    std::vector<std::size_t> todo = {0};
    seen[0] = true;
    while (!todo.empty()) {
        std::size_t s = todo.back();
        todo.pop_back();
        if (eval_state_formula(p, sp, s, k.is_final[s])) {
            return true;
        }
        for (const auto &[rule, t] : k.succ[s]) {
            if (!seen[t]) {
                seen[t] = true;
                todo.push_back(t);
            }
        }
    }
    return false;
}

inline std::ostream &operator<<(std::ostream &os, const Lasso &l) {
    for (const LassoStep &s : l.prefix) {
        os << "s" << s.from << " -[" << s.rule << "]-> s" << s.to << "\n";
    }
    os << "cycle:\n";
    for (const LassoStep &s : l.cycle) {
        os << "s" << s.from << " -[" << s.rule << "]-> s" << s.to << "\n";
    }
    return os;
}

}  // namespace zxforge
