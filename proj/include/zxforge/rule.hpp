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
#include <map>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "zxforge/diagram.hpp"

namespace zxforge {

enum class RuleErrorKind { link_condition, unbound_label, unbound_variable, unknown_kind, syntax, unsupported };

class RuleError : public std::runtime_error {
  public:
    RuleError(RuleErrorKind k, const std::string &what) : std::runtime_error(what), kind(k) {}
    RuleErrorKind kind;
};

// ---------------------------------------------------------------------------------------------
// Expressions and values

enum class ValueType { number, phase, color };

struct Value {
    long long v = 0;
    ValueType type = ValueType::number;
};

struct Expr {
    enum class Op { lit, var, neg, add, sub, mul };
    Op op = Op::lit;
    long long value = 0;
    std::string name;
    std::vector<Expr> args;

    static Expr lit(long long v) { return {Op::lit, v, {}, {}}; }
    static Expr var(std::string n) { return {Op::var, 0, std::move(n), {}}; }

    [[nodiscard]] bool is_lit() const { return op == Op::lit; }
    [[nodiscard]] bool is_var() const { return op == Op::var; }

    void collect_vars(std::set<std::string> &out) const {
        if (op == Op::var) {
            out.insert(name);
        }
        for (const Expr &a : args) {
            a.collect_vars(out);
        }
    }

    bool operator==(const Expr &) const = default;
};

using Binding = std::map<std::string, Value>;

namespace detail {

class ExprParser {
  public:
    explicit ExprParser(const std::string &s) : s_(s) {}

    Expr parse_all() {
        Expr e = parse_sum();
        skip();
        if (pos_ != s_.size()) {
            fail("unexpected '" + s_.substr(pos_) + "'");
        }
        return e;
    }

  private:
    void skip() {
        while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) {
            ++pos_;
        }
    }
    bool eat(char c) {
        skip();
        if (pos_ < s_.size() && s_[pos_] == c) {
            ++pos_;
            return true;
        }
        return false;
    }
    [[noreturn]] void fail(const std::string &msg) const {
        throw RuleError(RuleErrorKind::syntax, "expression '" + s_ + "': " + msg);
    }
    Expr parse_sum() {
        Expr e = parse_product();
        for (;;) {
            if (eat('+')) {
                e = Expr{Expr::Op::add, 0, {}, {e, parse_product()}};
            } else if (eat('-')) {
                e = Expr{Expr::Op::sub, 0, {}, {e, parse_product()}};
            } else {
                return e;
            }
        }
    }
    Expr parse_product() {
        Expr e = parse_unary();
        while (eat('*')) {
            e = Expr{Expr::Op::mul, 0, {}, {e, parse_unary()}};
        }
        return e;
    }
    Expr parse_unary() {
        if (eat('-')) {
            Expr inner = parse_unary();
            if (inner.is_lit()) {
                return Expr::lit(-inner.value);
            }
            return Expr{Expr::Op::neg, 0, {}, {inner}};
        }
        if (eat('(')) {
            Expr e = parse_sum();
            if (!eat(')')) {
                fail("missing ')'");
            }
            return e;
        }
        skip();
        std::size_t start = pos_;
        if (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
            while (pos_ < s_.size() && std::isdigit(static_cast<unsigned char>(s_[pos_]))) {
                ++pos_;
            }
            return Expr::lit(std::stoll(s_.substr(start, pos_ - start)));
        }
        while (pos_ < s_.size() && (std::isalnum(static_cast<unsigned char>(s_[pos_])) || s_[pos_] == '_')) {
            ++pos_;
        }
        if (start == pos_) {
            fail("expected a term");
        }
        return Expr::var(s_.substr(start, pos_ - start));
    }

    const std::string &s_;
    std::size_t pos_ = 0;
};

}  // namespace detail

inline Expr parse_expr(const std::string &s) { return detail::ExprParser(s).parse_all(); }

inline std::string to_string(const Expr &e) {
    switch (e.op) {
        case Expr::Op::lit:
            return std::to_string(e.value);
        case Expr::Op::var:
            return e.name;
        case Expr::Op::neg: {
            const Expr &a = e.args[0];
            bool wrap = !(a.is_lit() || a.is_var());
            return "-" + (wrap ? "(" + to_string(a) + ")" : to_string(a));
        }
        case Expr::Op::add:
            return to_string(e.args[0]) + "+" + to_string(e.args[1]);
        case Expr::Op::sub: {
            const Expr &b = e.args[1];
            bool wrap = b.op == Expr::Op::add || b.op == Expr::Op::sub;
            return to_string(e.args[0]) + "-" + (wrap ? "(" + to_string(b) + ")" : to_string(b));
        }
        case Expr::Op::mul: {
            auto side = [](const Expr &x) {
                bool wrap = x.op == Expr::Op::add || x.op == Expr::Op::sub;
                return wrap ? "(" + to_string(x) + ")" : to_string(x);
            };
            return side(e.args[0]) + "*" + side(e.args[1]);
        }
    }
    return {};
}

inline Value eval_expr(const Expr &e, const Binding &b) {
    auto combine = [](ValueType x, ValueType y) {
        if (x == ValueType::phase || y == ValueType::phase) {
            return ValueType::phase;
        }
        if (x == ValueType::color || y == ValueType::color) {
            return ValueType::color;
        }
        return ValueType::number;
    };
    switch (e.op) {
        case Expr::Op::lit:
            return {e.value, ValueType::number};
        case Expr::Op::var: {
            auto it = b.find(e.name);
            if (it == b.end()) {
                throw RuleError(RuleErrorKind::unbound_variable, "unbound variable '" + e.name + "'");
            }
            return it->second;
        }
        case Expr::Op::neg: {
            Value a = eval_expr(e.args[0], b);
            return {-a.v, a.type};
        }
        default:
            break;
    }
    Value x = eval_expr(e.args[0], b);
    Value y = eval_expr(e.args[1], b);
    ValueType t = combine(x.type, y.type);
    if (e.op == Expr::Op::add) {
        return {x.v + y.v, t};
    }
    if (e.op == Expr::Op::sub) {
        return {x.v - y.v, t};
    }
    return {x.v * y.v, t};
}

inline bool values_equal(const Value &x, const Value &y) {
    if (x.type == ValueType::phase || y.type == ValueType::phase) {
        return Phase(static_cast<int>(x.v % 360)) == Phase(static_cast<int>(y.v % 360));
    }
    return x.v == y.v;
}

// ---------------------------------------------------------------------------------------------
// Guards

struct Constraint {
    enum class Kind { define, equal, not_equal, is_int };
    Kind kind = Kind::equal;
    std::string var;  // define / is_int
    Expr lhs;
    Expr rhs;
    bool operator==(const Constraint &) const = default;
};

using Guard = std::vector<Constraint>;

inline std::string to_string(const Constraint &c) {
    switch (c.kind) {
        case Constraint::Kind::define:
            return c.var + " = " + to_string(c.rhs);
        case Constraint::Kind::equal:
            return to_string(c.lhs) + " == " + to_string(c.rhs);
        case Constraint::Kind::not_equal:
            return to_string(c.lhs) + " != " + to_string(c.rhs);
        case Constraint::Kind::is_int:
            return "int(" + c.var + ")";
    }
    return {};
}

/// Parses one guard item. `bound` holds the variables known so far; definitions are added to it.
inline Constraint parse_constraint(const std::string &text, std::set<std::string> &bound) {
    auto trim = [](std::string s) {
        auto ns = [](unsigned char ch) { return !std::isspace(ch); };
        s.erase(s.begin(), std::find_if(s.begin(), s.end(), ns));
        s.erase(std::find_if(s.rbegin(), s.rend(), ns).base(), s.end());
        return s;
    };
    auto require_bound = [&](const Expr &e) {
        std::set<std::string> vs;
        e.collect_vars(vs);
        for (const std::string &v : vs) {
            if (!bound.count(v)) {
                throw RuleError(RuleErrorKind::unbound_variable, "guard '" + text + "' uses unbound variable '" + v + "'");
            }
        }
    };
    std::string t = trim(text);
    Constraint c;
    if (t.rfind("int(", 0) == 0 && t.back() == ')') {
        c.kind = Constraint::Kind::is_int;
        c.var = trim(t.substr(4, t.size() - 5));
        c.lhs = Expr::var(c.var);
        require_bound(c.lhs);
        return c;
    }
    static const std::vector<std::pair<std::string, Constraint::Kind>> ops = {
        {"=:=", Constraint::Kind::equal},
        {"=\\=", Constraint::Kind::not_equal},
        {"==", Constraint::Kind::equal},
        {"!=", Constraint::Kind::not_equal},
        {"=", Constraint::Kind::define},
    };
    for (const auto &[op, kind] : ops) {
        std::size_t at = t.find(op);
        if (at == std::string::npos) {
            continue;
        }
        Expr lhs = parse_expr(t.substr(0, at));
        Expr rhs = parse_expr(t.substr(at + op.size()));
        require_bound(rhs);
        if (kind == Constraint::Kind::define && lhs.is_var() && !bound.count(lhs.name)) {
            c.kind = Constraint::Kind::define;
            c.var = lhs.name;
            c.lhs = lhs;
            c.rhs = rhs;
            bound.insert(lhs.name);
            return c;
        }
        require_bound(lhs);
        c.kind = kind == Constraint::Kind::not_equal ? Constraint::Kind::not_equal : Constraint::Kind::equal;
        c.lhs = lhs;
        c.rhs = rhs;
        return c;
    }
    throw RuleError(RuleErrorKind::syntax, "guard '" + text + "' is not a relation");
}

/// Evaluates the guard left to right; definitions extend `b`. Returns false on the first failed test.
inline bool eval_guard(const Guard &g, Binding &b) {
    for (const Constraint &c : g) {
        switch (c.kind) {
            case Constraint::Kind::define:
                b[c.var] = eval_expr(c.rhs, b);
                break;
            case Constraint::Kind::equal:
                if (!values_equal(eval_expr(c.lhs, b), eval_expr(c.rhs, b))) {
                    return false;
                }
                break;
            case Constraint::Kind::not_equal:
                if (values_equal(eval_expr(c.lhs, b), eval_expr(c.rhs, b))) {
                    return false;
                }
                break;
            case Constraint::Kind::is_int:
                // Phases are whole degrees, so any bound phase passes.
                (void)eval_expr(c.lhs, b);
                break;
        }
    }
    return true;
}

// ---------------------------------------------------------------------------------------------
// Rule schema

struct Endpoint {
    std::string wire;
    std::optional<std::string> group;  // quantified group label; "" is the anonymous label
    std::size_t min = 0;               // minimum group cardinality
    bool operator==(const Endpoint &) const = default;
};

enum class ShapeKind { spider, hbox };

/// Node shape used on both sides. On the left, colour and phase are literals or variables.
struct NodeShape {
    ShapeKind kind = ShapeKind::spider;
    Expr color = Expr::lit(1);
    Expr phase = Expr::lit(0);
    std::vector<Endpoint> endpoints;
    std::optional<std::string> replicate;
    bool operator==(const NodeShape &) const = default;
};

struct Gating {
    enum class Kind { none, budget, token };
    Kind kind = Kind::none;
    std::string name;
    bool operator==(const Gating &) const = default;
};

struct Rule {
    std::string name;
    std::vector<NodeShape> lhs;
    Guard guard;
    std::vector<NodeShape> rhs;
    std::vector<std::pair<std::string, std::string>> connect;
    Gating gating;
    bool operator==(const Rule &) const = default;
};

enum class WireRole { consumed, context, fresh };

/// Where a wire variable occurs. `node` is -1 for connector entries.
struct Occurrence {
    bool lhs = false;
    int node = -1;
    int endpoint = -1;
};

namespace detail {

inline std::vector<std::string> scope_of(const NodeShape &n, const Endpoint &e) {
    std::vector<std::string> s;
    if (n.replicate) {
        s.push_back(*n.replicate);
    }
    if (e.group) {
        s.push_back(*e.group);
    }
    std::sort(s.begin(), s.end());
    return s;
}

}  // namespace detail

inline std::map<std::string, std::vector<Occurrence>> wire_occurrences(const Rule &r) {
    std::map<std::string, std::vector<Occurrence>> occ;
    for (int side = 0; side < 2; ++side) {
        const auto &nodes = side == 0 ? r.lhs : r.rhs;
        for (std::size_t n = 0; n < nodes.size(); ++n) {
            for (std::size_t e = 0; e < nodes[n].endpoints.size(); ++e) {
                occ[nodes[n].endpoints[e].wire].push_back({side == 0, static_cast<int>(n), static_cast<int>(e)});
            }
        }
    }
    for (const auto &[a, b] : r.connect) {
        occ[a].push_back({false, -1, -1});
        occ[b].push_back({false, -1, -1});
    }
    return occ;
}

inline WireRole wire_role(const std::vector<Occurrence> &occ) {
    int in_lhs = static_cast<int>(std::count_if(occ.begin(), occ.end(), [](const Occurrence &o) { return o.lhs; }));
    return in_lhs == 2 ? WireRole::consumed : in_lhs == 1 ? WireRole::context : WireRole::fresh;
}

/// Variables bound by the left-hand side.
inline std::set<std::string> lhs_variables(const Rule &r) {
    std::set<std::string> vs;
    for (const NodeShape &n : r.lhs) {
        if (n.kind == ShapeKind::spider) {
            n.color.collect_vars(vs);
        }
        n.phase.collect_vars(vs);
    }
    return vs;
}

/// Checks well-formedness. Throws RuleError.
inline void validate_rule(const Rule &r) {
    auto occ = wire_occurrences(r);
    for (const auto &[var, list] : occ) {
        if (list.size() != 2) {
            throw RuleError(RuleErrorKind::link_condition, "rule '" + r.name + "': Link Condition violated, wire variable '" +
                                                               var + "' occurs " + std::to_string(list.size()) +
                                                               " times (must be exactly 2)");
        }
        auto scope = [&](const Occurrence &o) {
            if (o.node < 0) {
                return std::vector<std::string>{};
            }
            const NodeShape &n = (o.lhs ? r.lhs : r.rhs)[static_cast<std::size_t>(o.node)];
            return detail::scope_of(n, n.endpoints[static_cast<std::size_t>(o.endpoint)]);
        };
        if (scope(list[0]) != scope(list[1])) {
            throw RuleError(RuleErrorKind::link_condition,
                            "rule '" + r.name + "': wire variable '" + var + "' occurs under different quantifiers");
        }
        if (list[0].node < 0 && list[1].node < 0) {
            throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': connector '" + var + "' links only connectors");
        }
        for (const Occurrence &o : list) {
            if (o.node < 0 && wire_role(list) != WireRole::context) {
                throw RuleError(RuleErrorKind::unsupported,
                                "rule '" + r.name + "': connector variable '" + var + "' must occur once on the left");
            }
        }
    }
    std::set<std::string> labels;
    for (const NodeShape &n : r.lhs) {
        for (const Endpoint &e : n.endpoints) {
            auto s = detail::scope_of(n, e);
            if (std::adjacent_find(s.begin(), s.end()) != s.end()) {
                throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': label repeated in one scope");
            }
            labels.insert(s.begin(), s.end());
        }
        if (n.replicate && std::any_of(n.endpoints.begin(), n.endpoints.end(), [](const Endpoint &e) { return e.group.has_value(); })) {
            throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': nested quantifier on the left-hand side");
        }
        if ((!n.color.is_lit() && !n.color.is_var()) || (!n.phase.is_lit() && !n.phase.is_var())) {
            throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': left-hand attributes must be literals or variables");
        }
    }
    for (const NodeShape &n : r.rhs) {
        for (const Endpoint &e : n.endpoints) {
            for (const std::string &l : detail::scope_of(n, e)) {
                if (!labels.count(l)) {
                    throw RuleError(RuleErrorKind::unbound_label,
                                    "rule '" + r.name + "': quantifier label '" + l + "' is not bound on the left-hand side");
                }
            }
        }
        if (n.replicate && !labels.count(*n.replicate)) {
            throw RuleError(RuleErrorKind::unbound_label,
                            "rule '" + r.name + "': quantifier label '" + *n.replicate + "' is not bound on the left-hand side");
        }
    }
    // Replicated left-hand nodes must be reachable through a consumed wire from a group of a plain node.
    std::set<std::string> anchor_labels;
    for (std::size_t ni = 0; ni < r.lhs.size(); ++ni) {
        const NodeShape &n = r.lhs[ni];
        if (!n.replicate) {
            continue;
        }
        bool anchored = false;
        for (const Endpoint &e : n.endpoints) {
            const auto &list = occ[e.wire];
            for (const Occurrence &o : list) {
                if (o.lhs && o.node >= 0 && static_cast<std::size_t>(o.node) != ni && !r.lhs[static_cast<std::size_t>(o.node)].replicate) {
                    anchored = true;
                }
            }
            for (const Occurrence &o : list) {
                if (o.lhs && o.node >= 0 && r.lhs[static_cast<std::size_t>(o.node)].replicate &&
                    static_cast<std::size_t>(o.node) != ni) {
                    throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': wire between two replicated left-hand nodes");
                }
            }
        }
        if (!anchored) {
            throw RuleError(RuleErrorKind::unsupported,
                            "rule '" + r.name + "': replicated left-hand node is not linked to a group");
        }
        if (!anchor_labels.insert(*n.replicate).second) {
            throw RuleError(RuleErrorKind::unsupported, "rule '" + r.name + "': two replicated left-hand nodes share a label");
        }
    }
    std::set<std::string> bound = lhs_variables(r);
    std::set<std::string> scratch = bound;
    for (const Constraint &c : r.guard) {
        std::set<std::string> vs;
        c.lhs.collect_vars(vs);
        c.rhs.collect_vars(vs);
        if (c.kind == Constraint::Kind::define) {
            vs.erase(c.var);
        }
        for (const std::string &v : vs) {
            if (!scratch.count(v)) {
                throw RuleError(RuleErrorKind::unbound_variable, "rule '" + r.name + "': guard uses unbound variable '" + v + "'");
            }
        }
        if (c.kind == Constraint::Kind::define) {
            scratch.insert(c.var);
        }
    }
    for (const NodeShape &n : r.rhs) {
        std::set<std::string> vs;
        if (n.kind == ShapeKind::spider) {
            n.color.collect_vars(vs);
        }
        n.phase.collect_vars(vs);
        for (const std::string &v : vs) {
            if (!scratch.count(v)) {
                throw RuleError(RuleErrorKind::unbound_variable,
                                "rule '" + r.name + "': right-hand side uses unbound variable '" + v + "'");
            }
        }
    }
}

// ---------------------------------------------------------------------------------------------
// JSON form

namespace detail {

inline Expr expr_from_json(const nlohmann::json &j) {
    if (j.is_number_integer()) {
        return Expr::lit(j.get<long long>());
    }
    if (j.is_string()) {
        return parse_expr(j.get<std::string>());
    }
    throw RuleError(RuleErrorKind::syntax, "expected integer or expression, got " + j.dump());
}

inline nlohmann::json expr_to_json(const Expr &e) {
    if (e.is_lit()) {
        return e.value;
    }
    return to_string(e);
}

// "L", "<p>L", "<>L" and "<*>L" ("*" is the anonymous label).
inline Endpoint endpoint_from_json(const nlohmann::json &j) {
    Endpoint e;
    if (j.is_string()) {
        std::string s = j.get<std::string>();
        if (!s.empty() && s[0] == '<') {
            std::size_t close = s.find('>');
            if (close == std::string::npos) {
                throw RuleError(RuleErrorKind::syntax, "bad endpoint '" + s + "'");
            }
            std::string label = s.substr(1, close - 1);
            e.group = label == "*" ? "" : label;
            s = s.substr(close + 1);
        }
        if (!s.empty() && s[0] == '+') {
            s = s.substr(1);
        }
        e.wire = s;
    } else if (j.is_object()) {
        e.wire = j.at("wire").get<std::string>();
        if (j.contains("group")) {
            e.group = j.at("group").get<std::string>();
        }
        e.min = j.value("min", std::size_t{0});
    } else {
        throw RuleError(RuleErrorKind::syntax, "bad endpoint " + j.dump());
    }
    if (e.wire.empty()) {
        throw RuleError(RuleErrorKind::syntax, "endpoint without a wire variable");
    }
    return e;
}

inline nlohmann::json endpoint_to_json(const Endpoint &e) {
    if (e.min > 0) {
        return {{"wire", e.wire}, {"group", e.group.value_or("")}, {"min", e.min}};
    }
    if (e.group) {
        return "<" + *e.group + ">" + e.wire;
    }
    return e.wire;
}

inline NodeShape shape_from_json(const nlohmann::json &j) {
    NodeShape n;
    std::string kind = j.at("kind").get<std::string>();
    if (kind == "spider") {
        n.kind = ShapeKind::spider;
        n.color = expr_from_json(j.at("color"));
    } else if (kind == "z" || kind == "x") {
        n.kind = ShapeKind::spider;
        n.color = Expr::lit(kind == "z" ? 1 : -1);
    } else if (kind == "h") {
        n.kind = ShapeKind::hbox;
        n.color = Expr::lit(1);
    } else {
        throw RuleError(RuleErrorKind::unknown_kind, "unknown node kind '" + kind + "'");
    }
    n.phase = j.contains("phase") ? expr_from_json(j.at("phase")) : Expr::lit(n.kind == ShapeKind::hbox ? 180 : 0);
    for (const auto &e : j.value("endpoints", nlohmann::json::array())) {
        n.endpoints.push_back(endpoint_from_json(e));
    }
    if (j.contains("replicate")) {
        std::string l = j.at("replicate").get<std::string>();
        n.replicate = l == "*" ? "" : l;
    }
    return n;
}

inline nlohmann::json shape_to_json(const NodeShape &n) {
    nlohmann::json j;
    if (n.kind == ShapeKind::hbox) {
        j["kind"] = "h";
    } else {
        j["kind"] = "spider";
        j["color"] = expr_to_json(n.color);
    }
    j["phase"] = expr_to_json(n.phase);
    j["endpoints"] = nlohmann::json::array();
    for (const Endpoint &e : n.endpoints) {
        j["endpoints"].push_back(endpoint_to_json(e));
    }
    if (n.replicate) {
        j["replicate"] = *n.replicate;
    }
    return j;
}

}  // namespace detail

/// Reads a rule from its JSON form and validates it.
inline Rule parse_rule(const nlohmann::json &j) {
    Rule r;
    try {
        r.name = j.at("name").get<std::string>();
        for (const auto &n : j.at("lhs")) {
            r.lhs.push_back(detail::shape_from_json(n));
        }
        for (const auto &n : j.value("rhs", nlohmann::json::array())) {
            r.rhs.push_back(detail::shape_from_json(n));
        }
        for (const auto &c : j.value("connect", nlohmann::json::array())) {
            r.connect.emplace_back(c.at(0).get<std::string>(), c.at(1).get<std::string>());
        }
        std::set<std::string> bound = lhs_variables(r);
        for (const auto &g : j.value("guard", nlohmann::json::array())) {
            r.guard.push_back(parse_constraint(g.get<std::string>(), bound));
        }
        if (j.contains("gating")) {
            const auto &g = j.at("gating");
            if (g.contains("budget")) {
                r.gating = {Gating::Kind::budget, g.at("budget").get<std::string>()};
            } else if (g.contains("token")) {
                r.gating = {Gating::Kind::token, g.at("token").get<std::string>()};
            }
        }
    } catch (const nlohmann::json::exception &e) {
        throw RuleError(RuleErrorKind::syntax, std::string("rule JSON: ") + e.what());
    }
    validate_rule(r);
    return r;
}

inline Rule parse_rule(const std::string &text) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::exception &e) {
        throw RuleError(RuleErrorKind::syntax, std::string("rule JSON: ") + e.what());
    }
    return parse_rule(j);
}

inline Rule parse_rule(const char *text) { return parse_rule(std::string(text)); }

inline nlohmann::json rule_to_json(const Rule &r) {
    nlohmann::json j;
    j["name"] = r.name;
    j["lhs"] = nlohmann::json::array();
    for (const NodeShape &n : r.lhs) {
        j["lhs"].push_back(detail::shape_to_json(n));
    }
    j["guard"] = nlohmann::json::array();
    for (const Constraint &c : r.guard) {
        j["guard"].push_back(to_string(c));
    }
    j["rhs"] = nlohmann::json::array();
    for (const NodeShape &n : r.rhs) {
        j["rhs"].push_back(detail::shape_to_json(n));
    }
    if (!r.connect.empty()) {
        j["connect"] = nlohmann::json::array();
        for (const auto &[a, b] : r.connect) {
            j["connect"].push_back({a, b});
        }
    }
    if (r.gating.kind == Gating::Kind::budget) {
        j["gating"] = {{"budget", r.gating.name}};
    } else if (r.gating.kind == Gating::Kind::token) {
        j["gating"] = {{"token", r.gating.name}};
    }
    return j;
}

inline std::string print_rule(const Rule &r) { return rule_to_json(r).dump(); }

}  // namespace zxforge
