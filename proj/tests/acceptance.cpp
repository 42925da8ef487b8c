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


// Acceptance run: one PASS/FAIL line per criterion, tolerances pinned below.
// Usage: zxforge_acceptance [--allow ID,ID,...]
// Exit status is 0 when every failing criterion is listed in --allow.

#include <chrono>
#include <cmath>
#include <cstring>
#include <functional>
#include <iomanip>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "support.hpp"
#include "trace_eval.hpp"
#include "zxforge/circuits.hpp"
#include "zxforge/explorer.hpp"
#include "zxforge/ltl.hpp"
#include "zxforge/tensor.hpp"

namespace zx = zxforge;

namespace {

constexpr double kTol = 1e-9;
constexpr std::size_t kSoundnessDiagrams = 200;
constexpr double kSoundnessSeconds = 60.0;
constexpr double kGhz7Seconds = 60.0;
constexpr double kRatioLo = 3.5;
constexpr double kRatioHi = 4.5;
constexpr std::size_t kCorpusNodes = 5;
constexpr std::size_t kCorpusWires = 6;
constexpr std::size_t kDualityPairs = 100;

class Report {
  public:
    void line(const std::string &id, bool ok, const std::string &text) {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << std::left << std::setw(4) << id << text << std::endl;
        if (!ok) {
            failed_.insert(id);
        }
    }
    static void info(const std::string &text) { std::cout << "       " << text << std::endl; }
    [[nodiscard]] const std::set<std::string> &failed() const { return failed_; }

  private:
    std::set<std::string> failed_;
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

zx::StateSpace run(const zx::Diagram &d, const std::vector<std::string> &rules,
                   const std::map<std::string, int> &budgets = {}, const std::vector<std::string> &tokens = {},
                   unsigned threads = 1) {
    zx::RuleSet rs = zx::RuleSet::builtins(rules);
    for (const auto &[name, n] : budgets) {
        rs.set_budgeted(name);
    }
    zx::State s{d, budgets, tokens};
    zx::ExploreOptions opt;
    opt.threads = threads;
    return zx::explore(s, rs, opt);
}

std::string counts(const zx::StateSpace &sp) {
    return std::to_string(sp.states.size()) + " states / " + std::to_string(zx::final_states(sp).size()) + " finals";
}

bool all_finals_equal(const zx::StateSpace &sp, const zx::ComplexMatrix &want) {
    for (std::size_t f : zx::final_states(sp)) {
        if (!zx::equal_up_to_scalar(want, zx::tensor(sp.states[f].diagram), kTol)) {
            return false;
        }
    }
    return true;
}

zx::ComplexMatrix ghz_map(const zx::Diagram &final_shape) {
    zx::ComplexMatrix m = zx::tensor(final_shape);
    std::fill(m.data.begin(), m.data.end(), zx::Complex(0));
    m.data.front() = m.data.back() = 1;
    return m;
}

// Checks a counterexample against the space and the independent trace evaluator.
bool lasso_replays(const zx::StateSpace &sp, const zx::FormulaPtr &f, const zx::CheckResult &r) {
    if (r.holds || !r.counterexample) {
        return false;
    }
    zx::Kripke k(sp);
    auto w = zx::testing::replay(*r.counterexample, k);
    return w && zx::testing::violates(f, *w, sp, k);
}

// --- criteria ------------------------------------------------------------------------------------

void soundness(Report &rep) {
    const std::vector<std::string> rules = {"f",     "id",  "hh",    "hopf", "pi",  "c",   "c_pi", "h",
                                            "h_toggle", "b", "lcomp", "pivot", "zh1", "zh2", "zh3",  "idgen_g"};
    auto t0 = std::chrono::steady_clock::now();
    bool ok = true;
    std::size_t total = 0;
    std::ostringstream detail;
    for (std::size_t i = 0; i < rules.size(); ++i) {
        auto st = zx::testing::check_soundness(zx::builtin_rule(rules[i]), kSoundnessDiagrams, 1000 + i);
        ok = ok && st.diagrams >= kSoundnessDiagrams && st.unsound == 0;
        total += st.rewrites;
        detail << rules[i] << ":" << st.diagrams << "/" << st.rewrites << "/" << st.unsound << " ";
    }
    double secs = seconds_since(t0);
    Report::info("diagrams/rewrites/unsound per rule: " + detail.str());
    std::ostringstream os;
    os << "soundness: " << rules.size() << " rules x " << kSoundnessDiagrams << " diagrams (<= 10 wires), " << total
       << " rewrites, tol " << kTol << ", " << std::fixed << std::setprecision(1) << secs << " s (limit "
       << kSoundnessSeconds << " s)";
    rep.line("1", ok && secs < kSoundnessSeconds, os.str());
}

void teleportation(Report &rep) {
    zx::Diagram d = zx::teleportation(0, 0);
    zx::StateSpace sp = run(d, {"f", "id", "h"});
    auto finals = zx::final_states(sp);
    bool unique = finals.size() == 1;
    bool bare = false;
    bool ident = false;
    if (unique) {
        const zx::Diagram &f = sp.states[finals[0]].diagram;
        bare = f.node_count() == 2 && f.boundary_count() == 2 && f.wire_count() == 1;
        ident = zx::equal_up_to_scalar(zx::tensor(f), zx::tensor(zx::teleportation(0, 0)), kTol);
        zx::ComplexMatrix t = zx::tensor(f);
        zx::ComplexMatrix id = t;
        id.data = {1, 0, 0, 1};
        ident = ident && zx::equal_up_to_scalar(t, id, kTol);
    }
    rep.line("2a", unique && bare && ident,
             "teleportation {f,id,h}: " + counts(sp) + ", unique final is the bare wire, tensor ~ identity");
    rep.line("2b", sp.states.size() == 17, "teleportation state count " + std::to_string(sp.states.size()) +
                                               " (target 17)");
    zx::StateSpace sp11 = run(zx::teleportation(1, 1), {"f", "id", "h"});
    Report::info("teleportation(1,1): " + counts(sp11));
}

void ghz_family(Report &rep) {
    const std::vector<std::size_t> want = {39, 156, 606, 2424, 9624};
    std::vector<std::size_t> got;
    bool finals_ok = true;
    double t7 = 0;
    for (int n = 3; n <= 7; ++n) {
        auto t0 = std::chrono::steady_clock::now();
        zx::StateSpace sp = run(zx::ghz(n), {"f", "id", "h"});
        double secs = seconds_since(t0);
        if (n == 7) {
            t7 = secs;
        }
        got.push_back(sp.states.size());
        auto finals = zx::final_states(sp);
        finals_ok = finals_ok && !finals.empty() && all_finals_equal(sp, ghz_map(sp.states[finals[0]].diagram));
        std::ostringstream os;
        os << "ghz(" << n << "): " << counts(sp) << ", " << std::fixed << std::setprecision(2) << secs << " s";
        Report::info(os.str());
    }
    std::ostringstream c;
    for (std::size_t v : got) {
        c << v << " ";
    }
    rep.line("3a", got == want, "ghz 3..7 state counts " + c.str() + "(target 39 156 606 2424 9624)");
    bool ratio_ok = true;
    std::ostringstream r;
    r << std::fixed << std::setprecision(3);
    for (std::size_t i = 1; i < got.size(); ++i) {
        double q = static_cast<double>(got[i]) / static_cast<double>(got[i - 1]);
        ratio_ok = ratio_ok && q >= kRatioLo && q <= kRatioHi;
        r << q << " ";
    }
    rep.line("3b", ratio_ok, "ghz growth ratios " + r.str() + "within [3.5, 4.5]");
    rep.line("3c", finals_ok, "every ghz final equals the GHZ map (tol 1e-9)");
    std::ostringstream t;
    t << std::fixed << std::setprecision(2) << "ghz(7) explored in " << t7 << " s (limit " << kGhz7Seconds << " s)";
    rep.line("3d", t7 < kGhz7Seconds, t.str());
}

// Minimum BFS depth of a final state whose idgen_g budget equals `left`.
std::size_t final_depth(const zx::StateSpace &sp, int left) {
    std::size_t best = SIZE_MAX;
    for (std::size_t f : zx::final_states(sp)) {
        if (sp.states[f].budgets.at("idgen_g") == left) {
            best = std::min(best, sp.depth[f]);
        }
    }
    return best;
}

void idgen(Report &rep) {
    struct Case {
        std::string name;
        zx::Diagram d;
        std::size_t target;
        std::string id;
    };
    std::vector<Case> cases = {{"teleportation", zx::teleportation(0, 0), 313, "4a"}, {"ghz3", zx::ghz(3), 800, "4b"}};
    bool ltl_ok = true;
    bool short_ok = true;
    zx::FormulaPtr f = zx::parse_formula("!<>(final & budget(idgen_g)=1)");
    for (const Case &c : cases) {
        zx::StateSpace sp = run(c.d, {"f", "id", "h", "idgen_g"}, {{"idgen_g", 1}});
        rep.line(c.id, sp.states.size() == c.target,
                 "idgen_g(1) on " + c.name + ": " + counts(sp) + " (target " + std::to_string(c.target) + ")");
        zx::StateSpace lit = run(c.d, {"f", "id", "h", "idgen_g_literal"}, {{"idgen_g", 1}});
        std::size_t faithful = 0;
        for (std::size_t s : zx::final_states(lit)) {
            faithful += zx::equal_up_to_scalar(zx::tensor(c.d), zx::tensor(lit.states[s].diagram), kTol);
        }
        Report::info("literal bridge listing on " + c.name + ": " + counts(lit) +
                     " (not an equation; finals equal to the input: " + std::to_string(faithful) + ")");
        zx::CheckResult r = zx::check(sp, f);
        ltl_ok = ltl_ok && lasso_replays(sp, f, r);
        std::size_t with = final_depth(sp, 0);
        std::size_t without = final_depth(sp, 1);
        short_ok = short_ok && without != SIZE_MAX && (with == SIZE_MAX || with >= without);
        Report::info(c.name + ": shortest final without idgen_g at depth " + std::to_string(without) +
                     ", with idgen_g at depth " + (with == SIZE_MAX ? std::string("-") : std::to_string(with)));
    }
    rep.line("4c", ltl_ok, "!<>(final & budget(idgen_g)=1) VIOLATED on both, witness replays");
    rep.line("4d", short_ok, "no path through idgen_g reaches a final strictly sooner");
}

void pauli_and_qft(Report &rep) {
    zx::Diagram p = zx::pauli_pushing();
    zx::StateSpace sp = run(p, {"pi", "f", "id"}, {{"pi", 4}});
    std::size_t nf = zx::final_states(sp).size();
    rep.line("5a", sp.exhaustive && nf >= 2 && all_finals_equal(sp, zx::tensor(p)),
             "pauli pushing {pi(4),f,id}: " + counts(sp) + ", all finals tensor-equal");
    Report::info("soft target 533 states / 7 finals: measured " + counts(sp));
    zx::StateSpace q = run(zx::qft2(), {"pi", "f", "id", "c", "h"}, {{"pi", 2}});
    rep.line("5b", q.exhaustive && all_finals_equal(q, zx::tensor(zx::qft2())),
             "qft2 {pi(2),f,id,c,h} terminates: " + counts(q));
    Report::info("soft target 1186 states / 8 finals: measured " + counts(q));
}

void lemma(Report &rep) {
    zx::Diagram d = zx::kn_hadamard(4);
    zx::StateSpace sp = run(d, {"lemma_ih3", "lemma_ext", "f", "id"}, {}, {"t_ih", "t_ext"});
    bool order = true;
    for (const zx::Transition &t : sp.transitions) {
        if (t.rule == "lemma_ih3" || t.rule == "lemma_ext") {
            const auto &tok = sp.states[t.from].tokens;
            order = order && !tok.empty() && tok.front() == (t.rule == "lemma_ih3" ? "t_ih" : "t_ext");
        }
    }
    auto finals = zx::final_states(sp);
    bool single = finals.size() == 1 && sp.states[finals[0]].tokens.empty() && all_finals_equal(sp, zx::tensor(d));
    rep.line("6", order && single, "kn_hadamard(4) token script [t_ih, t_ext]: " + counts(sp) +
                                       ", order respected, single tensor-equal final");
    Report::info("soft target 266 states: measured " + std::to_string(sp.states.size()));
}

std::string invariant(const zx::Diagram &d) {
    auto inc = d.incidence();
    auto label = [&](zx::NodeIndex v) {
        const zx::Node &n = d.node(v);
        return std::to_string(static_cast<int>(n.type)) + std::to_string(static_cast<int>(n.color)) + "/" +
               std::to_string(n.phase.degrees()) + n.name;
    };
    std::vector<std::string> parts;
    for (zx::NodeIndex v = 0; v < d.node_count(); ++v) {
        std::vector<std::string> nb;
        for (zx::HalfEdge h : inc[v]) {
            nb.push_back(label(d.node_of(zx::Diagram::partner(h))));
        }
        std::sort(nb.begin(), nb.end());
        std::string s = label(v) + ":";
        for (const std::string &x : nb) {
            s += x + ",";
        }
        parts.push_back(std::move(s));
    }
    std::sort(parts.begin(), parts.end());
    std::string out;
    for (const std::string &p : parts) {
        out += p + "|";
    }
    return out;
}

void canonical_corpus(Report &rep) {
    auto t0 = std::chrono::steady_clock::now();
    auto corpus = zx::testing::exhaustive_corpus(kCorpusNodes, kCorpusWires,
                                                 {zx::Node::z(), zx::Node::x(), zx::Node::hbox(), zx::Node::boundary("")});
    std::map<std::string, std::vector<std::size_t>> classes;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
        classes[zx::canonical_key(corpus[i]).bytes].push_back(i);
    }
    // equal keys imply isomorphic
    std::size_t same_bad = 0;
    for (const auto &[key, members] : classes) {
        for (std::size_t i = 1; i < members.size(); ++i) {
            same_bad += !zx::iso_oracle(corpus[members[0]], corpus[members[i]]);
        }
    }
    // different keys imply non-isomorphic; only pairs sharing the neighbourhood invariant can be isomorphic
    std::map<std::string, std::vector<std::size_t>> buckets;
    for (const auto &[key, members] : classes) {
        buckets[invariant(corpus[members[0]])].push_back(members[0]);
    }
    std::size_t diff_bad = 0;
    std::size_t pairs = 0;
    for (const auto &[inv, reps] : buckets) {
        for (std::size_t i = 0; i < reps.size(); ++i) {
            for (std::size_t j = i + 1; j < reps.size(); ++j) {
                ++pairs;
                diff_bad += zx::iso_oracle(corpus[reps[i]], corpus[reps[j]]);
            }
        }
    }
    std::ostringstream os;
    os << "canonical_key == iso_oracle on all " << corpus.size() << " diagrams (<= " << kCorpusNodes << " nodes, <= "
       << kCorpusWires << " wires): " << classes.size() << " classes, " << pairs << " cross-class pairs, "
       << same_bad + diff_bad << " disagreements, " << std::fixed << std::setprecision(1) << seconds_since(t0) << " s";
    rep.line("7", same_bad + diff_bad == 0, os.str());
}

std::string random_formula(std::mt19937_64 &rng, int depth) {
    static const char *atoms[] = {"final", "spiders>=2", "spiders=1", "hboxes=0", "wires<3", "wires>=4"};
    std::uniform_int_distribution<int> op(0, depth <= 0 ? 0 : 8);
    std::uniform_int_distribution<int> atom(0, 5);
    auto sub = [&] { return "(" + random_formula(rng, depth - 1) + ")"; };
    switch (op(rng)) {
        case 0: return atoms[atom(rng)];
        case 1: return "!" + sub();
        case 2: return sub() + " & " + sub();
        case 3: return sub() + " | " + sub();
        case 4: return "X " + sub();
        case 5: return "<>" + sub();
        case 6: return "[]" + sub();
        case 7: return sub() + " U " + sub();
        default: return sub() + " -> " + sub();
    }
}

void ltl(Report &rep) {
    std::vector<zx::StateSpace> spaces = {
        run(zx::ghz(3), {"f", "id", "h"}),
        run(zx::ghz(4), {"f", "id", "h"}),
        run(zx::teleportation(0, 0), {"f", "id", "h"}),
        run(zx::teleportation(1, 0), {"f", "id", "h", "hh"}),
        run(zx::ghz(3), {"f", "id", "h", "idgen_g"}, {{"idgen_g", 1}}),
        run(zx::pauli_pushing(), {"pi", "f", "id"}, {{"pi", 2}}),
        run(zx::qft2(), {"f", "id", "c", "h"}),
        run(zx::kn_hadamard(4), {"lemma_ih3", "lemma_ext", "f", "id"}, {}, {"t_ih", "t_ext"}),
        run(zx::kn_hadamard(3), {"lcomp", "f", "id"}),
        run(zx::ghz(3), {"f", "id", "h", "hopf", "c"}),
    };
    const std::vector<std::string> props = {"final",     "spiders=1",    "spiders>=3", "hboxes=0",
                                            "wires<=2",  "hboxes>=4",    "final & spiders>=2",
                                            "wires>=12", "!final & hboxes=1", "spiders=0"};
    std::size_t pairs = 0;
    std::size_t agree = 0;
    std::size_t lassos = 0;
    std::size_t replayed = 0;
    for (const zx::StateSpace &sp : spaces) {
        for (const std::string &p : props) {
            ++pairs;
            bool reach = zx::reachable(sp, zx::parse_formula(p));
            zx::FormulaPtr f = zx::parse_formula("!<>(" + p + ")");
            zx::CheckResult r = zx::check(sp, f);
            agree += reach == !r.holds;
            if (!r.holds) {
                ++lassos;
                replayed += lasso_replays(sp, f, r);
            }
        }
    }
    std::mt19937_64 rng(8);
    for (int i = 0; i < 200; ++i) {
        const zx::StateSpace &sp = spaces[static_cast<std::size_t>(i) % spaces.size()];
        zx::FormulaPtr f = zx::parse_formula(random_formula(rng, 3));
        zx::CheckResult r = zx::check(sp, f);
        if (!r.holds) {
            ++lassos;
            replayed += lasso_replays(sp, f, r);
        }
    }
    rep.line("8a", pairs >= kDualityPairs && agree == pairs,
             "reachable(p) == !check(!<>p).holds on " + std::to_string(agree) + "/" + std::to_string(pairs) + " pairs");
    rep.line("8b", lassos > 0 && replayed == lassos,
             std::to_string(replayed) + "/" + std::to_string(lassos) + " counterexample lassos replay and violate");
}

void determinism(Report &rep) {
    std::string one = zx::space_to_json(run(zx::ghz(5), {"f", "id", "h"}, {}, {}, 1)).dump();
    bool same = true;
    for (unsigned t : {2U, 8U}) {
        same = same && zx::space_to_json(run(zx::ghz(5), {"f", "id", "h"}, {}, {}, t)).dump() == one;
    }
    rep.line("9", same, "ghz(5) export byte-identical for 1, 2 and 8 threads (" + std::to_string(one.size()) + " bytes)");
}

std::set<std::string> split(const std::string &s) {
    std::set<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (!item.empty()) {
            out.insert(item);
        }
    }
    return out;
}

}  // namespace

int main(int argc, char **argv) {
    std::set<std::string> allowed;
    for (int i = 1; i < argc; ++i) {
        if (std::strcmp(argv[i], "--allow") == 0 && i + 1 < argc) {
            allowed = split(argv[++i]);
        } else {
            std::cerr << "usage: " << argv[0] << " [--allow ID,ID,...]\n";
            return 2;
        }
    }
    Report rep;
    const std::vector<std::function<void(Report &)>> steps = {soundness,     teleportation,    ghz_family, idgen,
                                                              pauli_and_qft, lemma, canonical_corpus, ltl, determinism};
    for (const auto &step : steps) {
        step(rep);
    }
    std::size_t unexpected = 0;
    for (const std::string &id : rep.failed()) {
        unexpected += !allowed.contains(id);
    }
    std::cout << rep.failed().size() << " failing criteria, " << unexpected << " not in the allow list" << std::endl;
    return unexpected == 0 ? 0 : 1;
}
