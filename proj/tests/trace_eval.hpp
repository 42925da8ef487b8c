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

// Independent evaluation of LTL formulas on ultimately periodic words, for checking lassos.

#include <optional>
#include <vector>

#include "zxforge/ltl.hpp"

namespace zxforge::testing {

// Word s_0 .. s_last with s_last -> s_loop; evaluated by fixpoints over positions.
struct Word {
    std::vector<std::size_t> states;
    std::size_t loop = 0;
};

inline std::vector<bool> eval_word(const FormulaPtr &f, const Word &w, const StateSpace &sp, const Kripke &k) {
    using Op = Formula::Op;
    std::size_t n = w.states.size();
    auto next = [&](std::size_t i) { return i + 1 < n ? i + 1 : w.loop; };
    std::vector<bool> out(n);
    switch (f->op) {
        case Op::truth:
        case Op::falsity:
            out.assign(n, f->op == Op::truth);
            return out;
        case Op::prop:
            for (std::size_t i = 0; i < n; ++i) {
                out[i] = eval_prop(f->prop, sp, w.states[i], k.is_final[w.states[i]]);
            }
            return out;
        case Op::neg:
            out = eval_word(f->lhs, w, sp, k);
            out.flip();
            return out;
        default:
            break;
    }
    std::vector<bool> a = f->lhs ? eval_word(f->lhs, w, sp, k) : std::vector<bool>(n, true);
    std::vector<bool> b = f->rhs ? eval_word(f->rhs, w, sp, k) : std::vector<bool>(n);
    switch (f->op) {
        case Op::conj:
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] && b[i];
            return out;
        case Op::disj:
            for (std::size_t i = 0; i < n; ++i) out[i] = a[i] || b[i];
            return out;
        case Op::next:
            for (std::size_t i = 0; i < n; ++i) out[i] = a[next(i)];
            return out;
        default:
            break;
    }
    // until: least fixpoint; release: greatest fixpoint
    std::vector<bool> hold, stop;
    bool least = true;
    if (f->op == Op::eventually) {
        hold.assign(n, true), stop = a;
    } else if (f->op == Op::always) {
        hold = a, stop.assign(n, false), least = false;
    } else if (f->op == Op::until) {
        hold = a, stop = b;
    } else {
        hold = b, stop = a, least = false;  // a R b
    }
    out.assign(n, !least);
    for (std::size_t iter = 0; iter <= n; ++iter) {
        for (std::size_t r = n; r-- > 0;) {
            out[r] = least ? (stop[r] || (hold[r] && out[next(r)])) : (hold[r] && (stop[r] || out[next(r)]));
        }
    }
    return out;
}

inline bool violates(const FormulaPtr &f, const Word &w, const StateSpace &sp, const Kripke &k) {
    return !eval_word(f, w, sp, k)[0];
}

// Validates the lasso against the Kripke structure and turns it into a word.
inline std::optional<Word> replay(const Lasso &l, const Kripke &k) {
    auto edge = [&](const LassoStep &s) {
        for (const auto &[r, t] : k.succ[s.from]) {
            if (r == s.rule && t == s.to) {
                return true;
            }
        }
        return false;
    };
    Word w;
    std::size_t at = 0;
    for (const LassoStep &s : l.prefix) {
        if (s.from != at || !edge(s)) {
            return std::nullopt;
        }
        w.states.push_back(at);
        at = s.to;
    }
    if (l.cycle.empty()) {
        return std::nullopt;
    }
    w.loop = w.states.size();
    std::size_t start = at;
    for (const LassoStep &s : l.cycle) {
        if (s.from != at || !edge(s)) {
            return std::nullopt;
        }
        w.states.push_back(at);
        at = s.to;
    }
    if (at != start) {
        return std::nullopt;
    }
    return w;
}

}  // namespace zxforge::testing
