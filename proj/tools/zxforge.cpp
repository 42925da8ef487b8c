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


// zxforge command line. Exit codes: 0 success, 1 negative answer (violated, differ),
// 2 usage or input error, 3 resource limit or incomplete state space.

#include <cstdlib>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "zxforge/circuits.hpp"
#include "zxforge/explorer.hpp"
#include "zxforge/io.hpp"
#include "zxforge/ltl.hpp"
#include "zxforge/tensor.hpp"

namespace zx = zxforge;

namespace {

constexpr int kOk = 0;
constexpr int kNegative = 1;
constexpr int kInputError = 2;
constexpr int kResourceError = 3;

struct RuleArgs {
    std::vector<std::string> rules;
    std::vector<std::string> rule_files;
    std::vector<std::string> budgets;  // name=N
    std::vector<std::string> tokens;
    std::string h_variant = "all";
};

void add_rule_options(CLI::App *cmd, RuleArgs &a) {
    cmd->add_option("--rules", a.rules, "Builtin rule names")->delimiter(',');
    cmd->add_option("--rule-file", a.rule_files, "JSON rule schema file (repeatable)");
    cmd->add_option("--budget", a.budgets, "Budget counter name=N; gates the rule of that name (repeatable)");
    cmd->add_option("--tokens", a.tokens, "Token script, front first")->delimiter(',');
    cmd->add_option("--h-variant", a.h_variant, "Colour change variant for 'h'")
        ->check(CLI::IsMember({"all", "toggle"}));
}

std::map<std::string, int> parse_budgets(const std::vector<std::string> &items) {
    std::map<std::string, int> out;
    for (const std::string &b : items) {
        auto eq = b.find('=');
        if (eq == std::string::npos || eq == 0) {
            throw zx::ParseError("budget '" + b + "' is not name=N");
        }
        try {
            out[b.substr(0, eq)] = std::stoi(b.substr(eq + 1));
        } catch (const std::exception &) {
            throw zx::ParseError("budget '" + b + "' has no integer value");
        }
    }
    return out;
}

zx::RuleSet make_rules(const RuleArgs &a) {
    zx::RuleSet rs;
    try {
        rs = zx::RuleSet::builtins(a.rules, a.h_variant == "toggle");
    } catch (const std::invalid_argument &e) {
        throw zx::ParseError(e.what());
    }
    for (const std::string &path : a.rule_files) {
        rs.rules.push_back(zx::wrap_rule(zx::parse_rule(zx::read_json_file(path))));
    }
    if (rs.rules.empty()) {
        throw zx::ParseError("no rules given");
    }
    for (const auto &[name, n] : parse_budgets(a.budgets)) {
        rs.set_budgeted(name);
    }
    return rs;
}

zx::Diagram load_diagram(const std::string &path) { return zx::diagram_from_json(zx::read_json_file(path)); }

void emit(const std::string &path, const std::string &text) {
    if (path.empty() || path == "-") {
        std::cout << text;
    } else {
        zx::write_text_file(path, text);
    }
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"zxforge: rule-based ZX/ZH diagram rewriting and state-space checking"};
    app.require_subcommand(1);
    int code = kOk;

    // build
    auto *build = app.add_subcommand("build", "Write a generated diagram as JSON");
    std::string kind;
    std::vector<int> params;
    std::string gates_file;
    std::string build_out;
    build->add_option("kind", kind, "ghz N | teleport A B | qft2 | kn N | pauli | gates FILE")
        ->required()
        ->check(CLI::IsMember({"ghz", "teleport", "qft2", "kn", "pauli", "gates"}));
    build->add_option("params", params, "Integer parameters");
    build->add_option("--file", gates_file, "Gate list JSON for 'gates'");
    build->add_option("-o,--output", build_out, "Output file (default stdout)");
    build->callback([&] {
        auto need = [&](std::size_t n) {
            if (params.size() != n) {
                throw zx::ParseError(kind + " takes " + std::to_string(n) + " integer parameter(s)");
            }
        };
        zx::Diagram d;
        try {
            if (kind == "ghz") {
                need(1);
                d = zx::ghz(params[0]);
            } else if (kind == "teleport") {
                need(2);
                d = zx::teleportation(params[0], params[1]);
            } else if (kind == "qft2") {
                need(0);
                d = zx::qft2();
            } else if (kind == "kn") {
                need(1);
                d = zx::kn_hadamard(params[0]);
            } else if (kind == "pauli") {
                need(0);
                d = zx::pauli_pushing();
            } else {
                need(0);
                d = zx::from_gates(zx::gates_from_json(zx::read_json_file(gates_file)));
            }
        } catch (const std::invalid_argument &e) {
            throw zx::ParseError(e.what());
        }
        emit(build_out, zx::diagram_to_json(d).dump(2) + "\n");
    });

    // explore
    auto *explore = app.add_subcommand("explore", "Explore the state space of a diagram");
    std::string in_path;
    RuleArgs rargs;
    zx::ExploreOptions opt;
    std::string loops = "step";
    std::string boundaries = "anonymous";
    std::string space_out;
    std::string dot_out;
    if (const char *env = std::getenv("ZXFORGE_THREADS")) {
        opt.threads = static_cast<unsigned>(std::max(1, std::atoi(env)));
    }
    explore->add_option("diagram", in_path, "Diagram JSON")->required();
    add_rule_options(explore, rargs);
    explore->add_option("--max-states", opt.max_states, "State limit");
    explore->add_option("--max-depth", opt.max_depth, "Depth limit");
    explore->add_option("--threads", opt.threads, "Worker threads (env ZXFORGE_THREADS)")->check(CLI::PositiveNumber);
    explore->add_option("--loops", loops, "Self-loop policy")->check(CLI::IsMember({"step", "eager"}));
    explore->add_option("--boundaries", boundaries, "Boundary names in state identity")
        ->check(CLI::IsMember({"anonymous", "named"}));
    explore->add_option("-o,--output", space_out, "State space JSON");
    explore->add_option("--dot", dot_out, "Graphviz output");
    explore->callback([&] {
        zx::RuleSet rs = make_rules(rargs);
        opt.loops = loops == "eager" ? zx::LoopPolicy::eager : zx::LoopPolicy::step;
        opt.boundaries = boundaries == "named" ? zx::BoundaryLabels::named : zx::BoundaryLabels::anonymous;
        zx::State s{load_diagram(in_path), parse_budgets(rargs.budgets), rargs.tokens};
        zx::StateSpace sp = zx::explore(s, rs, opt);
        if (!space_out.empty()) {
            zx::write_text_file(space_out, zx::space_to_json(sp).dump() + "\n");
        }
        if (!dot_out.empty()) {
            zx::write_text_file(dot_out, zx::to_dot(sp));
        }
        std::cout << sp.states.size() << " states, " << sp.transitions.size() << " transitions, "
                  << zx::final_states(sp).size() << " finals" << (sp.exhaustive ? "" : " (truncated)") << "\n";
        if (!sp.exhaustive) {
            code = kResourceError;
        }
    });

    // check
    auto *check = app.add_subcommand("check", "Model-check an LTL formula on an explored space");
    std::string space_path;
    std::string formula;
    check->add_option("space", space_path, "State space JSON")->required();
    check->add_option("formula", formula, "LTL formula")->required();
    check->callback([&] {
        zx::StateSpace sp = zx::space_from_json(zx::read_json_file(space_path));
        zx::CheckResult r = zx::check(sp, formula);
        if (r.holds) {
            std::cout << "HOLDS\n";
        } else {
            std::cout << "VIOLATED\n" << *r.counterexample;
            code = kNegative;
        }
    });

    // simplify
    auto *simplify = app.add_subcommand("simplify", "Apply the first available rewrite until none applies");
    std::string simp_in;
    std::string simp_out;
    RuleArgs sargs;
    std::size_t max_steps = 10000;
    simplify->add_option("diagram", simp_in, "Diagram JSON")->required();
    add_rule_options(simplify, sargs);
    simplify->add_option("--max-steps", max_steps, "Step limit");
    simplify->add_option("-o,--output", simp_out, "Output file (default stdout)");
    simplify->callback([&] {
        zx::RuleSet rs = make_rules(sargs);
        zx::ExploreOptions eager;
        eager.loops = zx::LoopPolicy::eager;
        zx::State s{zx::normalize(load_diagram(simp_in)), parse_budgets(sargs.budgets), sargs.tokens};
        std::size_t steps = 0;
        for (; steps < max_steps; ++steps) {
            auto next = zx::successors(s, rs, eager);
            if (next.empty()) {
                break;
            }
            s = std::move(next.front().state);
        }
        emit(simp_out, zx::diagram_to_json(s.diagram).dump(2) + "\n");
        std::cerr << steps << " steps\n";
        if (steps == max_steps) {
            code = kResourceError;
        }
    });

    // tensor
    auto *tensor = app.add_subcommand("tensor", "Print the linear map of a diagram");
    std::string tensor_in;
    tensor->add_option("diagram", tensor_in, "Diagram JSON")->required();
    tensor->callback([&] { std::cout << zx::tensor(load_diagram(tensor_in)); });

    // equiv
    auto *equiv = app.add_subcommand("equiv", "Compare two diagrams' linear maps up to a scalar");
    std::string eq_a;
    std::string eq_b;
    double tol = 1e-9;
    equiv->add_option("a", eq_a, "Diagram JSON")->required();
    equiv->add_option("b", eq_b, "Diagram JSON")->required();
    equiv->add_option("--tol", tol, "Tolerance");
    equiv->callback([&] {
        bool same = zx::equal_up_to_scalar(zx::tensor(load_diagram(eq_a)), zx::tensor(load_diagram(eq_b)), tol);
        std::cout << (same ? "EQUIVALENT" : "DIFFER") << "\n";
        code = same ? kOk : kNegative;
    });

    // export-dot
    auto *dot = app.add_subcommand("export-dot", "Convert a state space to Graphviz");
    std::string dot_in;
    std::string dot_path;
    dot->add_option("space", dot_in, "State space JSON")->required();
    dot->add_option("-o,--output", dot_path, "Output file (default stdout)");
    dot->callback([&] { emit(dot_path, zx::to_dot(zx::space_from_json(zx::read_json_file(dot_in)))); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int rc = app.exit(e);
        return rc == 0 ? kOk : kInputError;
    } catch (const zx::ParseError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const zx::DiagramError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const zx::RuleError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    } catch (const zx::ResourceLimit &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceError;
    } catch (const zx::CheckError &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResourceError;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInputError;
    }
    return code;
}
