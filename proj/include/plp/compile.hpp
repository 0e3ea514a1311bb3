//
// Copyright (c) 2026 The credal-plp authors
//
// Permission is hereby granted, free of charge, to any person obtaining a copy
// of this software and associated documentation files (the "Software"), to
// deal in the Software without restriction, including without limitation the
// rights to use, copy, modify, merge, publish, distribute, sublicense, and/or
// sell copies of the Software, and to permit persons to whom the Software is
// furnished to do so, subject to the following conditions:
//
// The above copyright notice and this permission notice shall be included in
// all copies or substantial portions of the Software.
//
// THE SOFTWARE IS PROVIDED "AS IS", WITHOUT WARRANTY OF ANY KIND, EXPRESS OR
// IMPLIED, INCLUDING BUT NOT LIMITED TO THE WARRANTIES OF MERCHANTABILITY,
// FITNESS FOR A PARTICULAR PURPOSE AND NONINFRINGEMENT. IN NO EVENT SHALL THE
// AUTHORS OR COPYRIGHT HOLDERS BE LIABLE FOR ANY CLAIM, DAMAGES OR OTHER
// LIABILITY, WHETHER IN AN ACTION OF CONTRACT, TORT OR OTHERWISE, ARISING
// FROM, OUT OF OR IN CONNECTION WITH THE SOFTWARE OR THE USE OR OTHER DEALINGS
// IN THE SOFTWARE.
//

#pragma once

#include "plp/error.hpp"
#include "plp/ground.hpp"
#include "plp/syntax.hpp"

#include <algorithm>
#include <cstdint>
#include <functional>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <vector>

namespace plp {

/////////////////////////////////////////////////////////////////////////////////////////
// Clark completion
/////////////////////////////////////////////////////////////////////////////////////////
/// A body literal of a completion disjunct. `choice` literals refer to choice points that
/// cannot be identified with their atom (duplicates, or atoms that also head rules).
struct CompletionLiteral {
    enum class Source : std::uint8_t { atom, choice };
    Source source = Source::atom;
    std::uint32_t index = 0;
    bool positive = true;
    friend auto operator<=>(const CompletionLiteral&, const CompletionLiteral&) = default;
};

struct AtomCompletion {
    enum class Form : std::uint8_t { always_true, always_false, disjunction };
    AtomId atom = 0;
    Form form = Form::always_false;
    std::vector<std::vector<CompletionLiteral>> disjuncts;
};

struct CompletionFormula {
    std::vector<AtomCompletion> entries;        // one per non-root atom, by atom id
    std::vector<std::uint32_t> root_choices;    // choice points whose atom is a root node
    std::vector<std::uint32_t> aux_choices;     // choice points needing their own node

    const AtomCompletion* find(AtomId a) const {
        for (const auto& e : entries) {
            if (e.atom == a) { return &e; }
        }
        return nullptr;
    }
};

inline CompletionFormula clark_completion(const GroundProgram& g) {
    if (classify(g).kind != ProgramKind::acyclic) {
        throw NotAcyclicError("completion and network compilation require an acyclic program");
    }
    const std::size_t n = g.atom_count();
    std::vector<std::vector<std::uint32_t>> choices_of(n), rules_of(n);
    std::vector<bool> fact(n, false);
    for (const auto& c : g.choice_points) { choices_of[c.atom].push_back(c.id); }
    for (std::uint32_t r = 0; r != g.rules.size(); ++r) { rules_of[g.rules[r].head].push_back(r); }
    for (auto f : g.facts) { fact[f] = true; }

    CompletionFormula out;
    for (AtomId a = 0; a != n; ++a) {
        if (choices_of[a].size() == 1 && rules_of[a].empty() && !fact[a]) {
            out.root_choices.push_back(choices_of[a][0]);
            continue;
        }
        AtomCompletion c;
        c.atom = a;
        if (fact[a]) {
            c.form = AtomCompletion::Form::always_true;
        } else {
            for (auto r : rules_of[a]) {
                std::vector<CompletionLiteral> body;
                for (auto b : g.rules[r].pos) { body.push_back({CompletionLiteral::Source::atom, b, true}); }
                for (auto b : g.rules[r].neg) { body.push_back({CompletionLiteral::Source::atom, b, false}); }
                c.disjuncts.push_back(std::move(body));
            }
            for (auto cp : choices_of[a]) {
                c.disjuncts.push_back({{CompletionLiteral::Source::choice, cp, true}});
                out.aux_choices.push_back(cp);
            }
            c.form = c.disjuncts.empty() ? AtomCompletion::Form::always_false : AtomCompletion::Form::disjunction;
        }
        out.entries.push_back(std::move(c));
    }
    std::sort(out.aux_choices.begin(), out.aux_choices.end());
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Bayesian network
/////////////////////////////////////////////////////////////////////////////////////////
struct BayesNode {
    std::string name;
    std::vector<std::uint32_t> parents;
    /// P(node = true | parents); row r has parent i true iff bit i of r is set.
    std::vector<Rational> table;
};

struct BayesNet {
    std::vector<BayesNode> nodes;

    std::optional<std::uint32_t> find(std::string_view name) const {
        for (std::uint32_t i = 0; i != nodes.size(); ++i) {
            if (nodes[i].name == name) { return i; }
        }
        return std::nullopt;
    }

    /// Kahn's algorithm, smallest index first. Throws if the graph has a cycle.
    std::vector<std::uint32_t> topological_order() const {
        std::vector<std::uint32_t> indeg(nodes.size(), 0);
        std::vector<std::vector<std::uint32_t>> children(nodes.size());
        for (std::uint32_t v = 0; v != nodes.size(); ++v) {
            for (auto p : nodes[v].parents) {
                children[p].push_back(v);
                ++indeg[v];
            }
        }
        std::priority_queue<std::uint32_t, std::vector<std::uint32_t>, std::greater<>> ready;
        for (std::uint32_t v = 0; v != nodes.size(); ++v) {
            if (indeg[v] == 0) { ready.push(v); }
        }
        std::vector<std::uint32_t> order;
        while (!ready.empty()) {
            auto v = ready.top();
            ready.pop();
            order.push_back(v);
            for (auto c : children[v]) {
                if (--indeg[c] == 0) { ready.push(c); }
            }
        }
        if (order.size() != nodes.size()) { throw NotAcyclicError("Bayesian network graph has a cycle"); }
        return order;
    }
};

struct CompileOptions {
    std::size_t max_parents = 16;
};

inline std::string choice_node_name(std::uint32_t cp) { return "choice#" + std::to_string(cp); }

/// Nodes are the ground atoms (by id) followed by auxiliary choice nodes; derived nodes get
/// deterministic tables evaluating their completion.
inline BayesNet compile_bn(const GroundProgram& g, const CompileOptions& opts = {}) {
    const CompletionFormula cf = clark_completion(g);
    BayesNet bn;
    for (AtomId a = 0; a != g.atom_count(); ++a) { bn.nodes.push_back({g.name(a), {}, {Rational(0)}}); }
    std::unordered_map<std::uint32_t, std::uint32_t> aux_node;
    for (auto cp : cf.aux_choices) {
        aux_node[cp] = static_cast<std::uint32_t>(bn.nodes.size());
        bn.nodes.push_back({choice_node_name(cp), {}, {g.choice_points[cp].prob}});
    }
    for (auto cp : cf.root_choices) { bn.nodes[g.choice_points[cp].atom].table = {g.choice_points[cp].prob}; }

    for (const auto& entry : cf.entries) {
        BayesNode& node = bn.nodes[entry.atom];
        if (entry.form != AtomCompletion::Form::disjunction) {
            node.table = {Rational(entry.form == AtomCompletion::Form::always_true ? 1 : 0)};
            continue;
        }
        auto node_of = [&](const CompletionLiteral& l) {
            return l.source == CompletionLiteral::Source::atom ? l.index : aux_node.at(l.index);
        };
        for (const auto& d : entry.disjuncts) {
            for (const auto& l : d) {
                const auto p = node_of(l);
                if (std::find(node.parents.begin(), node.parents.end(), p) == node.parents.end()) {
                    node.parents.push_back(p);
                }
            }
        }
        if (node.parents.size() > opts.max_parents) {
            throw ResourceLimitError("node " + node.name + " has " + std::to_string(node.parents.size()) +
                                     " parents, limit is " + std::to_string(opts.max_parents));
        }
        const std::size_t rows = std::size_t{1} << node.parents.size();
        node.table.assign(rows, Rational(0));
        for (std::size_t row = 0; row != rows; ++row) {
            auto value = [&](const CompletionLiteral& l) {
                const auto pos = std::find(node.parents.begin(), node.parents.end(), node_of(l)) - node.parents.begin();
                return ((row >> pos) & 1u) != 0;
            };
            const bool sat = std::any_of(entry.disjuncts.begin(), entry.disjuncts.end(), [&](const auto& d) {
                return std::all_of(d.begin(), d.end(), [&](const CompletionLiteral& l) { return value(l) == l.positive; });
            });
            node.table[row] = sat ? 1 : 0;
        }
    }
    return bn;
}

/// Exact P(q | e) by summing the factorized joint over all node configurations; nullopt when
/// P(e) = 0. Names missing from the network are false with probability one.
inline std::optional<Rational> bn_query(const BayesNet& bn, const std::vector<Assignment>& q,
                                        const std::vector<Assignment>& e = {}) {
    struct Fixed {
        std::optional<std::uint32_t> node;
        bool value;
    };
    auto resolve = [&](const std::vector<Assignment>& as) {
        std::vector<Fixed> out;
        for (const auto& a : as) {
            if (a.value == TruthValue::Undefined) {
                throw InputError("Bayesian network queries take true/false assignments only");
            }
            out.push_back({bn.find(to_string(a.atom)), a.value == TruthValue::True});
        }
        return out;
    };
    const auto qs = resolve(q), es = resolve(e);
    const auto order = bn.topological_order();
    std::vector<bool> value(bn.nodes.size(), false);
    Rational joint = 0, evidence = 0;
    auto holds = [&](const std::vector<Fixed>& fs) {
        return std::all_of(fs.begin(), fs.end(), [&](const Fixed& f) { return (f.node && value[*f.node]) == f.value; });
    };

    std::function<void(std::size_t, const Rational&)> visit = [&](std::size_t k, const Rational& w) {
        if (k == order.size()) {
            if (holds(es)) {
                evidence += w;
                if (holds(qs)) { joint += w; }
            }
            return;
        }
        const auto v = order[k];
        const auto& node = bn.nodes[v];
        std::size_t row = 0;
        for (std::size_t i = 0; i != node.parents.size(); ++i) {
            if (value[node.parents[i]]) { row |= std::size_t{1} << i; }
        }
        const Rational& p = node.table[row];
        if (p != 0) {
            value[v] = true;
            visit(k + 1, p == 1 ? w : w * p);
        }
        if (p != 1) {
            value[v] = false;
            visit(k + 1, p == 0 ? w : w * (1 - p));
        }
    };
    visit(0, Rational(1));
    if (evidence == 0) { return std::nullopt; }
    return joint / evidence;
}

/// Deterministic text export: nodes in topological order, parents by name, one row per
/// parent configuration keyed by a bit string (character i is parent i, '1' = true).
inline std::string export_bn(const BayesNet& bn) {
    std::string out = "bayesnet " + std::to_string(bn.nodes.size()) + '\n';
    for (auto v : bn.topological_order()) {
        const auto& node = bn.nodes[v];
        out += "node " + node.name + '\n';
        out += "parents " + std::to_string(node.parents.size());
        for (auto p : node.parents) { out += ' ' + bn.nodes[p].name; }
        out += '\n';
        for (std::size_t row = 0; row != node.table.size(); ++row) {
            std::string key;
            for (std::size_t i = 0; i != node.parents.size(); ++i) { key += ((row >> i) & 1u) ? '1' : '0'; }
            out += "row " + (key.empty() ? std::string("-") : key) + ' ' + to_fraction(node.table[row]) + '\n';
        }
    }
    return out;
}

} // namespace plp
