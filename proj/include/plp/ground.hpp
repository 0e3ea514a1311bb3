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
#include "plp/syntax.hpp"

#include <algorithm>
#include <cstdint>
#include <deque>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

namespace plp {

using AtomId = std::uint32_t;

/// Bijection between ground atom text and dense ids, in creation order.
class AtomTable {
public:
    AtomId intern(const std::string& text) {
        auto [it, fresh] = index_.try_emplace(text, static_cast<AtomId>(names_.size()));
        if (fresh) { names_.push_back(text); }
        return it->second;
    }
    std::optional<AtomId> find(std::string_view text) const {
        auto it = index_.find(std::string(text));
        if (it == index_.end()) { return std::nullopt; }
        return it->second;
    }
    const std::string& name(AtomId id) const { return names_[id]; }
    std::size_t size() const { return names_.size(); }

private:
    std::vector<std::string> names_;
    std::unordered_map<std::string, AtomId> index_;
};

struct GroundRule {
    AtomId head = 0;
    std::vector<AtomId> pos;
    std::vector<AtomId> neg;
    friend bool operator==(const GroundRule&, const GroundRule&) = default;
};

struct ChoicePoint {
    std::uint32_t id = 0;
    AtomId atom = 0;
    Rational prob;
};

/// Active ground program. Atoms absent from the table are false in every model.
struct GroundProgram {
    std::shared_ptr<const AtomTable> atoms = std::make_shared<AtomTable>();
    std::vector<GroundRule> rules;
    std::vector<ChoicePoint> choice_points;
    std::vector<AtomId> facts;   // sorted, unique

    std::size_t atom_count() const { return atoms->size(); }
    const std::string& name(AtomId id) const { return atoms->name(id); }
    std::optional<AtomId> find(const Atom& a) const { return atoms->find(to_string(a)); }
    std::optional<AtomId> find(std::string_view text) const { return atoms->find(text); }
    bool is_definite() const {
        return std::all_of(rules.begin(), rules.end(), [](const GroundRule& r) { return r.neg.empty(); });
    }
};

struct GroundOptions {
    std::size_t max_ground_rules = 1'000'000;
};

namespace detail {

struct GAtom {
    std::uint32_t pred = 0;
    std::vector<std::uint32_t> args;
    friend bool operator==(const GAtom&, const GAtom&) = default;
};

struct GAtomHash {
    std::size_t operator()(const GAtom& a) const noexcept {
        std::size_t h = a.pred * 0x9e3779b97f4a7c15ull;
        for (auto x : a.args) { h = (h ^ x) * 0x100000001b3ull; }
        return h;
    }
};

// Integers sort numerically before identifiers; identifiers sort lexicographically.
inline bool constant_less(const std::string& a, const std::string& b) {
    const bool an = std::isdigit(static_cast<unsigned char>(a[0])) != 0;
    const bool bn = std::isdigit(static_cast<unsigned char>(b[0])) != 0;
    if (an != bn) { return an; }
    if (an && a.size() != b.size()) { return a.size() < b.size(); }
    return a < b;
}

class Grounder {
public:
    Grounder(const Program& p, const GroundOptions& opts) : prog_(p), opts_(opts) {}

    GroundProgram run() {
        collect_symbols();
        compile_rules();
        compute_possible();
        return build();
    }

private:
    // A literal whose arguments are either constant ids or rule-local variable slots.
    struct Arg {
        bool var;
        std::uint32_t index;
    };
    struct CLit {
        std::uint32_t pred;
        std::vector<Arg> args;
    };
    struct CRule {
        CLit head;
        std::vector<CLit> pos, neg;
        std::uint32_t var_count = 0;
        std::vector<std::uint32_t> head_only_vars;   // head vars not bound by the positive body
        std::vector<std::uint32_t> free_vars;        // all vars not bound by the positive body
    };
    using Binding = std::vector<std::int64_t>;

    void collect_symbols() {
        std::vector<std::string> consts;
        auto scan = [&](const Atom& a) {
            pred_id(a.predicate);
            for (const auto& t : a.args) {
                if (!t.is_variable()) { consts.push_back(t.name); }
            }
        };
        for (const auto& r : prog_.rules) {
            scan(r.head);
            for (const auto& g : r.body) { scan(g.atom); }
        }
        for (const auto& pf : prog_.prob_facts) { scan(pf.atom); }
        std::sort(consts.begin(), consts.end(), constant_less);
        consts.erase(std::unique(consts.begin(), consts.end()), consts.end());
        if (consts.empty()) { consts.push_back("u0"); }
        universe_ = std::move(consts);
        for (std::uint32_t i = 0; i != universe_.size(); ++i) { const_index_[universe_[i]] = i; }
    }

    std::uint32_t pred_id(const std::string& name) {
        auto [it, fresh] = pred_index_.try_emplace(name, static_cast<std::uint32_t>(preds_.size()));
        if (fresh) {
            preds_.push_back(name);
            by_pred_.emplace_back();
        }
        return it->second;
    }

    CLit compile_atom(const Atom& a, std::unordered_map<std::string, std::uint32_t>& vars) {
        CLit l{pred_id(a.predicate), {}};
        for (const auto& t : a.args) {
            if (t.is_variable()) {
                auto [it, fresh] = vars.try_emplace(t.name, static_cast<std::uint32_t>(vars.size()));
                l.args.push_back({true, it->second});
            } else {
                l.args.push_back({false, const_index_.at(t.name)});
            }
        }
        return l;
    }

    CRule compile_rule(const Atom& head, const std::vector<Subgoal>& body) {
        std::unordered_map<std::string, std::uint32_t> vars;
        CRule r;
        r.head = compile_atom(head, vars);
        for (const auto& g : body) {
            (g.negated ? r.neg : r.pos).push_back(compile_atom(g.atom, vars));
        }
        r.var_count = static_cast<std::uint32_t>(vars.size());
        std::vector<bool> bound(r.var_count, false), in_head(r.var_count, false);
        for (const auto& l : r.pos) {
            for (const auto& a : l.args) {
                if (a.var) { bound[a.index] = true; }
            }
        }
        for (const auto& a : r.head.args) {
            if (a.var) { in_head[a.index] = true; }
        }
        for (std::uint32_t v = 0; v != r.var_count; ++v) {
            if (!bound[v]) {
                r.free_vars.push_back(v);
                if (in_head[v]) { r.head_only_vars.push_back(v); }
            }
        }
        return r;
    }

    void compile_rules() {
        for (const auto& pf : prog_.prob_facts) { prob_rules_.push_back(compile_rule(pf.atom, {})); }
        for (const auto& r : prog_.rules) {
            (r.is_fact() ? fact_rules_ : body_rules_).push_back(compile_rule(r.head, r.body));
        }
    }

    static GAtom instantiate(const CLit& l, const Binding& b) {
        GAtom g{l.pred, {}};
        g.args.reserve(l.args.size());
        for (const auto& a : l.args) { g.args.push_back(a.var ? static_cast<std::uint32_t>(b[a.index]) : a.index); }
        return g;
    }

    bool add_possible(GAtom g) {
        if (!possible_.insert(g).second) { return false; }
        by_pred_[g.pred].push_back(std::move(g.args));
        return true;
    }

    // Enumerates bindings of `vars` over the universe, in lexicographic order.
    void enumerate_free(const std::vector<std::uint32_t>& vars, std::size_t k, Binding& b,
                        const std::function<void(const Binding&)>& emit) const {
        if (k == vars.size()) {
            emit(b);
            return;
        }
        for (std::uint32_t c = 0; c != universe_.size(); ++c) {
            b[vars[k]] = c;
            enumerate_free(vars, k + 1, b, emit);
        }
        b[vars[k]] = -1;
    }

    // Matches positive body literals against the possibly-true atoms.
    void match(const CRule& r, std::size_t k, Binding& b, const std::function<void(const Binding&)>& emit) const {
        if (k == r.pos.size()) {
            emit(b);
            return;
        }
        const CLit& l = r.pos[k];
        const auto& tuples = by_pred_[l.pred];
        const std::size_t n = tuples.size();
        for (std::size_t t = 0; t != n; ++t) {
            const auto& tuple = tuples[t];
            std::vector<std::uint32_t> newly;
            bool ok = true;
            for (std::size_t i = 0; ok && i != l.args.size(); ++i) {
                const Arg& a = l.args[i];
                if (!a.var) {
                    ok = a.index == tuple[i];
                } else if (b[a.index] < 0) {
                    b[a.index] = tuple[i];
                    newly.push_back(a.index);
                } else {
                    ok = static_cast<std::uint32_t>(b[a.index]) == tuple[i];
                }
            }
            if (ok) { match(r, k + 1, b, emit); }
            for (auto v : newly) { b[v] = -1; }
        }
    }

    void guard(std::size_t n) const {
        if (n > opts_.max_ground_rules) {
            throw ResourceLimitError("grounding exceeds the limit of " + std::to_string(opts_.max_ground_rules) +
                                     " ground rules");
        }
    }

    void compute_possible() {
        for (const auto* group : {&prob_rules_, &fact_rules_}) {
            for (const auto& r : *group) {
                Binding b(r.var_count, -1);
                std::size_t n = 0;
                enumerate_free(r.free_vars, 0, b, [&](const Binding& full) {
                    guard(++n);
                    add_possible(instantiate(r.head, full));
                });
            }
        }
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : body_rules_) {
                Binding b(r.var_count, -1);
                std::vector<GAtom> heads;
                std::size_t n = 0;
                match(r, 0, b, [&](const Binding& partial) {
                    Binding copy = partial;
                    enumerate_free(r.head_only_vars, 0, copy, [&](const Binding& full) {
                        guard(++n);
                        heads.push_back(instantiate(r.head, full));
                    });
                });
                for (auto& h : heads) { changed |= add_possible(std::move(h)); }
            }
        }
    }

    std::string text(const GAtom& g) const {
        std::string out = preds_[g.pred];
        if (!g.args.empty()) {
            out += '(';
            for (std::size_t i = 0; i != g.args.size(); ++i) {
                if (i) { out += ','; }
                out += universe_[g.args[i]];
            }
            out += ')';
        }
        return out;
    }

    GroundProgram build() {
        auto table = std::make_shared<AtomTable>();
        GroundProgram g;
        auto intern = [&](const GAtom& a) { return table->intern(text(a)); };

        // choice points in source order, groundings lexicographic
        for (std::size_t i = 0; i != prob_rules_.size(); ++i) {
            const auto& r = prob_rules_[i];
            Binding b(r.var_count, -1);
            enumerate_free(r.free_vars, 0, b, [&](const Binding& full) {
                const auto id = static_cast<std::uint32_t>(g.choice_points.size());
                g.choice_points.push_back({id, intern(instantiate(r.head, full)), prog_.prob_facts[i].prob});
            });
        }
        for (const auto& r : fact_rules_) {
            Binding b(r.var_count, -1);
            enumerate_free(r.free_vars, 0, b,
                           [&](const Binding& full) { g.facts.push_back(intern(instantiate(r.head, full))); });
        }

        std::unordered_set<std::string> seen;
        std::size_t total = 0;
        for (const auto& r : body_rules_) {
            std::vector<std::vector<std::uint32_t>> subs;
            Binding b(r.var_count, -1);
            match(r, 0, b, [&](const Binding& partial) {
                Binding copy = partial;
                enumerate_free(r.free_vars, 0, copy, [&](const Binding& full) {
                    guard(total + subs.size() + 1);
                    subs.emplace_back(full.begin(), full.end());
                });
            });
            std::sort(subs.begin(), subs.end());
            subs.erase(std::unique(subs.begin(), subs.end()), subs.end());
            for (const auto& s : subs) {
                Binding full(s.begin(), s.end());
                GroundRule gr;
                gr.head = intern(instantiate(r.head, full));
                for (const auto& l : r.pos) { gr.pos.push_back(intern(instantiate(l, full))); }
                for (const auto& l : r.neg) {
                    GAtom a = instantiate(l, full);
                    if (possible_.count(a)) { gr.neg.push_back(intern(a)); }
                }
                std::string key = std::to_string(gr.head) + '|';
                for (auto x : gr.pos) { key += std::to_string(x) + ','; }
                key += '|';
                for (auto x : gr.neg) { key += std::to_string(x) + ','; }
                if (seen.insert(key).second) {
                    g.rules.push_back(std::move(gr));
                    ++total;
                }
            }
        }
        std::sort(g.facts.begin(), g.facts.end());
        g.facts.erase(std::unique(g.facts.begin(), g.facts.end()), g.facts.end());
        g.atoms = std::move(table);
        return g;
    }

    const Program& prog_;
    GroundOptions opts_;
    std::vector<std::string> universe_;
    std::unordered_map<std::string, std::uint32_t> const_index_;
    std::vector<std::string> preds_;
    std::unordered_map<std::string, std::uint32_t> pred_index_;
    std::vector<CRule> prob_rules_, fact_rules_, body_rules_;
    std::unordered_set<GAtom, GAtomHash> possible_;
    std::vector<std::vector<std::vector<std::uint32_t>>> by_pred_;
};

} // namespace detail

/// Grounds `p` over its constants, keeping only rules whose positive bodies can become true.
inline GroundProgram ground(const Program& p, const GroundOptions& opts = {}) {
    return detail::Grounder(p, opts).run();
}

/// Structured text dump: atoms, rules, choice points. Stable across runs.
inline std::string dump_ground(const GroundProgram& g) {
    std::string out = "atoms " + std::to_string(g.atom_count()) + '\n';
    for (AtomId a = 0; a != g.atom_count(); ++a) { out += std::to_string(a) + ' ' + g.name(a) + '\n'; }
    out += "facts " + std::to_string(g.facts.size()) + '\n';
    for (auto f : g.facts) { out += std::to_string(f) + '\n'; }
    out += "rules " + std::to_string(g.rules.size()) + '\n';
    auto list = [](const std::vector<AtomId>& ids) {
        std::string s = "[";
        for (std::size_t i = 0; i != ids.size(); ++i) { s += (i ? " " : "") + std::to_string(ids[i]); }
        return s + ']';
    };
    for (const auto& r : g.rules) {
        out += std::to_string(r.head) + ' ' + list(r.pos) + ' ' + list(r.neg) + '\n';
    }
    out += "choices " + std::to_string(g.choice_points.size()) + '\n';
    for (const auto& c : g.choice_points) {
        out += std::to_string(c.id) + ' ' + std::to_string(c.atom) + ' ' + to_fraction(c.prob) + '\n';
    }
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Dependency graph and classification
/////////////////////////////////////////////////////////////////////////////////////////
enum class EdgeSign : std::uint8_t { positive, negative };

struct Edge {
    AtomId from = 0;
    AtomId to = 0;
    EdgeSign sign = EdgeSign::positive;
    friend auto operator<=>(const Edge&, const Edge&) = default;
};

struct DependencyGraph {
    std::size_t node_count = 0;
    std::vector<Edge> edges;   // sorted, unique

    bool has_edge(AtomId from, AtomId to, EdgeSign sign) const {
        return std::binary_search(edges.begin(), edges.end(), Edge{from, to, sign});
    }
    bool has_edge(AtomId from, AtomId to) const {
        return has_edge(from, to, EdgeSign::positive) || has_edge(from, to, EdgeSign::negative);
    }
};

inline DependencyGraph dependency_graph(const GroundProgram& g) {
    DependencyGraph dg;
    dg.node_count = g.atom_count();
    for (const auto& r : g.rules) {
        for (auto b : r.pos) { dg.edges.push_back({b, r.head, EdgeSign::positive}); }
        for (auto b : r.neg) { dg.edges.push_back({b, r.head, EdgeSign::negative}); }
    }
    std::sort(dg.edges.begin(), dg.edges.end());
    dg.edges.erase(std::unique(dg.edges.begin(), dg.edges.end()), dg.edges.end());
    return dg;
}

enum class ProgramKind : std::uint8_t { acyclic, stratified, general };

inline std::string_view to_string(ProgramKind k) {
    switch (k) {
        case ProgramKind::acyclic: return "acyclic";
        case ProgramKind::stratified: return "stratified";
        default: return "general";
    }
}

struct ProgramClass {
    ProgramKind kind = ProgramKind::acyclic;
    /// Cycle v0 -> v1 -> ... -> vk -> v0; for `general` the closing edge vk -> v0 is negative.
    std::optional<std::vector<AtomId>> witness;
};

namespace detail {

/// Tarjan's algorithm, iterative. Returns the component index of every node.
inline std::vector<std::uint32_t> strongly_connected(const DependencyGraph& dg,
                                                     const std::vector<std::vector<AtomId>>& succ) {
    const std::size_t n = dg.node_count;
    constexpr std::uint32_t unset = UINT32_MAX;
    std::vector<std::uint32_t> index(n, unset), low(n, 0), comp(n, unset);
    std::vector<bool> on_stack(n, false);
    std::vector<AtomId> stack;
    std::uint32_t counter = 0, comps = 0;
    std::vector<std::pair<AtomId, std::size_t>> work;
    for (AtomId root = 0; root != n; ++root) {
        if (index[root] != unset) { continue; }
        work.push_back({root, 0});
        while (!work.empty()) {
            auto& [v, next] = work.back();
            if (next == 0) {
                index[v] = low[v] = counter++;
                stack.push_back(v);
                on_stack[v] = true;
            }
            if (next < succ[v].size()) {
                AtomId w = succ[v][next++];
                if (index[w] == unset) {
                    work.push_back({w, 0});
                } else if (on_stack[w]) {
                    low[v] = std::min(low[v], index[w]);
                }
                continue;
            }
            if (low[v] == index[v]) {
                AtomId w;
                do {
                    w = stack.back();
                    stack.pop_back();
                    on_stack[w] = false;
                    comp[w] = comps;
                } while (w != v);
                ++comps;
            }
            const AtomId done = v;
            work.pop_back();
            if (!work.empty()) {
                AtomId parent = work.back().first;
                low[parent] = std::min(low[parent], low[done]);
            }
        }
    }
    return comp;
}

// Path from `from` to `to` restricted to one component (BFS, shortest).
inline std::vector<AtomId> path_within(const std::vector<std::vector<AtomId>>& succ,
                                       const std::vector<std::uint32_t>& comp, AtomId from, AtomId to) {
    std::vector<std::int64_t> prev(succ.size(), -1);
    std::deque<AtomId> queue{from};
    prev[from] = from;
    while (!queue.empty()) {
        AtomId v = queue.front();
        queue.pop_front();
        if (v == to) { break; }
        for (AtomId w : succ[v]) {
            if (prev[w] < 0 && comp[w] == comp[from]) {
                prev[w] = v;
                queue.push_back(w);
            }
        }
    }
    std::vector<AtomId> path{to};
    for (AtomId v = to; v != from; v = static_cast<AtomId>(prev[v])) { path.push_back(static_cast<AtomId>(prev[v])); }
    std::reverse(path.begin(), path.end());
    return path;
}

} // namespace detail

/// acyclic: no directed cycle; stratified: no component holds a negative edge; general otherwise.
inline ProgramClass classify(const DependencyGraph& dg) {
    std::vector<std::vector<AtomId>> succ(dg.node_count);
    for (const auto& e : dg.edges) { succ[e.from].push_back(e.to); }
    for (auto& s : succ) { s.erase(std::unique(s.begin(), s.end()), s.end()); }
    const auto comp = detail::strongly_connected(dg, succ);

    auto cycle_through = [&](const Edge& e) {
        // e.from -> e.to is the closing edge, so the cycle starts at e.to
        return detail::path_within(succ, comp, e.to, e.from);
    };
    std::optional<Edge> cyclic;
    for (const auto& e : dg.edges) {
        if (comp[e.from] != comp[e.to]) { continue; }
        if (e.sign == EdgeSign::negative) { return {ProgramKind::general, cycle_through(e)}; }
        if (!cyclic) { cyclic = e; }
    }
    if (cyclic) { return {ProgramKind::stratified, cycle_through(*cyclic)}; }
    return {ProgramKind::acyclic, std::nullopt};
}

inline ProgramClass classify(const GroundProgram& g) { return classify(dependency_graph(g)); }

/// True when `cycle` is a closed walk in `dg`; with `negative_closing`, its last edge must be negative.
inline bool verify_cycle(const DependencyGraph& dg, const std::vector<AtomId>& cycle, bool negative_closing) {
    if (cycle.empty()) { return false; }
    for (std::size_t i = 0; i + 1 < cycle.size(); ++i) {
        if (!dg.has_edge(cycle[i], cycle[i + 1])) { return false; }
    }
    if (negative_closing) { return dg.has_edge(cycle.back(), cycle.front(), EdgeSign::negative); }
    return dg.has_edge(cycle.back(), cycle.front());
}

} // namespace plp
