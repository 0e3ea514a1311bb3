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

#include "plp/plp.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

namespace plp {

inline void PrintTo(const CredalInterval& c, std::ostream* os) { *os << '[' << to_fraction(c.lower) << ", " << to_fraction(c.upper) << ']'; }
inline void PrintTo(const Interpretation& i, std::ostream* os) {
    for (bool b : i.truth) { *os << (b ? '1' : '0'); }
}

} // namespace plp

namespace plp::test {

inline std::string fixture_path(const std::string& name) { return std::string(PLP_FIXTURE_DIR) + "/" + name; }

inline std::string read_fixture(const std::string& name) {
    std::ifstream in(fixture_path(name));
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline const std::vector<std::string>& fixture_names() {
    static const std::vector<std::string> names = {
        "alarm.plp", "barber.plp", "barber_paradox.plp", "basic.plp",    "cases.plp",
        "cold.plp",  "coloring.plp", "dilbert.plp",      "duplicates.plp", "even_odd.plp",
        "game.plp",  "independence.plp", "path.plp",     "smokers.plp",  "wins.plp"};
    return names;
}

inline GroundProgram load(const std::string& name) { return ground(parse_program_or_throw(read_fixture(name), name)); }

inline GroundProgram ground_text(std::string_view text) { return ground(parse_program_or_throw(text)); }

inline Rational R(std::string_view s) { return *parse_rational(s); }

inline Event ev(const GroundProgram& g, std::string_view assignments) {
    return Event::from_assignments(g, parse_assignments(assignments));
}

/// Names of the true atoms, sorted.
inline std::set<std::string> true_names(const GroundProgram& g, const Interpretation& m) {
    std::set<std::string> out;
    for (AtomId a = 0; a != m.size(); ++a) {
        if (m[a]) { out.insert(g.name(a)); }
    }
    return out;
}

inline std::set<std::set<std::string>> model_names(const GroundProgram& g, const std::vector<Interpretation>& ms) {
    std::set<std::set<std::string>> out;
    for (const auto& m : ms) { out.insert(true_names(g, m)); }
    return out;
}

inline TruthValue wf_value(const GroundProgram& g, const PartialInterpretation& wf, std::string_view atom) {
    const auto id = g.find(atom);
    return id ? wf[*id] : TruthValue::False;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Random propositional programs
/////////////////////////////////////////////////////////////////////////////////////////
struct RandomSpec {
    int atoms = 6;
    int max_rules = 8;
    int max_choices = 4;
    int max_body = 3;
    int neg_percent = 40;
};

inline std::string random_program_text(std::mt19937& rng, const RandomSpec& spec = {}) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    auto atom = [&] { return "a" + std::to_string(pick(0, spec.atoms - 1)); };
    static const char* probs[] = {"0.5", "0.3", "0.25", "1/3", "0.9", "2/7", "0", "1"};
    std::string text;
    const int choices = pick(0, spec.max_choices);
    for (int i = 0; i != choices; ++i) { text += std::string(probs[pick(0, 7)]) + "::" + atom() + ".\n"; }
    int rules = pick(0, spec.max_rules);
    // even negative loops give total choices several stable models
    for (int loops = pick(0, 2); loops != 0 && rules >= 2; --loops, rules -= 2) {
        const std::string x = atom(), y = atom();
        text += x + " :- not " + y + ".\n" + y + " :- not " + x + ".\n";
    }
    for (int i = 0; i != rules; ++i) {
        text += atom();
        const int body = pick(0, spec.max_body);
        for (int j = 0; j != body; ++j) {
            text += j ? ", " : " :- ";
            if (pick(1, 100) <= spec.neg_percent) { text += "not "; }
            text += atom();
        }
        text += ".\n";
    }
    return text;
}

/// Random boolean combination of literals, mostly over atoms of `g`, sometimes over absent ones.
inline Event random_event(std::mt19937& rng, const GroundProgram& g, int atoms, int depth = 2) {
    auto pick = [&](int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng); };
    if (depth == 0 || pick(0, 2) == 0) {
        std::optional<AtomId> id;
        if (g.atom_count() != 0 && pick(0, 9) != 0) {
            id = static_cast<AtomId>(pick(0, static_cast<int>(g.atom_count()) - 1));
        } else {
            id = g.find("a" + std::to_string(pick(0, atoms - 1)));
        }
        return Event::literal(id, pick(0, 1) ? TruthValue::True : TruthValue::False);
    }
    switch (pick(0, 2)) {
        case 0: return !random_event(rng, g, atoms, depth - 1);
        case 1: return random_event(rng, g, atoms, depth - 1) && random_event(rng, g, atoms, depth - 1);
        default: return random_event(rng, g, atoms, depth - 1) || random_event(rng, g, atoms, depth - 1);
    }
}

/////////////////////////////////////////////////////////////////////////////////////////
// Oracles
/////////////////////////////////////////////////////////////////////////////////////////
/// Total choices rebuilt from scratch: kept choice atoms appended as facts.
struct OracleChoice {
    Rational weight;
    GroundProgram program;
};

inline std::vector<OracleChoice> oracle_choices(const GroundProgram& g) {
    std::vector<OracleChoice> out;
    const std::size_t n = g.choice_points.size();
    for (std::uint64_t mask = 0; mask != (std::uint64_t{1} << n); ++mask) {
        OracleChoice c{Rational(1), g};
        c.program.choice_points.clear();
        for (std::size_t i = 0; i != n; ++i) {
            const bool kept = (mask >> i) & 1u;
            c.weight *= kept ? g.choice_points[i].prob : 1 - g.choice_points[i].prob;
            if (kept) { c.program.facts.push_back(g.choice_points[i].atom); }
        }
        std::sort(c.program.facts.begin(), c.program.facts.end());
        c.program.facts.erase(std::unique(c.program.facts.begin(), c.program.facts.end()), c.program.facts.end());
        out.push_back(std::move(c));
    }
    return out;
}

/// Credal bounds from the extreme points of the credal set: every way of putting each
/// total choice's mass on one of its stable models. nullopt when P(e) = 0 throughout;
/// throws std::runtime_error when some total choice has no stable model.
inline std::optional<CredalInterval> vertex_oracle(const GroundProgram& g, const Event& q, const Event& e,
                                                   std::size_t max_vertices = 1u << 16) {
    struct Local {
        Rational w;
        std::vector<std::pair<bool, bool>> models;   // (q && e, e)
    };
    std::vector<Local> locals;
    std::size_t vertices = 1;
    for (auto& c : oracle_choices(g)) {
        Local l{c.weight, {}};
        for (const auto& m : exhaustive_stable_models(c.program)) { l.models.push_back({q.holds(m) && e.holds(m), e.holds(m)}); }
        if (l.models.empty()) { throw std::runtime_error("no stable model"); }
        std::sort(l.models.begin(), l.models.end());
        l.models.erase(std::unique(l.models.begin(), l.models.end()), l.models.end());
        vertices *= l.models.size();
        if (vertices > max_vertices) { throw std::runtime_error("too many vertices"); }
        locals.push_back(std::move(l));
    }
    std::optional<CredalInterval> out;
    std::vector<std::size_t> pickv(locals.size(), 0);
    while (true) {
        Rational joint = 0, evidence = 0;
        for (std::size_t i = 0; i != locals.size(); ++i) {
            const auto [qe, ee] = locals[i].models[pickv[i]];
            if (qe) { joint += locals[i].w; }
            if (ee) { evidence += locals[i].w; }
        }
        if (evidence != 0) {
            const Rational p = joint / evidence;
            if (!out) {
                out = CredalInterval{p, p};
            } else {
                out->lower = std::min(out->lower, p);
                out->upper = std::max(out->upper, p);
            }
        }
        std::size_t k = 0;
        while (k != locals.size() && ++pickv[k] == locals[k].models.size()) { pickv[k++] = 0; }
        if (k == locals.size()) { break; }
    }
    return out;
}

/// Grounding over the whole Herbrand universe, without any relevance filtering. Choice
/// points are produced in the same order as ground(): probabilistic facts in source order,
/// substitutions in lexicographic order of the sorted universe.
inline GroundProgram full_ground(const Program& p) {
    std::set<std::string, decltype(&plp::detail::constant_less)> universe(&plp::detail::constant_less);
    auto collect = [&](const Atom& a) {
        for (const auto& t : a.args) {
            if (!t.is_variable()) { universe.insert(t.name); }
        }
    };
    for (const auto& r : p.rules) {
        collect(r.head);
        for (const auto& s : r.body) { collect(s.atom); }
    }
    for (const auto& f : p.prob_facts) { collect(f.atom); }
    if (universe.empty()) { universe.insert("u0"); }
    const std::vector<std::string> consts(universe.begin(), universe.end());

    auto table = std::make_shared<AtomTable>();
    GroundProgram g;
    auto variables = [](const std::vector<const Atom*>& atoms) {
        std::vector<std::string> vars;
        for (const auto* a : atoms) {
            for (const auto& t : a->args) {
                if (t.is_variable() && std::find(vars.begin(), vars.end(), t.name) == vars.end()) { vars.push_back(t.name); }
            }
        }
        return vars;
    };
    auto instances = [&](const std::vector<std::string>& vars, const auto& emit) {
        std::vector<std::size_t> idx(vars.size(), 0);
        while (true) {
            std::map<std::string, std::string> sub;
            for (std::size_t i = 0; i != vars.size(); ++i) { sub[vars[i]] = consts[idx[i]]; }
            emit(sub);
            std::size_t k = vars.size();
            while (k != 0) {
                --k;
                if (++idx[k] != consts.size()) { break; }
                idx[k] = 0;
                if (k == 0) { return; }
            }
            if (vars.empty()) { return; }
        }
    };
    auto apply = [&](const Atom& a, const std::map<std::string, std::string>& sub) {
        Atom out = a;
        for (auto& t : out.args) {
            if (t.is_variable()) { t = Term::constant(sub.at(t.name)); }
        }
        return table->intern(to_string(out));
    };
    for (const auto& f : p.prob_facts) {
        instances(variables({&f.atom}), [&](const auto& sub) {
            g.choice_points.push_back({static_cast<std::uint32_t>(g.choice_points.size()), apply(f.atom, sub), f.prob});
        });
    }
    for (const auto& r : p.rules) {
        std::vector<const Atom*> atoms{&r.head};
        for (const auto& s : r.body) { atoms.push_back(&s.atom); }
        instances(variables(atoms), [&](const auto& sub) {
            GroundRule gr;
            gr.head = apply(r.head, sub);
            for (const auto& s : r.body) { (s.negated ? gr.neg : gr.pos).push_back(apply(s.atom, sub)); }
            if (r.is_fact()) {
                g.facts.push_back(gr.head);
            } else {
                g.rules.push_back(std::move(gr));
            }
        });
    }
    std::sort(g.facts.begin(), g.facts.end());
    g.facts.erase(std::unique(g.facts.begin(), g.facts.end()), g.facts.end());
    g.atoms = table;
    return g;
}

/// Probability that `to` is reachable from `from` in a random graph with independent edges.
inline Rational reachability_oracle(const std::vector<std::tuple<int, int, Rational>>& edges, int from, int to) {
    Rational total = 0;
    for (std::uint64_t mask = 0; mask != (std::uint64_t{1} << edges.size()); ++mask) {
        Rational w = 1;
        std::map<int, std::vector<int>> succ;
        for (std::size_t i = 0; i != edges.size(); ++i) {
            const auto& [u, v, p] = edges[i];
            if ((mask >> i) & 1u) {
                w *= p;
                succ[u].push_back(v);
            } else {
                w *= 1 - p;
            }
        }
        std::set<int> seen;
        std::vector<int> stack;
        for (int v : succ[from]) { stack.push_back(v); }
        while (!stack.empty()) {
            const int v = stack.back();
            stack.pop_back();
            if (!seen.insert(v).second) { continue; }
            for (int w2 : succ[v]) { stack.push_back(w2); }
        }
        if (seen.count(to)) { total += w; }
    }
    return total;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Property checks shared by the property and acceptance suites
/////////////////////////////////////////////////////////////////////////////////////////
struct PropertyReport {
    std::size_t programs = 0;
    std::size_t checks = 0;
    std::vector<std::string> violations;

    void expect(bool ok, const std::string& what) {
        ++checks;
        if (!ok && violations.size() < 20) { violations.push_back(what); }
    }
};

/// Random consistent programs; skips inconsistent ones until `count` programs were tested.
template <class Fn>
void for_random_consistent(unsigned seed, std::size_t count, const RandomSpec& spec, Fn&& fn) {
    std::mt19937 rng(seed);
    std::size_t done = 0;
    while (done != count) {
        const auto text = random_program_text(rng, spec);
        const auto g = ground_text(text);
        if (!check_consistency(g).consistent) { continue; }
        fn(rng, g, text);
        ++done;
    }
}

/// Conjugacy, 2-monotonicity and the three-event inclusion-exclusion bound on lower probabilities.
inline PropertyReport lower_probability_properties(unsigned seed, std::size_t count) {
    PropertyReport report;
    const RandomSpec spec;
    for_random_consistent(seed, count, spec, [&](std::mt19937& rng, const GroundProgram& g, const std::string& text) {
        ++report.programs;
        for (int round = 0; round != 4; ++round) {
            const Event a = random_event(rng, g, spec.atoms);
            const Event b = random_event(rng, g, spec.atoms);
            const Event c = random_event(rng, g, spec.atoms);
            const auto v = event_bounds(g, {a, !a, a || b, a && b, b, c, a || b || c, b && c, a && c, a && b && c});
            const auto& [la, ua] = v[0];
            const Rational l_not_a = v[1].lower, l_a_or_b = v[2].lower, l_ab = v[3].lower, lb = v[4].lower;
            const Rational lc = v[5].lower, l_any = v[6].lower, l_bc = v[7].lower, l_ac = v[8].lower, l_abc = v[9].lower;
            report.expect(ua == 1 - l_not_a, "conjugacy\n" + text);
            report.expect(la <= ua, "lower <= upper\n" + text);
            report.expect(l_a_or_b + l_ab >= la + lb, "2-monotonicity\n" + text);
            report.expect(l_any >= la + lb + lc - l_ab - l_bc - l_ac + l_abc, "3-monotonicity\n" + text);
        }
    });
    return report;
}

/// Credal answers against the brute-force vertex oracle on random programs.
inline PropertyReport conditional_oracle(unsigned seed, std::size_t count) {
    PropertyReport report;
    const RandomSpec spec;
    for_random_consistent(seed, count, spec, [&](std::mt19937& rng, const GroundProgram& g, const std::string& text) {
        ++report.programs;
        const Event q = random_event(rng, g, spec.atoms);
        const Event e = random_event(rng, g, spec.atoms);
        report.expect(credal_conditional(g, q, e) == vertex_oracle(g, q, e), "conditional bounds\n" + text);
        report.expect(std::optional(credal_unconditional(g, q)) == vertex_oracle(g, q, Event::tautology()),
                      "unconditional bounds\n" + text);
    });
    return report;
}

/// Stable-model search vs exhaustive oracle, well-founded literals inside every stable
/// model, and collapse of credal and well-founded answers on stratified programs.
inline void oracle_equivalence(const GroundProgram& g, const std::string& label, PropertyReport& report) {
    ++report.programs;
    if (g.atom_count() > 20) { return; }
    bool consistent = true;
    for (const auto& c : oracle_choices(g)) {
        auto fast = stable_models(c.program);
        std::sort(fast.begin(), fast.end());
        const auto slow = exhaustive_stable_models(c.program);
        report.expect(fast == slow, "stable models differ: " + label);
        consistent = consistent && !slow.empty();
        const auto wf = well_founded_model(c.program);
        for (const auto& m : slow) {
            for (AtomId a = 0; a != g.atom_count(); ++a) {
                report.expect(wf[a] == TruthValue::Undefined || (wf[a] == TruthValue::True) == m[a],
                              "well-founded literal outside a stable model: " + label);
            }
        }
    }
    if (classify(g).kind == ProgramKind::general || !consistent) { return; }
    for (AtomId a = 0; a != g.atom_count(); ++a) {
        const auto c = credal_unconditional(g, Event::literal(a, TruthValue::True));
        const auto w = wf_query(g, {{parse_assignments(g.name(a))[0].atom, TruthValue::True}});
        report.expect(c.lower == c.upper && w && *w == c.lower, "stratified collapse: " + label + " " + g.name(a));
    }
}

inline PropertyReport oracle_equivalence_suite(unsigned seed, std::size_t random_programs) {
    PropertyReport report;
    for (const auto& name : fixture_names()) { oracle_equivalence(load(name), name, report); }
    std::mt19937 rng(seed);
    RandomSpec spec;
    spec.atoms = 8;
    spec.max_rules = 10;
    for (std::size_t i = 0; i != random_programs; ++i) {
        const auto text = random_program_text(rng, spec);
        oracle_equivalence(ground_text(text), text, report);
    }
    return report;
}

} // namespace plp::test
