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

#include <algorithm>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace plp {

/// Two-valued interpretation over the atom table of one ground program.
struct Interpretation {
    std::vector<bool> truth;

    Interpretation() = default;
    explicit Interpretation(std::size_t n) : truth(n, false) {}
    explicit Interpretation(std::vector<bool> t) : truth(std::move(t)) {}

    std::size_t size() const { return truth.size(); }
    bool operator[](AtomId a) const { return truth[a]; }
    friend bool operator==(const Interpretation&, const Interpretation&) = default;
    friend bool operator<(const Interpretation& a, const Interpretation& b) { return a.truth < b.truth; }
};

struct PartialInterpretation {
    std::vector<TruthValue> value;

    std::size_t size() const { return value.size(); }
    TruthValue operator[](AtomId a) const { return value[a]; }
    std::size_t undefined_count() const {
        return static_cast<std::size_t>(std::count(value.begin(), value.end(), TruthValue::Undefined));
    }
    bool is_total() const { return undefined_count() == 0; }
    Interpretation to_total() const {
        Interpretation i(value.size());
        for (std::size_t a = 0; a != value.size(); ++a) { i.truth[a] = value[a] == TruthValue::True; }
        return i;
    }
    friend bool operator==(const PartialInterpretation&, const PartialInterpretation&) = default;
};

namespace detail {

/// Occurrence lists over a ground program; built once per model computation.
struct ProgramIndex {
    std::vector<std::vector<std::uint32_t>> head_rules;
    std::vector<std::vector<std::uint32_t>> pos_occ;   // with multiplicity
    std::vector<std::vector<std::uint32_t>> neg_occ;
    std::vector<std::uint32_t> body_occurrences;
    std::vector<bool> is_fact;

    explicit ProgramIndex(const GroundProgram& g)
        : head_rules(g.atom_count()), pos_occ(g.atom_count()), neg_occ(g.atom_count()),
          body_occurrences(g.atom_count(), 0), is_fact(g.atom_count(), false) {
        for (std::uint32_t r = 0; r != g.rules.size(); ++r) {
            const auto& rule = g.rules[r];
            head_rules[rule.head].push_back(r);
            for (auto a : rule.pos) {
                pos_occ[a].push_back(r);
                ++body_occurrences[a];
            }
            for (auto a : rule.neg) {
                neg_occ[a].push_back(r);
                ++body_occurrences[a];
            }
        }
        for (auto f : g.facts) { is_fact[f] = true; }
    }
};

/// Least model of the definite program made of the rules accepted by `active`, with negative
/// literals ignored. Counter-based propagation, linear in program size.
template <class Active>
std::vector<bool> least_fixpoint(const GroundProgram& g, const ProgramIndex& idx, Active&& active) {
    const std::size_t n = g.atom_count();
    std::vector<bool> model(n, false);
    std::vector<std::uint32_t> missing(g.rules.size());
    std::vector<bool> enabled(g.rules.size());
    std::vector<AtomId> queue;
    auto derive = [&](AtomId a) {
        if (!model[a]) {
            model[a] = true;
            queue.push_back(a);
        }
    };
    for (auto f : g.facts) { derive(f); }
    for (std::uint32_t r = 0; r != g.rules.size(); ++r) {
        enabled[r] = active(g.rules[r]);
        missing[r] = static_cast<std::uint32_t>(g.rules[r].pos.size());
        if (enabled[r] && missing[r] == 0) { derive(g.rules[r].head); }
    }
    while (!queue.empty()) {
        const AtomId a = queue.back();
        queue.pop_back();
        for (auto r : idx.pos_occ[a]) {
            if (enabled[r] && --missing[r] == 0) { derive(g.rules[r].head); }
        }
    }
    return model;
}

/// Least model of the reduct of g with respect to the atoms in `assumed`.
inline std::vector<bool> lft(const GroundProgram& g, const ProgramIndex& idx, const std::vector<bool>& assumed) {
    return least_fixpoint(g, idx, [&](const GroundRule& r) {
        return std::none_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return assumed[a]; });
    });
}

} // namespace detail

/////////////////////////////////////////////////////////////////////////////////////////
// Least model, reduct, stability
/////////////////////////////////////////////////////////////////////////////////////////
inline Interpretation least_model(const GroundProgram& g) {
    if (!g.is_definite()) { throw PreconditionError("least_model requires a definite program"); }
    detail::ProgramIndex idx(g);
    return Interpretation(detail::least_fixpoint(g, idx, [](const GroundRule&) { return true; }));
}

/// Drops rules blocked by a true negated atom and strips the remaining negative literals.
inline GroundProgram reduct(const GroundProgram& g, const Interpretation& i) {
    GroundProgram out;
    out.atoms = g.atoms;
    out.facts = g.facts;
    out.choice_points = g.choice_points;
    for (const auto& r : g.rules) {
        if (std::any_of(r.neg.begin(), r.neg.end(), [&](AtomId a) { return i[a]; })) { continue; }
        out.rules.push_back({r.head, r.pos, {}});
    }
    return out;
}

inline bool is_stable(const GroundProgram& g, const Interpretation& i) {
    detail::ProgramIndex idx(g);
    return detail::lft(g, idx, i.truth) == i.truth;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Well-founded model (alternating fixpoint)
/////////////////////////////////////////////////////////////////////////////////////////
struct WellFoundedTrace {
    std::vector<std::vector<bool>> ascending;    // iterates of LFT∘LFT from the empty set
    std::vector<std::vector<bool>> descending;   // iterates of LFT∘LFT from all atoms
};

namespace detail {

inline PartialInterpretation alternating_fixpoint(const GroundProgram& g, const ProgramIndex& idx,
                                                  WellFoundedTrace* trace) {
    const std::size_t n = g.atom_count();
    auto iterate = [&](std::vector<bool> s, std::vector<std::vector<bool>>* steps) {
        if (steps) { steps->push_back(s); }
        while (true) {
            auto next = lft(g, idx, lft(g, idx, s));
            if (steps) { steps->push_back(next); }
            if (next == s) { return s; }
            s = std::move(next);
        }
    };
    const auto lower = iterate(std::vector<bool>(n, false), trace ? &trace->ascending : nullptr);
    const auto upper = iterate(std::vector<bool>(n, true), trace ? &trace->descending : nullptr);
    PartialInterpretation wf{std::vector<TruthValue>(n, TruthValue::Undefined)};
    for (std::size_t a = 0; a != n; ++a) {
        if (lower[a]) {
            wf.value[a] = TruthValue::True;
        } else if (!upper[a]) {
            wf.value[a] = TruthValue::False;
        }
    }
    return wf;
}

} // namespace detail

/// True part: least fixpoint of LFT∘LFT; false part: atoms outside its greatest fixpoint.
inline PartialInterpretation well_founded_model(const GroundProgram& g) {
    detail::ProgramIndex idx(g);
    return detail::alternating_fixpoint(g, idx, nullptr);
}

inline PartialInterpretation well_founded_model(const GroundProgram& g, WellFoundedTrace& trace) {
    detail::ProgramIndex idx(g);
    return detail::alternating_fixpoint(g, idx, &trace);
}

/////////////////////////////////////////////////////////////////////////////////////////
// Stable model enumeration
/////////////////////////////////////////////////////////////////////////////////////////
namespace detail {

class StableSearch {
public:
    using Visitor = std::function<bool(const Interpretation&)>;

    StableSearch(const GroundProgram& g, Visitor visit) : g_(g), idx_(g), visit_(std::move(visit)) {}

    std::size_t run() {
        auto start = alternating_fixpoint(g_, idx_, nullptr).value;
        search(std::move(start));
        return emitted_;
    }

private:
    enum class Body : std::uint8_t { is_false, is_true, open };

    static Body body(const GroundRule& r, const std::vector<TruthValue>& v) {
        bool all = true;
        for (auto a : r.pos) {
            if (v[a] == TruthValue::False) { return Body::is_false; }
            all &= v[a] == TruthValue::True;
        }
        for (auto a : r.neg) {
            if (v[a] == TruthValue::True) { return Body::is_false; }
            all &= v[a] == TruthValue::False;
        }
        return all ? Body::is_true : Body::open;
    }

    // Sets v[a] = t; false on conflict.
    static bool assign(std::vector<TruthValue>& v, AtomId a, TruthValue t, bool& changed) {
        if (v[a] == t) { return true; }
        if (v[a] != TruthValue::Undefined) { return false; }
        v[a] = t;
        changed = true;
        return true;
    }

    // Three-valued propagation sound for stable models: closure under rules, no support ⇒ false,
    // a true atom with a single open support forces that body.
    bool propagate(std::vector<TruthValue>& v) const {
        for (bool changed = true; changed;) {
            changed = false;
            for (const auto& r : g_.rules) {
                if (body(r, v) == Body::is_true && !assign(v, r.head, TruthValue::True, changed)) { return false; }
            }
            for (AtomId a = 0; a != v.size(); ++a) {
                if (idx_.is_fact[a] || v[a] == TruthValue::False) { continue; }
                std::int64_t support = -1;
                std::size_t open = 0;
                for (auto r : idx_.head_rules[a]) {
                    if (body(g_.rules[r], v) != Body::is_false) {
                        ++open;
                        support = r;
                    }
                }
                if (open == 0) {
                    if (!assign(v, a, TruthValue::False, changed)) { return false; }
                } else if (open == 1 && v[a] == TruthValue::True) {
                    const auto& r = g_.rules[static_cast<std::size_t>(support)];
                    for (auto b : r.pos) {
                        if (!assign(v, b, TruthValue::True, changed)) { return false; }
                    }
                    for (auto b : r.neg) {
                        if (!assign(v, b, TruthValue::False, changed)) { return false; }
                    }
                }
            }
        }
        return true;
    }

    // Undefined atom with most body occurrences; ties by lowest id.
    std::optional<AtomId> pick(const std::vector<TruthValue>& v) const {
        std::optional<AtomId> best;
        for (AtomId a = 0; a != v.size(); ++a) {
            if (v[a] != TruthValue::Undefined) { continue; }
            if (!best || idx_.body_occurrences[a] > idx_.body_occurrences[*best]) { best = a; }
        }
        return best;
    }

    // Returns false once the visitor asked to stop.
    bool search(std::vector<TruthValue> v) {
        if (!propagate(v)) { return true; }
        auto branch = pick(v);
        if (!branch) {
            Interpretation leaf(v.size());
            for (std::size_t a = 0; a != v.size(); ++a) { leaf.truth[a] = v[a] == TruthValue::True; }
            if (lft(g_, idx_, leaf.truth) != leaf.truth) { return true; }
            ++emitted_;
            return visit_(leaf);
        }
        for (TruthValue t : {TruthValue::True, TruthValue::False}) {
            auto next = v;
            next[*branch] = t;
            if (!search(std::move(next))) { return false; }
        }
        return true;
    }

    const GroundProgram& g_;
    ProgramIndex idx_;
    Visitor visit_;
    std::size_t emitted_ = 0;
};

} // namespace detail

/// Streams every stable model to `visit` (deterministic order, no duplicates). The visitor
/// returns false to stop early. Returns the number of models visited.
inline std::size_t for_each_stable_model(const GroundProgram& g,
                                         const std::function<bool(const Interpretation&)>& visit) {
    return detail::StableSearch(g, visit).run();
}

inline std::vector<Interpretation> stable_models(const GroundProgram& g) {
    std::vector<Interpretation> out;
    for_each_stable_model(g, [&](const Interpretation& i) {
        out.push_back(i);
        return true;
    });
    return out;
}

/// Brute-force oracle over all 2^n interpretations. Sorted output.
inline std::vector<Interpretation> exhaustive_stable_models(const GroundProgram& g, std::size_t limit = 20) {
    const std::size_t n = g.atom_count();
    if (n > limit || n >= 63) {
        throw ResourceLimitError("exhaustive model check limited to " + std::to_string(limit) + " atoms, program has " +
                                 std::to_string(n));
    }
    detail::ProgramIndex idx(g);
    // facts are true and atoms heading no rule are false in every stable model
    std::vector<bool> base(n, false);
    std::vector<AtomId> free;
    for (AtomId a = 0; a != n; ++a) {
        if (idx.is_fact[a]) {
            base[a] = true;
        } else if (!idx.head_rules[a].empty()) {
            free.push_back(a);
        }
    }
    std::vector<Interpretation> out;
    for (std::uint64_t mask = 0; mask != (std::uint64_t{1} << free.size()); ++mask) {
        std::vector<bool> t = base;
        for (std::size_t k = 0; k != free.size(); ++k) { t[free[k]] = (mask >> k) & 1u; }
        if (detail::lft(g, idx, t) == t) { out.emplace_back(std::move(t)); }
    }
    std::sort(out.begin(), out.end());
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Events
/////////////////////////////////////////////////////////////////////////////////////////
/// Boolean combination of ground-atom truth assignments. Atoms missing from the atom
/// table are false in every model.
class Event {
public:
    enum class Kind : std::uint8_t { constant, literal, negation, conjunction, disjunction };

    static Event tautology() { return constant(true); }
    static Event contradiction() { return constant(false); }
    static Event constant(bool v) {
        Event e(Kind::constant);
        e.value_ = v;
        return e;
    }
    static Event literal(std::optional<AtomId> atom, TruthValue v) {
        Event e(Kind::literal);
        e.atom_ = atom;
        e.truth_ = v;
        return e;
    }
    static Event conjunction(std::vector<Event> parts) {
        if (parts.empty()) { return tautology(); }
        Event e(Kind::conjunction);
        e.children_ = std::move(parts);
        return e;
    }
    static Event disjunction(std::vector<Event> parts) {
        if (parts.empty()) { return contradiction(); }
        Event e(Kind::disjunction);
        e.children_ = std::move(parts);
        return e;
    }
    friend Event operator!(Event a) {
        Event e(Kind::negation);
        e.children_.push_back(std::move(a));
        return e;
    }
    friend Event operator&&(Event a, Event b) { return conjunction({std::move(a), std::move(b)}); }
    friend Event operator||(Event a, Event b) { return disjunction({std::move(a), std::move(b)}); }

    /// Conjunction of assignments; unknown atoms are reported through `missing`.
    static Event from_assignments(const GroundProgram& g, const std::vector<Assignment>& as,
                                  std::vector<std::string>* missing = nullptr) {
        std::vector<Event> parts;
        for (const auto& a : as) {
            auto id = g.find(a.atom);
            if (!id && missing) { missing->push_back(to_string(a.atom)); }
            parts.push_back(literal(id, a.value));
        }
        return conjunction(std::move(parts));
    }

    Kind kind() const { return kind_; }

    bool holds(const Interpretation& i) const {
        switch (kind_) {
            case Kind::constant: return value_;
            case Kind::literal: {
                const bool t = atom_ && i[*atom_];
                if (truth_ == TruthValue::Undefined) { return false; }
                return t == (truth_ == TruthValue::True);
            }
            case Kind::negation: return !children_[0].holds(i);
            case Kind::conjunction:
                return std::all_of(children_.begin(), children_.end(), [&](const Event& c) { return c.holds(i); });
            case Kind::disjunction:
                return std::any_of(children_.begin(), children_.end(), [&](const Event& c) { return c.holds(i); });
        }
        return false;
    }

private:
    explicit Event(Kind k) : kind_(k) {}

    Kind kind_;
    bool value_ = false;
    std::optional<AtomId> atom_;
    TruthValue truth_ = TruthValue::True;
    std::vector<Event> children_;
};

/////////////////////////////////////////////////////////////////////////////////////////
// Brave / cautious reasoning
/////////////////////////////////////////////////////////////////////////////////////////
struct Entailment {
    bool has_model = false;
    bool some = false;   // brave
    bool all = true;     // cautious, vacuous without models
};

inline Entailment entail(const GroundProgram& g, const Event& e) {
    Entailment out;
    for_each_stable_model(g, [&](const Interpretation& m) {
        out.has_model = true;
        if (e.holds(m)) {
            out.some = true;
        } else {
            out.all = false;
        }
        return !(out.some && !out.all);
    });
    return out;
}

} // namespace plp
