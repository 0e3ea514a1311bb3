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
#include "plp/models.hpp"

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace plp {

/// Keep/discard decision for every choice point, with its exact probability.
struct TotalChoice {
    std::uint64_t index = 0;   // bit i set <=> choice point i kept
    std::vector<bool> kept;
    Rational weight = 1;

    /// One character per choice point, '1' = kept.
    std::string bits() const {
        std::string s;
        for (bool k : kept) { s += k ? '1' : '0'; }
        return s;
    }
};

inline std::string describe(const GroundProgram& g, const TotalChoice& t) {
    std::string out = "{";
    for (std::size_t i = 0; i != t.kept.size(); ++i) {
        if (i) { out += ", "; }
        out += g.name(g.choice_points[i].atom) + (t.kept[i] ? " kept" : " discarded");
    }
    return out + '}';
}

class InconsistentProgramError : public Error {
public:
    InconsistentProgramError(TotalChoice witness, const std::string& description)
        : Error(ExitCode::inconsistent, "inconsistent program: total choice " + description + " has no stable model"),
          witness_(std::move(witness)) {}
    const TotalChoice& witness() const { return witness_; }

private:
    TotalChoice witness_;
};

struct InferenceOptions {
    std::size_t max_choices = 20;
};

struct InferenceStats {
    std::uint64_t choices = 0;
    std::uint64_t models = 0;
};

struct CredalInterval {
    Rational lower = 0;
    Rational upper = 0;
    friend bool operator==(const CredalInterval&, const CredalInterval&) = default;
};

struct WfDistribution {
    Rational p_true = 0;
    Rational p_false = 0;
    Rational p_undefined = 0;
};

struct ConsistencyReport {
    bool consistent = true;
    std::optional<TotalChoice> witness;
};

/////////////////////////////////////////////////////////////////////////////////////////
// Total choices
/////////////////////////////////////////////////////////////////////////////////////////
inline TotalChoice make_choice(const GroundProgram& g, std::uint64_t index) {
    TotalChoice t;
    t.index = index;
    t.kept.resize(g.choice_points.size());
    for (std::size_t i = 0; i != g.choice_points.size(); ++i) {
        t.kept[i] = (index >> i) & 1u;
        const Rational& p = g.choice_points[i].prob;
        t.weight *= t.kept[i] ? p : Rational(1) - p;
    }
    return t;
}

/// Parses a '0'/'1' string with one character per choice point.
inline TotalChoice choice_from_bits(const GroundProgram& g, std::string_view bits) {
    if (bits.size() != g.choice_points.size()) {
        throw InputError("choice needs " + std::to_string(g.choice_points.size()) + " bits, got " +
                         std::to_string(bits.size()));
    }
    std::uint64_t index = 0;
    for (std::size_t i = 0; i != bits.size(); ++i) {
        if (bits[i] != '0' && bits[i] != '1') { throw InputError("choice bits must be 0 or 1"); }
        if (bits[i] == '1') { index |= std::uint64_t{1} << i; }
    }
    return make_choice(g, index);
}

/// Visits all 2^n total choices in binary counting order; the visitor returns false to stop.
inline void for_each_total_choice(const GroundProgram& g, const InferenceOptions& opts,
                                  const std::function<bool(const TotalChoice&)>& visit) {
    const std::size_t n = g.choice_points.size();
    if (n > opts.max_choices || n >= 63) {
        throw ResourceLimitError("program has " + std::to_string(n) + " choice points, limit is " +
                                 std::to_string(opts.max_choices));
    }
    for (std::uint64_t i = 0; i != (std::uint64_t{1} << n); ++i) {
        if (!visit(make_choice(g, i))) { return; }
    }
}

inline std::vector<TotalChoice> total_choices(const GroundProgram& g, const InferenceOptions& opts = {}) {
    std::vector<TotalChoice> out;
    for_each_total_choice(g, opts, [&](const TotalChoice& t) {
        out.push_back(t);
        return true;
    });
    return out;
}

/// The normal program for one total choice: kept choice atoms become facts.
inline GroundProgram program_for_choice(const GroundProgram& g, const TotalChoice& t) {
    GroundProgram out;
    out.atoms = g.atoms;
    out.rules = g.rules;
    out.facts = g.facts;
    for (std::size_t i = 0; i != g.choice_points.size(); ++i) {
        if (t.kept[i]) { out.facts.push_back(g.choice_points[i].atom); }
    }
    std::sort(out.facts.begin(), out.facts.end());
    out.facts.erase(std::unique(out.facts.begin(), out.facts.end()), out.facts.end());
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Credal semantics
/////////////////////////////////////////////////////////////////////////////////////////
inline ConsistencyReport check_consistency(const GroundProgram& g, const InferenceOptions& opts = {}) {
    ConsistencyReport report;
    for_each_total_choice(g, opts, [&](const TotalChoice& t) {
        bool any = false;
        for_each_stable_model(program_for_choice(g, t), [&](const Interpretation&) {
            any = true;
            return false;
        });
        if (!any) {
            report.consistent = false;
            report.witness = t;
        }
        return any;
    });
    return report;
}

namespace detail {

// Per total choice, evaluates each event cautiously and bravely over the stable models.
// Aborts on the first choice without a stable model.
inline void scan_events(const GroundProgram& g, const std::vector<const Event*>& events,
                        const InferenceOptions& opts, InferenceStats* stats,
                        const std::function<void(const TotalChoice&, const std::vector<Entailment>&)>& sink) {
    for_each_total_choice(g, opts, [&](const TotalChoice& t) {
        std::vector<Entailment> res(events.size());
        std::size_t settled = 0;   // events already known to be brave and not cautious
        const auto count = for_each_stable_model(program_for_choice(g, t), [&](const Interpretation& m) {
            for (std::size_t k = 0; k != events.size(); ++k) {
                auto& r = res[k];
                const bool was_settled = r.some && !r.all;
                r.has_model = true;
                if (events[k]->holds(m)) {
                    r.some = true;
                } else {
                    r.all = false;
                }
                settled += !was_settled && r.some && !r.all;
            }
            return settled != events.size();
        });
        if (stats) {
            ++stats->choices;
            stats->models += count;
        }
        if (count == 0) { throw InconsistentProgramError(t, describe(g, t)); }
        sink(t, res);
        return true;
    });
}

} // namespace detail

/// Lower/upper probability of an event: total-choice mass where it holds cautiously/bravely.
inline CredalInterval credal_unconditional(const GroundProgram& g, const Event& q, const InferenceOptions& opts = {},
                                           InferenceStats* stats = nullptr) {
    CredalInterval out;
    detail::scan_events(g, {&q}, opts, stats, [&](const TotalChoice& t, const std::vector<Entailment>& r) {
        if (r[0].all) { out.lower += t.weight; }
        if (r[0].some) { out.upper += t.weight; }
    });
    return out;
}

/// Conditional lower/upper probability; nullopt when the upper probability of e is zero.
inline std::optional<CredalInterval> credal_conditional(const GroundProgram& g, const Event& q, const Event& e,
                                                        const InferenceOptions& opts = {},
                                                        InferenceStats* stats = nullptr) {
    const Event qe = q && e;
    const Event nqe = !q && e;
    Rational a = 0, b = 0, c = 0, d = 0;
    detail::scan_events(g, {&qe, &nqe}, opts, stats, [&](const TotalChoice& t, const std::vector<Entailment>& r) {
        if (r[0].all) { a += t.weight; }
        if (r[0].some) { b += t.weight; }
        if (r[1].all) { c += t.weight; }
        if (r[1].some) { d += t.weight; }
    });
    if (b + d == 0) { return std::nullopt; }
    if (b + c == 0 && d > 0) { return CredalInterval{0, 0}; }
    if (a + d == 0 && b > 0) { return CredalInterval{1, 1}; }
    return CredalInterval{a / (a + d), b / (b + c)};
}

/// Lower/upper probability per event over one shared pass of model enumeration.
inline std::vector<CredalInterval> event_bounds(const GroundProgram& g, const std::vector<Event>& events,
                                                const InferenceOptions& opts = {}) {
    std::vector<const Event*> refs;
    for (const auto& e : events) { refs.push_back(&e); }
    std::vector<CredalInterval> out(events.size());
    detail::scan_events(g, refs, opts, nullptr, [&](const TotalChoice& t, const std::vector<Entailment>& r) {
        for (std::size_t k = 0; k != r.size(); ++k) {
            if (r[k].all) { out[k].lower += t.weight; }
            if (r[k].some) { out[k].upper += t.weight; }
        }
    });
    return out;
}

/////////////////////////////////////////////////////////////////////////////////////////
// Well-founded semantics
/////////////////////////////////////////////////////////////////////////////////////////
/// Exact three-valued match of every assignment; unknown atoms are false.
inline bool matches(const GroundProgram& g, const PartialInterpretation& wf, const std::vector<Assignment>& as) {
    for (const auto& a : as) {
        const auto id = g.find(a.atom);
        const TruthValue v = id ? wf[*id] : TruthValue::False;
        if (v != a.value) { return false; }
    }
    return true;
}

/// P(q) or P(q | e) over the well-founded models of all total choices; nullopt when P(e) = 0.
inline std::optional<Rational> wf_query(const GroundProgram& g, const std::vector<Assignment>& q,
                                        const std::vector<Assignment>& e = {}, const InferenceOptions& opts = {},
                                        InferenceStats* stats = nullptr) {
    Rational joint = 0, evidence = 0;
    for_each_total_choice(g, opts, [&](const TotalChoice& t) {
        const auto wf = well_founded_model(program_for_choice(g, t));
        if (stats) { ++stats->choices; }
        if (matches(g, wf, e)) {
            evidence += t.weight;
            if (matches(g, wf, q)) { joint += t.weight; }
        }
        return true;
    });
    if (evidence == 0) { return std::nullopt; }
    return joint / evidence;
}

inline WfDistribution wf_distribution(const GroundProgram& g, const Atom& atom, const InferenceOptions& opts = {}) {
    WfDistribution out;
    const auto id = g.find(atom);
    for_each_total_choice(g, opts, [&](const TotalChoice& t) {
        const TruthValue v = id ? well_founded_model(program_for_choice(g, t))[*id] : TruthValue::False;
        (v == TruthValue::True ? out.p_true : v == TruthValue::False ? out.p_false : out.p_undefined) += t.weight;
        return true;
    });
    return out;
}

} // namespace plp
