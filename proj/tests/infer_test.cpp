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

#include "support.hpp"

#include <gtest/gtest.h>

using namespace plp;
using plp::test::ev;
using plp::test::load;
using plp::test::R;

namespace {

CredalInterval interval(std::string_view lower, std::string_view upper) { return {R(lower), R(upper)}; }

CredalInterval credal(const GroundProgram& g, std::string_view q) { return credal_unconditional(g, ev(g, q)); }

std::optional<Rational> wf(const GroundProgram& g, std::string_view q, std::string_view e = {}) {
    return wf_query(g, parse_assignments(q), parse_assignments(e));
}

} // namespace

TEST(Choices, Enumeration) {
    const auto g = load("independence.plp");
    const auto ts = total_choices(g);
    ASSERT_EQ(ts.size(), 4u);
    for (const auto& t : ts) { EXPECT_EQ(t.weight, R("1/4")); }
    EXPECT_EQ(ts[1].bits(), "10");
    EXPECT_EQ(describe(g, ts[1]), "{r kept, s discarded}");

    const auto none = total_choices(load("game.plp"));
    ASSERT_EQ(none.size(), 1u);
    EXPECT_EQ(none[0].weight, 1);
}

TEST(Choices, WeightsSumToOne) {
    for (const auto& name : plp::test::fixture_names()) {
        Rational sum = 0;
        for (const auto& t : total_choices(load(name))) { sum += t.weight; }
        EXPECT_EQ(sum, 1) << name;
    }
}

TEST(Choices, DuplicateMarginal) {
    const auto g = load("duplicates.plp");
    Rational r = 0;
    for (const auto& t : total_choices(g)) {
        if (t.kept[0] || t.kept[1]) { r += t.weight; }
    }
    EXPECT_EQ(r, R("4/5"));
}

TEST(Choices, ResourceGuard) {
    const auto g = load("path.plp");
    EXPECT_THROW(total_choices(g, {.max_choices = 6}), ResourceLimitError);
}

TEST(Choices, Bits) {
    const auto g = load("cold.plp");
    const auto t = choice_from_bits(g, "01");
    EXPECT_EQ(t.index, 2u);
    EXPECT_EQ(t.weight, R("0.66") * R("0.25"));
    EXPECT_THROW(choice_from_bits(g, "0"), InputError);
    EXPECT_THROW(choice_from_bits(g, "0x"), InputError);
}

TEST(Choices, ProgramForChoice) {
    const auto g = load("duplicates.plp");
    const auto first_only = program_for_choice(g, choice_from_bits(g, "10000"));
    const auto ms = stable_models(first_only);
    ASSERT_EQ(ms.size(), 1u);
    EXPECT_EQ(plp::test::true_names(first_only, ms[0]), (std::set<std::string>{"r"}));

    const auto ind = load("independence.plp");
    const auto all = program_for_choice(ind, choice_from_bits(ind, "11"));
    EXPECT_EQ(plp::test::true_names(all, least_model(all)), (std::set<std::string>{"r", "s", "v"}));
    EXPECT_TRUE(program_for_choice(ind, choice_from_bits(ind, "00")).facts.empty());
}

TEST(Credal, Unconditional) {
    EXPECT_EQ(credal(load("independence.plp"), "v"), interval("1/4", "1/4"));
    const auto dup = load("duplicates.plp");
    EXPECT_EQ(credal(dup, "r"), interval("4/5", "4/5"));
    EXPECT_EQ(credal(dup, "s(a)"), interval("11/25", "11/25"));
    EXPECT_EQ(credal(dup, "s(b)"), interval("3/10", "3/10"));
    EXPECT_EQ(credal(dup, "v"), interval("66/625", "66/625"));
    EXPECT_EQ(credal(load("alarm.plp"), "calls(a)"), interval("29/50", "29/50"));
    const auto wins = load("wins.plp");
    EXPECT_EQ(credal(wins, "wins(b)"), interval("7/10", "1"));
    EXPECT_EQ(credal(wins, "wins(c)"), interval("3/10", "3/10"));
    const auto col = load("coloring.plp");
    EXPECT_EQ(credal(col, "color(1,yellow)"), interval("0", "1/2"));
    EXPECT_EQ(credal(col, "color(4,yellow)"), interval("1/2", "1"));
    EXPECT_EQ(credal(col, "color(3,red)"), interval("1", "1"));
    EXPECT_EQ(credal(load("dilbert.plp"), "husband(dilbert)"), interval("0", "9/10"));
}

TEST(Credal, Stats) {
    InferenceStats stats;
    const auto g = load("wins.plp");
    credal_unconditional(g, ev(g, "wins(b)"), {}, &stats);
    EXPECT_EQ(stats.choices, 2u);
    EXPECT_GE(stats.models, 2u);
}

TEST(Credal, ConditionalExample) {
    const auto g = load("basic.plp");
    const auto r = credal_conditional(g, ev(g, "q"), ev(g, "r=false"));
    ASSERT_TRUE(r);
    EXPECT_EQ(*r, interval("0", "1"));
    EXPECT_EQ(credal_conditional(g, ev(g, "q"), ev(g, "r=false")), plp::test::vertex_oracle(g, ev(g, "q"), ev(g, "r=false")));
}

TEST(Credal, ConditionalSpecialCases) {
    const auto g = load("wins.plp");
    EXPECT_EQ(credal_conditional(g, ev(g, "wins(b)"), Event::contradiction()), std::nullopt);
    EXPECT_EQ(credal_conditional(g, ev(g, "wins(d)"), ev(g, "wins(b)")), interval("0", "0"));
    EXPECT_EQ(credal_conditional(g, ev(g, "wins(b)"), ev(g, "wins(b)")), interval("1", "1"));
    EXPECT_EQ(credal_conditional(g, ev(g, "wins(b)"), ev(g, "wins(c)")), interval("0", "1"));
}

TEST(Credal, TautologyEvidence) {
    for (const auto& name : {"alarm.plp", "wins.plp", "coloring.plp", "dilbert.plp", "smokers.plp"}) {
        const auto g = load(name);
        const AtomId last = static_cast<AtomId>(g.atom_count() - 1);
        const auto q = Event::literal(last, TruthValue::True);
        EXPECT_EQ(credal_conditional(g, q, Event::tautology()), credal_unconditional(g, q)) << name;
    }
}

TEST(Credal, Inconsistent) {
    const auto g = load("cold.plp");
    try {
        credal(g, "cold");
        FAIL() << "expected an inconsistency";
    } catch (const InconsistentProgramError& e) {
        EXPECT_EQ(e.witness().bits(), "01");
        EXPECT_EQ(describe(g, e.witness()), "{a discarded, b kept}");
        EXPECT_EQ(e.code(), ExitCode::inconsistent);
    }
    EXPECT_THROW(credal(load("barber.plp"), "shaves(b,a)"), InconsistentProgramError);
}

TEST(Consistency, Report) {
    const auto cold = check_consistency(load("cold.plp"));
    EXPECT_FALSE(cold.consistent);
    ASSERT_TRUE(cold.witness);
    EXPECT_EQ(cold.witness->bits(), "01");
    EXPECT_TRUE(check_consistency(load("coloring.plp")).consistent);
    EXPECT_TRUE(check_consistency(load("smokers.plp")).consistent);
    EXPECT_FALSE(check_consistency(load("barber.plp")).consistent);
}

TEST(Credal, EventBounds) {
    const auto g = load("wins.plp");
    const auto b = event_bounds(g, {Event::tautology(), Event::contradiction(), ev(g, "wins(b)"), !ev(g, "wins(b)")});
    EXPECT_EQ(b[0], interval("1", "1"));
    EXPECT_EQ(b[1], interval("0", "0"));
    EXPECT_EQ(b[2], interval("7/10", "1"));
    EXPECT_EQ(b[3], interval("0", "3/10"));
}

TEST(Credal, ConjugacyOnColoring) {
    const auto g = load("coloring.plp");
    for (AtomId a = 0; a != g.atom_count(); ++a) {
        const auto e = Event::literal(a, TruthValue::True);
        const auto b = event_bounds(g, {e, !e});
        EXPECT_EQ(b[0].upper, 1 - b[1].lower) << g.name(a);
    }
}

TEST(WellFounded, Queries) {
    const auto cold = load("cold.plp");
    EXPECT_EQ(wf(cold, "cold"), R("51/200"));
    EXPECT_EQ(wf(cold, "cold=undefined"), R("33/200"));
    EXPECT_EQ(wf(cold, "cold=false"), R("29/50"));
    EXPECT_EQ(wf(cold, "headache"), R("3/4"));
    EXPECT_EQ(wf(cold, "headache=undefined"), R("33/200"));
    EXPECT_EQ(wf(cold, "headache=false"), R("17/200"));

    const auto barber = load("barber.plp");
    EXPECT_EQ(wf(barber, "shaves(b,a)"), 1);
    EXPECT_EQ(wf(barber, "shaves(b,b)=undefined"), R("1/2"));
    EXPECT_EQ(wf(barber, "shaves(b,b)=false"), R("1/2"));

    const auto dilbert = load("dilbert.plp");
    EXPECT_EQ(wf(dilbert, "husband(dilbert)=undefined"), R("9/10"));
    EXPECT_EQ(wf(dilbert, "husband(dilbert)=false"), R("1/10"));
    EXPECT_EQ(wf(dilbert, "husband(dilbert)"), 0);

    EXPECT_EQ(wf(load("wins.plp"), "wins(b)=undefined"), R("3/10"));
}

TEST(WellFounded, Conditional) {
    const auto cold = load("cold.plp");
    EXPECT_EQ(wf(cold, "cold", "cold"), 1);
    EXPECT_EQ(wf(cold, "cold", "headache=false"), 0);
    EXPECT_EQ(wf(load("wins.plp"), "wins(a)", "wins(d)"), std::nullopt);
    EXPECT_EQ(wf(load("alarm.plp"), "calls(a)", "nobody(z)=false"), R("29/50"));
    EXPECT_EQ(wf(load("alarm.plp"), "calls(a)", "nobody(z)"), std::nullopt);
}

TEST(WellFounded, Distribution) {
    const auto d = wf_distribution(load("cold.plp"), parse_assignments("cold")[0].atom);
    EXPECT_EQ(d.p_true, R("0.255"));
    EXPECT_EQ(d.p_undefined, R("0.165"));
    EXPECT_EQ(d.p_false, R("0.58"));
    EXPECT_EQ(d.p_true + d.p_false + d.p_undefined, 1);
}

TEST(Semantics, StratifiedCollapse) {
    for (const auto& name : plp::test::fixture_names()) {
        const auto g = load(name);
        if (classify(g).kind == ProgramKind::general) { continue; }
        SCOPED_TRACE(name);
        for (AtomId a = 0; a != g.atom_count(); ++a) {
            const auto c = credal_unconditional(g, Event::literal(a, TruthValue::True));
            EXPECT_EQ(c.lower, c.upper);
            const auto d = wf_distribution(g, parse_assignments(g.name(a))[0].atom);
            EXPECT_EQ(d.p_undefined, 0);
            EXPECT_EQ(d.p_true, c.lower);
        }
    }
}

TEST(Credal, VertexOracleOnFixtures) {
    for (const auto& name : {"basic.plp", "wins.plp", "dilbert.plp", "game.plp", "cases.plp", "even_odd.plp"}) {
        SCOPED_TRACE(name);
        const auto g = load(name);
        for (AtomId a = 0; a != g.atom_count(); ++a) {
            const auto q = Event::literal(a, TruthValue::True);
            EXPECT_EQ(std::optional(credal_unconditional(g, q)), plp::test::vertex_oracle(g, q, Event::tautology()));
            for (AtomId b = 0; b < g.atom_count(); b += 2) {
                const auto e = Event::literal(b, TruthValue::False);
                EXPECT_EQ(credal_conditional(g, q, e), plp::test::vertex_oracle(g, q, e)) << g.name(a) << " | not " << g.name(b);
            }
        }
    }
}
