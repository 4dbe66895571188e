#include "doctest.h"
#include "oracles.hpp"
#include "sx/corpus.hpp"
#include "sx/figures.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"

using namespace sx;

namespace {

int find_trans(const OneChart& c, int s, char l, int t) {
    for (int i = 0; i < static_cast<int>(c.trans.size()); ++i)
        if (c.trans[i].src == s && c.trans[i].label == l && c.trans[i].tgt == t) return i;
    return -1;
}

int vertex(const OneChart& c, const std::string& name) {
    for (int v = 0; v < c.size(); ++v)
        if (c.names[v] == name) return v;
    return -1;
}

}  // namespace

TEST_CASE("charts without loop elimination") {
    for (const OneChart& c : {triangle_g1(), two_cycle_g2()}) {
        LleeResult r = decide_llee(c);
        CHECK_FALSE(r.witness.has_value());
        CHECK_FALSE(r.lee);
        CHECK_FALSE(oracle::lee(c));
    }
    OneChart g2 = two_cycle_g2();
    LoopCandidate l = loop_candidate(g2, 0, {0});
    CHECK(l.l1);
    CHECK(l.l2);
    CHECK_FALSE(l.l3);  // Y2 terminates
}

TEST_CASE("loop sub-1-chart of the small loop chart") {
    OneChart c = loop_chart();
    int v0 = vertex(c, "v0"), v1 = vertex(c, "v1"), v2 = vertex(c, "v2");
    int e = find_trans(c, v2, 'a', v0);
    REQUIRE(e >= 0);
    LoopCandidate l = loop_candidate(c, v2, {e});
    CHECK(l.valid());
    CHECK(l.body == std::vector<int>{std::min(v0, v1), std::max(v0, v1)});
    CHECK(l.transitions.size() == 3);
    EntryBodyLabeling sub = loop_sub_chart();
    CHECK(sub.trans[find_trans(sub, v2, 'a', v0)].mark == 1);
    CHECK_FALSE(check_witness(sub).valid_llee);  // the v1-v2 cycle is left unmarked
    CHECK(decide_llee(c).witness.has_value());

    // a terminating start is allowed
    OneChart s;
    int x = s.add_vertex(true, "x");
    s.add(x, 'a', x);
    s.start = x;
    canonicalize(s);
    CHECK(loop_candidate(s, x, {0}).valid());
    CHECK(eliminate(s, {loop_candidate(s, x, {0})}).trans.empty());
}

TEST_CASE("elimination of a*") {
    OneChart c = chart_of(parse("a*"));
    REQUIRE(c.size() == 2);
    OneChart one = onechart_of(parse("a*"));
    LoopCandidate l = loop_candidate(one, 0, {find_trans(one, 0, 'a', 1)});
    REQUIRE(l.valid());
    OneChart rest = eliminate(one, {l});
    CHECK(rest.size() == 1);
    CHECK(rest.trans.empty());
}

TEST_CASE("elimination on the (a*.b*)* chart") {
    OneChart c = lee_chart();
    int vs = vertex(c, "vs"), v11 = vertex(c, "v11"), v21 = vertex(c, "v21"), v1 = vertex(c, "v1"), v2 = vertex(c, "v2");
    LoopCandidate inner_a = loop_candidate(c, v1, {find_trans(c, v1, 'a', v11)});
    LoopCandidate inner_b = loop_candidate(c, v2, {find_trans(c, v2, 'b', v21)});
    CHECK(inner_a.valid());
    CHECK(inner_b.valid());
    OneChart step1 = eliminate(c, {inner_a});
    OneChart step2 = eliminate(step1, {loop_candidate(step1, vertex(step1, "v2"),
                                                      {find_trans(step1, vertex(step1, "v2"), 'b', vertex(step1, "v21"))})});
    OneChart both = eliminate(c, {inner_a, inner_b});
    CHECK(isomorphism(step2, both).has_value());
    int a = find_trans(both, vertex(both, "vs"), 'a', vertex(both, "v11"));
    int b = find_trans(both, vertex(both, "vs"), 'b', vertex(both, "v21"));
    LoopCandidate outer = loop_candidate(both, vertex(both, "vs"), {a, b});
    CHECK(outer.valid());
    OneChart done = eliminate(both, {outer});
    CHECK_FALSE(has_infinite_path(done));
    (void)vs;

    // the outer loop is not available before the inner ones are gone
    LoopCandidate early = loop_candidate(c, vs, {find_trans(c, vs, 'a', v11), find_trans(c, vs, 'b', v21)});
    CHECK_FALSE(early.valid());
}

TEST_CASE("witnesses of the (a*.b*)* chart") {
    auto ws = lee_witnesses();
    for (const auto& w : ws) {
        WitnessCheck r = check_witness(w);
        CHECK_MESSAGE(r.valid_llee, r.reason);
        CHECK(r.guarded);
    }
    LleeResult r = decide_llee(lee_chart());
    REQUIRE(r.witness.has_value());
    CHECK(r.lee);
    CHECK(check_witness(*r.witness).valid_llee);
    bool matches = false;
    for (const auto& w : ws) matches = matches || isomorphism(*r.witness, w).has_value();
    CHECK(matches);
}

TEST_CASE("layered and non-layered recordings") {
    CHECK(decide_llee(layering_chart()).witness.has_value());
    WitnessCheck right = check_witness(run_layered());
    CHECK_MESSAGE(right.valid_llee, right.reason);
    WitnessCheck left = check_witness(run_not_layered());
    CHECK_FALSE(left.valid_llee);
    CHECK_FALSE(left.reason.empty());
    CHECK(check_witness_lenient(run_not_layered()).valid_llee);
}

TEST_CASE("unmarked cycles are rejected") {
    OneChart c = onechart_of(parse("a*"));
    for (auto& t : c.trans) t.mark = 0;
    WitnessCheck r = check_witness(c);
    CHECK_FALSE(r.valid_llee);
}

TEST_CASE("loop orders of a*") {
    OneChart w = onechart_of(parse("a*"));
    LoopOrders o = loop_orders(w);
    CHECK(o.descends_acyclic);
    CHECK(o.body_acyclic);
    CHECK(std::find(o.descends.begin(), o.descends.end(), std::make_pair(0, 1)) != o.descends.end());
    CHECK(loop_descendants(w, 0) == std::vector<int>{1});
    CHECK(loop_descendants(w, 1).empty());
}

TEST_CASE("property: interpretation witnesses have acyclic loop orders") {
    for (Exp e : expression_corpus(61, 200, 10)) {
        OneChart w = onechart_of(e);
        LoopOrders o = loop_orders(w);
        CHECK(o.descends_acyclic);
        CHECK(o.body_acyclic);
    }
}

TEST_CASE("property: witnesses found by the search check out") {
    Rng rng(62);
    int found = 0;
    for (int i = 0; i < 300; ++i) {
        OneChart c = random_chart(rng, 1 + i % 6, "ab", 0.35, 0.1);
        LleeResult r = decide_llee(c);
        if (!r.witness) continue;
        ++found;
        CHECK(r.lee);
        WitnessCheck w = check_witness(*r.witness);
        CHECK_MESSAGE(w.valid_llee, w.reason);
    }
    CHECK(found > 50);
}

TEST_CASE("property: LEE agrees with exhaustive elimination") {
    Rng rng(63);
    int yes = 0, no = 0;
    for (int i = 0; i < 800; ++i) {
        OneChart c = random_chart(rng, 1 + i % 6, "ab", 0.3, 0.1);
        if (c.trans.size() > 10) continue;
        bool expect = oracle::lee(c);
        REQUIRE(decide_llee(c).lee == expect);
        (expect ? yes : no)++;
    }
    CHECK(yes > 20);
    CHECK(no > 20);
}
