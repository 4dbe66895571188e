#include <fstream>

#include "doctest.h"
#include "sx/bisim.hpp"
#include "sx/corpus.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"

using namespace sx;

namespace {

OneChart golden(const std::string& name) {
    std::ifstream in(std::string(SX_SOURCE_DIR) + "/tests/golden/" + name + ".json");
    REQUIRE(in);
    return chart_from_json(nlohmann::json::parse(in));
}

std::vector<std::tuple<int, char, int, int>> edges(const OneChart& c) {
    std::vector<std::tuple<int, char, int, int>> r;
    for (const auto& t : c.trans) r.emplace_back(t.src, t.label, t.tgt, t.mark);
    return r;
}

}  // namespace

TEST_CASE("chart interpretation: examples") {
    OneChart a = chart_of(act('a'));
    REQUIRE(a.size() == 2);
    CHECK(a.exprs[1]->e == one());
    CHECK(a.term == std::vector<bool>{false, true});
    CHECK(edges(a) == std::vector<std::tuple<int, char, int, int>>{{0, 'a', 1, 0}});

    OneChart z = chart_of(zero());
    CHECK(z.size() == 1);
    CHECK_FALSE(z.term[0]);
    CHECK(z.trans.empty());

    OneChart s = chart_of(parse("(a+b)*"));
    REQUIRE(s.size() == 2);
    CHECK(s.exprs[1]->e == parse("1.(a+b)*"));
    CHECK(s.term == std::vector<bool>{true, true});
    CHECK(edges(s) == std::vector<std::tuple<int, char, int, int>>{
                          {0, 'a', 1, 0}, {0, 'b', 1, 0}, {1, 'a', 1, 0}, {1, 'b', 1, 0}});
}

TEST_CASE("action 1-derivatives") {
    using V = std::vector<std::pair<char, SExp>>;
    CHECK(action_derivs(pure(act('a'))) == V{{'a', pure(one())}});
    CHECK(action_derivs(pure(parse("a*"))) == V{{'a', stackprod(pure(one()), act('a'))}});
    CHECK(action_derivs(stackprod(pure(one()), act('a'))) == V{{EMPTY, pure(parse("a*"))}});
}

TEST_CASE("1-chart interpretation: examples") {
    OneChart w = onechart_of(parse("a*"));
    REQUIRE(w.size() == 2);
    CHECK(w.marked);
    CHECK(print(w.exprs[1]) == "1#a*");
    CHECK(w.term == std::vector<bool>{true, false});
    CHECK(edges(w) == std::vector<std::tuple<int, char, int, int>>{{0, 'a', 1, 1}, {1, EMPTY, 0, 0}});

    OneChart sp = onechart_of(parse("((a.a*+b).b*)*"));
    CHECK(sp.size() == 7);
    CHECK(isomorphism(sp, golden("star_products")).has_value());
    CHECK(isomorphism(onechart_of(parse("(a.(a+b)+b)*.0")), golden("zero_tail")).has_value());

    OneChart a1 = onechart_of(act('a'));
    OneChart a0 = chart_of(act('a'));
    a1.marked = false;
    CHECK(isomorphism(a1, a0).has_value());
    for (const auto& t : onechart_of(act('a')).trans) CHECK(t.mark == 0);
}

TEST_CASE("vertex budget") {
    setenv("SX_VERTEX_BUDGET", "3", 1);
    CHECK_THROWS_AS(chart_of(parse("a.b.c.d")), BudgetExceeded);
    unsetenv("SX_VERTEX_BUDGET");
    CHECK(chart_of(parse("a.b.c.d")).size() == 5);
}

TEST_CASE("property: chart interpretation never has empty steps") {
    for (Exp e : expression_corpus(11, 300, 12)) CHECK_FALSE(has_empty_transitions(chart_of(e)));
}

TEST_CASE("property: 1-chart interpretation is weakly guarded and its labeling a guarded witness") {
    for (Exp e : expression_corpus(12, 300, 12)) {
        OneChart w = onechart_of(e);
        CHECK(is_weakly_guarded(w));
        WitnessCheck r = check_witness(w);
        CHECK_MESSAGE(r.valid_llee, print(e), " ", r.reason);
        CHECK(r.guarded);
    }
}

TEST_CASE("property: projection is a functional 1-bisimulation onto the chart interpretation") {
    for (Exp e : expression_corpus(13, 300, 12)) {
        OneChart w = onechart_of(e);
        Projection p = projection_map(w);
        CHECK(p.target.exprs[p.target.start]->e == e);
        CHECK_MESSAGE(check_functional(p.phi, w, p.target), print(e));
        // the part reachable from e is exactly chart_of(e)
        CHECK(isomorphism(normalize(p.target), chart_of(e)).has_value());
    }
}

TEST_CASE("property: action 1-derivatives are the transitions of the 1-chart") {
    for (Exp e : expression_corpus(14, 200, 12)) {
        OneChart w = onechart_of(e);
        for (int v = 0; v < w.size(); ++v) {
            std::vector<std::pair<char, SExp>> outs;
            for (const auto& t : w.trans)
                if (t.src == v) outs.emplace_back(t.label, w.exprs[t.tgt]);
            auto ad = action_derivs(w.exprs[v]);
            auto less = [](const auto& x, const auto& y) {
                return x.first != y.first ? x.first < y.first : compare(x.second, y.second) < 0;
            };
            std::sort(outs.begin(), outs.end(), less);
            std::sort(ad.begin(), ad.end(), less);
            CHECK_MESSAGE(ad == outs, print(w.exprs[v]));
        }
    }
}
