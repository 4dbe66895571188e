#include "doctest.h"
#include "oracles.hpp"
#include "sx/bisim.hpp"
#include "sx/corpus.hpp"
#include "sx/interpret.hpp"

using namespace sx;

namespace {

OneChart small(std::initializer_list<bool> term, std::initializer_list<Transition> ts) {
    OneChart c;
    for (bool t : term) c.add_vertex(t);
    for (const auto& t : ts) c.add(t.src, t.label, t.tgt, t.mark);
    canonicalize(c);
    return c;
}

}  // namespace

TEST_CASE("weak guardedness") {
    CHECK(is_weakly_guarded(chart_of(parse("(a+b)*"))));
    CHECK_FALSE(is_weakly_guarded(small({false, false}, {{0, EMPTY, 1}, {1, EMPTY, 0}})));
    CHECK(is_weakly_guarded(onechart_of(parse("((a.a*+b).b*)*"))));
}

TEST_CASE("induced chart") {
    OneChart plain = chart_of(parse("a.b+a*"));
    CHECK(structure_signature(induced_chart(plain)) == structure_signature(plain));

    OneChart c = small({false, true}, {{0, EMPTY, 1}, {1, 'a', 1}});
    OneChart i = induced_chart(c);
    CHECK(i.term[0]);
    CHECK(i.term[1]);
    CHECK_FALSE(has_empty_transitions(i));
    CHECK(transition_list(i, 0) == std::vector<std::pair<char, int>>{{'a', 1}});
    CHECK(transition_list(i, 1) == std::vector<std::pair<char, int>>{{'a', 1}});

    OneChart s = induced_chart(onechart_of(parse("a*")));
    REQUIRE(s.size() == 2);
    CHECK(s.term[0]);
    CHECK(s.term[1]);
    CHECK(transition_list(s, 0) == std::vector<std::pair<char, int>>{{'a', 1}});
    CHECK(transition_list(s, 1) == std::vector<std::pair<char, int>>{{'a', 1}});

    CHECK_THROWS_AS(induced_chart(small({false, false}, {{0, EMPTY, 1}, {1, EMPTY, 0}})), ChartError);
}

TEST_CASE("termination constant") {
    OneChart c = chart_of(parse("a"));
    CHECK(termination_constant(c, 1) == one());
    CHECK(termination_constant(c, 0) == zero());
    CHECK(termination_constant(chart_of(zero()), 0) == zero());
    CHECK_THROWS_AS(termination_constant(c, 7), ChartError);
}

TEST_CASE("factor chart") {
    OneChart c = chart_of(parse("(a+b)*"));
    FactorResult id = factor_chart(c, {0, 1});
    CHECK(isomorphism(id.chart, c).has_value());

    FactorResult f = factor_chart(c, {0, 0});
    REQUIRE(f.chart.size() == 1);
    CHECK(f.chart.term[0]);
    CHECK(transition_list(f.chart, 0) == std::vector<std::pair<char, int>>{{'a', 0}, {'b', 0}});
    CHECK(check_functional(f.proj, c, f.chart));
}

TEST_CASE("construction errors") {
    OneChart c;
    c.add_vertex(false);
    c.add(0, 'a', 3);
    CHECK_THROWS_AS(validate(c), ChartError);
    CHECK_THROWS_AS(chart_from_json(nlohmann::json::parse(R"({"start":0,"vertices":[{"id":0}],"transitions":[{"src":0,"label":"ab","tgt":0}]})")),
                    ChartError);
}

TEST_CASE("json round trip and dot conventions") {
    OneChart w = onechart_of(parse("((a.a*+b).b*)*"));
    OneChart back = chart_from_json(to_json(w));
    CHECK(back.marked);
    CHECK(structure_signature(back) == structure_signature(w));
    for (int v = 0; v < w.size(); ++v) CHECK(back.exprs[v] == w.exprs[v]);
    std::string dot = to_dot(w);
    CHECK(dot.find("style=dotted") != std::string::npos);
    CHECK(dot.find("doublecircle") != std::string::npos);
    CHECK(dot.find("__start -> v0") != std::string::npos);
}

TEST_CASE("isomorphism ignores vertex numbering") {
    OneChart a = small({true, false, false}, {{0, 'a', 1}, {1, 'b', 2}, {2, EMPTY, 0}});
    OneChart b = small({false, true, false}, {{1, 'a', 2}, {2, 'b', 0}, {0, EMPTY, 1}});
    b.start = 1;
    auto m = isomorphism(a, b);
    REQUIRE(m.has_value());
    CHECK(*m == std::vector<int>{1, 2, 0});
    OneChart c = small({true, false, false}, {{0, 'a', 1}, {1, 'a', 2}, {2, EMPTY, 0}});
    CHECK_FALSE(isomorphism(a, c).has_value());
}

TEST_CASE("property: induced chart is idempotent") {
    Rng rng(41);
    for (int i = 0; i < 200; ++i) {
        OneChart c = random_chart(rng, 2 + i % 7);
        if (!is_weakly_guarded(c)) continue;
        OneChart once = induced_chart(c);
        CHECK(isomorphism(induced_chart(once), once).has_value());
    }
}

TEST_CASE("property: factoring by a bisimulation gives a functional bisimulation") {
    Rng rng(42);
    for (int i = 0; i < 200; ++i) {
        OneChart c = random_chart(rng, 2 + i % 7, "ab", 0.35, 0.0);
        auto blocks = bisim_blocks(c, c);
        blocks.resize(c.size());
        FactorResult f = factor_chart(c, blocks);
        REQUIRE(check_functional(f.proj, c, f.chart));
        CHECK(oracle::bisimilar(c, f.chart));
    }
}

TEST_CASE("property: garbage collection keeps the 1-bisimilarity class") {
    Rng rng(43);
    for (int i = 0; i < 200; ++i) {
        OneChart c;
        int n = 2 + i % 7;
        for (int v = 0; v < n; ++v) c.add_vertex(i % 3 == v % 3);
        for (int k = 0; k < n + 2; ++k) {
            int s = static_cast<int>(rng() % n), t = static_cast<int>(rng() % n);
            c.add(s, k % 4 == 0 && s < t ? EMPTY : static_cast<char>('a' + rng() % 2), t);
        }
        canonicalize(c);
        OneChart g = normalize(c);
        CHECK(g.size() <= c.size());
        CHECK(oracle::bisimilar(c, g));
        CHECK(one_bisimilar(c, g).has_value());
    }
}
