#include "doctest.h"
#include "oracles.hpp"
#include "sx/corpus.hpp"
#include "sx/interpret.hpp"
#include "sx/syntax.hpp"

using namespace sx;

TEST_CASE("parse: precedence and shapes") {
    CHECK(parse("0") == zero());
    CHECK(parse("(a+b)*.0") == prod(star(sum(act('a'), act('b'))), zero()));
    CHECK(parse("a.b+c*") == sum(prod(act('a'), act('b')), star(act('c'))));
    CHECK(parse(" a . b ") == prod(act('a'), act('b')));
    CHECK(parse("a+b+c") == sum(sum(act('a'), act('b')), act('c')));
    CHECK(parse("a.b.c") == prod(prod(act('a'), act('b')), act('c')));
    CHECK(parse("a**") == star(star(act('a'))));
}

TEST_CASE("parse: errors carry the byte offset") {
    try {
        parse("a.(b");
        FAIL("no error");
    } catch (const SyntaxError& e) {
        CHECK(e.offset == 4);
    }
    CHECK_THROWS_AS(parse("a#b"), SyntaxError);
    CHECK_THROWS_AS(parse(""), SyntaxError);
    CHECK_THROWS_AS(parse("A"), SyntaxError);
}

TEST_CASE("star height") {
    CHECK(star_height(zero()) == 0);
    CHECK(star_height(one()) == 0);
    CHECK(star_height(act('a')) == 0);
    CHECK(star_height(parse("(a+b)*")) == 1);
    CHECK(star_height(parse("((a*).b)*")) == 2);
}

TEST_CASE("terminates: examples") {
    CHECK(terminates(one()));
    CHECK_FALSE(terminates(parse("a.b")));
    CHECK(terminates(parse("a*.b*")));
    CHECK(terminates(pure(one())));
    CHECK_FALSE(terminates(stackprod(pure(one()), act('a'))));
}

TEST_CASE("strongly normed") {
    CHECK_FALSE(strongly_normed(zero()));
    CHECK(strongly_normed(act('a')));
    CHECK_FALSE(strongly_normed(one()));
    CHECK(strongly_normed(parse("a*")));
    CHECK_FALSE(strongly_normed(parse("a.0")));
}

TEST_CASE("projection") {
    CHECK(project(pure(parse("a.b"))) == parse("a.b"));
    CHECK(project(stackprod(pure(one()), act('a'))) == parse("1.a*"));
    SExp E = stackprod(prods(stackprod(pure(one()), act('a')), act('b')), act('c'));
    CHECK(project(E) == parse("((1.a*).b).c*"));
    CHECK(print(E) == "1#a*.b#c*");
}

TEST_CASE("property: terminates agrees with the rule closure on all expressions up to size 8") {
    std::size_t n = 0;
    for (int size = 1; size <= 8; ++size)
        for (Exp e : oracle::all_of_size(size, "ab")) {
            ++n;
            REQUIRE_MESSAGE(terminates(e) == oracle::terminates(e), print(e));
        }
    CHECK(n == 4 + 4 + 36 + 100 + 708 + 2884 + 18404 + 90276);
}

TEST_CASE("property: terminates agrees with the rule closure on sampled sizes 9 and 10") {
    Rng rng(99);
    for (int i = 0; i < 20000; ++i) {
        Exp e = random_exp(rng, 9 + i % 2);
        REQUIRE_MESSAGE(terminates(e) == oracle::terminates(e), print(e));
    }
}

TEST_CASE("property: print then parse is the identity") {
    for (Exp e : expression_corpus(5, 500, 14, "abc")) REQUIRE(parse(print(e)) == e);
    for (int size = 1; size <= 6; ++size)
        for (Exp e : oracle::all_of_size(size, "a")) REQUIRE(parse(print(e)) == e);
}

TEST_CASE("property: stacked print and parse round trip, projection leaves no stacked product") {
    for (Exp e : expression_corpus(6, 150, 12)) {
        auto c = onechart_of(e);
        for (SExp E : c.exprs) {
            REQUIRE(parse_stacked(print(E)) == E);
            CHECK(print(project(E)).find('#') == std::string::npos);
            if (E->kind == SKind::Pure) CHECK(project(E) == E->e);
        }
    }
}

TEST_CASE("property: strongly normed iff a terminating vertex is reachable in at least one step") {
    for (Exp e : expression_corpus(8, 300, 10)) {
        auto c = chart_of(e);
        std::vector<bool> seen(c.size(), false);
        std::vector<int> stack;
        for (const auto& t : c.trans)
            if (t.src == c.start && !seen[t.tgt]) seen[t.tgt] = true, stack.push_back(t.tgt);
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            for (const auto& t : c.trans)
                if (t.src == v && !seen[t.tgt]) seen[t.tgt] = true, stack.push_back(t.tgt);
        }
        bool reach = false;
        for (int v = 0; v < c.size(); ++v) reach = reach || (seen[v] && c.term[v]);
        REQUIRE_MESSAGE(strongly_normed(e) == reach, print(e));
    }
}
