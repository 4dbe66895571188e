#include "doctest.h"
#include "oracles.hpp"
#include "sx/bisim.hpp"
#include "sx/coind.hpp"
#include "sx/corpus.hpp"
#include "sx/figures.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"
#include "sx/solve.hpp"

using namespace sx;

namespace {

OneChart all_a(const OneChart& c) {
    OneChart r = c;
    for (auto& t : r.trans) t.label = 'a';
    canonicalize(r);
    return r;
}

int vertex(const OneChart& c, const std::string& name) {
    for (int v = 0; v < c.size(); ++v)
        if (c.names[v] == name) return v;
    return -1;
}

const SystemId milm{System::MilMinus, {}};

}  // namespace

TEST_CASE("correctness conditions") {
    OneChart t;
    t.add_vertex(true, "t");
    t.start = 0;
    canonicalize(t);
    CHECK(print(correctness_condition(t, {one()}, 0)) == "1 = 1");

    OneChart c = chart_of(parse("a"));
    CHECK(print(correctness_condition(c, {parse("a"), one()}, 0)) == "a = 0+a.1");

    OneChart g = all_a(triangle_g1());
    Exp k = parse("a*.0");
    FormalEq q = correctness_condition(g, {k, k, k}, 0);
    CHECK(print(q) == "a*.0 = 0+a.(a*.0)+a.(a*.0)");
    CHECK_THROWS_AS(correctness_condition(g, {k, k, k}, 5), ChartError);
}

TEST_CASE("checking solutions") {
    OneChart c = chart_of(parse("(a+b)*"));
    Solution id = check_solution(projection_solution(c), Mode::Certificate);
    CHECK(weakest(id) == Evidence::Certificate);

    OneChart g = all_a(triangle_g1());
    Exp k = parse("a*.0");
    Solution s = make_solution(g, {k, k, k});
    CHECK_THROWS_AS(check_solution(s, Mode::Certificate), SolutionError);
    Solution sem = check_solution(make_solution(g, {k, k, k}), Mode::Semantic, 0);
    for (const auto& e : sem.evidence) CHECK(e.kind == Evidence::Semantic);

    OneChart a = chart_of(parse("a+1"));
    try {
        check_solution(make_solution(a, {parse("a.0+1"), zero()}), Mode::Semantic);
        FAIL("constant 0 accepted");
    } catch (const SolutionError& e) {
        CHECK(a.term[e.vertex]);
    }
    CHECK_THROWS_AS(make_solution(a, {zero()}), SolutionError);
    CHECK_THROWS_AS(check_solution(make_solution(chart_of(one()), {zero()}), Mode::Semantic), SolutionError);
}

TEST_CASE("fundamental theorem certificates") {
    auto concl = [](const char* s) { return print(ft_certificate(pure(parse(s)))->concl); };
    CHECK(concl("1") == "1 = 1");
    CHECK(concl("a") == "a = 0+a.1");
    CHECK(concl("a*") == "a* = 1+a.(1.a*)");
    for (const char* s : {"1", "a", "a*", "(a*.b*)*"}) CHECK(check_derivation(ft_certificate(pure(parse(s))), milm));
}

TEST_CASE("termination splitting") {
    auto f = [](const char* s) { return print(split_termination(parse(s)).f); };
    CHECK(f("1") == "0");
    CHECK(f("1+a") == "a");
    CHECK(f("a*") == "a.a*");
    Split sp = split_termination(parse("a*"));
    CHECK(print(sp.cert->concl) == "a* = 1+a.a*");
    CHECK(check_derivation(sp.cert, milm));
    CHECK_THROWS_AS(split_termination(parse("a.b")), std::invalid_argument);
}

TEST_CASE("extraction") {
    Extraction x = extract(onechart_of(parse("a*")));
    CHECK(print(x.solution.principal()) == "(a.(0*.(1.1)))*.(1+0)");
    CHECK(print(simplify(x.solution.principal()).nf) == "a*");
    CHECK(weakest(check_solution(x.solution, Mode::Certificate)) == Evidence::Certificate);

    EntryBodyLabeling w = lee_witnesses()[2];
    Extraction y = extract(w);
    int v21 = vertex(w, "v21"), v2 = vertex(w, "v2");
    REQUIRE(y.relative.count({v21, v2}));
    CHECK(print(y.relative.at({v21, v2})) == "0*.(1.1)");
    Normal n = simplify(y.solution.principal());
    CHECK(print(n.nf) == "(a.(a*.b*)+b.b*)*");
    CHECK(check_derivation(n.proof, milm));
    CHECK(n.proof->concl.lhs == y.solution.principal());
    CHECK(weakest(check_solution(y.solution, Mode::Certificate)) == Evidence::Certificate);

    EntryBodyLabeling bad = onechart_of(parse("a*"));
    for (auto& t : bad.trans) t.mark = 0;
    CHECK_THROWS(extract(bad));
}

TEST_CASE("provable equality of solutions") {
    EntryBodyLabeling w = onechart_of(parse("a*"));
    Solution s = check_solution(projection_solution(w), Mode::Certificate);
    for (const D& d : solutions_equal_in_mil(w, s, s)) {
        CHECK(d->rule == Rule::Refl);
    }

    CoinductiveProof p = certify(proof_star_sum());
    std::vector<D> eqs = solutions_equal_in_mil(p.chart, p.lhs, p.rhs);
    D at = eqs.at(p.chart.start);
    CHECK(print(at->concl) == "(a*.b*)* = (a+b)*");
    CHECK(check_derivation(at, SystemId{System::Mil, {}}));

    EntryBodyLabeling fw = onechart_of(parse("(a.a)*.0"));
    Exp k = parse("a*.0");
    Solution s1 = check_solution(make_solution(fw, std::vector<Exp>(fw.size(), k)), Mode::Prover);
    Solution s2 = check_solution(projection_solution(fw), Mode::Certificate);
    D fd = solutions_equal_in_mil(fw, s1, s2).at(fw.start);
    CHECK(print(fd->concl) == "a*.0 = (a.a)*.0");
    CHECK(check_derivation(fd, SystemId{System::Mil, {}}));
    CHECK(count_rule(fd, Rule::RSPstar) > 0);
}

TEST_CASE("pullback of solutions") {
    OneChart c = chart_of(parse("(a+b)*.a"));
    Solution s2 = check_solution(projection_solution(c), Mode::Certificate);
    std::vector<int> id(c.size());
    for (int v = 0; v < c.size(); ++v) id[v] = v;
    Solution same = pullback_solution(id, c, c, s2);
    CHECK(same.values == s2.values);

    Exp e = parse("(a*.b*)*");
    EntryBodyLabeling w = onechart_of(e);
    Projection pm = projection_map(w);
    Solution t = check_solution(projection_solution(pm.target), Mode::Certificate);
    Solution back = pullback_solution(pm.phi, w, pm.target, t);
    for (int v = 0; v < w.size(); ++v) CHECK(back.values[v] == project(w.exprs[v]));
    CHECK(back.principal() == e);
    CHECK_THROWS(pullback_solution(std::vector<int>(w.size(), 0), w, pm.target, t));
}

TEST_CASE("property: extraction and certificates over the corpus") {
    for (Exp e : expression_corpus(81, 150, 10)) {
        EntryBodyLabeling w = onechart_of(e);
        for (int v = 0; v < w.size(); ++v) {
            D d = ft_certificate(w.exprs[v]);
            REQUIRE(check_derivation(d, milm));
        }
        Extraction x = extract(w);
        Solution s = check_solution(x.solution, Mode::Certificate);
        CHECK(weakest(s) == Evidence::Certificate);
        CHECK(bisimilar(x.solution.principal(), e));
    }
}

TEST_CASE("property: termination splitting postconditions") {
    int seen = 0;
    for (Exp e : expression_corpus(82, 400, 10)) {
        if (!oracle::terminates(e)) continue;
        ++seen;
        Split sp = split_termination(e);
        CHECK_FALSE(oracle::terminates(sp.f));
        CHECK(star_height(sp.f) == star_height(e));
        CHECK(sp.cert->concl.lhs == e);
        CHECK(sp.cert->concl.rhs == sum(one(), sp.f));
        CHECK(check_derivation(sp.cert, milm));
        CHECK(oracle::same_language(e, sum(one(), sp.f), "ab", 4));
    }
    CHECK(seen > 100);
}

TEST_CASE("property: solutions are equal in Mil") {
    for (Exp e : expression_corpus(83, 60, 8)) {
        EntryBodyLabeling w = onechart_of(e);
        Solution a = check_solution(extract(w).solution, Mode::Certificate);
        Solution b = check_solution(projection_solution(w), Mode::Certificate);
        std::vector<D> eqs = solutions_equal_in_mil(w, a, b);
        REQUIRE(eqs.size() == static_cast<std::size_t>(w.size()));
        for (int v = 0; v < w.size(); ++v) {
            CHECK(check_derivation(eqs[v], SystemId{System::Mil, {}}));
            CHECK(eqs[v]->concl.lhs == a.values[v]);
            CHECK(eqs[v]->concl.rhs == b.values[v]);
            CHECK(oracle::same_language(a.values[v], b.values[v], "ab", 4));
        }
    }
}

TEST_CASE("property: pulled-back solutions pass the semantic check") {
    Rng rng(84);
    for (int i = 0; i < 60; ++i) {
        Exp e = random_exp(rng, 2 + i % 8);
        EntryBodyLabeling w = onechart_of(e);
        OneChart c = chart_of(e);
        auto phi = find_functional(w, c);
        REQUIRE(phi.has_value());
        Solution s2 = check_solution(projection_solution(c), Mode::Certificate);
        Solution s1 = pullback_solution(*phi, w, c, s2);
        CHECK_NOTHROW(check_solution(make_solution(w, s1.values), Mode::Semantic, 0));
    }
}
