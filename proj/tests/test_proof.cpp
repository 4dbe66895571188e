#include "doctest.h"
#include "oracles.hpp"
#include "sx/bisim.hpp"
#include "sx/corpus.hpp"
#include "sx/interpret.hpp"
#include "sx/proof.hpp"

using namespace sx;

namespace {

SystemId sys(System s) { return SystemId{s, {}}; }

}  // namespace

TEST_CASE("basic rules") {
    Exp a = parse("a+b");
    CHECK(check_derivation(refl(a), sys(System::MilMinus)));
    D ax = axiom("assoc+", parse("a"), parse("b"), parse("c"));
    CHECK(print(ax->concl) == "a+b+c = a+(b+c)");
    CHECK(check_derivation(ax, sys(System::MilMinus)));
    CHECK(check_derivation(symm(ax), sys(System::MilMinus)));
    CHECK(match_axiom("rec*", parse_eq("(a+b)* = 1+(a+b).(a+b)*")).has_value());
    CHECK_FALSE(match_axiom("rec*", parse_eq("a* = 1+a.b*")).has_value());
    CHECK_THROWS(trans(ax, ax));

    // a forged axiom node
    auto bad = std::make_shared<DNode>(*axiom("id_l", parse("a")));
    bad->concl = parse_eq("1.a = b");
    CheckResult r = check_derivation(bad, sys(System::MilMinus));
    CHECK_FALSE(r.ok);
    CHECK_FALSE(r.error.empty());
}

TEST_CASE("RSP* side condition") {
    // (a+c)* = (a+1).(a+c)* + 1 holds, but a+1 terminates
    SystemId s = sys(System::MilMinus);
    FormalEq prem = parse_eq("(a+c)* = (a+1).(a+c)*+1");
    s.assumptions.push_back(prem);
    D d = rsp_star(assume(prem));
    CHECK(print(d->concl) == "(a+c)* = (a+1)*.1");
    s.sys = System::Mil;
    CheckResult r = check_derivation(d, s);
    CHECK_FALSE(r.ok);
    CHECK(r.error.find("terminates") != std::string::npos);

    FormalEq good = parse_eq("a* = a.a*+1");
    SystemId t{System::Mil, {good}};
    CHECK(check_derivation(rsp_star(assume(good)), t));
    t.sys = System::MilMinus;
    CHECK_FALSE(check_derivation(rsp_star(assume(good)), t));
    t.sys = System::CC;
    CHECK_FALSE(check_derivation(axiom("id_l", parse("a")), t));
}

TEST_CASE("rule permissions") {
    CHECK(rule_allowed(Rule::RSPstar, System::Mil, 1));
    CHECK_FALSE(rule_allowed(Rule::RSPstar, System::MilMinus, 1));
    CHECK(rule_allowed(Rule::USP1, System::MilPrime, 2));
    CHECK(rule_allowed(Rule::LCoind, System::CMil, 3));
    CHECK(rule_allowed(Rule::Coind, System::CC, 3));
    CHECK_FALSE(rule_allowed(Rule::Axiom, System::CC, 0));
    CHECK_FALSE(rule_allowed(Rule::Coind, System::CMil, 3));
    for (const char* n : {"Mil-", "Mil", "Mil'", "CMil", "CC", "CLC"}) CHECK(system_from_name(n).has_value());
    CHECK_FALSE(system_from_name("Foo").has_value());
}

TEST_CASE("ACI") {
    CHECK(aci_eq(parse("a+b+a"), parse("b+a")));
    CHECK(aci_eq(parse("(a+b)+c"), parse("c+(b+a)")));
    CHECK_FALSE(aci_eq(parse("a+0"), parse("a")));
    CHECK_FALSE(aci_eq(parse("a.b"), parse("b.a")));
    D p = aci_primitive(parse("b+a+b"));
    CHECK(check_derivation(p, sys(System::MilMinus)));
    CHECK(aci_eq(p->concl.rhs, parse("a+b")));
    D step = aci_step(parse("a+b"), parse("b+a"));
    CHECK(check_derivation(step, sys(System::MilMinus)));
    CHECK_FALSE(check_derivation(step, sys(System::CC)));
    D exp = expand_aci(step);
    CHECK(count_rule(exp, Rule::ACIStep) == 0);
    CHECK(check_derivation(exp, sys(System::MilMinus)));
    CHECK(exp->concl == step->concl);
}

TEST_CASE("bounded prover") {
    SystemId s = sys(System::MilMinus);
    for (const char* eq : {"a*.1 = a*", "a* = 1+a.a*", "(a+b)* = (b+a)*", "(1+a)* = a*", "0.a+b = b"}) {
        FormalEq q = parse_eq(eq);
        auto d = bounded_prove(q.lhs, q.rhs, s);
        REQUIRE_MESSAGE(d.has_value(), eq);
        CHECK(check_derivation(*d, s));
        CHECK((*d)->concl == q);
    }
    FormalEq prem = parse_eq("(a+c)* = (a+1).(a+c)*+1");
    auto d = bounded_prove(prem.lhs, prem.rhs, s);
    REQUIRE(d.has_value());
    CHECK(check_derivation(*d, s));
    CHECK_FALSE(bounded_prove(parse("a"), parse("b"), s).has_value());
}

TEST_CASE("instance elimination templates") {
    Rng rng(71);
    RspTriple t = random_rsp_triple(rng, 6, 3);
    D rsp = rsp_star(t.premise);
    REQUIRE(check_derivation(rsp, sys(System::Mil)));
    D u = mimic_instance_elimination(rsp, Rule::RSPstar, System::MilPrime);
    CHECK(count_rule(u, Rule::RSPstar) == 0);
    CHECK(count_rule(u, Rule::USP1) == 1);
    CHECK(check_derivation(u, sys(System::MilPrime)));
    CHECK(u->concl == rsp->concl);
    D back = mimic_instance_elimination(u, Rule::USP1, System::Mil);
    CHECK(count_rule(back, Rule::USP1) == 0);
    CHECK(count_rule(back, Rule::RSPstar) == 2);
    CHECK(check_derivation(back, sys(System::Mil)));
    CHECK(back->concl == rsp->concl);

    D plain = axiom("id_r", parse("a"));
    CHECK(mimic_instance_elimination(plain, Rule::USP, System::Mil) == plain);
    CHECK_THROWS_AS(mimic_instance_elimination(u, Rule::USP1, System::CC), TemplateError);
}

TEST_CASE("property: Mil derivations are sound") {
    Rng rng(72);
    for (int i = 0; i < 150; ++i) {
        D d = random_mil_derivation(rng, 2 + i % 7, 4);
        CheckResult r = check_derivation(d, sys(System::Mil));
        REQUIRE_MESSAGE(r.ok, r.error);
        CHECK(bisimilar(d->concl.lhs, d->concl.rhs));
        CHECK(oracle::same_language(d->concl.lhs, d->concl.rhs, "ab", 5));
    }
}

TEST_CASE("property: random rewrites are sound and checkable") {
    Rng rng(73);
    for (int i = 0; i < 300; ++i) {
        Exp e = random_exp(rng, 1 + i % 10);
        D d = random_rewrites(rng, e, 4);
        CHECK(d->concl.lhs == e);
        CHECK(check_derivation(d, sys(System::MilMinus)));
        CHECK(oracle::same_language(e, d->concl.rhs, "ab", 5));
    }
}

TEST_CASE("property: prover results check and are sound") {
    Rng rng(74);
    int found = 0;
    for (int i = 0; i < 120; ++i) {
        Exp e = random_exp(rng, 1 + i % 8);
        Exp f = i % 2 ? random_rewrites(rng, e, 3)->concl.rhs : random_exp(rng, 1 + i % 8);
        auto d = bounded_prove(e, f, sys(System::MilMinus), 6);
        if (!d) continue;
        ++found;
        CHECK(check_derivation(*d, sys(System::MilMinus)));
        CHECK(oracle::bisimilar(chart_of(e), chart_of(f)));
    }
    CHECK(found > 40);
}

TEST_CASE("property: ACI equality is sound and provable") {
    Rng rng(75);
    for (int i = 0; i < 300; ++i) {
        Exp e = random_exp(rng, 1 + i % 10);
        Exp n = aci_normalize(e);
        CHECK(aci_eq(e, n));
        CHECK(aci_normalize(n) == n);
        CHECK(oracle::same_language(e, n, "ab", 4));
        D p = aci_primitive(e);
        CHECK(p->concl.lhs == e);
        CHECK(p->concl.rhs == n);
        CHECK(check_derivation(p, sys(System::MilMinus)));
    }
}

TEST_CASE("property: derivation JSON round trip") {
    Rng rng(76);
    for (int i = 0; i < 60; ++i) {
        D d = random_mil_derivation(rng, 2 + i % 6, 3);
        D r = derivation_from_json(derivation_to_json(d));
        CHECK(r->concl == d->concl);
        CHECK(derivation_size(r) == derivation_size(d));
        CHECK(count_rule(r, Rule::RSPstar) == count_rule(d, Rule::RSPstar));
        CHECK(check_derivation(r, sys(System::Mil)));
        CHECK(derivation_to_json(r) == derivation_to_json(d));
    }
}
