#include "sx/figures.hpp"

#include "sx/interpret.hpp"

namespace sx {

namespace {

OneChart finish(OneChart c, bool marked = false) {
    c.marked = marked;
    canonicalize(c);
    validate(c);
    return c;
}

// leftmost pure component of a stacked expression is 1
bool starts_with_one(SExp E) {
    while (E->kind != SKind::Pure) E = E->l;
    return E->e == one();
}

}  // namespace

OneChart triangle_g1() {
    OneChart c;
    int x1 = c.add_vertex(false, "X1"), x2 = c.add_vertex(false, "X2"), x3 = c.add_vertex(false, "X3");
    c.add(x1, 'b', x2);
    c.add(x1, 'c', x3);
    c.add(x2, 'a', x1);
    c.add(x2, 'c', x3);
    c.add(x3, 'a', x1);
    c.add(x3, 'b', x2);
    c.start = x1;
    return finish(c);
}

OneChart two_cycle_g2() {
    OneChart c;
    int y1 = c.add_vertex(true, "Y1"), y2 = c.add_vertex(true, "Y2");
    c.add(y1, 'a', y2);
    c.add(y2, 'b', y1);
    c.start = y1;
    return finish(c);
}

namespace {

OneChart loop_base(bool marked) {
    OneChart c;
    int v1 = c.add_vertex(false, "v1"), v2 = c.add_vertex(false, "v2"), v0 = c.add_vertex(false, "v0");
    c.add(v0, 'b', v1);
    c.add(v1, 'b', v2);
    c.add(v2, 'a', v0, marked ? 1 : 0);
    c.add(v2, 'b', v1);
    c.start = v1;
    return finish(c, marked);
}

// vs, v1, v2, v11, v21 with the given entry levels of vs-a->v11, vs-b->v21, v1-a->v11, v2-b->v21
OneChart lee_base(bool marked, int m_s11, int m_s21, int m_111, int m_221) {
    OneChart c;
    int vs = c.add_vertex(true, "vs");
    int v11 = c.add_vertex(false, "v11");
    int v21 = c.add_vertex(false, "v21");
    int v1 = c.add_vertex(false, "v1");
    int v2 = c.add_vertex(false, "v2");
    c.add(vs, 'a', v11, m_s11);
    c.add(vs, 'b', v21, m_s21);
    c.add(v11, EMPTY, v1);
    c.add(v21, EMPTY, v2);
    c.add(v1, EMPTY, vs);
    c.add(v1, 'a', v11, m_111);
    c.add(v1, 'b', v21);
    c.add(v2, EMPTY, vs);
    c.add(v2, 'b', v21, m_221);
    c.start = vs;
    return finish(c, marked);
}

OneChart layering_base(bool marked, int m_vu, int m_vw1, int m_w1w2) {
    OneChart c;
    int v = c.add_vertex(false, "v0"), u = c.add_vertex(false, "u0");
    int w1 = c.add_vertex(false, "w1"), w2 = c.add_vertex(false, "w2");
    c.add(v, 'a', u, m_vu);
    c.add(v, 'b', w1, m_vw1);
    c.add(u, 'a', w1);
    c.add(w1, 'a', w2, m_w1w2);
    c.add(w2, 'a', v);
    c.start = v;
    return finish(c, marked);
}

}  // namespace

OneChart loop_chart() { return loop_base(false); }
EntryBodyLabeling loop_sub_chart() { return loop_base(true); }

OneChart lee_chart() { return lee_base(false, 0, 0, 0, 0); }

std::vector<EntryBodyLabeling> lee_witnesses() {
    return {lee_base(true, 3, 3, 1, 2), lee_base(true, 4, 3, 2, 1), lee_base(true, 2, 2, 1, 1)};
}

OneChart layering_chart() { return layering_base(false, 0, 0, 0); }
EntryBodyLabeling run_not_layered() { return layering_base(true, 0, 1, 2); }
EntryBodyLabeling run_layered() { return layering_base(true, 2, 1, 0); }

CoinductiveProof proof_zero_tail() {
    OneChart c = onechart_of(parse("(a.(a+b)+b)*.0"));
    Exp start = parse("(a+b)*.0"), other = parse("(1.(a+b)*).0");
    std::vector<FormalEq> labels;
    for (int v = 0; v < c.size(); ++v) labels.push_back({v == c.start ? start : other, project(c.exprs[v])});
    return make_coind_proof(c, labels, {System::MilMinus, {}});
}

CoinductiveProof proof_star_sum() {
    OneChart c = onechart_of(parse("(a*.b*)*"));
    Exp s = parse("(a+b)*");
    std::vector<FormalEq> labels;
    for (int v = 0; v < c.size(); ++v)
        labels.push_back({project(c.exprs[v]), starts_with_one(c.exprs[v]) ? prod(one(), s) : s});
    return make_coind_proof(c, labels, {System::MilMinus, {}});
}

CoinductiveProof proof_unguarded() {
    Exp e = parse("(a+c)*"), f = parse("a+1"), g = one();
    OneChart c = onechart_of(prod(star(f), g));
    FormalEq premise{e, sum(prod(f, e), g)};
    std::vector<FormalEq> labels;
    for (int v = 0; v < c.size(); ++v)
        labels.push_back({v == c.start ? premise.rhs : prod(one(), e), project(c.exprs[v])});
    return make_coind_proof(c, labels, {System::MilMinus, {premise}});
}

std::vector<Figure> example_figures() {
    std::vector<Figure> out;
    out.push_back({"zero_tail", "LLEE-witnessed coinductive proof carrier for (a.(a+b)+b)*.0",
                   onechart_of(parse("(a.(a+b)+b)*.0"))});
    out.push_back({"loop_sub_chart", "loop sub-1-chart at v2", loop_sub_chart()});
    out.push_back({"lee_chart", "chart for the loop elimination example", lee_chart()});
    out.push_back({"run_not_layered", "non-layered run", run_not_layered()});
    out.push_back({"run_layered", "layered run", run_layered()});
    auto ws = lee_witnesses();
    for (std::size_t i = 0; i < ws.size(); ++i)
        out.push_back({"lee_witness_" + std::to_string(i + 1), "LLEE-witness " + std::to_string(i + 1), ws[i]});
    out.push_back({"star_products", "1-chart interpretation of ((a.a*+b).b*)*", onechart_of(parse("((a.a*+b).b*)*"))});
    return out;
}

}  // namespace sx
