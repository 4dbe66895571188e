#include "sx/corpus.hpp"

#include <set>

namespace sx {

namespace {

int pick(Rng& rng, int n) { return std::uniform_int_distribution<int>(0, n - 1)(rng); }
bool coin(Rng& rng, double p) { return std::bernoulli_distribution(p)(rng); }

}  // namespace

Exp random_exp(Rng& rng, int size, const std::string& alphabet) {
    if (size <= 1) {
        int r = pick(rng, 10);
        if (r == 0) return zero();
        if (r == 1) return one();
        return act(alphabet[pick(rng, static_cast<int>(alphabet.size()))]);
    }
    if (size == 2) return star(random_exp(rng, 1, alphabet));
    int r = pick(rng, 5);
    if (r == 0) return star(random_exp(rng, size - 1, alphabet));
    int left = 1 + pick(rng, size - 2);
    Exp l = random_exp(rng, left, alphabet);
    Exp rr = random_exp(rng, size - 1 - left, alphabet);
    return r <= 2 ? sum(l, rr) : prod(l, rr);
}

std::vector<Exp> expression_corpus(std::uint64_t seed, int count, int max_size, const std::string& alphabet) {
    Rng rng(seed);
    std::vector<Exp> out;
    std::set<Exp> seen;
    int guard = 0;
    while (static_cast<int>(out.size()) < count && guard++ < count * 100) {
        int size = 1 + pick(rng, max_size);
        Exp e = random_exp(rng, size, alphabet);
        if (seen.insert(e).second) out.push_back(e);
    }
    return out;
}

OneChart random_chart(Rng& rng, int vertices, const std::string& alphabet, double p_edge, double p_empty,
                      double p_term) {
    OneChart c;
    for (int v = 0; v < vertices; ++v) c.add_vertex(coin(rng, p_term));
    for (int v = 0; v < vertices; ++v)
        for (int w = 0; w < vertices; ++w) {
            if (coin(rng, p_empty)) c.add(v, EMPTY, w);
            for (char a : alphabet)
                if (coin(rng, p_edge / static_cast<double>(alphabet.size()))) c.add(v, a, w);
        }
    c.alphabet.assign(alphabet.begin(), alphabet.end());
    c.start = 0;
    canonicalize(c);
    return normalize(c);
}

namespace {

void positions(Exp e, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    out.push_back(path);
    if (e->kind == Kind::Star) {
        path.push_back(0);
        positions(e->l, path, out);
        path.pop_back();
    } else if (e->kind == Kind::Sum || e->kind == Kind::Prod) {
        path.push_back(0);
        positions(e->l, path, out);
        path.back() = 1;
        positions(e->r, path, out);
        path.pop_back();
    }
}

// sound rewrites applicable at the root of s
std::vector<D> local_rewrites(Exp s, bool grow) {
    std::vector<D> r;
    auto is = [](Exp x, Kind k) { return x->kind == k; };
    if (is(s, Kind::Sum)) {
        r.push_back(axiom("comm+", s->l, s->r));
        if (is(s->l, Kind::Sum)) r.push_back(axiom("assoc+", s->l->l, s->l->r, s->r));
        if (is(s->r, Kind::Sum)) r.push_back(symm(axiom("assoc+", s->l, s->r->l, s->r->r)));
        if (is(s->r, Kind::Zero)) r.push_back(axiom("neutral+", s->l));
        if (s->l == s->r) r.push_back(axiom("idempot+", s->l));
        if (is(s->l, Kind::Prod) && is(s->r, Kind::Prod) && s->l->r == s->r->r)
            r.push_back(symm(axiom("r-distr", s->l->l, s->r->l, s->l->r)));
        if (is(s->l, Kind::One) && is(s->r, Kind::Prod) && is(s->r->r, Kind::Star) && s->r->r->l == s->r->l)
            r.push_back(symm(axiom("rec*", s->r->l)));
    }
    if (is(s, Kind::Prod)) {
        if (is(s->l, Kind::Prod)) r.push_back(axiom("assoc.", s->l->l, s->l->r, s->r));
        if (is(s->r, Kind::Prod)) r.push_back(symm(axiom("assoc.", s->l, s->r->l, s->r->r)));
        if (is(s->l, Kind::Sum)) r.push_back(axiom("r-distr", s->l->l, s->l->r, s->r));
        if (is(s->l, Kind::One)) r.push_back(axiom("id_l", s->r));
        if (is(s->r, Kind::One)) r.push_back(axiom("id_r", s->l));
        if (is(s->l, Kind::Zero)) r.push_back(axiom("deadlock", s->r));
    }
    if (is(s, Kind::Star)) {
        r.push_back(axiom("rec*", s->l));
        if (is(s->l, Kind::Sum) && is(s->l->l, Kind::One)) r.push_back(symm(axiom("trm-body*", s->l->r)));
        else if (grow) r.push_back(axiom("trm-body*", s->l));
    }
    if (grow) {
        r.push_back(symm(axiom("neutral+", s)));
        r.push_back(symm(axiom("idempot+", s)));
        r.push_back(symm(axiom("id_l", s)));
        r.push_back(symm(axiom("id_r", s)));
    }
    return r;
}

}  // namespace

std::optional<D> random_rewrite(Rng& rng, Exp e) {
    std::vector<std::vector<int>> ps;
    std::vector<int> path;
    positions(e, path, ps);
    bool grow = exp_size(e) < 24 && coin(rng, 0.3);
    for (int tries = 0; tries < 8; ++tries) {
        const auto& p = ps[pick(rng, static_cast<int>(ps.size()))];
        auto rs = local_rewrites(subterm(e, p), grow);
        if (rs.empty()) continue;
        return cxt(e, p, rs[pick(rng, static_cast<int>(rs.size()))]);
    }
    return std::nullopt;
}

D random_rewrites(Rng& rng, Exp e, int steps) {
    Chain ch(e);
    for (int i = 0; i < steps; ++i)
        if (auto d = random_rewrite(rng, ch.current())) ch.step(*d);
    return ch.done();
}

RspTriple random_rsp_triple(Rng& rng, int size, int steps) {
    Exp f;
    do {
        f = random_exp(rng, 1 + pick(rng, size));
    } while (terminates(f));
    Exp g = random_exp(rng, 1 + pick(rng, size));
    Exp x = prod(star(f), g);
    D q = random_rewrites(rng, x, steps);  // x = e
    Exp e = q->concl.rhs;
    // e = x = f.x + g = f.e + g
    Chain ch(e);
    ch.step(symm(q));
    ch.at({0}, axiom("rec*", f));
    auto p = poly_eq(ch.current(), sum(prod(f, x), g));
    ch.step(*p);
    ch.at({0, 1}, q);
    return {e, f, g, ch.done()};
}

D random_mil_derivation(Rng& rng, int size, int steps) {
    if (coin(rng, 0.4)) {
        RspTriple t = random_rsp_triple(rng, size / 2 + 1, steps);
        D r = rsp_star(t.premise);
        if (coin(rng, 0.5)) r = symm(r);
        return trans(r, random_rewrites(rng, r->concl.rhs, steps / 2));
    }
    Exp e = random_exp(rng, size);
    D d = random_rewrites(rng, e, steps);
    if (coin(rng, 0.3)) d = symm(d);
    return d;
}

}  // namespace sx
