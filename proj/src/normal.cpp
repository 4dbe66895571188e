#include <algorithm>
#include <deque>
#include <map>
#include <unordered_map>

#include "sx/proof.hpp"

namespace sx {

namespace {

// monomials of a normal form, in order
void monomials(Exp nf, std::vector<Exp>& out) {
    if (nf->kind == Kind::Zero) return;
    if (nf->kind == Kind::Sum) {
        monomials(nf->l, out);
        out.push_back(nf->r);
        return;
    }
    out.push_back(nf);
}

Exp left_sum(const std::vector<Exp>& xs) { return sum_of(xs); }

struct PairHash {
    std::size_t operator()(const std::pair<Exp, Exp>& p) const { return p.first->hash * 31 + p.second->hash; }
};

thread_local std::unordered_map<Exp, Normal> norm_cache;
thread_local std::unordered_map<std::pair<Exp, Exp>, Normal, PairHash> prod_cache;

Normal sum_nf(Exp p, Exp q) {
    Exp whole = sum(p, q);
    if (p->kind == Kind::Zero) {
        Chain ch(whole);
        ch.step(axiom("comm+", p, q));
        ch.step(axiom("neutral+", q));
        return {q, ch.done()};
    }
    if (q->kind == Kind::Zero) return {p, axiom("neutral+", p)};
    std::vector<Exp> xs;
    monomials(p, xs);
    monomials(q, xs);
    std::sort(xs.begin(), xs.end(), ExpLess{});
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    Exp nf = left_sum(xs);
    return {nf, aci_step(whole, nf)};
}

Normal prod_nf(Exp p, Exp q) {
    auto key = std::make_pair(p, q);
    auto it = prod_cache.find(key);
    if (it != prod_cache.end()) return it->second;
    Exp whole = prod(p, q);
    Normal out{whole, nullptr};
    if (p->kind == Kind::Zero) {
        out = {zero(), axiom("deadlock", q)};
    } else if (p->kind == Kind::Sum) {
        Chain ch(whole);
        ch.step(axiom("r-distr", p->l, p->r, q));
        Normal a = prod_nf(p->l, q);
        Normal b = prod_nf(p->r, q);
        ch.at({0}, a.proof);
        ch.at({1}, b.proof);
        Normal s = sum_nf(a.nf, b.nf);
        ch.step(s.proof);
        out = {s.nf, ch.done()};
    } else if (p->kind == Kind::One) {
        out = {q, axiom("id_l", q)};
    } else if (q->kind == Kind::One) {
        out = {p, axiom("id_r", p)};
    } else if (p->kind == Kind::Prod) {
        Exp x = p->l, t = p->r;
        Chain ch(whole);
        ch.step(axiom("assoc.", x, t, q));
        Normal r = prod_nf(t, q);
        ch.at({1}, r.proof);
        if (r.nf->kind == Kind::One) ch.step(axiom("id_r", x));
        out = {ch.current(), ch.done()};
    } else {
        out = {whole, refl(whole)};
    }
    prod_cache.emplace(key, out);
    return out;
}

Normal norm(Exp e) {
    auto it = norm_cache.find(e);
    if (it != norm_cache.end()) return it->second;
    Normal out{e, nullptr};
    switch (e->kind) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Act:
            out = {e, refl(e)};
            break;
        case Kind::Star: {
            Normal b = norm(e->l);
            out = {star(b.nf), cxt(e, {0}, b.proof)};
            break;
        }
        case Kind::Sum:
        case Kind::Prod: {
            Normal a = norm(e->l);
            Normal b = norm(e->r);
            Chain ch(e);
            ch.at({0}, a.proof);
            ch.at({1}, b.proof);
            Normal r = e->kind == Kind::Sum ? sum_nf(a.nf, b.nf) : prod_nf(a.nf, b.nf);
            ch.step(r.proof);
            out = {r.nf, ch.done()};
            break;
        }
    }
    norm_cache.emplace(e, out);
    return out;
}

}  // namespace

Normal normalize_poly(Exp e) { return norm(e); }

std::optional<D> poly_eq(Exp x, Exp y) {
    if (x == y) return refl(x);
    Normal a = norm(x);
    Normal b = norm(y);
    if (a.nf != b.nf) return std::nullopt;
    return trans(a.proof, symm(b.proof));
}

// ---- bounded search ----

namespace {

void star_positions(Exp e, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (e->kind == Kind::Star) {
        out.push_back(path);
        path.push_back(0);
        star_positions(e->l, path, out);
        path.pop_back();
    } else if (e->kind == Kind::Sum || e->kind == Kind::Prod) {
        path.push_back(0);
        star_positions(e->l, path, out);
        path.back() = 1;
        star_positions(e->r, path, out);
        path.pop_back();
    }
}

void occurrences(Exp e, Exp pat, std::vector<int>& path, std::vector<std::vector<int>>& out) {
    if (e == pat) {
        out.push_back(path);
        return;
    }
    if (e->kind == Kind::Star) {
        path.push_back(0);
        occurrences(e->l, pat, path, out);
        path.pop_back();
    } else if (e->kind == Kind::Sum || e->kind == Kind::Prod) {
        path.push_back(0);
        occurrences(e->l, pat, path, out);
        path.back() = 1;
        occurrences(e->r, pat, path, out);
        path.pop_back();
    }
}

// (1 + rest)* = rest* where the body normal form contains the summand 1
std::optional<D> drop_one(Exp s) {
    std::vector<Exp> ms;
    monomials(s->l, ms);
    auto pos = std::find(ms.begin(), ms.end(), one());
    if (pos == ms.end()) return std::nullopt;
    ms.erase(pos);
    Exp rest = left_sum(ms);
    auto p = poly_eq(s->l, sum(one(), rest));
    if (!p) return std::nullopt;
    Chain ch(s);
    ch.at({0}, *p);
    ch.step(symm(axiom("trm-body*", rest)));
    return ch.done();
}

struct Side {
    std::map<Exp, D, ExpLess> seen;  // state -> proof origin = state
    std::vector<Exp> frontier;
};

}  // namespace

std::optional<D> bounded_prove(Exp e, Exp f, const SystemId& s, int depth) {
    const std::size_t budget = 4000;
    Normal ne = norm(e), nf = norm(f);
    if (ne.nf == nf.nf) return trans(ne.proof, symm(nf.proof));
    std::size_t size_cap = 4 * std::max(exp_size(ne.nf), exp_size(nf.nf)) + 64;

    std::vector<D> rule_proofs;
    for (const auto& a : s.assumptions) {
        Normal l = norm(a.lhs), r = norm(a.rhs);
        D fwd = trans(trans(symm(l.proof), assume(a)), r.proof);
        rule_proofs.push_back(fwd);
        rule_proofs.push_back(symm(fwd));
    }

    auto moves = [&](Exp x) {
        std::vector<D> out;  // proofs x = y
        std::vector<std::vector<int>> ps;
        std::vector<int> path;
        star_positions(x, path, ps);
        for (const auto& p : ps) {
            Exp st = subterm(x, p);
            out.push_back(cxt(x, p, axiom("rec*", st->l)));
            if (auto d = drop_one(st)) out.push_back(cxt(x, p, *d));
        }
        for (const auto& rp : rule_proofs) {
            std::vector<std::vector<int>> occ;
            path.clear();
            occurrences(x, rp->concl.lhs, path, occ);
            for (const auto& p : occ) out.push_back(cxt(x, p, rp));
        }
        return out;
    };

    Side a, b;
    a.seen.emplace(ne.nf, ne.proof);
    a.frontier.push_back(ne.nf);
    b.seen.emplace(nf.nf, nf.proof);
    b.frontier.push_back(nf.nf);

    auto expand = [&](Side& me, const Side& other) -> std::optional<D> {
        std::vector<Exp> next;
        for (Exp x : me.frontier) {
            D px = me.seen.at(x);
            for (const D& m : moves(x)) {
                Normal n = norm(m->concl.rhs);
                if (me.seen.count(n.nf)) continue;
                if (exp_size(n.nf) > size_cap) continue;
                D py = trans(trans(px, m), n.proof);
                me.seen.emplace(n.nf, py);
                auto hit = other.seen.find(n.nf);
                if (hit != other.seen.end()) {
                    if (&me == &a) return trans(py, symm(hit->second));
                    return trans(hit->second, symm(py));
                }
                next.push_back(n.nf);
                if (me.seen.size() > budget) break;
            }
            if (me.seen.size() > budget) break;
        }
        me.frontier = std::move(next);
        return std::nullopt;
    };

    for (int d = 0; d < depth; ++d) {
        Side& me = (a.frontier.size() <= b.frontier.size() && !a.frontier.empty()) || b.frontier.empty() ? a : b;
        Side& other = &me == &a ? b : a;
        if (me.frontier.empty()) break;
        if (auto r = expand(me, other)) return r;
        if (a.seen.size() > budget && b.seen.size() > budget) break;
    }
    return std::nullopt;
}

}  // namespace sx
