#include <algorithm>
#include <unordered_map>

#include "sx/proof.hpp"

namespace sx {

namespace {

void flatten(Exp e, std::vector<Exp>& out) {
    if (e->kind == Kind::Sum) {
        flatten(e->l, out);
        flatten(e->r, out);
    } else {
        out.push_back(e);
    }
}

Exp right_sum(const std::vector<Exp>& xs, std::size_t from = 0) {
    Exp r = xs.back();
    for (std::size_t i = xs.size() - 1; i-- > from;) r = sum(xs[i], r);
    return r;
}

std::vector<int> list_path(std::size_t i) { return std::vector<int>(i, 1); }

}  // namespace

Exp aci_normalize(Exp e) {
    switch (e->kind) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Act:
            return e;
        case Kind::Star:
            return star(aci_normalize(e->l));
        case Kind::Prod:
            return prod(aci_normalize(e->l), aci_normalize(e->r));
        case Kind::Sum: {
            std::vector<Exp> xs;
            flatten(aci_normalize(e->l), xs);
            flatten(aci_normalize(e->r), xs);
            std::sort(xs.begin(), xs.end(), ExpLess{});
            xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
            return right_sum(xs);
        }
    }
    return e;
}

bool aci_eq(Exp a, Exp b) { return a == b || aci_normalize(a) == aci_normalize(b); }

D aci_primitive(Exp e) {
    switch (e->kind) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Act:
            return refl(e);
        case Kind::Star:
            return cxt(e, {0}, aci_primitive(e->l));
        case Kind::Prod: {
            Chain ch(e);
            ch.at({0}, aci_primitive(e->l));
            ch.at({1}, aci_primitive(e->r));
            return ch.done();
        }
        case Kind::Sum:
            break;
    }
    Chain ch(e);
    ch.at({0}, aci_primitive(e->l));
    ch.at({1}, aci_primitive(e->r));
    // append: (l1 + (l2 + ...)) + R  ->  l1 + (l2 + (... + R))
    std::vector<int> p;
    for (;;) {
        Exp here = subterm(ch.current(), p);
        if (here->l->kind != Kind::Sum) break;
        ch.at(p, axiom("assoc+", here->l->l, here->l->r, here->r));
        p.push_back(1);
    }
    std::vector<Exp> xs;
    flatten(ch.current(), xs);
    // bubble sort with adjacent swaps, merging equal neighbours
    auto swap_or_merge = [&](std::size_t i, bool merge) {
        std::vector<int> at = list_path(i);
        Exp here = subterm(ch.current(), at);
        if (i + 2 == xs.size()) {
            if (merge) ch.at(at, axiom("idempot+", here->l));
            else ch.at(at, axiom("comm+", here->l, here->r));
            return;
        }
        Exp x = here->l, y = here->r->l, rest = here->r->r;
        ch.at(at, symm(axiom("assoc+", x, y, rest)));
        std::vector<int> left = at;
        left.push_back(0);
        if (merge) {
            ch.at(left, axiom("idempot+", x));
        } else {
            ch.at(left, axiom("comm+", x, y));
            ch.at(at, axiom("assoc+", y, x, rest));
        }
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (std::size_t i = 0; i + 1 < xs.size();) {
            if (xs[i] == xs[i + 1]) {
                swap_or_merge(i, true);
                xs.erase(xs.begin() + static_cast<long>(i) + 1);
                changed = true;
            } else if (ExpLess{}(xs[i + 1], xs[i])) {
                swap_or_merge(i, false);
                std::swap(xs[i], xs[i + 1]);
                changed = true;
                ++i;
            } else {
                ++i;
            }
        }
    }
    return ch.done();
}

namespace {

D expand_rec(const D& d, std::unordered_map<const DNode*, D>& memo) {
    auto it = memo.find(d.get());
    if (it != memo.end()) return it->second;
    D out;
    if (d->rule == Rule::ACIStep) {
        out = trans(aci_primitive(d->concl.lhs), symm(aci_primitive(d->concl.rhs)));
    } else {
        std::vector<D> prem;
        bool changed = false;
        for (const auto& p : d->prem) {
            prem.push_back(expand_rec(p, memo));
            changed = changed || prem.back() != p;
        }
        if (changed) {
            auto n = std::make_shared<DNode>(*d);
            n->prem = std::move(prem);
            out = n;
        } else {
            out = d;
        }
    }
    memo[d.get()] = out;
    return out;
}

}  // namespace

D expand_aci(const D& d) {
    std::unordered_map<const DNode*, D> memo;
    return expand_rec(d, memo);
}

}  // namespace sx
