#include "sx/interpret.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <mutex>
#include <unordered_map>

namespace sx {

std::size_t vertex_budget() {
    if (const char* s = std::getenv("SX_VERTEX_BUDGET")) {
        char* end = nullptr;
        unsigned long long v = std::strtoull(s, &end, 10);
        if (end != s && v > 0) return static_cast<std::size_t>(v);
    }
    return 100000;
}

namespace {

void sort_unique(std::vector<std::pair<char, Exp>>& v) {
    std::sort(v.begin(), v.end(), [](const auto& x, const auto& y) {
        if (x.first != y.first) return x.first < y.first;
        return compare(x.second, y.second) < 0;
    });
    v.erase(std::unique(v.begin(), v.end()), v.end());
}

}  // namespace

std::vector<std::pair<char, Exp>> derivatives(Exp e) {
    static std::mutex mu;
    static std::unordered_map<Exp, std::vector<std::pair<char, Exp>>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
    }
    std::vector<std::pair<char, Exp>> r;
    switch (e->kind) {
        case Kind::Zero:
        case Kind::One:
            break;
        case Kind::Act:
            r.emplace_back(e->act, one());
            break;
        case Kind::Sum: {
            r = derivatives(e->l);
            auto b = derivatives(e->r);
            r.insert(r.end(), b.begin(), b.end());
            break;
        }
        case Kind::Prod: {
            for (auto& [a, d] : derivatives(e->l)) r.emplace_back(a, prod(d, e->r));
            if (terminates(e->l)) {
                auto b = derivatives(e->r);
                r.insert(r.end(), b.begin(), b.end());
            }
            break;
        }
        case Kind::Star:
            for (auto& [a, d] : derivatives(e->l)) r.emplace_back(a, prod(d, e));
            break;
    }
    sort_unique(r);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(e, r);
    return r;
}

bool strongly_normed(Exp e) {
    static std::mutex mu;
    static std::unordered_map<Exp, bool> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(e);
        if (it != cache.end()) return it->second;
    }
    OneChart c = chart_of(e);
    std::vector<bool> seen(c.size(), false);
    std::vector<int> stack;
    for (const auto& t : c.trans)
        if (t.src == c.start && !seen[t.tgt]) {
            seen[t.tgt] = true;
            stack.push_back(t.tgt);
        }
    auto out = out_index(c);
    bool found = false;
    while (!stack.empty() && !found) {
        int v = stack.back();
        stack.pop_back();
        if (c.term[v]) found = true;
        for (int i : out[v]) {
            int w = c.trans[i].tgt;
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(e, found);
    return found;
}

namespace {

void add_step(std::vector<OneStep>& r, char l, SExp t, int m) {
    for (auto& s : r)
        if (s.label == l && s.tgt == t) {
            if (s.mark != m) throw std::logic_error("conflicting marks in 1-chart interpretation");
            return;
        }
    r.push_back({l, t, m});
}

std::vector<OneStep> one_steps_raw(SExp E) {
    std::vector<OneStep> r;
    if (E->kind == SKind::Pure) {
        Exp e = E->e;
        switch (e->kind) {
            case Kind::Zero:
            case Kind::One:
                break;
            case Kind::Act:
                add_step(r, e->act, pure(one()), 0);
                break;
            case Kind::Sum:
                for (const auto& s : one_steps(pure(e->l))) add_step(r, s.label, s.tgt, 0);
                for (const auto& s : one_steps(pure(e->r))) add_step(r, s.label, s.tgt, 0);
                break;
            case Kind::Prod:
                for (const auto& s : one_steps(pure(e->l))) add_step(r, s.label, prods(s.tgt, e->r), s.mark);
                if (terminates(e->l))
                    for (const auto& s : one_steps(pure(e->r))) add_step(r, s.label, s.tgt, 0);
                break;
            case Kind::Star: {
                int m = strongly_normed(e->l) ? static_cast<int>(star_height(e)) : 0;
                for (const auto& s : one_steps(pure(e->l))) add_step(r, s.label, stackprod(s.tgt, e->l), m);
                break;
            }
        }
    } else if (E->kind == SKind::ProdS) {
        for (const auto& s : one_steps(E->l)) add_step(r, s.label, prods(s.tgt, E->e), s.mark);
    } else {
        for (const auto& s : one_steps(E->l)) add_step(r, s.label, stackprod(s.tgt, E->e), s.mark);
        if (terminates(E->l)) add_step(r, EMPTY, pure(star(E->e)), 0);
    }
    std::sort(r.begin(), r.end(), [](const OneStep& x, const OneStep& y) {
        if (x.label != y.label) return x.label < y.label;
        return compare(x.tgt, y.tgt) < 0;
    });
    return r;
}

}  // namespace

std::vector<OneStep> one_steps(SExp E) {
    static std::mutex mu;
    static std::unordered_map<SExp, std::vector<OneStep>> cache;
    {
        std::lock_guard<std::mutex> lock(mu);
        auto it = cache.find(E);
        if (it != cache.end()) return it->second;
    }
    auto r = one_steps_raw(E);
    std::lock_guard<std::mutex> lock(mu);
    cache.emplace(E, r);
    return r;
}

std::vector<std::pair<char, SExp>> action_derivs(SExp E) {
    std::vector<std::pair<char, SExp>> r;
    for (const auto& s : one_steps(E)) r.emplace_back(s.label, s.tgt);
    return r;
}

OneChart chart_of(Exp e) { return chart_of_roots({e}); }

OneChart chart_of_roots(const std::vector<Exp>& roots) {
    std::size_t budget = vertex_budget();
    OneChart c;
    std::unordered_map<Exp, int> id;
    std::vector<Exp> order;
    for (Exp e : roots) {
        if (id.count(e)) continue;
        id[e] = c.add_vertex(terminates(e), {}, pure(e));
        order.push_back(e);
        collect_actions(e, c.alphabet);
    }
    for (std::size_t i = 0; i < order.size(); ++i) {
        Exp v = order[i];
        for (auto& [a, d] : derivatives(v)) {
            auto it = id.find(d);
            int w;
            if (it == id.end()) {
                if (order.size() >= budget) throw BudgetExceeded("vertex budget exceeded in chart interpretation");
                w = c.add_vertex(terminates(d), {}, pure(d));
                id.emplace(d, w);
                order.push_back(d);
            } else {
                w = it->second;
            }
            c.add(static_cast<int>(i), a, w);
        }
    }
    c.start = 0;
    canonicalize(c);
    return c;
}

EntryBodyLabeling onechart_of(Exp e) {
    std::size_t budget = vertex_budget();
    OneChart c;
    c.marked = true;
    std::unordered_map<SExp, int> id;
    SExp s0 = pure(e);
    std::vector<SExp> order{s0};
    id[s0] = c.add_vertex(terminates(s0), {}, s0);
    collect_actions(e, c.alphabet);
    for (std::size_t i = 0; i < order.size(); ++i) {
        for (const auto& st : one_steps(order[i])) {
            auto it = id.find(st.tgt);
            int w;
            if (it == id.end()) {
                if (order.size() >= budget) throw BudgetExceeded("vertex budget exceeded in 1-chart interpretation");
                w = c.add_vertex(terminates(st.tgt), {}, st.tgt);
                id.emplace(st.tgt, w);
                order.push_back(st.tgt);
            } else {
                w = it->second;
            }
            c.add(static_cast<int>(i), st.label, w, st.mark);
        }
    }
    c.start = 0;
    std::sort(c.alphabet.begin(), c.alphabet.end());
    canonicalize(c);
    return c;
}

Projection projection_map(const EntryBodyLabeling& w) {
    std::vector<Exp> roots;
    for (int v = 0; v < w.size(); ++v) {
        if (!w.exprs[v]) throw ChartError("vertex " + std::to_string(v) + " carries no expression");
        roots.push_back(project(w.exprs[v]));
    }
    std::swap(roots[0], roots[w.start]);
    Projection p{chart_of_roots(roots), {}};
    std::unordered_map<Exp, int> id;
    for (int x = 0; x < p.target.size(); ++x) id[p.target.exprs[x]->e] = x;
    for (int v = 0; v < w.size(); ++v) p.phi.push_back(id.at(project(w.exprs[v])));
    return p;
}

}  // namespace sx
