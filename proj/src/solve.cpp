#include "sx/solve.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>

#include "sx/bisim.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"

namespace sx {

std::string evidence_name(Evidence e) {
    switch (e) {
        case Evidence::Certificate: return "certificate";
        case Evidence::Prover: return "prover";
        case Evidence::Semantic: return "semantic";
        case Evidence::Unchecked: return "unchecked";
    }
    return "?";
}

std::optional<Mode> mode_from_name(const std::string& s) {
    if (s == "cert" || s == "certificate") return Mode::Certificate;
    if (s == "prove" || s == "prover") return Mode::Prover;
    if (s == "semantic") return Mode::Semantic;
    return std::nullopt;
}

namespace {

// outgoing transitions of v in canonical (label, target) order
std::vector<Transition> outgoing(const OneChart& c, int v) {
    std::vector<Transition> r;
    for (const auto& t : c.trans)
        if (t.src == v) r.push_back(t);
    std::sort(r.begin(), r.end(), edge_less);
    r.erase(std::unique(r.begin(), r.end(), [](const Transition& a, const Transition& b) { return a.same_edge(b); }),
            r.end());
    return r;
}

// path to item j of a left-associated sum of k items
std::vector<int> sum_path(std::size_t j, std::size_t k) {
    std::vector<int> p;
    if (k <= 1) return p;
    std::size_t zeros = j == 0 ? k - 1 : k - 1 - j;
    p.assign(zeros, 0);
    if (j > 0) p.push_back(1);
    return p;
}

std::vector<int> concat(std::vector<int> a, const std::vector<int>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

D must_poly(Exp x, Exp y, const char* where) {
    auto p = poly_eq(x, y);
    if (!p) throw std::logic_error(std::string(where) + ": normal forms differ for " + print(x) + " and " + print(y));
    return *p;
}

Exp ft_rhs(SExp E) {
    std::vector<Exp> xs{terminates(E) ? one() : zero()};
    for (const auto& s : one_steps(E)) xs.push_back(prod(label_exp(s.label), project(s.tgt)));
    return sum_of(xs);
}

}  // namespace

Solution make_solution(const OneChart& c, std::vector<Exp> values, SystemId sys) {
    if (static_cast<int>(values.size()) != c.size()) throw SolutionError("values are not total on the vertices", -1);
    Solution s;
    s.chart = c;
    s.values = std::move(values);
    s.system = std::move(sys);
    s.evidence.resize(c.size());
    return s;
}

FormalEq correctness_condition(const OneChart& c, const std::vector<Exp>& values, int v) {
    if (v < 0 || v >= c.size()) throw ChartError("unknown vertex " + std::to_string(v));
    std::vector<Exp> xs{termination_constant(c, v)};
    for (const auto& t : outgoing(c, v)) xs.push_back(prod(label_exp(t.label), values.at(t.tgt)));
    return {values.at(v), sum_of(xs)};
}

FormalEq correctness_condition(const Solution& s, int v) { return correctness_condition(s.chart, s.values, v); }

Solution check_solution(const Solution& s, Mode mode, int depth) {
    Solution out = s;
    out.evidence.resize(s.chart.size());
    for (int v = 0; v < s.chart.size(); ++v) {
        FormalEq cond = correctness_condition(s, v);
        VertexEvidence& ev = out.evidence[v];
        if (ev.cert && ev.cert->concl.lhs == cond.lhs && aci_eq(ev.cert->concl.rhs, cond.rhs) &&
            check_derivation(ev.cert, s.system)) {
            if (ev.cert->concl.rhs != cond.rhs) ev.cert = trans(ev.cert, aci_step(ev.cert->concl.rhs, cond.rhs));
            if (ev.kind != Evidence::Prover) ev.kind = Evidence::Certificate;
            continue;
        }
        ev.cert = nullptr;
        if (mode != Mode::Certificate) {
            if (auto d = bounded_prove(cond.lhs, cond.rhs, s.system, depth)) {
                ev = {Evidence::Prover, *d};
                continue;
            }
        }
        if (mode == Mode::Semantic && bisimilar(cond.lhs, cond.rhs)) {
            ev = {Evidence::Semantic, nullptr};
            continue;
        }
        throw SolutionError("correctness condition fails at vertex " + std::to_string(v) + ": " + print(cond), v);
    }
    return out;
}

Evidence weakest(const Solution& s) {
    Evidence w = Evidence::Certificate;
    for (const auto& e : s.evidence)
        if (static_cast<int>(e.kind) > static_cast<int>(w)) w = e.kind;
    return w;
}

// ---- fundamental theorem ----

Split split_termination(Exp e) {
    thread_local std::unordered_map<Exp, Split> cache;
    if (!terminates(e)) throw std::invalid_argument("split_termination: " + print(e) + " does not terminate");
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    Split r;
    switch (e->kind) {
        case Kind::One:
            r = {zero(), symm(axiom("neutral+", one()))};
            break;
        case Kind::Sum: {
            bool t1 = terminates(e->l), t2 = terminates(e->r);
            Chain ch(e);
            Exp f1 = e->l, f2 = e->r;
            if (t1) {
                Split s1 = split_termination(e->l);
                ch.at({0}, s1.cert);
                f1 = s1.f;
            }
            if (t2) {
                Split s2 = split_termination(e->r);
                ch.at({1}, s2.cert);
                f2 = s2.f;
            }
            r.f = f1 == zero() ? f2 : f2 == zero() ? f1 : sum(f1, f2);
            ch.step(must_poly(ch.current(), sum(one(), r.f), "split"));
            r.cert = ch.done();
            break;
        }
        case Kind::Prod: {
            Split s1 = split_termination(e->l);
            Split s2 = split_termination(e->r);
            Chain ch(e);
            ch.at({0}, s1.cert);
            Exp mid = sum(e->r, prod(s1.f, e->r));
            ch.step(must_poly(ch.current(), mid, "split"));
            ch.at({0}, s2.cert);
            r.f = sum(prod(s1.f, e->r), s2.f);
            ch.step(must_poly(ch.current(), sum(one(), r.f), "split"));
            r.cert = ch.done();
            break;
        }
        case Kind::Star: {
            Exp g = e->l;
            if (!terminates(g)) {
                r = {prod(g, e), axiom("rec*", g)};
            } else {
                Split s0 = split_termination(g);
                Exp f0 = s0.f;
                Chain ch(e);
                ch.at({0}, s0.cert);
                ch.step(symm(axiom("trm-body*", f0)));
                ch.step(axiom("rec*", f0));
                ch.at({1, 1}, axiom("trm-body*", f0));
                ch.at({1, 1, 0}, symm(s0.cert));
                r = {prod(f0, e), ch.done()};
            }
            break;
        }
        default:
            throw std::invalid_argument("split_termination: no case for " + print(e));
    }
    if (terminates(r.f)) throw std::logic_error("split_termination: remainder terminates");
    if (star_height(r.f) != star_height(e)) throw std::logic_error("split_termination: star height changed");
    auto proj = [](Exp x) {
        std::set<std::pair<char, Exp>, std::function<bool(const std::pair<char, Exp>&, const std::pair<char, Exp>&)>>
            out([](const auto& a, const auto& b) {
                if (a.first != b.first) return a.first < b.first;
                return compare(a.second, b.second) < 0;
            });
        for (auto& [a, E] : action_derivs(pure(x))) out.emplace(a, project(E));
        return std::vector<std::pair<char, Exp>>(out.begin(), out.end());
    };
    if (proj(r.f) != proj(e)) throw std::logic_error("split_termination: derivative sets differ");
    cache.emplace(e, r);
    return r;
}

D ft_certificate(SExp E) {
    thread_local std::unordered_map<SExp, D> cache;
    auto it = cache.find(E);
    if (it != cache.end()) return it->second;
    Exp pe = project(E);
    Exp target = ft_rhs(E);
    Chain ch(pe);
    switch (E->kind) {
        case SKind::Pure: {
            Exp e = E->e;
            switch (e->kind) {
                case Kind::Zero:
                case Kind::One:
                    break;
                case Kind::Act:
                    break;
                case Kind::Sum:
                    ch.at({0}, ft_certificate(pure(e->l)));
                    ch.at({1}, ft_certificate(pure(e->r)));
                    break;
                case Kind::Prod:
                    ch.at({0}, ft_certificate(pure(e->l)));
                    if (terminates(e->l)) {
                        std::vector<Exp> items;
                        for (const auto& s : one_steps(pure(e->l)))
                            items.push_back(prod(label_exp(s.label), prod(project(s.tgt), e->r)));
                        Exp y = items.empty() ? e->r : sum(e->r, sum_of(items));
                        ch.step(must_poly(ch.current(), y, "ft"));
                        ch.at(items.empty() ? std::vector<int>{} : std::vector<int>{0}, ft_certificate(pure(e->r)));
                    }
                    break;
                case Kind::Star: {
                    Exp b = e->l;
                    if (!terminates(b)) {
                        ch.step(axiom("rec*", b));
                        ch.at({1, 0}, ft_certificate(pure(b)));
                    } else {
                        Split sp = split_termination(b);
                        Exp f = sp.f;
                        ch.at({0}, sp.cert);
                        ch.step(symm(axiom("trm-body*", f)));
                        ch.step(axiom("rec*", f));
                        ch.at({1, 1}, axiom("trm-body*", f));
                        ch.at({1, 1, 0}, symm(sp.cert));
                        ch.at({1, 0}, ft_certificate(pure(f)));
                    }
                    break;
                }
            }
            break;
        }
        case SKind::ProdS:
        case SKind::StackProd:
            ch.at({0}, ft_certificate(E->l));
            break;
    }
    if (ch.current() != target) ch.step(must_poly(ch.current(), target, "ft"));
    D d = ch.done();
    cache.emplace(E, d);
    return d;
}

D chart_ft_certificate(Exp x) {
    std::vector<Exp> xs{terminates(x) ? one() : zero()};
    for (auto& [a, d] : derivatives(x)) xs.push_back(prod(act(a), d));
    D ft = ft_certificate(pure(x));
    return trans(ft, must_poly(ft->concl.rhs, sum_of(xs), "chart ft"));
}

Solution projection_solution(const OneChart& c) {
    std::vector<Exp> vals(c.size());
    for (int v = 0; v < c.size(); ++v) {
        if (!c.exprs[v]) throw SolutionError("vertex without expression label", v);
        vals[v] = project(c.exprs[v]);
    }
    Solution s = make_solution(c, vals, {System::MilMinus, {}});
    for (int v = 0; v < c.size(); ++v) {
        FormalEq cond = correctness_condition(s, v);
        D ft = ft_certificate(c.exprs[v]);
        s.evidence[v] = {Evidence::Certificate, trans(ft, must_poly(ft->concl.rhs, cond.rhs, "projection"))};
    }
    return s;
}

// ---- extraction ----

namespace {

struct Extractor {
    const EntryBodyLabeling& w;
    std::vector<std::vector<Transition>> out;
    std::map<std::pair<int, int>, Exp> t_memo;
    std::map<int, Exp> s_memo;
    std::set<std::pair<int, int>> t_busy;
    std::set<int> s_busy;
    std::map<std::pair<int, int>, D> l62_memo;

    explicit Extractor(const EntryBodyLabeling& w_) : w(w_) {
        for (int v = 0; v < w.size(); ++v) out.push_back(outgoing(w, v));
    }

    Exp entry_sum(int x) {
        std::vector<Exp> xs;
        for (const auto& tr : out[x])
            if (tr.mark > 0) xs.push_back(prod(label_exp(tr.label), t(tr.tgt, x)));
        return sum_of(xs);
    }

    Exp t(int x, int v) {
        if (x == v) return one();
        auto key = std::make_pair(x, v);
        auto it = t_memo.find(key);
        if (it != t_memo.end()) return it->second;
        if (!t_busy.insert(key).second) throw std::invalid_argument("extraction does not terminate at vertex " +
                                                                    std::to_string(x));
        std::vector<Exp> body;
        for (const auto& tr : out[x])
            if (tr.mark == 0) body.push_back(prod(label_exp(tr.label), t(tr.tgt, v)));
        Exp r = prod(star(entry_sum(x)), sum_of(body));
        t_busy.erase(key);
        t_memo.emplace(key, r);
        return r;
    }

    Exp s(int x) {
        auto it = s_memo.find(x);
        if (it != s_memo.end()) return it->second;
        if (!s_busy.insert(x).second) throw std::invalid_argument("extraction does not terminate at vertex " +
                                                                  std::to_string(x));
        std::vector<Exp> body;
        for (const auto& tr : out[x])
            if (tr.mark == 0) body.push_back(prod(label_exp(tr.label), s(tr.tgt)));
        Exp r = prod(star(entry_sum(x)), sum(termination_constant(w, x), sum_of(body)));
        s_busy.erase(x);
        s_memo.emplace(x, r);
        return r;
    }

    // t(x, v).s(v) = s(x)
    D l62(int x, int v) {
        if (x == v) return axiom("id_l", s(v));
        auto key = std::make_pair(x, v);
        auto it = l62_memo.find(key);
        if (it != l62_memo.end()) return it->second;
        Exp a = star(entry_sum(x));
        std::vector<Exp> items, items2;
        std::vector<int> tgts;
        for (const auto& tr : out[x])
            if (tr.mark == 0) {
                items.push_back(prod(label_exp(tr.label), prod(t(tr.tgt, v), s(v))));
                items2.push_back(prod(label_exp(tr.label), s(tr.tgt)));
                tgts.push_back(tr.tgt);
            }
        Chain ch(prod(t(x, v), s(v)));
        ch.step(must_poly(ch.current(), prod(a, sum_of(items)), "lemma 6.2"));
        for (std::size_t j = 0; j < items.size(); ++j)
            ch.at(concat(concat({1}, sum_path(j, items.size())), {1}), l62(tgts[j], v));
        ch.step(must_poly(ch.current(), s(x), "lemma 6.2"));
        D d = ch.done();
        l62_memo.emplace(key, d);
        return d;
    }

    D l63(int x, const FormalEq& cond) {
        Exp sx = s(x);
        Exp a = sx->l->l;
        Exp b = sx->r;
        std::vector<Exp> items;
        std::vector<int> tgts;
        for (const auto& tr : out[x])
            if (tr.mark > 0) {
                items.push_back(prod(label_exp(tr.label), prod(t(tr.tgt, x), sx)));
                tgts.push_back(tr.tgt);
            }
        Chain ch(sx);
        ch.at({0}, axiom("rec*", a));
        Exp y = items.empty() ? b : sum(b, sum_of(items));
        ch.step(must_poly(ch.current(), y, "lemma 6.3"));
        for (std::size_t j = 0; j < items.size(); ++j)
            ch.at(concat(concat({1}, sum_path(j, items.size())), {1}), l62(tgts[j], x));
        ch.step(must_poly(ch.current(), cond.rhs, "lemma 6.3"));
        return ch.done();
    }
};

}  // namespace

Extraction extract(const EntryBodyLabeling& w) {
    auto chk = check_witness(w);
    if (!chk.valid_llee || !chk.guarded)
        throw std::invalid_argument("extraction needs a valid guarded LLEE-witness: " + chk.reason);
    Extractor ex(w);
    std::vector<Exp> vals(w.size());
    for (int v = 0; v < w.size(); ++v) vals[v] = ex.s(v);
    Extraction r;
    r.solution = make_solution(w, vals, {System::MilMinus, {}});
    for (int v = 0; v < w.size(); ++v)
        r.solution.evidence[v] = {Evidence::Certificate, ex.l63(v, correctness_condition(r.solution, v))};
    r.relative = ex.t_memo;
    return r;
}

// ---- certified simplification ----

Normal simplify(Exp e) {
    thread_local std::unordered_map<Exp, Normal> cache;
    auto it = cache.find(e);
    if (it != cache.end()) return it->second;
    Normal r{e, refl(e)};
    switch (e->kind) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Act:
            break;
        case Kind::Star: {
            Normal b = simplify(e->l);
            Chain ch(e);
            ch.at({0}, b.proof);
            Exp x = b.nf;
            if (x->kind == Kind::Sum && x->r->kind == Kind::One) {
                ch.at({0}, axiom("comm+", x->l, x->r));
                x = ch.current()->l;
            }
            if (x->kind == Kind::Sum && x->l->kind == Kind::One) {
                ch.step(symm(axiom("trm-body*", x->r)));
                x = x->r;
            }
            if (x->kind == Kind::One) {
                ch.at({0}, symm(axiom("neutral+", one())));
                ch.step(symm(axiom("trm-body*", zero())));
                x = zero();
            }
            if (x->kind == Kind::Zero) {
                ch.step(axiom("rec*", zero()));
                ch.at({1}, axiom("deadlock", star(zero())));
                ch.step(axiom("neutral+", one()));
            }
            r = {ch.current(), ch.done()};
            break;
        }
        case Kind::Sum: {
            Normal a = simplify(e->l), b = simplify(e->r);
            Chain ch(e);
            ch.at({0}, a.proof);
            ch.at({1}, b.proof);
            Exp x = ch.current();
            if (x->r->kind == Kind::Zero) {
                ch.step(axiom("neutral+", x->l));
            } else if (x->l->kind == Kind::Zero) {
                ch.step(axiom("comm+", x->l, x->r));
                ch.step(axiom("neutral+", x->r));
            } else if (aci_eq(x->l, x->r)) {
                ch.at({1}, aci_step(x->r, x->l));
                ch.step(axiom("idempot+", x->l));
            } else {
                auto unrolled = [](Exp one_, Exp y) {
                    return one_->kind == Kind::One && y->kind == Kind::Prod && y->r->kind == Kind::Star &&
                           y->r->l == y->l;
                };
                if (unrolled(x->r, x->l)) {
                    ch.step(axiom("comm+", x->l, x->r));
                    x = ch.current();
                }
                if (unrolled(x->l, x->r)) ch.step(symm(axiom("rec*", x->r->l)));
            }
            r = {ch.current(), ch.done()};
            break;
        }
        case Kind::Prod: {
            Normal a = simplify(e->l), b = simplify(e->r);
            Chain ch(e);
            ch.at({0}, a.proof);
            ch.at({1}, b.proof);
            Exp x = ch.current();
            if (x->l->kind == Kind::Zero) ch.step(axiom("deadlock", x->r));
            else if (x->l->kind == Kind::One) ch.step(axiom("id_l", x->r));
            else if (x->r->kind == Kind::One) ch.step(axiom("id_r", x->l));
            r = {ch.current(), ch.done()};
            break;
        }
    }
    cache.emplace(e, r);
    return r;
}

// ---- provable equality of solutions ----

namespace {

struct Equalizer {
    const EntryBodyLabeling& w;
    const Solution& sol;
    Extractor ex;
    std::vector<std::vector<Transition>> out;
    std::map<std::pair<int, int>, D> claim_memo;
    std::map<int, D> eq_memo;
    std::vector<D> conds;

    Equalizer(const EntryBodyLabeling& w_, const Solution& s) : w(w_), sol(s), ex(w_) {
        for (int v = 0; v < w.size(); ++v) out.push_back(outgoing(w, v));
        for (int v = 0; v < w.size(); ++v) {
            const auto& ev = sol.evidence.at(v);
            if (!ev.cert) throw SolutionError("solution lacks a certificate at vertex " + std::to_string(v), v);
            FormalEq cond = correctness_condition(sol, v);
            if (!(ev.cert->concl == cond))
                throw SolutionError("certificate does not conclude the condition at vertex " + std::to_string(v), v);
            conds.push_back(ev.cert);
        }
    }

    Exp val(int x) const { return sol.values[x]; }

    // s(x) = t(x, v).s(v) for x inside the loop at v
    D claim(int x, int v) {
        auto key = std::make_pair(x, v);
        auto it = claim_memo.find(key);
        if (it != claim_memo.end()) return it->second;
        std::size_t k = out[x].size() + 1;
        Chain ch(val(x));
        ch.step(conds[x]);
        std::vector<Exp> entries, body;
        for (std::size_t j = 0; j < out[x].size(); ++j) {
            const auto& tr = out[x][j];
            std::vector<int> p = concat(sum_path(j + 1, k), {1});
            if (tr.mark > 0) {
                if (tr.tgt != x) ch.at(p, claim(tr.tgt, x));
                entries.push_back(prod(label_exp(tr.label), ex.t(tr.tgt, x)));
            } else {
                if (tr.tgt != v) ch.at(p, claim(tr.tgt, v));
                body.push_back(prod(label_exp(tr.label), ex.t(tr.tgt, v)));
            }
        }
        Exp fa = sum_of(entries), fc = sum_of(body);
        ch.step(must_poly(ch.current(), sum(prod(fa, val(x)), prod(fc, val(v))), "lemma 6.5"));
        D r = rsp_star(ch.done());
        D d = trans(r, must_poly(r->concl.rhs, prod(ex.t(x, v), val(v)), "lemma 6.5"));
        claim_memo.emplace(key, d);
        return d;
    }

    // s(v) = s_W(v)
    D eq(int v) {
        auto it = eq_memo.find(v);
        if (it != eq_memo.end()) return it->second;
        std::size_t k = out[v].size() + 1;
        Chain ch(val(v));
        ch.step(conds[v]);
        std::vector<Exp> entries, body;
        std::vector<int> body_tgts;
        for (std::size_t j = 0; j < out[v].size(); ++j) {
            const auto& tr = out[v][j];
            if (tr.mark > 0) {
                if (tr.tgt != v) ch.at(concat(sum_path(j + 1, k), {1}), claim(tr.tgt, v));
                entries.push_back(prod(label_exp(tr.label), ex.t(tr.tgt, v)));
            } else {
                body.push_back(prod(label_exp(tr.label), val(tr.tgt)));
                body_tgts.push_back(tr.tgt);
            }
        }
        Exp g = sum(termination_constant(w, v), sum_of(body));
        ch.step(must_poly(ch.current(), sum(prod(sum_of(entries), val(v)), g), "lemma 6.6"));
        Chain c2(val(v));
        c2.step(rsp_star(ch.done()));
        for (std::size_t j = 0; j < body.size(); ++j)
            c2.at(concat(concat({1, 1}, sum_path(j, body.size())), {1}), eq(body_tgts[j]));
        if (c2.current() != ex.s(v)) throw std::logic_error("lemma 6.6: result differs from the extracted value");
        D d = c2.done();
        eq_memo.emplace(v, d);
        return d;
    }
};

}  // namespace

std::vector<D> solutions_equal_in_mil(const EntryBodyLabeling& w, const Solution& s1, const Solution& s2) {
    auto chk = check_witness(w);
    if (!chk.valid_llee || !chk.guarded) throw std::invalid_argument("witness is not a valid guarded LLEE-witness");
    if (s1.values.size() != static_cast<std::size_t>(w.size()) || s2.values.size() != s1.values.size())
        throw SolutionError("solutions do not match the witness", -1);
    bool same = s1.values == s2.values;
    std::vector<D> r(w.size());
    if (same) {
        for (int v = 0; v < w.size(); ++v) r[v] = refl(s1.values[v]);
        return r;
    }
    Equalizer e1(w, s1), e2(w, s2);
    for (int v = 0; v < w.size(); ++v) {
        if (s1.values[v] == s2.values[v]) r[v] = refl(s1.values[v]);
        else r[v] = trans(e1.eq(v), symm(e2.eq(v)));
    }
    return r;
}

// ---- pullback ----

namespace {

// s(w) = P_w where 1-steps are unfolded into the proper steps they induce
struct Expander {
    const Solution& s;
    std::vector<std::vector<Transition>> out;
    std::map<int, D> memo;
    std::set<int> busy;

    explicit Expander(const Solution& s_) : s(s_) {
        for (int v = 0; v < s.chart.size(); ++v) out.push_back(outgoing(s.chart, v));
    }

    // proof of rhs = rhs' where each item 1.s(tgt) is replaced by P_tgt
    D unfold(Exp rhs, const std::vector<Transition>& ts, const std::function<int(int)>& image) {
        std::size_t k = ts.size() + 1;
        Chain ch(rhs);
        for (std::size_t j = 0; j < ts.size(); ++j) {
            if (ts[j].label != EMPTY) continue;
            int tgt = image(ts[j].tgt);
            D inner = trans(axiom("id_l", s.values[tgt]), p(tgt));
            ch.at(sum_path(j + 1, k), inner);
        }
        return ch.done();
    }

    D p(int v) {
        auto it = memo.find(v);
        if (it != memo.end()) return it->second;
        if (!busy.insert(v).second) throw std::invalid_argument("1-transitions form a cycle");
        const auto& ev = s.evidence.at(v);
        if (!ev.cert) throw SolutionError("missing certificate", v);
        D d = trans(ev.cert, unfold(ev.cert->concl.rhs, out[v], [](int x) { return x; }));
        busy.erase(v);
        memo.emplace(v, d);
        return d;
    }
};

}  // namespace

Solution pullback_solution(const std::vector<int>& phi, const OneChart& c1, const OneChart& c2, const Solution& s2,
                           bool certify) {
    if (!check_functional(phi, c1, c2)) throw ChartError("map is not a functional 1-bisimulation");
    std::vector<Exp> vals(c1.size());
    for (int v = 0; v < c1.size(); ++v) vals[v] = s2.values.at(phi[v]);
    Solution s = make_solution(c1, vals, s2.system);
    std::optional<Expander> exp;
    if (certify) exp.emplace(s2);
    for (int v = 0; v < c1.size(); ++v) {
        FormalEq cond = correctness_condition(s, v);
        if (certify) {
            try {
                std::vector<Transition> ts = outgoing(c1, v);
                D q = exp->unfold(cond.rhs, ts, [&](int x) { return phi[x]; });
                D pw = exp->p(phi[v]);
                if (auto bridge = poly_eq(pw->concl.rhs, q->concl.rhs)) {
                    s.evidence[v] = {Evidence::Certificate, trans(trans(pw, *bridge), symm(q))};
                    continue;
                }
            } catch (const SolutionError&) {
            }
        }
        if (!bisimilar(cond.lhs, cond.rhs))
            throw SolutionError("pulled-back condition fails at vertex " + std::to_string(v), v);
        s.evidence[v] = {Evidence::Semantic, nullptr};
    }
    return s;
}

// ---- serialization ----

nlohmann::json solution_to_json(const Solution& s) {
    nlohmann::json j;
    j["chart"] = to_json(s.chart);
    nlohmann::json vals = nlohmann::json::object();
    nlohmann::json ev = nlohmann::json::object();
    for (int v = 0; v < s.chart.size(); ++v) {
        vals[std::to_string(v)] = print(s.values[v]);
        nlohmann::json e{{"kind", evidence_name(s.evidence[v].kind)}};
        if (s.evidence[v].cert) e["derivation"] = derivation_to_json(s.evidence[v].cert);
        ev[std::to_string(v)] = e;
    }
    j["values"] = vals;
    j["system"] = system_name(s.system.sys);
    nlohmann::json as = nlohmann::json::array();
    for (const auto& a : s.system.assumptions) as.push_back(print(a));
    j["assumptions"] = as;
    j["evidence"] = ev;
    return j;
}

Solution solution_from_json(const nlohmann::json& j) {
    OneChart c = chart_from_json(j.at("chart"));
    std::vector<Exp> vals(c.size(), nullptr);
    for (auto& [k, v] : j.at("values").items()) vals.at(std::stoi(k)) = parse(v.get<std::string>());
    for (int v = 0; v < c.size(); ++v)
        if (!vals[v]) throw SolutionError("missing value", v);
    SystemId sys;
    if (j.contains("system")) {
        auto s = system_from_name(j.at("system").get<std::string>());
        if (!s) throw std::runtime_error("unknown system " + j.at("system").get<std::string>());
        sys.sys = *s;
    }
    if (j.contains("assumptions"))
        for (const auto& a : j.at("assumptions")) sys.assumptions.push_back(parse_eq(a.get<std::string>()));
    Solution s = make_solution(c, vals, sys);
    if (j.contains("evidence"))
        for (auto& [k, e] : j.at("evidence").items()) {
            int v = std::stoi(k);
            std::string kind = e.value("kind", "unchecked");
            auto& ev = s.evidence.at(v);
            ev.kind = kind == "certificate" ? Evidence::Certificate
                      : kind == "prover"    ? Evidence::Prover
                      : kind == "semantic"  ? Evidence::Semantic
                                            : Evidence::Unchecked;
            if (e.contains("derivation")) ev.cert = derivation_from_json(e.at("derivation"));
        }
    return s;
}

}  // namespace sx
