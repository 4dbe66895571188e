#include "sx/proof.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "sx/coind.hpp"

namespace sx {

std::string system_name(System s) {
    switch (s) {
        case System::MilMinus: return "MilMinus";
        case System::Mil: return "Mil";
        case System::MilPrime: return "MilPrime";
        case System::MilPrimeBar: return "MilPrimeBar";
        case System::CMil: return "CMil";
        case System::CMil1: return "CMil1";
        case System::CMilBar: return "CMilBar";
        case System::CLC: return "CLC";
        case System::CC: return "CC";
        case System::ACI: return "ACI";
    }
    return "?";
}

std::optional<System> system_from_name(const std::string& s) {
    static const std::map<std::string, System> m{
        {"MilMinus", System::MilMinus}, {"Mil-", System::MilMinus},   {"Mil", System::Mil},
        {"MilPrime", System::MilPrime}, {"Mil'", System::MilPrime},   {"MilPrimeBar", System::MilPrimeBar},
        {"CMil", System::CMil},         {"cMil", System::CMil},       {"CMil1", System::CMil1},
        {"cMil1", System::CMil1},       {"CMilBar", System::CMilBar}, {"cMilBar", System::CMilBar},
        {"CLC", System::CLC},           {"CC", System::CC},           {"ACI", System::ACI}};
    auto it = m.find(s);
    if (it == m.end()) return std::nullopt;
    return it->second;
}

std::string rule_name(Rule r) {
    switch (r) {
        case Rule::Refl: return "Refl";
        case Rule::Symm: return "Symm";
        case Rule::Trans: return "Trans";
        case Rule::Cxt: return "Cxt";
        case Rule::Axiom: return "Axiom";
        case Rule::Assume: return "Assume";
        case Rule::RSPstar: return "RSPstar";
        case Rule::USP1: return "USP1";
        case Rule::USP: return "USP";
        case Rule::LCoind: return "LCoind";
        case Rule::Coind: return "Coind";
        case Rule::ACIStep: return "ACIStep";
    }
    return "?";
}

namespace {

std::optional<Rule> rule_from_name(const std::string& s) {
    for (Rule r : {Rule::Refl, Rule::Symm, Rule::Trans, Rule::Cxt, Rule::Axiom, Rule::Assume, Rule::RSPstar,
                   Rule::USP1, Rule::USP, Rule::LCoind, Rule::Coind, Rule::ACIStep})
        if (rule_name(r) == s) return r;
    return std::nullopt;
}

// ---- axiom schemes; metavariables are the letters e, f, g ----

struct Scheme {
    std::string name;
    Exp lhs;
    Exp rhs;
};

const std::vector<Scheme>& schemes() {
    static const std::vector<Scheme> s = [] {
        std::vector<std::pair<std::string, std::pair<const char*, const char*>>> raw{
            {"assoc+", {"(e+f)+g", "e+(f+g)"}},  {"neutral+", {"e+0", "e"}},
            {"comm+", {"e+f", "f+e"}},            {"idempot+", {"e+e", "e"}},
            {"assoc.", {"(e.f).g", "e.(f.g)"}},  {"r-distr", {"(e+f).g", "e.g+f.g"}},
            {"id_l", {"1.e", "e"}},               {"id_r", {"e.1", "e"}},
            {"deadlock", {"0.e", "0"}},           {"rec*", {"e*", "1+e.e*"}},
            {"trm-body*", {"e*", "(1+e)*"}}};
        std::vector<Scheme> out;
        for (auto& [n, p] : raw) out.push_back({n, parse(p.first), parse(p.second)});
        return out;
    }();
    return s;
}

const Scheme* find_scheme(const std::string& name) {
    for (const auto& s : schemes())
        if (s.name == name) return &s;
    return nullptr;
}

bool is_meta(Exp p) { return p->kind == Kind::Act && (p->act == 'e' || p->act == 'f' || p->act == 'g'); }

bool match(Exp p, Exp e, std::map<std::string, Exp>& s) {
    if (is_meta(p)) {
        std::string k(1, p->act);
        auto it = s.find(k);
        if (it == s.end()) {
            s.emplace(k, e);
            return true;
        }
        return it->second == e;
    }
    if (p->kind != e->kind) return false;
    switch (p->kind) {
        case Kind::Zero:
        case Kind::One:
            return true;
        case Kind::Act:
            return p->act == e->act;
        case Kind::Star:
            return match(p->l, e->l, s);
        default:
            return match(p->l, e->l, s) && match(p->r, e->r, s);
    }
}

Exp instantiate(Exp p, const std::map<std::string, Exp>& s) {
    if (is_meta(p)) return s.at(std::string(1, p->act));
    switch (p->kind) {
        case Kind::Zero:
        case Kind::One:
        case Kind::Act:
            return p;
        case Kind::Star:
            return star(instantiate(p->l, s));
        case Kind::Sum:
            return sum(instantiate(p->l, s), instantiate(p->r, s));
        case Kind::Prod:
            return prod(instantiate(p->l, s), instantiate(p->r, s));
    }
    return p;
}

D make(Rule r, FormalEq c, std::vector<D> prem = {}) {
    auto n = std::make_shared<DNode>();
    n->rule = r;
    n->concl = c;
    n->prem = std::move(prem);
    return n;
}

}  // namespace

const std::vector<std::string>& axiom_names() {
    static const std::vector<std::string> n = [] {
        std::vector<std::string> v;
        for (const auto& s : schemes()) v.push_back(s.name);
        return v;
    }();
    return n;
}

FormalEq axiom_instance(const std::string& name, Exp e, Exp f, Exp g) {
    const Scheme* s = find_scheme(name);
    if (!s) throw std::invalid_argument("unknown axiom " + name);
    std::map<std::string, Exp> sub;
    if (e) sub["e"] = e;
    if (f) sub["f"] = f;
    if (g) sub["g"] = g;
    return {instantiate(s->lhs, sub), instantiate(s->rhs, sub)};
}

std::optional<std::map<std::string, Exp>> match_axiom(const std::string& name, const FormalEq& eq) {
    const Scheme* s = find_scheme(name);
    if (!s) return std::nullopt;
    std::map<std::string, Exp> sub;
    if (!match(s->lhs, eq.lhs, sub)) return std::nullopt;
    if (!match(s->rhs, eq.rhs, sub)) return std::nullopt;
    return sub;
}

// ---- builders ----

D refl(Exp e) { return make(Rule::Refl, {e, e}); }

D symm(D d) {
    if (d->rule == Rule::Refl) return d;
    if (d->rule == Rule::Symm) return d->prem[0];
    return make(Rule::Symm, {d->concl.rhs, d->concl.lhs}, {d});
}

D trans(D a, D b) {
    if (a->concl.rhs != b->concl.lhs)
        throw std::logic_error("trans: " + print(a->concl) + " does not meet " + print(b->concl));
    if (a->rule == Rule::Refl) return b;
    if (b->rule == Rule::Refl) return a;
    return make(Rule::Trans, {a->concl.lhs, b->concl.rhs}, {a, b});
}

Exp subterm(Exp e, const std::vector<int>& path) {
    for (int k : path) {
        if (!e) return nullptr;
        if (e->kind == Kind::Star) {
            if (k != 0) return nullptr;
            e = e->l;
        } else if (e->kind == Kind::Sum || e->kind == Kind::Prod) {
            e = k == 0 ? e->l : (k == 1 ? e->r : nullptr);
        } else {
            return nullptr;
        }
    }
    return e;
}

namespace {

Exp replace_rec(Exp e, const std::vector<int>& path, std::size_t i, Exp r) {
    if (i == path.size()) return r;
    if (!e) return nullptr;
    if (e->kind == Kind::Star) {
        if (path[i] != 0) return nullptr;
        Exp b = replace_rec(e->l, path, i + 1, r);
        return b ? star(b) : nullptr;
    }
    if (e->kind != Kind::Sum && e->kind != Kind::Prod) return nullptr;
    Exp l = e->l, rr = e->r;
    if (path[i] == 0) l = replace_rec(l, path, i + 1, r);
    else if (path[i] == 1) rr = replace_rec(rr, path, i + 1, r);
    else return nullptr;
    if (!l || !rr) return nullptr;
    return e->kind == Kind::Sum ? sum(l, rr) : prod(l, rr);
}

}  // namespace

Exp replace_at(Exp e, const std::vector<int>& path, Exp r) { return replace_rec(e, path, 0, r); }

D cxt(Exp whole, const std::vector<int>& path, D d) {
    if (d->rule == Rule::Refl) return refl(whole);
    if (path.empty()) {
        if (whole != d->concl.lhs) throw std::logic_error("cxt: hole does not match");
        return d;
    }
    if (subterm(whole, path) != d->concl.lhs)
        throw std::logic_error("cxt: subterm mismatch for " + print(d->concl) + " in " + print(whole));
    auto n = std::make_shared<DNode>();
    n->rule = Rule::Cxt;
    n->concl = {whole, replace_at(whole, path, d->concl.rhs)};
    n->prem = {d};
    n->path = path;
    return n;
}

D axiom(const std::string& name, Exp e, Exp f, Exp g) {
    auto n = std::make_shared<DNode>();
    n->rule = Rule::Axiom;
    n->concl = axiom_instance(name, e, f, g);
    n->axiom = name;
    if (e) n->subst["e"] = e;
    if (f) n->subst["f"] = f;
    if (g) n->subst["g"] = g;
    return n;
}

D assume(const FormalEq& eq) { return make(Rule::Assume, eq); }

D aci_step(Exp lhs, Exp rhs) {
    if (lhs == rhs) return refl(lhs);
    return make(Rule::ACIStep, {lhs, rhs});
}

D rsp_star(D p) {
    const FormalEq& c = p->concl;
    Exp r = c.rhs;
    if (r->kind != Kind::Sum || r->l->kind != Kind::Prod || r->l->r != c.lhs)
        throw std::logic_error("rsp*: premise not of the form e = f.e + g: " + print(c));
    return make(Rule::RSPstar, {c.lhs, prod(star(r->l->l), r->r)}, {p});
}

D usp1(D p1, D p2) { return make(Rule::USP1, {p1->concl.lhs, p2->concl.lhs}, {p1, p2}); }

D usp(int n, std::vector<D> premises) {
    if (static_cast<int>(premises.size()) != 2 * n || n < 1) throw std::logic_error("usp: wrong premise count");
    FormalEq c{premises[0]->concl.lhs, premises[1]->concl.lhs};
    return make(Rule::USP, c, std::move(premises));
}

D lcoind(std::vector<D> premises, std::shared_ptr<const CoinductiveProof> w) {
    auto n = std::make_shared<DNode>();
    n->rule = Rule::LCoind;
    n->concl = coind_conclusion(*w);
    n->prem = std::move(premises);
    n->witness = std::move(w);
    return n;
}

D coind(std::vector<D> premises, std::shared_ptr<const CoinductiveProof> w) {
    auto n = std::make_shared<DNode>();
    n->rule = Rule::Coind;
    n->concl = coind_conclusion(*w);
    n->prem = std::move(premises);
    n->witness = std::move(w);
    return n;
}

Chain::Chain(Exp start) : start_(start), cur_(start), proof_(refl(start)) {}

Chain& Chain::step(D d) {
    if (d->concl.lhs != cur_)
        throw std::logic_error("chain step " + print(d->concl) + " does not start at " + print(cur_));
    proof_ = trans(proof_, d);
    cur_ = d->concl.rhs;
    return *this;
}

Chain& Chain::at(const std::vector<int>& path, D d) { return step(cxt(cur_, path, d)); }

D Chain::done() const { return proof_; }

// ---- checker ----

bool rule_allowed(Rule r, System s, std::size_t premises) {
    bool coind_only = s == System::CLC || s == System::CC;
    switch (r) {
        case Rule::Refl:
        case Rule::Symm:
        case Rule::Trans:
        case Rule::Cxt:
        case Rule::Axiom:
        case Rule::ACIStep:
            return !coind_only;
        case Rule::Assume:
            return true;
        case Rule::RSPstar:
            return s == System::Mil;
        case Rule::USP1:
            return s == System::MilPrime;
        case Rule::USP:
            return s == System::MilPrimeBar;
        case Rule::LCoind:
            if (s == System::CMil1) return premises == 1;
            return s == System::CMil || s == System::CLC || s == System::CMilBar;
        case Rule::Coind:
            return s == System::CMilBar || s == System::CC;
    }
    return false;
}

namespace {

struct Checker {
    const SystemId& sys;
    std::unordered_map<const DNode*, bool> memo;
    CheckResult res;

    explicit Checker(const SystemId& s) : sys(s) {}

    bool fail(const std::string& msg, const std::string& where) {
        if (res.ok) {
            res.ok = false;
            res.error = msg;
            res.where = where;
        }
        return false;
    }

    bool check(const D& d, const std::string& where) {
        auto it = memo.find(d.get());
        if (it != memo.end()) return it->second;
        bool ok = check_node(d, where);
        memo[d.get()] = ok;
        return ok;
    }

    bool check_node(const D& d, const std::string& where) {
        const FormalEq& c = d->concl;
        if (!c.lhs || !c.rhs) return fail("missing conclusion", where);
        if (!rule_allowed(d->rule, sys.sys, d->prem.size()))
            return fail("rule " + rule_name(d->rule) + " not available in " + system_name(sys.sys), where);
        if (d->rule == Rule::Axiom && sys.sys == System::ACI && d->axiom != "assoc+" && d->axiom != "comm+" &&
            d->axiom != "idempot+")
            return fail("axiom " + d->axiom + " not available in ACI", where);
        for (std::size_t i = 0; i < d->prem.size(); ++i)
            if (!check(d->prem[i], where + "/" + std::to_string(i))) return false;
        auto pc = [&](std::size_t i) -> const FormalEq& { return d->prem[i]->concl; };
        auto need = [&](std::size_t n) { return d->prem.size() == n; };
        switch (d->rule) {
            case Rule::Refl:
                if (!need(0) || c.lhs != c.rhs) return fail("Refl with different sides", where);
                return true;
            case Rule::Symm:
                if (!need(1) || pc(0).lhs != c.rhs || pc(0).rhs != c.lhs) return fail("bad Symm", where);
                return true;
            case Rule::Trans:
                if (!need(2) || pc(0).lhs != c.lhs || pc(1).rhs != c.rhs || pc(0).rhs != pc(1).lhs)
                    return fail("bad Trans", where);
                return true;
            case Rule::Cxt: {
                if (!need(1)) return fail("Cxt needs one premise", where);
                if (subterm(c.lhs, d->path) != pc(0).lhs) return fail("Cxt hole does not hold the premise lhs", where);
                if (replace_at(c.lhs, d->path, pc(0).rhs) != c.rhs)
                    return fail("Cxt conclusion is not the filled context", where);
                return true;
            }
            case Rule::Axiom: {
                if (!need(0)) return fail("axiom with premises", where);
                auto m = match_axiom(d->axiom, c);
                if (!m) return fail("not an instance of " + d->axiom + ": " + print(c), where);
                return true;
            }
            case Rule::Assume: {
                for (const auto& a : sys.assumptions)
                    if (a == c) return true;
                return fail("assumption not available: " + print(c), where);
            }
            case Rule::ACIStep:
                if (!need(0) || !aci_eq(c.lhs, c.rhs)) return fail("ACIStep sides differ modulo ACI", where);
                return true;
            case Rule::RSPstar: {
                if (!need(1)) return fail("RSP* needs one premise", where);
                const FormalEq& p = pc(0);
                Exp r = p.rhs;
                if (r->kind != Kind::Sum || r->l->kind != Kind::Prod || r->l->r != p.lhs)
                    return fail("RSP* premise not of the form e = f.e + g", where);
                Exp f = r->l->l, g = r->r;
                if (terminates(f)) return fail("RSP* side condition violated: " + print(f) + " terminates", where);
                if (c.lhs != p.lhs || c.rhs != prod(star(f), g)) return fail("RSP* conclusion mismatch", where);
                return true;
            }
            case Rule::USP1: {
                if (!need(2)) return fail("USP1 needs two premises", where);
                const FormalEq& p1 = pc(0);
                const FormalEq& p2 = pc(1);
                auto shape = [](const FormalEq& p) {
                    return p.rhs->kind == Kind::Sum && p.rhs->l->kind == Kind::Prod && p.rhs->l->r == p.lhs;
                };
                if (!shape(p1) || !shape(p2)) return fail("USP1 premise not of the form e = f.e + g", where);
                if (p1.rhs->l->l != p2.rhs->l->l || p1.rhs->r != p2.rhs->r)
                    return fail("USP1 premises use different f or g", where);
                if (terminates(p1.rhs->l->l))
                    return fail("USP1 side condition violated: " + print(p1.rhs->l->l) + " terminates", where);
                if (c.lhs != p1.lhs || c.rhs != p2.lhs) return fail("USP1 conclusion mismatch", where);
                return true;
            }
            case Rule::USP:
                return check_usp(d, where);
            case Rule::LCoind:
            case Rule::Coind: {
                if (!d->witness) return fail("coinductive rule without witness", where);
                std::vector<FormalEq> gamma;
                for (const auto& p : d->prem) gamma.push_back(p->concl);
                std::string err;
                if (!check_coind_side(*d->witness, gamma, d->rule == Rule::LCoind, err))
                    return fail("side condition of " + rule_name(d->rule) + " fails: " + err, where);
                if (coind_conclusion(*d->witness) != c) return fail("conclusion differs from the witness", where);
                return true;
            }
        }
        return fail("unknown rule", where);
    }

    bool check_usp(const D& d, const std::string& where) {
        std::size_t m = d->prem.size();
        if (m < 2 || m % 2) return fail("USP premise count must be 2n", where);
        int n = static_cast<int>(m / 2);
        std::vector<std::vector<Exp>> f(n, std::vector<Exp>(n));
        std::vector<Exp> g(n);
        for (int i = 0; i < n; ++i)
            for (int k = 0; k < 2; ++k) {
                const FormalEq& p = d->prem[2 * i + k]->concl;
                // rhs = ((f_i1.e_1k + ... ) + f_in.e_nk) + g_i
                std::vector<Exp> parts;
                Exp r = p.rhs;
                for (int j = 0; j < n; ++j) {
                    if (r->kind != Kind::Sum) return fail("USP premise has too few summands", where);
                    parts.push_back(r->r);
                    r = r->l;
                }
                parts.push_back(r);
                std::reverse(parts.begin(), parts.end());
                // parts[0..n-1] are products, parts[n] is g_i
                for (int j = 0; j < n; ++j) {
                    Exp t = parts[j];
                    if (t->kind != Kind::Prod) return fail("USP summand is not a product", where);
                    if (t->r != d->prem[2 * j + k]->concl.lhs) return fail("USP summand does not use e_jk", where);
                    if (k == 0) f[i][j] = t->l;
                    else if (f[i][j] != t->l) return fail("USP coefficients differ between solutions", where);
                    if (terminates(t->l)) return fail("USP side condition violated", where);
                }
                if (k == 0) g[i] = parts[n];
                else if (g[i] != parts[n]) return fail("USP constants differ between solutions", where);
            }
        if (d->concl.lhs != d->prem[0]->concl.lhs || d->concl.rhs != d->prem[1]->concl.lhs)
            return fail("USP conclusion mismatch", where);
        return true;
    }
};

}  // namespace

CheckResult check_derivation(const D& d, const SystemId& s) {
    if (!d) {
        CheckResult r;
        r.ok = false;
        r.error = "empty derivation";
        return r;
    }
    Checker ch(s);
    ch.check(d, "");
    return ch.res;
}

namespace {

void visit(const D& d, std::unordered_set<const DNode*>& seen, const std::function<void(const DNode&)>& f) {
    if (!seen.insert(d.get()).second) return;
    f(*d);
    for (const auto& p : d->prem) visit(p, seen, f);
}

}  // namespace

std::size_t count_rule(const D& d, Rule r) {
    std::unordered_set<const DNode*> seen;
    std::size_t n = 0;
    visit(d, seen, [&](const DNode& x) {
        if (x.rule == r) ++n;
    });
    return n;
}

std::size_t derivation_size(const D& d) {
    std::unordered_set<const DNode*> seen;
    std::size_t n = 0;
    visit(d, seen, [&](const DNode&) { ++n; });
    return n;
}

// ---- templates ----

namespace {

D rebuild(const D& d, const std::function<std::optional<D>(const D&, const std::vector<D>&)>& fn,
          std::unordered_map<const DNode*, D>& memo) {
    auto it = memo.find(d.get());
    if (it != memo.end()) return it->second;
    std::vector<D> prem;
    bool changed = false;
    for (const auto& p : d->prem) {
        prem.push_back(rebuild(p, fn, memo));
        if (prem.back() != p) changed = true;
    }
    D out;
    if (auto r = fn(d, prem)) {
        out = *r;
    } else if (changed) {
        auto n = std::make_shared<DNode>(*d);
        n->prem = prem;
        out = n;
    } else {
        out = d;
    }
    memo[d.get()] = out;
    return out;
}

// f*.g = f.(f*.g) + g in Mil-
D unfold_fstar_g(Exp f, Exp g) {
    Exp lhs = prod(star(f), g);
    Chain ch(lhs);
    ch.at({0}, axiom("rec*", f));
    auto p = poly_eq(ch.current(), sum(prod(f, lhs), g));
    if (!p) throw TemplateError("could not normalise the unfolding of " + print(lhs));
    ch.step(*p);
    return ch.done();
}

}  // namespace

D mimic_instance_elimination(const D& d, Rule r, System target) {
    std::unordered_map<const DNode*, D> memo;
    if (r == Rule::USP1 && target == System::Mil) {
        return rebuild(
            d,
            [](const D& n, const std::vector<D>& prem) -> std::optional<D> {
                if (n->rule != Rule::USP1) return std::nullopt;
                return trans(rsp_star(prem[0]), symm(rsp_star(prem[1])));
            },
            memo);
    }
    if (r == Rule::RSPstar && target == System::MilPrime) {
        return rebuild(
            d,
            [](const D& n, const std::vector<D>& prem) -> std::optional<D> {
                if (n->rule != Rule::RSPstar) return std::nullopt;
                Exp rhs = prem[0]->concl.rhs;
                Exp f = rhs->l->l, g = rhs->r;
                return usp1(prem[0], unfold_fstar_g(f, g));
            },
            memo);
    }
    if (count_rule(d, r) == 0) return d;
    throw TemplateError("no template for eliminating " + rule_name(r) + " into " + system_name(target));
}

D splice_assumptions(const D& d, const std::vector<std::pair<FormalEq, D>>& subs) {
    std::unordered_map<const DNode*, D> memo;
    return rebuild(
        d,
        [&](const D& n, const std::vector<D>&) -> std::optional<D> {
            if (n->rule != Rule::Assume) return std::nullopt;
            for (const auto& [eq, p] : subs)
                if (eq == n->concl) return p;
            return std::nullopt;
        },
        memo);
}

// ---- serialization ----

FormalEq parse_eq(const std::string& s) {
    auto pos = s.find('=');
    if (pos == std::string::npos) throw SyntaxError("equation without '='", 0);
    return {parse(s.substr(0, pos)), parse(s.substr(pos + 1))};
}

namespace {

void to_json_rec(const D& d, nlohmann::json& out, std::unordered_map<const DNode*, int>& ids) {
    auto it = ids.find(d.get());
    if (it != ids.end()) {
        out = nlohmann::json{{"ref", it->second}};
        return;
    }
    int id = static_cast<int>(ids.size());
    ids[d.get()] = id;
    out = nlohmann::json::object();
    out["id"] = id;
    out["rule"] = rule_name(d->rule);
    out["conclusion"] = print(d->concl);
    if (d->rule == Rule::Axiom) {
        out["axiom"] = d->axiom;
        nlohmann::json s = nlohmann::json::object();
        for (auto& [k, v] : d->subst) s[k] = print(v);
        out["subst"] = s;
    }
    if (d->rule == Rule::Cxt) out["path"] = d->path;
    if (d->witness) out["witness"] = coind_to_json(*d->witness);
    nlohmann::json prem = nlohmann::json::array();
    for (const auto& p : d->prem) {
        nlohmann::json pj;
        to_json_rec(p, pj, ids);
        prem.push_back(std::move(pj));
    }
    out["premises"] = std::move(prem);
}

D from_json_rec(const nlohmann::json& j, std::unordered_map<int, D>& ids) {
    if (j.contains("ref")) {
        int id = j.at("ref").get<int>();
        auto it = ids.find(id);
        if (it == ids.end()) throw std::runtime_error("dangling derivation reference " + std::to_string(id));
        return it->second;
    }
    auto n = std::make_shared<DNode>();
    auto r = rule_from_name(j.at("rule").get<std::string>());
    if (!r) throw std::runtime_error("unknown rule " + j.at("rule").get<std::string>());
    n->rule = *r;
    n->concl = parse_eq(j.at("conclusion").get<std::string>());
    if (j.contains("axiom")) n->axiom = j.at("axiom").get<std::string>();
    if (j.contains("subst"))
        for (auto& [k, v] : j.at("subst").items()) n->subst[k] = parse(v.get<std::string>());
    if (j.contains("path")) n->path = j.at("path").get<std::vector<int>>();
    if (j.contains("premises"))
        for (const auto& p : j.at("premises")) n->prem.push_back(from_json_rec(p, ids));
    if (j.contains("witness")) n->witness = coind_from_json(j.at("witness"));
    if (j.contains("id")) ids[j.at("id").get<int>()] = n;
    return n;
}

}  // namespace

nlohmann::json derivation_to_json(const D& d) {
    std::unordered_map<const DNode*, int> ids;
    nlohmann::json j;
    to_json_rec(d, j, ids);
    return j;
}

D derivation_from_json(const nlohmann::json& j) {
    std::unordered_map<int, D> ids;
    return from_json_rec(j, ids);
}

}  // namespace sx
