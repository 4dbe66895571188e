#include "sx/coind.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <unordered_map>

#include "sx/bisim.hpp"
#include "sx/interpret.hpp"
#include "sx/llee.hpp"

namespace sx {

FormalEq coind_conclusion(const CoinductiveProof& p) {
    return {p.lhs.values.at(p.chart.start), p.rhs.values.at(p.chart.start)};
}

CoinductiveProof make_coind_proof(const OneChart& c, const std::vector<FormalEq>& labels, SystemId base) {
    if (static_cast<int>(labels.size()) != c.size()) throw SolutionError("labels are not total on the vertices", -1);
    std::vector<Exp> l, r;
    for (const auto& eq : labels) {
        l.push_back(eq.lhs);
        r.push_back(eq.rhs);
    }
    CoinductiveProof p;
    p.chart = c;
    p.base = base;
    p.lhs = make_solution(c, l, base);
    p.rhs = make_solution(c, r, base);
    return p;
}

namespace {

Solution on_chart(const Solution& s, const OneChart& c, const SystemId& sys) {
    Solution r = s;
    r.chart = c;
    r.system = sys;
    r.evidence.resize(c.size());
    return r;
}

CoindCheck check_with(const CoinductiveProof& p, const SystemId& sys, Mode mode, Solution* lhs_out = nullptr,
                      Solution* rhs_out = nullptr) {
    CoindCheck r;
    try {
        validate(p.chart);
    } catch (const ChartError& e) {
        r.reason = e.what();
        return r;
    }
    if (static_cast<int>(p.lhs.values.size()) != p.chart.size() ||
        static_cast<int>(p.rhs.values.size()) != p.chart.size()) {
        r.reason = "labels are not total on the vertices";
        return r;
    }
    if (!is_weakly_guarded(p.chart)) {
        r.reason = "chart is not weakly guarded";
        return r;
    }
    if (p.llee()) {
        auto w = check_witness(p.chart);
        if (!w.valid_llee || !w.guarded) {
            r.reason = "LLEE-witness invalid: " + w.reason;
            return r;
        }
    }
    Evidence weak = Evidence::Certificate;
    for (int side = 0; side < 2; ++side) {
        const Solution& s = side == 0 ? p.lhs : p.rhs;
        try {
            Solution checked = check_solution(on_chart(s, p.chart, sys), mode);
            Evidence e = weakest(checked);
            if (static_cast<int>(e) > static_cast<int>(weak)) weak = e;
            if (side == 0 && lhs_out) *lhs_out = checked;
            if (side == 1 && rhs_out) *rhs_out = checked;
        } catch (const SolutionError& e) {
            r.vertex = e.vertex;
            r.side = side == 0 ? "lhs" : "rhs";
            r.reason = e.what();
            return r;
        }
    }
    r.ok = true;
    r.weakest = weak;
    return r;
}

}  // namespace

CoindCheck check_coind_proof(const CoinductiveProof& p, Mode mode) { return check_with(p, p.base, mode); }

bool check_coind_side(const CoinductiveProof& p, const std::vector<FormalEq>& gamma, bool need_llee,
                      std::string& err) {
    if (p.base.sys != System::MilMinus) {
        err = "coinductive proof must be over Mil- plus the premises";
        return false;
    }
    for (const auto& a : p.base.assumptions)
        if (std::find(gamma.begin(), gamma.end(), a) == gamma.end()) {
            err = "assumption " + print(a) + " is not a premise";
            return false;
        }
    if (need_llee && !p.llee()) {
        err = "no LLEE-witness";
        return false;
    }
    std::vector<FormalEq> g;
    for (const auto& a : gamma)
        if (std::find(g.begin(), g.end(), a) == g.end()) g.push_back(a);
    auto r = check_with(p, {System::MilMinus, g}, Mode::Certificate);
    if (!r.ok) {
        err = r.reason;
        if (r.vertex >= 0) err += " (" + r.side + " at vertex " + std::to_string(r.vertex) + ")";
        return false;
    }
    return true;
}

namespace {

// vertices whose value is the projection of their stacked label get the fundamental-theorem certificate
Solution with_projection_certs(Solution s) {
    for (int v = 0; v < s.chart.size(); ++v) {
        SExp E = s.chart.exprs[v];
        if (s.evidence[v].cert || !E || project(E) != s.values[v]) continue;
        FormalEq cond = correctness_condition(s, v);
        D ft = ft_certificate(E);
        if (auto bridge = poly_eq(ft->concl.rhs, cond.rhs)) s.evidence[v] = {Evidence::Certificate, trans(ft, *bridge)};
    }
    return s;
}

}  // namespace

CoinductiveProof certify(const CoinductiveProof& p, int depth) {
    CoinductiveProof q = p;
    q.lhs = check_solution(with_projection_certs(on_chart(p.lhs, p.chart, p.base)), Mode::Prover, depth);
    q.rhs = check_solution(with_projection_certs(on_chart(p.rhs, p.chart, p.base)), Mode::Prover, depth);
    return q;
}

// ---- RSP* mimicking ----

CoinductiveProof mimic_rspstar(Exp e, Exp f, Exp g) {
    if (terminates(f)) throw NotGuarded("RSP* side condition fails: " + print(f) + " terminates");
    Exp fsg = prod(star(f), g);
    EntryBodyLabeling c = onechart_of(fsg);
    FormalEq premise{e, sum(prod(f, e), g)};
    SystemId base{System::MilMinus, {premise}};

    // lhs labels per vertex form
    std::vector<Exp> lv(c.size());
    std::vector<SExp> stacked(c.size(), nullptr);  // F for vertices (F # f*).g
    for (int v = 0; v < c.size(); ++v) {
        SExp E = c.exprs[v];
        if (v == c.start) {
            lv[v] = e;
        } else if (E->kind == SKind::ProdS && E->e == g && E->l->kind == SKind::StackProd && E->l->e == f) {
            stacked[v] = E->l->l;
            lv[v] = prod(project(stacked[v]), e);
        } else {
            lv[v] = project(E);
        }
    }
    Solution lhs = make_solution(c, lv, base);
    for (int v = 0; v < c.size(); ++v) {
        FormalEq cond = correctness_condition(lhs, v);
        Chain ch(lv[v]);
        if (v == c.start) {
            ch.step(assume(premise));
            ch.at({0, 0}, ft_certificate(pure(f)));
            ch.at({1}, ft_certificate(pure(g)));
        } else if (stacked[v]) {
            ch.at({0}, ft_certificate(stacked[v]));
        } else {
            ch.step(ft_certificate(c.exprs[v]));
        }
        auto p = poly_eq(ch.current(), cond.rhs);
        if (!p) throw std::logic_error("mimic: condition does not normalise at vertex " + std::to_string(v));
        ch.step(*p);
        lhs.evidence[v] = {Evidence::Certificate, ch.done()};
    }
    Solution rhs = projection_solution(c);
    rhs.system = base;
    CoinductiveProof proof;
    proof.chart = c;
    proof.base = base;
    proof.lhs = lhs;
    proof.rhs = rhs;
    return proof;
}

// ---- transformations ----

D coind_to_mil(const CoinductiveProof& p, const std::vector<std::pair<FormalEq, D>>& assumptions) {
    if (!p.llee()) throw TransformError("coinductive proof has no LLEE-witness");
    for (const auto& a : p.base.assumptions) {
        bool found = std::any_of(assumptions.begin(), assumptions.end(), [&](const auto& x) { return x.first == a; });
        if (!found) throw TransformError("no derivation supplied for assumption " + print(a));
    }
    Solution l, r;
    auto chk = check_with(p, p.base, Mode::Certificate, &l, &r);
    if (!chk.ok) throw TransformError("invalid coinductive proof: " + chk.reason);
    auto ds = solutions_equal_in_mil(p.chart, l, r);
    return splice_assumptions(ds[p.chart.start], assumptions);
}

namespace {

using Rebuild = std::function<std::optional<D>(const D&, const std::vector<D>&)>;

D rebuild(const D& d, const Rebuild& fn, std::unordered_map<const DNode*, D>& memo) {
    auto it = memo.find(d.get());
    if (it != memo.end()) return it->second;
    std::vector<D> prem;
    bool changed = false;
    for (const auto& q : d->prem) {
        prem.push_back(rebuild(q, fn, memo));
        changed = changed || prem.back() != q;
    }
    D out;
    if (auto r = fn(d, prem)) {
        out = *r;
    } else if (changed) {
        auto n = std::make_shared<DNode>(*d);
        n->prem = std::move(prem);
        out = n;
    } else {
        out = d;
    }
    memo.emplace(d.get(), out);
    return out;
}

bool is_coind(const D& d) { return d->rule == Rule::LCoind || d->rule == Rule::Coind; }

// coinductive proof of e = f over Mil- + gamma from a Mil- + gamma derivation of it
std::shared_ptr<CoinductiveProof> fold_segment(const D& seg, const std::vector<FormalEq>& gamma) {
    Exp e = seg->concl.lhs, f = seg->concl.rhs;
    EntryBodyLabeling c = onechart_of(e);
    SystemId base{System::MilMinus, gamma};
    Solution s1 = projection_solution(c);
    s1.system = base;
    std::vector<Exp> v2 = s1.values;
    v2[c.start] = f;
    Solution s2 = make_solution(c, v2, base);
    for (int v = 0; v < c.size(); ++v) {
        FormalEq cond = correctness_condition(s2, v);
        Chain ch(v2[v]);
        if (v == c.start) ch.step(symm(seg));
        ch.step(s1.evidence[v].cert);
        // items l.e whose target is the start become l.f
        std::vector<Transition> ts;
        for (const auto& t : c.trans)
            if (t.src == v) ts.push_back(t);
        std::sort(ts.begin(), ts.end(), edge_less);
        std::size_t k = ts.size() + 1;
        for (std::size_t j = 0; j < ts.size(); ++j) {
            if (ts[j].tgt != c.start) continue;
            std::vector<int> p;
            if (k > 1) {
                std::size_t item = j + 1;
                p.assign(k - 1 - item, 0);
                p.push_back(1);
            }
            p.push_back(1);
            ch.at(p, seg);
        }
        if (ch.current() != cond.rhs) throw std::logic_error("fold: condition mismatch at vertex " + std::to_string(v));
        s2.evidence[v] = {Evidence::Certificate, ch.done()};
    }
    auto proof = std::make_shared<CoinductiveProof>();
    proof->chart = c;
    proof->base = base;
    proof->lhs = s1;
    proof->rhs = s2;
    return proof;
}

D fold(const D& d, bool cc, std::unordered_map<const DNode*, D>& memo) {
    auto it = memo.find(d.get());
    if (it != memo.end()) return it->second;
    D out;
    if (is_coind(d)) {
        std::vector<D> prem;
        for (const auto& q : d->prem) prem.push_back(fold(q, cc, memo));
        out = cc ? coind(prem, d->witness) : lcoind(prem, d->witness);
    } else if (d->rule == Rule::Assume) {
        out = d;
    } else {
        // the maximal segment below d without coinductive rules; its leaves become assumptions
        std::vector<D> leaves;
        std::unordered_map<const DNode*, D> seg_memo;
        D seg = rebuild(
            d,
            [&](const D& n, const std::vector<D>&) -> std::optional<D> {
                if (is_coind(n) || n->rule == Rule::Assume) {
                    leaves.push_back(n);
                    return assume(n->concl);
                }
                return std::nullopt;
            },
            seg_memo);
        std::vector<FormalEq> gamma;
        std::vector<D> prem;
        for (const auto& l : leaves) {
            if (std::find(gamma.begin(), gamma.end(), l->concl) != gamma.end()) continue;
            gamma.push_back(l->concl);
            prem.push_back(fold(l, cc, memo));
        }
        auto w = fold_segment(seg, gamma);
        out = cc ? coind(prem, w) : lcoind(prem, w);
    }
    memo.emplace(d.get(), out);
    return out;
}

}  // namespace

D transform(const D& d, System from, System to) {
    auto chk = check_derivation(d, {from, {}});
    if (!chk) throw TransformError("derivation does not check in " + system_name(from) + ": " + chk.error);
    std::unordered_map<const DNode*, D> memo;
    D out;
    if (from == System::Mil && (to == System::CMil1 || to == System::CMil)) {
        out = rebuild(
            d,
            [](const D& n, const std::vector<D>& prem) -> std::optional<D> {
                if (n->rule != Rule::RSPstar) return std::nullopt;
                Exp e = n->concl.lhs;
                Exp f = n->concl.rhs->l->l, g = n->concl.rhs->r;
                auto w = std::make_shared<CoinductiveProof>(mimic_rspstar(e, f, g));
                return lcoind({prem[0]}, w);
            },
            memo);
    } else if ((from == System::CMil || from == System::CMil1) && to == System::Mil) {
        out = rebuild(
            d,
            [](const D& n, const std::vector<D>& prem) -> std::optional<D> {
                if (n->rule != Rule::LCoind) return std::nullopt;
                std::vector<std::pair<FormalEq, D>> as;
                for (const auto& q : prem) as.emplace_back(q->concl, q);
                return coind_to_mil(*n->witness, as);
            },
            memo);
    } else if ((from == System::CMil || from == System::CMil1) && to == System::CLC) {
        out = fold(d, false, memo);
    } else if (from == System::CMilBar && to == System::CC) {
        out = fold(d, true, memo);
    } else {
        throw TransformError("unsupported transformation " + system_name(from) + " -> " + system_name(to));
    }
    if (!(out->concl == d->concl)) throw std::logic_error("transform changed the conclusion");
    auto res = check_derivation(out, {to, {}});
    if (!res) throw std::logic_error("transformed derivation does not check in " + system_name(to) + ": " + res.error);
    return out;
}

// ---- product chart proofs ----

std::optional<D> product_cc_proof(Exp e1, Exp e2) {
    OneChart c1 = chart_of(e1), c2 = chart_of(e2);
    auto b = bisim_blocks(c1, c2);
    int n1 = c1.size();
    if (b[c1.start] != b[n1 + c2.start]) return std::nullopt;
    auto o1 = out_index(c1), o2 = out_index(c2);
    OneChart p;
    std::map<std::pair<int, int>, int> id;
    std::vector<std::pair<int, int>> order{{c1.start, c2.start}};
    id[order[0]] = p.add_vertex(c1.term[c1.start]);
    std::vector<Exp> l{project(c1.exprs[c1.start])}, r{project(c2.exprs[c2.start])};
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto [v, w] = order[i];
        for (int ti : o1[v])
            for (int tj : o2[w]) {
                const auto& t1 = c1.trans[ti];
                const auto& t2 = c2.trans[tj];
                if (t1.label != t2.label || b[t1.tgt] != b[n1 + t2.tgt]) continue;
                auto key = std::make_pair(t1.tgt, t2.tgt);
                auto it = id.find(key);
                int x;
                if (it == id.end()) {
                    x = p.add_vertex(c1.term[t1.tgt]);
                    id.emplace(key, x);
                    order.push_back(key);
                    l.push_back(project(c1.exprs[t1.tgt]));
                    r.push_back(project(c2.exprs[t2.tgt]));
                } else {
                    x = it->second;
                }
                p.add(static_cast<int>(i), t1.label, x);
            }
    }
    p.alphabet = c1.alphabet;
    for (char a : c2.alphabet)
        if (std::find(p.alphabet.begin(), p.alphabet.end(), a) == p.alphabet.end()) p.alphabet.push_back(a);
    std::sort(p.alphabet.begin(), p.alphabet.end());
    p.start = 0;
    canonicalize(p);
    SystemId base{System::MilMinus, {}};
    auto proof = std::make_shared<CoinductiveProof>();
    proof->chart = p;
    proof->base = base;
    proof->lhs = make_solution(p, l, base);
    proof->rhs = make_solution(p, r, base);
    for (int side = 0; side < 2; ++side) {
        Solution& s = side == 0 ? proof->lhs : proof->rhs;
        for (int v = 0; v < p.size(); ++v) {
            FormalEq cond = correctness_condition(s, v);
            D ft = chart_ft_certificate(s.values[v]);
            auto bridge = poly_eq(ft->concl.rhs, cond.rhs);
            if (!bridge) throw std::logic_error("product chart: condition does not normalise");
            s.evidence[v] = {Evidence::Certificate, trans(ft, *bridge)};
        }
    }
    return coind({}, proof);
}

// ---- joint expansion / minimization ----

D joint_llee_completeness(Exp e1, Exp e2, const EntryBodyLabeling& c, JointMode mode, const std::vector<int>& phi1,
                          const std::vector<int>& phi2) {
    auto w = check_witness(c);
    if (!w.valid_llee || !w.guarded) throw std::invalid_argument("joint chart is not a guarded LLEE-1-chart: " + w.reason);
    EntryBodyLabeling c1 = onechart_of(e1), c2 = onechart_of(e2);
    auto certified = [](const Solution& s) {
        for (const auto& ev : s.evidence)
            if (!ev.cert) throw TransformError("pulled-back solution could not be certified");
    };
    if (mode == JointMode::Expansion) {
        if (!check_functional(phi1, c, c1) || !check_functional(phi2, c, c2))
            throw std::invalid_argument("maps are not functional 1-bisimulations onto the interpretations");
        Solution a = pullback_solution(phi1, c, c1, projection_solution(c1), true);
        Solution b = pullback_solution(phi2, c, c2, projection_solution(c2), true);
        certified(a);
        certified(b);
        return solutions_equal_in_mil(c, a, b)[c.start];
    }
    if (!check_functional(phi1, c1, c) || !check_functional(phi2, c2, c))
        throw std::invalid_argument("maps are not functional 1-bisimulations onto the joint chart");
    Solution ext = extract(c).solution;
    Solution a = pullback_solution(phi1, c1, c, ext, true);
    Solution b = pullback_solution(phi2, c2, c, ext, true);
    certified(a);
    certified(b);
    D d1 = solutions_equal_in_mil(c1, projection_solution(c1), a)[c1.start];
    D d2 = solutions_equal_in_mil(c2, projection_solution(c2), b)[c2.start];
    return trans(d1, symm(d2));
}

std::optional<std::vector<int>> find_functional(const OneChart& c1, const OneChart& c2) {
    auto b = bisim_blocks(c1, c2);
    int n1 = c1.size();
    std::vector<std::vector<int>> cand(n1);
    for (int v = 0; v < n1; ++v)
        for (int w = 0; w < c2.size(); ++w)
            if (b[v] == b[n1 + w]) cand[v].push_back(w);
    if (cand[c1.start].empty()) return std::nullopt;
    cand[c1.start] = {c2.start};
    std::vector<int> phi(n1, -1);
    std::size_t attempts = 0;
    std::function<bool(int)> go = [&](int v) -> bool {
        if (v == n1) return check_functional(phi, c1, c2);
        if (++attempts > 200000) return false;
        if (cand[v].empty()) return false;
        for (int w : cand[v]) {
            phi[v] = w;
            if (go(v + 1)) return true;
        }
        phi[v] = -1;
        return false;
    };
    if (go(0)) return phi;
    return std::nullopt;
}

// ---- serialization ----

namespace {

nlohmann::json evidence_json(const Solution& s) {
    nlohmann::json j = nlohmann::json::object();
    for (int v = 0; v < static_cast<int>(s.evidence.size()); ++v) {
        nlohmann::json e{{"kind", evidence_name(s.evidence[v].kind)}};
        if (s.evidence[v].cert) e["derivation"] = derivation_to_json(s.evidence[v].cert);
        j[std::to_string(v)] = e;
    }
    return j;
}

void read_evidence(const nlohmann::json& j, Solution& s) {
    for (auto& [k, e] : j.items()) {
        int v = std::stoi(k);
        auto& ev = s.evidence.at(v);
        std::string kind = e.value("kind", "unchecked");
        ev.kind = kind == "certificate" ? Evidence::Certificate
                  : kind == "prover"    ? Evidence::Prover
                  : kind == "semantic"  ? Evidence::Semantic
                                        : Evidence::Unchecked;
        if (e.contains("derivation")) ev.cert = derivation_from_json(e.at("derivation"));
    }
}

}  // namespace

nlohmann::json coind_to_json(const CoinductiveProof& p) {
    nlohmann::json j;
    j["chart"] = to_json(p.chart);
    nlohmann::json labels = nlohmann::json::object();
    for (int v = 0; v < p.chart.size(); ++v)
        labels[std::to_string(v)] = {{"lhs", print(p.lhs.values[v])}, {"rhs", print(p.rhs.values[v])}};
    j["labels"] = labels;
    j["system"] = system_name(p.base.sys);
    nlohmann::json as = nlohmann::json::array();
    for (const auto& a : p.base.assumptions) as.push_back(print(a));
    j["assumptions"] = as;
    j["evidence"] = {{"lhs", evidence_json(p.lhs)}, {"rhs", evidence_json(p.rhs)}};
    return j;
}

std::shared_ptr<CoinductiveProof> coind_from_json(const nlohmann::json& j) {
    OneChart c = chart_from_json(j.at("chart"));
    SystemId base;
    if (j.contains("system")) {
        auto s = system_from_name(j.at("system").get<std::string>());
        if (!s) throw std::runtime_error("unknown system " + j.at("system").get<std::string>());
        base.sys = *s;
    }
    if (j.contains("assumptions"))
        for (const auto& a : j.at("assumptions")) base.assumptions.push_back(parse_eq(a.get<std::string>()));
    std::vector<FormalEq> labels(c.size(), FormalEq{nullptr, nullptr});
    for (auto& [k, v] : j.at("labels").items())
        labels.at(std::stoi(k)) = {parse(v.at("lhs").get<std::string>()), parse(v.at("rhs").get<std::string>())};
    for (int v = 0; v < c.size(); ++v)
        if (!labels[v].lhs) throw std::runtime_error("missing label for vertex " + std::to_string(v));
    auto p = std::make_shared<CoinductiveProof>(make_coind_proof(c, labels, base));
    if (j.contains("evidence")) {
        const auto& ev = j.at("evidence");
        if (ev.contains("lhs")) read_evidence(ev.at("lhs"), p->lhs);
        if (ev.contains("rhs")) read_evidence(ev.at("rhs"), p->rhs);
    }
    return p;
}

}  // namespace sx
