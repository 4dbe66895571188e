#include "sx/bisim.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <tuple>

#include "sx/interpret.hpp"

namespace sx {

namespace {

struct Union {
    int n1 = 0;
    std::vector<bool> term;
    std::vector<std::vector<std::pair<char, int>>> steps;
};

Union disjoint_induced(const OneChart& c1, const OneChart& c2) {
    OneChart i1 = induced_chart(c1);
    OneChart i2 = induced_chart(c2);
    Union u;
    u.n1 = i1.size();
    int n = i1.size() + i2.size();
    u.term.resize(n);
    u.steps.resize(n);
    for (int v = 0; v < i1.size(); ++v) u.term[v] = i1.term[v];
    for (int v = 0; v < i2.size(); ++v) u.term[u.n1 + v] = i2.term[v];
    for (const auto& t : i1.trans) u.steps[t.src].emplace_back(t.label, t.tgt);
    for (const auto& t : i2.trans) u.steps[u.n1 + t.src].emplace_back(t.label, u.n1 + t.tgt);
    return u;
}

std::vector<int> refine(const Union& u) {
    int n = static_cast<int>(u.term.size());
    std::vector<int> block(n);
    for (int v = 0; v < n; ++v) block[v] = u.term[v] ? 1 : 0;
    for (;;) {
        std::map<std::pair<int, std::set<std::pair<char, int>>>, int> sig;
        std::vector<int> next(n);
        for (int v = 0; v < n; ++v) {
            std::set<std::pair<char, int>> s;
            for (auto& [a, w] : u.steps[v]) s.emplace(a, block[w]);
            auto key = std::make_pair(block[v], std::move(s));
            auto it = sig.find(key);
            if (it == sig.end()) it = sig.emplace(std::move(key), static_cast<int>(sig.size())).first;
            next[v] = it->second;
        }
        int before = static_cast<int>(std::set<int>(block.begin(), block.end()).size());
        if (static_cast<int>(sig.size()) == before) return next;
        block = std::move(next);
    }
}

}  // namespace

std::vector<int> bisim_blocks(const OneChart& c1, const OneChart& c2) { return refine(disjoint_induced(c1, c2)); }

std::optional<Relation> one_bisimilar(const OneChart& c1, const OneChart& c2) {
    auto b = bisim_blocks(c1, c2);
    int n1 = c1.size();
    if (b[c1.start] != b[n1 + c2.start]) return std::nullopt;
    Relation r;
    for (int v = 0; v < n1; ++v)
        for (int w = 0; w < c2.size(); ++w)
            if (b[v] == b[n1 + w]) r.emplace_back(v, w);
    return r;
}

bool bisimilar(Exp e1, Exp e2) {
    if (e1 == e2) return true;
    return one_bisimilar(chart_of(e1), chart_of(e2)).has_value();
}

bool is_one_bisimulation(const Relation& r, const OneChart& c1, const OneChart& c2) {
    OneChart i1 = induced_chart(c1);
    OneChart i2 = induced_chart(c2);
    std::set<std::pair<int, int>> rel(r.begin(), r.end());
    if (!rel.count({c1.start, c2.start})) return false;
    auto o1 = out_index(i1);
    auto o2 = out_index(i2);
    for (auto [v, w] : rel) {
        if (v < 0 || v >= i1.size() || w < 0 || w >= i2.size()) return false;
        if (i1.term[v] != i2.term[w]) return false;
        for (int i : o1[v]) {
            const auto& t = i1.trans[i];
            bool ok = std::any_of(o2[w].begin(), o2[w].end(), [&](int j) {
                return i2.trans[j].label == t.label && rel.count({t.tgt, i2.trans[j].tgt});
            });
            if (!ok) return false;
        }
        for (int j : o2[w]) {
            const auto& t = i2.trans[j];
            bool ok = std::any_of(o1[v].begin(), o1[v].end(), [&](int i) {
                return i1.trans[i].label == t.label && rel.count({i1.trans[i].tgt, t.tgt});
            });
            if (!ok) return false;
        }
    }
    return true;
}

bool check_functional(const std::vector<int>& phi, const OneChart& c1, const OneChart& c2) {
    if (static_cast<int>(phi.size()) != c1.size()) throw ChartError("partial vertex map");
    Relation r;
    for (int v = 0; v < c1.size(); ++v) {
        if (phi[v] < 0 || phi[v] >= c2.size()) throw ChartError("partial vertex map");
        r.emplace_back(v, phi[v]);
    }
    return is_one_bisimulation(r, c1, c2);
}

std::string distinguish(const OneChart& c1, const OneChart& c2) {
    Union u = disjoint_induced(c1, c2);
    auto b = refine(u);
    int p = c1.start, q = u.n1 + c2.start;
    if (b[p] == b[q]) return {};
    auto name = [&](int x) {
        return x < u.n1 ? "left vertex " + std::to_string(x) : "right vertex " + std::to_string(x - u.n1);
    };
    if (u.term[p] != u.term[q]) return "termination differs at the start";
    auto unmatched = [&](int x, int y) -> std::string {
        for (auto& [a, x2] : u.steps[x]) {
            bool ok = std::any_of(u.steps[y].begin(), u.steps[y].end(),
                                  [&](const auto& s) { return s.first == a && b[s.second] == b[x2]; });
            if (!ok)
                return std::string("step ") + a + " to " + name(x2) + " from " + name(x) + " has no bisimilar answer";
        }
        return {};
    };
    std::string s = unmatched(p, q);
    if (s.empty()) s = unmatched(q, p);
    return s.empty() ? "start vertices fall into different bisimulation classes" : s;
}

bool provability_bisim_harness(Exp e) {
    OneChart c = chart_of(e);
    auto b = bisim_blocks(c, c);
    Relation r;
    int n = c.size();
    for (int v = 0; v < n; ++v)
        for (int w = 0; w < n; ++w)
            if (b[v] == b[w]) r.emplace_back(v, w);
    // the self-union numbers the second copy from n, so compare blocks across copies too
    for (int v = 0; v < n; ++v)
        if (b[v] != b[n + v]) return false;
    return is_one_bisimulation(r, c, c);
}

}  // namespace sx
