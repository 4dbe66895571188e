#pragma once

// Independent reference implementations used as test oracles. They share only the
// expression and chart data types with the library.

#include <algorithm>
#include <functional>
#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "sx/chart.hpp"
#include "sx/syntax.hpp"

namespace oracle {

using sx::Exp;
using sx::Kind;
using sx::OneChart;

inline void subterms(Exp e, std::vector<Exp>& out) {
    out.push_back(e);
    if (e->l) subterms(e->l, out);
    if (e->r) subterms(e->r, out);
}

// every expression with exactly n nodes over 0, 1 and the alphabet
inline std::vector<Exp> all_of_size(int n, const std::string& alphabet) {
    static std::map<std::pair<int, std::string>, std::vector<Exp>> memo;
    auto key = std::make_pair(n, alphabet);
    auto it = memo.find(key);
    if (it != memo.end()) return it->second;
    std::vector<Exp> out;
    if (n == 1) {
        out = {sx::zero(), sx::one()};
        for (char a : alphabet) out.push_back(sx::act(a));
    } else {
        for (Exp b : all_of_size(n - 1, alphabet)) out.push_back(sx::star(b));
        for (int k = 1; k + 1 < n; ++k)
            for (Exp l : all_of_size(k, alphabet))
                for (Exp r : all_of_size(n - 1 - k, alphabet)) {
                    out.push_back(sx::sum(l, r));
                    out.push_back(sx::prod(l, r));
                }
    }
    memo[key] = out;
    return out;
}

// closure of the termination rules over the subterms of e
inline bool terminates(Exp e) {
    std::vector<Exp> subs;
    subterms(e, subs);
    std::set<Exp> down;
    bool changed = true;
    while (changed) {
        changed = false;
        for (Exp s : subs) {
            if (down.count(s)) continue;
            bool fire = false;
            switch (s->kind) {
                case Kind::One:
                case Kind::Star: fire = true; break;
                case Kind::Sum: fire = down.count(s->l) || down.count(s->r); break;
                case Kind::Prod: fire = down.count(s->l) && down.count(s->r); break;
                default: break;
            }
            if (fire) {
                down.insert(s);
                changed = true;
            }
        }
    }
    return down.count(e) > 0;
}

// does e accept the word w (regular-language reading, for trace-level cross checks)
inline bool accepts(Exp e, const std::string& w) {
    std::map<std::tuple<Exp, std::size_t, std::size_t>, bool> memo;
    std::function<bool(Exp, std::size_t, std::size_t)> m = [&](Exp x, std::size_t i, std::size_t j) -> bool {
        auto key = std::make_tuple(x, i, j);
        auto it = memo.find(key);
        if (it != memo.end()) return it->second;
        bool r = false;
        switch (x->kind) {
            case Kind::Zero: r = false; break;
            case Kind::One: r = i == j; break;
            case Kind::Act: r = j == i + 1 && w[i] == x->act; break;
            case Kind::Sum: r = m(x->l, i, j) || m(x->r, i, j); break;
            case Kind::Prod:
                for (std::size_t k = i; k <= j && !r; ++k) r = m(x->l, i, k) && m(x->r, k, j);
                break;
            case Kind::Star:
                if (i == j) {
                    r = true;
                    break;
                }
                for (std::size_t k = i + 1; k <= j && !r; ++k) r = m(x->l, i, k) && m(x, k, j);
                break;
        }
        memo[key] = r;
        return r;
    };
    return m(e, 0, w.size());
}

inline std::vector<std::string> words(const std::string& alphabet, std::size_t max_len) {
    std::vector<std::string> out{""};
    for (std::size_t i = 0; i < out.size(); ++i)
        if (out[i].size() < max_len)
            for (char a : alphabet) out.push_back(out[i] + a);
    return out;
}

inline bool same_language(Exp a, Exp b, const std::string& alphabet, std::size_t max_len) {
    for (const auto& w : words(alphabet, max_len))
        if (accepts(a, w) != accepts(b, w)) return false;
    return true;
}

// induced proper steps and termination, by explicit search over empty steps
struct Induced {
    std::vector<std::set<std::pair<char, int>>> steps;
    std::vector<bool> term;
};

inline Induced induce(const OneChart& c) {
    Induced r;
    r.steps.resize(c.size());
    r.term.assign(c.size(), false);
    for (int v = 0; v < c.size(); ++v) {
        std::vector<int> stack{v};
        std::set<int> seen{v};
        while (!stack.empty()) {
            int x = stack.back();
            stack.pop_back();
            if (c.term[x]) r.term[v] = true;
            for (const auto& t : c.trans) {
                if (t.src != x) continue;
                if (t.label == sx::EMPTY) {
                    if (seen.insert(t.tgt).second) stack.push_back(t.tgt);
                } else {
                    r.steps[v].insert({t.label, t.tgt});
                }
            }
        }
    }
    return r;
}

// greatest fixpoint of the bisimulation conditions, by repeated pair deletion
inline bool bisimilar(const OneChart& c1, const OneChart& c2) {
    Induced a = induce(c1), b = induce(c2);
    std::set<std::pair<int, int>> rel;
    for (int v = 0; v < c1.size(); ++v)
        for (int w = 0; w < c2.size(); ++w)
            if (a.term[v] == b.term[w]) rel.insert({v, w});
    bool changed = true;
    while (changed) {
        changed = false;
        for (auto it = rel.begin(); it != rel.end();) {
            auto [v, w] = *it;
            auto matched = [&](const auto& from, const auto& to, bool left) {
                for (auto [l, x] : from) {
                    bool ok = false;
                    for (auto [k, y] : to)
                        if (k == l && rel.count(left ? std::make_pair(x, y) : std::make_pair(y, x))) ok = true;
                    if (!ok) return false;
                }
                return true;
            };
            if (!matched(a.steps[v], b.steps[w], true) || !matched(b.steps[w], a.steps[v], false)) {
                it = rel.erase(it);
                changed = true;
            } else {
                ++it;
            }
        }
    }
    return rel.count({c1.start, c2.start}) > 0;
}

// ---- loop existence and elimination by exhaustive single steps ----

struct Graph {
    int n = 0;
    int start = 0;
    std::vector<bool> term;
    std::vector<std::tuple<int, char, int>> edges;
};

inline Graph graph_of(const OneChart& c) {
    Graph g;
    g.n = c.size();
    g.start = c.start;
    g.term = c.term;
    for (const auto& t : c.trans) g.edges.emplace_back(t.src, t.label, t.tgt);
    return g;
}

inline Graph collect(const Graph& g) {
    std::vector<bool> seen(g.n, false);
    std::vector<int> stack{g.start};
    seen[g.start] = true;
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (auto [s, l, t] : g.edges)
            if (s == x && !seen[t]) {
                seen[t] = true;
                stack.push_back(t);
            }
    }
    std::vector<int> id(g.n, -1);
    Graph r;
    for (int v = 0; v < g.n; ++v)
        if (seen[v]) {
            id[v] = r.n++;
            r.term.push_back(g.term[v]);
        }
    r.start = id[g.start];
    for (auto [s, l, t] : g.edges)
        if (seen[s]) r.edges.emplace_back(id[s], l, id[t]);
    std::sort(r.edges.begin(), r.edges.end());
    return r;
}

// cycle among the given edges, restricted to vertices allowed by `inside`
inline bool has_cycle(int n, const std::vector<std::pair<int, int>>& es, const std::vector<bool>& inside) {
    std::vector<int> colour(n, 0);
    std::function<bool(int)> dfs = [&](int v) {
        colour[v] = 1;
        for (auto [s, t] : es) {
            if (s != v || !inside[t]) continue;
            if (colour[t] == 1) return true;
            if (colour[t] == 0 && dfs(t)) return true;
        }
        colour[v] = 2;
        return false;
    };
    for (int v = 0; v < n; ++v)
        if (inside[v] && colour[v] == 0 && dfs(v)) return true;
    return false;
}

// entries: indices into g.edges, all leaving v
inline bool valid_loop(const Graph& g, int v, const std::vector<int>& entries) {
    // body: vertices reached from entry targets without passing through v
    std::vector<bool> body(g.n, false);
    std::vector<int> stack;
    bool returns = false;
    for (int i : entries) {
        int t = std::get<2>(g.edges[i]);
        if (t == v) {
            returns = true;
            continue;
        }
        if (!body[t]) {
            body[t] = true;
            stack.push_back(t);
        }
    }
    while (!stack.empty()) {
        int x = stack.back();
        stack.pop_back();
        for (auto [s, l, t] : g.edges) {
            if (s != x) continue;
            if (t == v) {
                returns = true;
                continue;
            }
            if (!body[t]) {
                body[t] = true;
                stack.push_back(t);
            }
        }
    }
    for (int x = 0; x < g.n; ++x)
        if (body[x] && g.term[x]) return false;
    std::vector<std::pair<int, int>> es;
    for (auto [s, l, t] : g.edges)
        if (body[s] && t != v) es.emplace_back(s, t);
    if (has_cycle(g.n, es, body)) return false;  // an infinite path avoiding v
    return returns;
}

inline bool infinite_path(const Graph& g) {
    std::vector<std::pair<int, int>> es;
    for (auto [s, l, t] : g.edges) es.emplace_back(s, t);
    return has_cycle(g.n, es, std::vector<bool>(g.n, true));
}

inline std::string key(const Graph& g) {
    std::string k = std::to_string(g.n) + ":" + std::to_string(g.start) + ":";
    for (bool t : g.term) k += t ? '1' : '0';
    for (auto [s, l, t] : g.edges) k += std::to_string(s) + l + std::to_string(t) + ",";
    return k;
}

inline bool lee(const Graph& g0, std::map<std::string, bool>& memo) {
    Graph g = collect(g0);
    if (!infinite_path(g)) return true;
    std::string k = key(g);
    auto it = memo.find(k);
    if (it != memo.end()) return it->second;
    memo[k] = false;
    bool found = false;
    for (int v = 0; v < g.n && !found; ++v) {
        std::vector<int> out;
        for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
            if (std::get<0>(g.edges[i]) == v) out.push_back(i);
        for (unsigned mask = 1; mask < (1u << out.size()) && !found; ++mask) {
            std::vector<int> entries;
            for (std::size_t b = 0; b < out.size(); ++b)
                if (mask & (1u << b)) entries.push_back(out[b]);
            if (!valid_loop(g, v, entries)) continue;
            Graph h = g;
            h.edges.clear();
            for (int i = 0; i < static_cast<int>(g.edges.size()); ++i)
                if (!std::count(entries.begin(), entries.end(), i)) h.edges.push_back(g.edges[i]);
            found = lee(h, memo);
        }
    }
    memo[k] = found;
    return found;
}

inline bool lee(const OneChart& c) {
    std::map<std::string, bool> memo;
    return lee(graph_of(c), memo);
}

}  // namespace oracle
