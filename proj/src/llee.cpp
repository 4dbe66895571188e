#include "sx/llee.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <unordered_set>

namespace sx {

namespace {

bool live(const std::vector<bool>& removed, int i) { return removed.empty() || !removed[i]; }

std::vector<bool> reachable(const OneChart& c, const std::vector<std::vector<int>>& out,
                            const std::vector<bool>& removed) {
    std::vector<bool> seen(c.size(), false);
    std::vector<int> stack{c.start};
    seen[c.start] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int i : out[v]) {
            if (!live(removed, i)) continue;
            int w = c.trans[i].tgt;
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    return seen;
}

// cycle detection on the subgraph induced by `inside` using live transitions
bool has_cycle_in(const OneChart& c, const std::vector<std::vector<int>>& out, const std::vector<bool>& removed,
                  const std::vector<bool>& inside) {
    int n = c.size();
    std::vector<int> color(n, 0);
    for (int s = 0; s < n; ++s) {
        if (!inside[s] || color[s]) continue;
        std::vector<std::pair<int, std::size_t>> stack{{s, 0}};
        color[s] = 1;
        while (!stack.empty()) {
            auto& [v, k] = stack.back();
            if (k < out[v].size()) {
                int i = out[v][k++];
                if (!live(removed, i)) continue;
                int w = c.trans[i].tgt;
                if (!inside[w]) continue;
                if (color[w] == 1) return true;
                if (color[w] == 0) {
                    color[w] = 1;
                    stack.emplace_back(w, 0);
                }
            } else {
                color[v] = 2;
                stack.pop_back();
            }
        }
    }
    return false;
}

LoopCandidate candidate_impl(const OneChart& c, const std::vector<std::vector<int>>& out, int v,
                             const std::vector<int>& entries, const std::vector<bool>& removed) {
    LoopCandidate lc;
    lc.start = v;
    lc.entries = entries;
    std::sort(lc.entries.begin(), lc.entries.end());
    int n = c.size();
    std::vector<bool> in(n, false);
    std::vector<int> stack;
    bool returns = false;
    std::set<int> trans(lc.entries.begin(), lc.entries.end());
    for (int i : lc.entries) {
        int w = c.trans[i].tgt;
        if (w == v) {
            returns = true;
            continue;
        }
        if (!in[w]) {
            in[w] = true;
            stack.push_back(w);
        }
    }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int i : out[u]) {
            if (!live(removed, i)) continue;
            trans.insert(i);
            int w = c.trans[i].tgt;
            if (w == v) {
                returns = true;
                continue;
            }
            if (!in[w]) {
                in[w] = true;
                stack.push_back(w);
            }
        }
    }
    for (int u = 0; u < n; ++u)
        if (in[u]) lc.body.push_back(u);
    lc.transitions.assign(trans.begin(), trans.end());
    lc.l2 = !has_cycle_in(c, out, removed, in);
    lc.l1 = lc.l2 ? returns : true;
    lc.l3 = std::none_of(lc.body.begin(), lc.body.end(), [&](int u) { return static_cast<bool>(c.term[u]); });
    return lc;
}

bool infinite_path(const OneChart& c, const std::vector<std::vector<int>>& out, const std::vector<bool>& removed) {
    auto alive = reachable(c, out, removed);
    return has_cycle_in(c, out, removed, alive);
}

}  // namespace

LoopCandidate loop_candidate(const OneChart& c, int v, const std::vector<int>& entries,
                             const std::vector<bool>& removed) {
    if (entries.empty()) throw EliminationError("empty entry set");
    if (v < 0 || v >= c.size()) throw EliminationError("unknown vertex");
    for (int i : entries) {
        if (i < 0 || i >= static_cast<int>(c.trans.size())) throw EliminationError("unknown transition");
        if (c.trans[i].src != v) throw EliminationError("entry transition does not leave the loop start");
    }
    return candidate_impl(c, out_index(c), v, entries, removed);
}

bool has_infinite_path(const OneChart& c, const std::vector<bool>& removed) {
    return infinite_path(c, out_index(c), removed);
}

OneChart eliminate(const OneChart& c, const std::vector<LoopCandidate>& loops) {
    if (loops.empty()) throw EliminationError("no loops given");
    std::set<int> used;
    for (const auto& l : loops) {
        if (!l.valid()) throw EliminationError("invalid loop candidate at vertex " + std::to_string(l.start));
        for (int i : l.entries)
            if (!used.insert(i).second) throw EliminationError("entry sets are not disjoint");
    }
    for (const auto& l : loops)
        for (const auto& m : loops)
            if (&l != &m && std::binary_search(m.body.begin(), m.body.end(), l.start))
                throw EliminationError("loop start " + std::to_string(l.start) + " lies in the body of another loop");
    OneChart r = c;
    std::vector<Transition> keep;
    for (int i = 0; i < static_cast<int>(c.trans.size()); ++i)
        if (!used.count(i)) keep.push_back(c.trans[i]);
    r.trans = keep;
    return normalize(r);
}

// ---- search ----

namespace {

struct Search {
    const OneChart& c;
    std::vector<std::vector<int>> out;
    bool layered;
    std::unordered_set<std::string> failed;
    std::size_t budget = 2000000;
    std::size_t visited = 0;

    Search(const OneChart& ch, bool lay) : c(ch), out(out_index(ch)), layered(lay) {}

    std::string key(const std::vector<bool>& removed, const std::vector<bool>& forbidden) const {
        std::string k(removed.size() + forbidden.size(), '0');
        for (std::size_t i = 0; i < removed.size(); ++i) k[i] = removed[i] ? '1' : '0';
        for (std::size_t i = 0; i < forbidden.size(); ++i) k[removed.size() + i] = forbidden[i] ? '1' : '0';
        return k;
    }

    std::vector<LoopCandidate> candidates(const std::vector<bool>& removed, const std::vector<bool>& forbidden) {
        auto alive = reachable(c, out, removed);
        std::vector<LoopCandidate> r;
        for (int v = 0; v < c.size(); ++v) {
            if (!alive[v] || (layered && forbidden[v])) continue;
            std::vector<int> ts;
            for (int i : out[v])
                if (live(removed, i)) ts.push_back(i);
            if (ts.empty() || ts.size() > 16) continue;
            for (unsigned mask = 1; mask < (1u << ts.size()); ++mask) {
                std::vector<int> u;
                for (std::size_t k = 0; k < ts.size(); ++k)
                    if (mask & (1u << k)) u.push_back(ts[k]);
                auto lc = candidate_impl(c, out, v, u, removed);
                if (lc.valid()) r.push_back(std::move(lc));
            }
        }
        std::stable_sort(r.begin(), r.end(), [](const LoopCandidate& a, const LoopCandidate& b) {
            if (a.body.size() != b.body.size()) return a.body.size() < b.body.size();
            return a.entries.size() > b.entries.size();
        });
        return r;
    }

    bool run(std::vector<bool>& removed, std::vector<bool>& forbidden, std::vector<EliminationStep>& steps) {
        if (!infinite_path(c, out, removed)) return true;
        if (++visited > budget) return false;
        std::string k = key(removed, forbidden);
        if (failed.count(k)) return false;
        for (const auto& lc : candidates(removed, forbidden)) {
            auto r2 = removed;
            for (int i : lc.entries) r2[i] = true;
            auto f2 = forbidden;
            if (layered)
                for (int u : lc.body) f2[u] = true;
            steps.push_back({lc.start, lc.entries});
            if (run(r2, f2, steps)) return true;
            steps.pop_back();
        }
        failed.insert(k);
        return false;
    }
};

WitnessCheck replay(const EntryBodyLabeling& w, bool layered) {
    WitnessCheck res;
    res.guarded = true;
    for (const auto& t : w.trans)
        if (t.label == EMPTY && t.mark > 0) res.guarded = false;
    auto out = out_index(w);
    std::vector<bool> removed(w.trans.size(), false);
    std::vector<bool> forbidden(w.size(), false);
    std::map<int, std::map<int, std::vector<int>>> levels;
    for (int i = 0; i < static_cast<int>(w.trans.size()); ++i)
        if (w.trans[i].mark > 0) levels[w.trans[i].mark][w.trans[i].src].push_back(i);
    for (auto& [n, groups] : levels) {
        auto alive = reachable(w, out, removed);
        std::vector<LoopCandidate> loops;
        for (auto& [v, entries] : groups) {
            if (!alive[v]) {
                res.reason = "level " + std::to_string(n) + ": entries from vertex " + std::to_string(v) +
                             " are no longer reachable";
                return res;
            }
            if (layered && forbidden[v]) {
                res.reason = "level " + std::to_string(n) + ": vertex " + std::to_string(v) +
                             " lies in the body of an earlier eliminated loop";
                return res;
            }
            auto lc = candidate_impl(w, out, v, entries, removed);
            if (!lc.valid()) {
                res.reason = "level " + std::to_string(n) + ": entries at vertex " + std::to_string(v) +
                             " do not induce a loop (" + (lc.l1 ? "" : "L1 ") + (lc.l2 ? "" : "L2 ") +
                             (lc.l3 ? "" : "L3") + ")";
                return res;
            }
            loops.push_back(std::move(lc));
        }
        for (const auto& a : loops)
            for (const auto& b : loops)
                if (&a != &b && std::binary_search(b.body.begin(), b.body.end(), a.start)) {
                    res.reason = "level " + std::to_string(n) + ": loop start " + std::to_string(a.start) +
                                 " lies in the body of the loop at " + std::to_string(b.start);
                    return res;
                }
        for (const auto& l : loops) {
            for (int i : l.entries) removed[i] = true;
            for (int u : l.body) forbidden[u] = true;
        }
    }
    if (infinite_path(w, out, removed)) {
        res.reason = "an infinite path survives the recorded elimination";
        return res;
    }
    res.valid_llee = true;
    return res;
}

}  // namespace

EntryBodyLabeling labeling_from_run(const OneChart& c, const std::vector<EliminationStep>& run,
                                    const std::vector<int>& levels) {
    EntryBodyLabeling w = c;
    w.marked = true;
    for (auto& t : w.trans) t.mark = 0;
    for (std::size_t k = 0; k < run.size(); ++k)
        for (int i : run[k].entries) w.trans[i].mark = levels[k];
    return w;
}

LleeResult decide_llee(const OneChart& c) {
    LleeResult res;
    {
        Search s(c, true);
        std::vector<bool> removed(c.trans.size(), false), forbidden(c.size(), false);
        std::vector<EliminationStep> steps;
        if (s.run(removed, forbidden, steps)) {
            res.layered_run = steps;
            std::vector<int> levels(steps.size());
            for (std::size_t k = 0; k < steps.size(); ++k) levels[k] = static_cast<int>(k) + 1;
            // merge consecutive single steps into multi-steps while the recording stays valid
            for (std::size_t k = 1; k < steps.size(); ++k) {
                auto trial = levels;
                int base = levels[k - 1];
                for (std::size_t j = k; j < steps.size(); ++j) trial[j] = base + static_cast<int>(j - k);
                if (check_witness(labeling_from_run(c, steps, trial)).valid_llee) levels = trial;
            }
            res.witness = labeling_from_run(c, steps, levels);
        }
    }
    if (res.witness) {
        res.lee = true;
        res.lee_run = res.layered_run;
    } else {
        Search s(c, false);
        std::vector<bool> removed(c.trans.size(), false), forbidden(c.size(), false);
        std::vector<EliminationStep> steps;
        res.lee = s.run(removed, forbidden, steps);
        if (res.lee) res.lee_run = steps;
    }
    return res;
}

WitnessCheck check_witness(const EntryBodyLabeling& w) { return replay(w, true); }
WitnessCheck check_witness_lenient(const EntryBodyLabeling& w) { return replay(w, false); }

std::vector<int> loop_descendants(const EntryBodyLabeling& w, int v) {
    auto out = out_index(w);
    std::vector<bool> seen(w.size(), false);
    std::vector<int> stack;
    for (int i : out[v])
        if (w.trans[i].mark > 0 && w.trans[i].tgt != v && !seen[w.trans[i].tgt]) {
            seen[w.trans[i].tgt] = true;
            stack.push_back(w.trans[i].tgt);
        }
    while (!stack.empty()) {
        int u = stack.back();
        stack.pop_back();
        for (int i : out[u]) {
            const auto& t = w.trans[i];
            if (t.mark != 0 || t.tgt == v || seen[t.tgt]) continue;
            seen[t.tgt] = true;
            stack.push_back(t.tgt);
        }
    }
    std::vector<int> r;
    for (int u = 0; u < w.size(); ++u)
        if (seen[u]) r.push_back(u);
    return r;
}

namespace {

bool closure_irreflexive(int n, const std::vector<std::pair<int, int>>& rel) {
    std::vector<std::vector<int>> adj(n);
    for (auto [a, b] : rel) adj[a].push_back(b);
    for (int s = 0; s < n; ++s) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack(adj[s].begin(), adj[s].end());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (v == s) return false;
            if (seen[v]) continue;
            seen[v] = true;
            for (int w : adj[v]) stack.push_back(w);
        }
    }
    return true;
}

}  // namespace

LoopOrders loop_orders(const EntryBodyLabeling& w) {
    auto chk = check_witness(w);
    if (!chk.valid_llee) throw EliminationError("invalid witness: " + chk.reason);
    LoopOrders lo;
    for (int v = 0; v < w.size(); ++v)
        for (int u : loop_descendants(w, v)) lo.descends.emplace_back(v, u);
    int n = w.size();
    std::vector<std::vector<int>> adj(n);
    for (const auto& t : w.trans)
        if (t.mark == 0) adj[t.src].push_back(t.tgt);
    for (int s = 0; s < n; ++s) {
        std::vector<bool> seen(n, false);
        std::vector<int> stack(adj[s].begin(), adj[s].end());
        while (!stack.empty()) {
            int v = stack.back();
            stack.pop_back();
            if (seen[v]) continue;
            seen[v] = true;
            lo.body_order.emplace_back(s, v);
            for (int x : adj[v]) stack.push_back(x);
        }
    }
    lo.descends_acyclic = closure_irreflexive(n, lo.descends);
    lo.body_acyclic = closure_irreflexive(n, lo.body_order);
    return lo;
}

}  // namespace sx
