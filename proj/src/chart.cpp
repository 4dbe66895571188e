#include "sx/chart.hpp"

#include <algorithm>
#include <map>
#include <set>
#include <sstream>
#include <tuple>

namespace sx {

bool edge_less(const Transition& a, const Transition& b) {
    if (a.src != b.src) return a.src < b.src;
    if (a.label != b.label) return a.label < b.label;
    return a.tgt < b.tgt;
}

int OneChart::add_vertex(bool terminates, std::string name, SExp e) {
    term.push_back(terminates);
    names.push_back(std::move(name));
    exprs.push_back(e);
    return size() - 1;
}

void OneChart::add(int src, char label, int tgt, int mark) { trans.push_back({src, label, tgt, mark}); }

std::string OneChart::vertex_label(int v) const {
    if (v < static_cast<int>(exprs.size()) && exprs[v]) return print(exprs[v]);
    if (v < static_cast<int>(names.size())) return names[v];
    return {};
}

void canonicalize(OneChart& c) {
    std::sort(c.trans.begin(), c.trans.end(), edge_less);
    std::vector<Transition> out;
    for (const auto& t : c.trans) {
        if (!out.empty() && out.back().same_edge(t)) {
            if (out.back().mark != t.mark)
                throw ChartError("conflicting marks on transition " + std::to_string(t.src) + " -" + t.label + "-> " +
                                 std::to_string(t.tgt));
            continue;
        }
        out.push_back(t);
    }
    c.trans = std::move(out);
    std::set<char> alpha(c.alphabet.begin(), c.alphabet.end());
    for (const auto& t : c.trans)
        if (t.label != EMPTY) alpha.insert(t.label);
    c.alphabet.assign(alpha.begin(), alpha.end());
    c.names.resize(c.term.size());
    c.exprs.resize(c.term.size(), nullptr);
}

void validate(const OneChart& c) {
    int n = c.size();
    if (n == 0) throw ChartError("chart without vertices");
    if (c.start < 0 || c.start >= n) throw ChartError("start vertex out of range");
    for (char a : c.alphabet)
        if (a == EMPTY) throw ChartError("empty-step label inside the alphabet");
    for (const auto& t : c.trans) {
        if (t.src < 0 || t.src >= n || t.tgt < 0 || t.tgt >= n) throw ChartError("transition endpoint out of range");
        if (t.label != EMPTY && (t.label < 'a' || t.label > 'z')) throw ChartError("bad transition label");
        if (t.mark < 0) throw ChartError("negative mark");
    }
}

OneChart normalize(const OneChart& c, std::vector<int>* old2new) {
    int n = c.size();
    auto out = out_index(c);
    std::vector<bool> seen(n, false);
    std::vector<int> stack{c.start};
    seen[c.start] = true;
    while (!stack.empty()) {
        int v = stack.back();
        stack.pop_back();
        for (int i : out[v]) {
            int w = c.trans[i].tgt;
            if (!seen[w]) {
                seen[w] = true;
                stack.push_back(w);
            }
        }
    }
    std::vector<int> map(n, -1);
    OneChart r;
    r.alphabet = c.alphabet;
    r.marked = c.marked;
    for (int v = 0; v < n; ++v)
        if (seen[v]) map[v] = r.add_vertex(c.term[v], c.names[v], c.exprs[v]);
    r.start = map[c.start];
    for (const auto& t : c.trans)
        if (seen[t.src]) r.add(map[t.src], t.label, map[t.tgt], t.mark);
    canonicalize(r);
    if (old2new) *old2new = map;
    return r;
}

std::vector<std::vector<int>> out_index(const OneChart& c) {
    std::vector<std::vector<int>> out(c.size());
    for (int i = 0; i < static_cast<int>(c.trans.size()); ++i) out[c.trans[i].src].push_back(i);
    return out;
}

std::vector<std::pair<char, int>> transition_list(const OneChart& c, int v) {
    std::vector<std::pair<char, int>> r;
    for (const auto& t : c.trans)
        if (t.src == v) r.emplace_back(t.label, t.tgt);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
}

bool has_empty_transitions(const OneChart& c) {
    return std::any_of(c.trans.begin(), c.trans.end(), [](const Transition& t) { return t.label == EMPTY; });
}

bool is_weakly_guarded(const OneChart& c) {
    int n = c.size();
    std::vector<std::vector<int>> adj(n);
    std::vector<int> indeg(n, 0);
    for (const auto& t : c.trans)
        if (t.label == EMPTY) {
            adj[t.src].push_back(t.tgt);
            ++indeg[t.tgt];
        }
    std::vector<int> q;
    for (int v = 0; v < n; ++v)
        if (indeg[v] == 0) q.push_back(v);
    int done = 0;
    while (!q.empty()) {
        int v = q.back();
        q.pop_back();
        ++done;
        for (int w : adj[v])
            if (--indeg[w] == 0) q.push_back(w);
    }
    return done == n;
}

OneChart induced_chart(const OneChart& c) {
    if (!is_weakly_guarded(c)) throw ChartError("induced chart requires a weakly guarded 1-chart");
    int n = c.size();
    auto out = out_index(c);
    OneChart r;
    r.alphabet = c.alphabet;
    r.start = c.start;
    for (int v = 0; v < n; ++v) {
        // EMPTY-closure of v
        std::vector<bool> seen(n, false);
        std::vector<int> stack{v};
        seen[v] = true;
        bool t = false;
        std::vector<std::pair<char, int>> steps;
        while (!stack.empty()) {
            int u = stack.back();
            stack.pop_back();
            if (c.term[u]) t = true;
            for (int i : out[u]) {
                const auto& tr = c.trans[i];
                if (tr.label == EMPTY) {
                    if (!seen[tr.tgt]) {
                        seen[tr.tgt] = true;
                        stack.push_back(tr.tgt);
                    }
                } else {
                    steps.emplace_back(tr.label, tr.tgt);
                }
            }
        }
        r.add_vertex(t, c.names[v], c.exprs[v]);
        for (auto& [a, w] : steps) r.add(v, a, w);
    }
    canonicalize(r);
    return r;
}

Exp termination_constant(const OneChart& c, int v) {
    if (v < 0 || v >= c.size()) throw ChartError("unknown vertex " + std::to_string(v));
    return c.term[v] ? one() : zero();
}

Exp label_exp(char label) { return label == EMPTY ? one() : act(label); }

FactorResult factor_chart(const OneChart& c, const std::vector<int>& classes) {
    if (has_empty_transitions(c)) throw ChartError("factor chart expects a chart without 1-transitions");
    if (static_cast<int>(classes.size()) != c.size()) throw ChartError("equivalence does not cover all vertices");
    std::map<int, int> cls;
    FactorResult fr;
    fr.proj.resize(c.size());
    for (int v = 0; v < c.size(); ++v) {
        auto it = cls.find(classes[v]);
        if (it == cls.end()) {
            int id = fr.chart.add_vertex(c.term[v], c.names[v], c.exprs[v]);
            it = cls.emplace(classes[v], id).first;
        } else if (c.term[v]) {
            fr.chart.term[it->second] = true;
        }
        fr.proj[v] = it->second;
    }
    fr.chart.alphabet = c.alphabet;
    fr.chart.start = fr.proj[c.start];
    for (const auto& t : c.trans) fr.chart.add(fr.proj[t.src], t.label, fr.proj[t.tgt]);
    canonicalize(fr.chart);
    return fr;
}

nlohmann::json to_json(const OneChart& c) {
    nlohmann::json j;
    j["alphabet"] = nlohmann::json::array();
    for (char a : c.alphabet) j["alphabet"].push_back(std::string(1, a));
    j["start"] = c.start;
    j["vertices"] = nlohmann::json::array();
    for (int v = 0; v < c.size(); ++v) {
        nlohmann::json vj{{"id", v}, {"terminates", static_cast<bool>(c.term[v])}};
        std::string l = c.vertex_label(v);
        if (!l.empty()) vj["label"] = l;
        j["vertices"].push_back(vj);
    }
    j["transitions"] = nlohmann::json::array();
    for (const auto& t : c.trans) {
        nlohmann::json tj{{"src", t.src}, {"label", std::string(1, t.label)}, {"tgt", t.tgt}};
        if (c.marked) tj["mark"] = t.mark;
        j["transitions"].push_back(tj);
    }
    return j;
}

OneChart chart_from_json(const nlohmann::json& j) {
    OneChart c;
    try {
        std::map<int, int> ids;
        for (const auto& vj : j.at("vertices")) {
            int id = vj.at("id").get<int>();
            if (ids.count(id)) throw ChartError("duplicate vertex id " + std::to_string(id));
            std::string label = vj.value("label", std::string());
            SExp e = nullptr;
            if (!label.empty()) {
                try {
                    e = parse_stacked(label);
                } catch (const SyntaxError&) {
                    e = nullptr;
                }
            }
            ids[id] = c.add_vertex(vj.value("terminates", false), e ? std::string() : label, e);
        }
        auto lookup = [&](int id) {
            auto it = ids.find(id);
            if (it == ids.end()) throw ChartError("unknown vertex id " + std::to_string(id));
            return it->second;
        };
        c.start = lookup(j.at("start").get<int>());
        if (j.contains("alphabet"))
            for (const auto& a : j.at("alphabet")) {
                std::string s = a.get<std::string>();
                if (s.size() != 1) throw ChartError("bad action name '" + s + "'");
                c.alphabet.push_back(s[0]);
            }
        bool marked = false;
        for (const auto& tj : j.at("transitions")) {
            std::string l = tj.at("label").get<std::string>();
            if (l.size() != 1) throw ChartError("bad transition label '" + l + "'");
            int mark = 0;
            if (tj.contains("mark")) {
                mark = tj.at("mark").get<int>();
                marked = true;
            }
            c.add(lookup(tj.at("src").get<int>()), l[0], lookup(tj.at("tgt").get<int>()), mark);
        }
        c.marked = marked;
    } catch (const nlohmann::json::exception& ex) {
        throw ChartError(std::string("malformed chart json: ") + ex.what());
    }
    validate(c);
    canonicalize(c);
    return c;
}

namespace {

std::string dot_escape(const std::string& s) {
    std::string r;
    for (char ch : s) {
        if (ch == '"' || ch == '\\') r += '\\';
        r += ch;
    }
    return r;
}

}  // namespace

std::string to_dot(const OneChart& c, const std::string& name) {
    std::ostringstream os;
    os << "digraph \"" << dot_escape(name) << "\" {\n";
    os << "  rankdir=BT;\n";
    os << "  node [shape=circle, fontsize=10];\n";
    os << "  __start [shape=point, width=0.05];\n";
    for (int v = 0; v < c.size(); ++v) {
        std::string l = c.vertex_label(v);
        if (l.empty()) l = "v" + std::to_string(v);
        os << "  v" << v << " [label=\"" << dot_escape(l) << "\"";
        if (c.term[v]) os << ", shape=doublecircle";
        os << "];\n";
    }
    os << "  __start -> v" << c.start << ";\n";
    for (const auto& t : c.trans) {
        os << "  v" << t.src << " -> v" << t.tgt << " [label=\"" << t.label;
        if (c.marked && t.mark > 0) os << " [\xE2\x84\x93" << t.mark << "]";
        os << "\"";
        if (t.label == EMPTY) os << ", style=dotted";
        if (c.marked && t.mark > 0) os << ", color=darkcyan, fontcolor=darkcyan";
        os << "];\n";
    }
    os << "}\n";
    return os.str();
}

std::string structure_signature(const OneChart& c) {
    std::ostringstream os;
    os << "n=" << c.size() << " start=" << c.start << " term=";
    for (int v = 0; v < c.size(); ++v)
        if (c.term[v]) os << v << ',';
    os << " trans=";
    auto ts = c.trans;
    std::sort(ts.begin(), ts.end(), edge_less);
    for (const auto& t : ts) os << t.src << t.label << t.tgt << ':' << (c.marked ? t.mark : 0) << ';';
    return os.str();
}

namespace {

struct IsoSearch {
    const OneChart& a;
    const OneChart& b;
    std::vector<std::map<std::pair<char, int>, int>> out_a, out_b;  // (label, mark) -> count
    std::vector<int> fwd, bwd;

    IsoSearch(const OneChart& x, const OneChart& y) : a(x), b(y), out_a(x.size()), out_b(y.size()) {
        for (const auto& t : a.trans) ++out_a[t.src][{t.label, a.marked ? t.mark : 0}];
        for (const auto& t : b.trans) ++out_b[t.src][{t.label, b.marked ? t.mark : 0}];
        fwd.assign(a.size(), -1);
        bwd.assign(b.size(), -1);
    }

    bool compatible(int v, int w) const { return a.term[v] == b.term[w] && out_a[v] == out_b[w]; }

    // every transition of a between mapped vertices has its image in b
    bool consistent() const {
        std::multiset<std::tuple<int, char, int, int>> ea, eb;
        for (const auto& t : a.trans)
            if (fwd[t.src] >= 0 && fwd[t.tgt] >= 0) ea.insert({fwd[t.src], t.label, fwd[t.tgt], a.marked ? t.mark : 0});
        for (const auto& t : b.trans)
            if (bwd[t.src] >= 0 && bwd[t.tgt] >= 0) eb.insert({t.src, t.label, t.tgt, b.marked ? t.mark : 0});
        return ea == eb;
    }

    bool run(int v) {
        if (v == a.size()) return true;
        if (fwd[v] >= 0) return run(v + 1);
        for (int w = 0; w < b.size(); ++w) {
            if (bwd[w] >= 0 || !compatible(v, w)) continue;
            fwd[v] = w;
            bwd[w] = v;
            if (consistent() && run(v + 1)) return true;
            fwd[v] = -1;
            bwd[w] = -1;
        }
        return false;
    }
};

}  // namespace

std::optional<std::vector<int>> isomorphism(const OneChart& a, const OneChart& b) {
    if (a.size() != b.size() || a.trans.size() != b.trans.size() || a.marked != b.marked) return std::nullopt;
    IsoSearch s(a, b);
    if (!s.compatible(a.start, b.start)) return std::nullopt;
    s.fwd[a.start] = b.start;
    s.bwd[b.start] = a.start;
    if (!s.run(0)) return std::nullopt;
    return s.fwd;
}

}  // namespace sx
