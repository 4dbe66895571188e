#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sx/syntax.hpp"

namespace sx {

// label of 1-transitions
constexpr char EMPTY = '1';

struct Transition {
    int src;
    char label;
    int tgt;
    int mark = 0;  // 0 = body, n >= 1 = loop entry of level n

    bool same_edge(const Transition& o) const { return src == o.src && label == o.label && tgt == o.tgt; }
};

bool edge_less(const Transition& a, const Transition& b);

struct OneChart {
    std::vector<char> alphabet;
    int start = 0;
    std::vector<bool> term;
    std::vector<std::string> names;  // free-form vertex names, may be empty
    std::vector<SExp> exprs;         // optional expression labels (nullptr if none)
    std::vector<Transition> trans;   // canonical order after canonicalize()
    bool marked = false;             // marks are meaningful (entry/body labeling)

    int size() const { return static_cast<int>(term.size()); }
    int add_vertex(bool terminates, std::string name = {}, SExp e = nullptr);
    void add(int src, char label, int tgt, int mark = 0);
    std::string vertex_label(int v) const;
};

// A OneChart whose marks are meaningful.
using EntryBodyLabeling = OneChart;

struct ChartError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// sorts transitions, merges duplicates (rejecting conflicting marks), fills the alphabet
void canonicalize(OneChart& c);
// throws ChartError on dangling endpoints, bad start, or EMPTY inside the alphabet
void validate(const OneChart& c);
// removes unreachable vertices keeping the relative order of ids; old2new[v] = -1 for removed vertices
OneChart normalize(const OneChart& c, std::vector<int>* old2new = nullptr);

std::vector<std::vector<int>> out_index(const OneChart& c);
// canonical list representation of the transitions from v: (label, tgt) pairs
std::vector<std::pair<char, int>> transition_list(const OneChart& c, int v);

bool has_empty_transitions(const OneChart& c);
bool is_weakly_guarded(const OneChart& c);
OneChart induced_chart(const OneChart& c);
Exp termination_constant(const OneChart& c, int v);
// the star expression standing for a transition label
Exp label_exp(char label);

struct FactorResult {
    OneChart chart;
    std::vector<int> proj;
};
// classes[v] is any class representative id; vertices with equal ids are identified
FactorResult factor_chart(const OneChart& c, const std::vector<int>& classes);

nlohmann::json to_json(const OneChart& c);
OneChart chart_from_json(const nlohmann::json& j);
std::string to_dot(const OneChart& c, const std::string& name = "chart");

// structural signature used by golden comparisons: vertex count, termination set, sorted transition multiset
std::string structure_signature(const OneChart& c);

// vertex bijection preserving start, termination, labelled transitions and (if marked) marks
std::optional<std::vector<int>> isomorphism(const OneChart& a, const OneChart& b);

}  // namespace sx
