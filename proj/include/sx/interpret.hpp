#pragma once

#include <tuple>
#include <utility>
#include <vector>

#include "sx/chart.hpp"
#include "sx/syntax.hpp"

namespace sx {

struct BudgetExceeded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// closure budget, SX_VERTEX_BUDGET overrides the default of 100000
std::size_t vertex_budget();

// partial derivatives of the chart interpretation, sorted by (label, expression)
std::vector<std::pair<char, Exp>> derivatives(Exp e);

struct OneStep {
    char label;
    SExp tgt;
    int mark;
};

// transitions of the 1-chart interpretation, sorted by (label, target)
std::vector<OneStep> one_steps(SExp E);

std::vector<std::pair<char, SExp>> action_derivs(SExp E);

// vertex ids follow breadth-first discovery from the start (id 0)
OneChart chart_of(Exp e);
EntryBodyLabeling onechart_of(Exp e);

// chart interpretation closed under several roots, started at the first; later roots need not be reachable
OneChart chart_of_roots(const std::vector<Exp>& roots);

struct Projection {
    OneChart target;       // chart interpretation of the projected vertices, started at pi(start)
    std::vector<int> phi;  // vertex v of the witness goes to the vertex of pi(v)
};
Projection projection_map(const EntryBodyLabeling& w);

}  // namespace sx
