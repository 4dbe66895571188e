#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sx/chart.hpp"

namespace sx {

using Relation = std::vector<std::pair<int, int>>;

// block ids of the coarsest bisimulation on the disjoint union of the induced charts;
// vertices of c2 are numbered from c1.size()
std::vector<int> bisim_blocks(const OneChart& c1, const OneChart& c2);

std::optional<Relation> one_bisimilar(const OneChart& c1, const OneChart& c2);
bool bisimilar(Exp e1, Exp e2);

// literal check of (forth), (back), (termination) over induced transitions, plus the start pair
bool is_one_bisimulation(const Relation& r, const OneChart& c1, const OneChart& c2);

bool check_functional(const std::vector<int>& phi, const OneChart& c1, const OneChart& c2);

// one step of a distinguishing play, empty if the charts are 1-bisimilar
std::string distinguish(const OneChart& c1, const OneChart& c2);

bool provability_bisim_harness(Exp e);

}  // namespace sx
