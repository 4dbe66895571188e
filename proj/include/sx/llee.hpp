#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sx/chart.hpp"

namespace sx {

struct LoopCandidate {
    int start = -1;
    std::vector<int> entries;      // indices into the chart's transitions
    std::vector<int> body;         // loop vertices other than the start, ascending
    std::vector<int> transitions;  // all transitions of the loop sub-1-chart, ascending
    bool l1 = false;               // an infinite path exists
    bool l2 = false;               // every infinite path returns to the start
    bool l3 = false;               // only the start may terminate
    bool valid() const { return l1 && l2 && l3; }
};

// `removed` masks transitions that are no longer present (may be empty)
LoopCandidate loop_candidate(const OneChart& c, int v, const std::vector<int>& entries,
                             const std::vector<bool>& removed = {});

struct EliminationError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// removes the entries of all loops at once and collects garbage; the result is renumbered
OneChart eliminate(const OneChart& c, const std::vector<LoopCandidate>& loops);

bool has_infinite_path(const OneChart& c, const std::vector<bool>& removed = {});

struct EliminationStep {
    int start;
    std::vector<int> entries;
};

struct LleeResult {
    std::optional<EntryBodyLabeling> witness;  // layered run recorded as marks
    bool lee = false;                          // plain loop elimination succeeds
    std::vector<EliminationStep> layered_run;
    std::vector<EliminationStep> lee_run;
};

// depth-first search over single-step eliminations; the layered run is compacted into multi-steps
LleeResult decide_llee(const OneChart& c);

struct WitnessCheck {
    bool valid_llee = false;
    bool guarded = false;
    std::string reason;
};

WitnessCheck check_witness(const EntryBodyLabeling& w);
// accepts non-layered recordings (diagnostics only)
WitnessCheck check_witness_lenient(const EntryBodyLabeling& w);

struct LoopOrders {
    std::vector<std::pair<int, int>> descends;   // (v, w): v descends in a loop to w
    std::vector<std::pair<int, int>> body_order; // (v, w): w reachable from v by body steps
    bool descends_acyclic = false;
    bool body_acyclic = false;
};

LoopOrders loop_orders(const EntryBodyLabeling& w);

// direct loop descendants: vertices w with v -[entry]-> v' -body*-> w avoiding v
std::vector<int> loop_descendants(const EntryBodyLabeling& w, int v);

EntryBodyLabeling labeling_from_run(const OneChart& c, const std::vector<EliminationStep>& run,
                                    const std::vector<int>& levels);

}  // namespace sx
