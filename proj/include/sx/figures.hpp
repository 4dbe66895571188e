#pragma once

#include <string>
#include <vector>

#include "sx/chart.hpp"
#include "sx/coind.hpp"

namespace sx {

// hand-built charts of the running examples; action labels are chosen where a drawing leaves them open

OneChart triangle_g1();   // X1, X2, X3 with actions a, b, c
OneChart two_cycle_g2();  // Y1 -a-> Y2 -b-> Y1, both terminating

// loop 1-chart started at v1 whose vertex v2 has a single a-transition back to v0
OneChart loop_chart();
// the same chart with the loop sub-1-chart at v2 marked (entry level 1)
EntryBodyLabeling loop_sub_chart();

// underlying 1-chart of the 1-chart interpretation of (a*.b*)*
OneChart lee_chart();
// the three layered witnesses of lee_chart
std::vector<EntryBodyLabeling> lee_witnesses();

OneChart layering_chart();
EntryBodyLabeling run_not_layered();  // records LEE but is not layered
EntryBodyLabeling run_layered();      // layered

// labels as drawn; certificates are not attached
CoinductiveProof proof_zero_tail();  // (a+b)*.0 = (a.(a+b)+b)*.0
CoinductiveProof proof_star_sum();   // (a*.b*)* = (a+b)*
// lhs-side values of the rejected mimicking attempt for f = a+1, over Mil- + {e = f.e + g}
CoinductiveProof proof_unguarded();

struct Figure {
    std::string name;
    std::string caption;
    OneChart chart;
};

// zero_tail, loop_sub_chart, lee_chart, run_not_layered, run_layered, lee_witness_1..3, star_products
std::vector<Figure> example_figures();

}  // namespace sx
