#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"
#include "sx/chart.hpp"
#include "sx/proof.hpp"

namespace sx {

enum class Evidence { Certificate, Prover, Semantic, Unchecked };
// upper bound of the discharge ladder
enum class Mode { Certificate, Prover, Semantic };

std::string evidence_name(Evidence e);
std::optional<Mode> mode_from_name(const std::string& s);

struct VertexEvidence {
    Evidence kind = Evidence::Unchecked;
    D cert;  // concludes the correctness condition exactly (Certificate and Prover)
};

struct Solution {
    OneChart chart;
    std::vector<Exp> values;
    SystemId system;
    std::vector<VertexEvidence> evidence;

    Exp principal() const { return values.at(chart.start); }
};

struct SolutionError : std::runtime_error {
    int vertex;
    SolutionError(const std::string& msg, int v) : std::runtime_error(msg), vertex(v) {}
};

Solution make_solution(const OneChart& c, std::vector<Exp> values, SystemId sys = {});

// s(v) = tau(v) + sum over the canonical transition list of label.s(target)
FormalEq correctness_condition(const OneChart& c, const std::vector<Exp>& values, int v);
FormalEq correctness_condition(const Solution& s, int v);

// discharges every vertex: supplied certificate, then bounded prover, then bisimilarity, up to `mode`
Solution check_solution(const Solution& s, Mode mode, int depth = 12);
Evidence weakest(const Solution& s);

// pi(E) = tau(E) + sum l.pi(E') over the 1-steps of E, in Mil-
D ft_certificate(SExp E);
// x = tau + sum a.d over the derivatives of x (chart interpretation)
D chart_ft_certificate(Exp x);

struct Split {
    Exp f;
    D cert;  // e = 1 + f
};
Split split_termination(Exp e);

// identity solutions with certificates: pi of the vertex labels of a 1-chart interpretation,
// or the vertex expressions of a chart interpretation
Solution projection_solution(const OneChart& c);

struct Extraction {
    Solution solution;
    std::map<std::pair<int, int>, Exp> relative;  // t(w, v)
};
Extraction extract(const EntryBodyLabeling& w);

// provably equal rewriting: removes units and zeros, 0* = 1, (1+e)* = e*, and sums up to ACI
Normal simplify(Exp e);

// s1(v) = s2(v) in Mil for every vertex; certificates of both solutions are required
std::vector<D> solutions_equal_in_mil(const EntryBodyLabeling& w, const Solution& s1, const Solution& s2);

// phi maps vertices of c1 to vertices of c2
Solution pullback_solution(const std::vector<int>& phi, const OneChart& c1, const OneChart& c2, const Solution& s2,
                           bool certify = false);

nlohmann::json solution_to_json(const Solution& s);
Solution solution_from_json(const nlohmann::json& j);

}  // namespace sx
