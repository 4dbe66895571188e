#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sx/proof.hpp"
#include "sx/solve.hpp"

namespace sx {

struct CoinductiveProof {
    OneChart chart;     // marked iff LLEE-witnessed
    SystemId base;      // S + Gamma
    Solution lhs;       // left-hand sides of the labels
    Solution rhs;       // right-hand sides of the labels

    bool llee() const { return chart.marked; }
    FormalEq label(int v) const { return {lhs.values.at(v), rhs.values.at(v)}; }
};

FormalEq coind_conclusion(const CoinductiveProof& p);

CoinductiveProof make_coind_proof(const OneChart& c, const std::vector<FormalEq>& labels, SystemId base);

struct CoindCheck {
    bool ok = false;
    int vertex = -1;
    std::string side;  // "lhs", "rhs" or empty
    std::string reason;
    Evidence weakest = Evidence::Certificate;
    explicit operator bool() const { return ok; }
};

// (cp1) and (cp2); in certificate mode only supplied certificates count
CoindCheck check_coind_proof(const CoinductiveProof& p, Mode mode = Mode::Certificate);
// side condition of LCoind / Coind: valid over Mil- + gamma with certificates only
bool check_coind_side(const CoinductiveProof& p, const std::vector<FormalEq>& gamma, bool need_llee,
                      std::string& err);
// fills missing certificates with the bounded prover
CoinductiveProof certify(const CoinductiveProof& p, int depth = 12);

struct NotGuarded : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// proof of e = f*.g over Mil- + {e = f.e + g}
CoinductiveProof mimic_rspstar(Exp e, Exp f, Exp g);

struct TransformError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

D coind_to_mil(const CoinductiveProof& p, const std::vector<std::pair<FormalEq, D>>& assumptions);
D transform(const D& d, System from, System to);

std::optional<D> product_cc_proof(Exp e1, Exp e2);

enum class JointMode { Expansion, Minimization };
// expansion: maps go from c to the 1-chart interpretations of e1 and e2;
// minimization: maps go from the 1-chart interpretations of e1 and e2 to c
D joint_llee_completeness(Exp e1, Exp e2, const EntryBodyLabeling& c, JointMode mode, const std::vector<int>& phi1,
                          const std::vector<int>& phi2);
// backtracking search for a functional 1-bisimulation from c1 to c2
std::optional<std::vector<int>> find_functional(const OneChart& c1, const OneChart& c2);

nlohmann::json coind_to_json(const CoinductiveProof& p);
std::shared_ptr<CoinductiveProof> coind_from_json(const nlohmann::json& j);

}  // namespace sx
