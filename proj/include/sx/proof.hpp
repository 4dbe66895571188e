#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "json.hpp"
#include "sx/syntax.hpp"

namespace sx {

struct CoinductiveProof;

enum class Rule { Refl, Symm, Trans, Cxt, Axiom, Assume, RSPstar, USP1, USP, LCoind, Coind, ACIStep };

enum class System { MilMinus, Mil, MilPrime, MilPrimeBar, CMil, CMil1, CMilBar, CLC, CC, ACI };

struct SystemId {
    System sys = System::MilMinus;
    std::vector<FormalEq> assumptions;
};

std::string system_name(System s);
std::optional<System> system_from_name(const std::string& s);
std::string rule_name(Rule r);

struct DNode;
using D = std::shared_ptr<const DNode>;

struct DNode {
    Rule rule;
    FormalEq concl;
    std::vector<D> prem;
    std::string axiom;                               // Axiom: scheme name
    std::map<std::string, Exp> subst;                // Axiom: instantiation
    std::vector<int> path;                           // Cxt: position of the hole (0 = left/body, 1 = right)
    std::shared_ptr<const CoinductiveProof> witness; // LCoind / Coind
};

// ---- axiom schemes ----

const std::vector<std::string>& axiom_names();
// instantiates a scheme with metavariables e, f, g
FormalEq axiom_instance(const std::string& name, Exp e, Exp f = nullptr, Exp g = nullptr);
std::optional<std::map<std::string, Exp>> match_axiom(const std::string& name, const FormalEq& eq);

// ---- builders (conclusions are computed) ----

D refl(Exp e);
D symm(D d);
D trans(D a, D b);
Exp subterm(Exp e, const std::vector<int>& path);
Exp replace_at(Exp e, const std::vector<int>& path, Exp r);
// from d: x = y conclude C[x] = C[y] where whole is C[x] and path addresses the hole
D cxt(Exp whole, const std::vector<int>& path, D d);
D axiom(const std::string& name, Exp e, Exp f = nullptr, Exp g = nullptr);
D assume(const FormalEq& eq);
D aci_step(Exp lhs, Exp rhs);
// premise: e = f.e + g
D rsp_star(D premise);
D usp1(D p1, D p2);
// premises ordered (i, k) for i = 0..n-1, k = 0, 1 as p[2*i + k]
D usp(int n, std::vector<D> premises);
D lcoind(std::vector<D> premises, std::shared_ptr<const CoinductiveProof> w);
D coind(std::vector<D> premises, std::shared_ptr<const CoinductiveProof> w);

// chains x0 = x1 = ... with Trans; each step must start where the previous ended
class Chain {
public:
    explicit Chain(Exp start);
    Exp current() const { return cur_; }
    Chain& step(D d);
    Chain& at(const std::vector<int>& path, D d);
    D done() const;

private:
    Exp start_;
    Exp cur_;
    D proof_;
};

// ---- checking ----

struct CheckResult {
    bool ok = true;
    std::string error;
    std::string where;  // path of premise indices from the root
    explicit operator bool() const { return ok; }
};

CheckResult check_derivation(const D& d, const SystemId& s);
bool rule_allowed(Rule r, System s, std::size_t premises);
std::size_t count_rule(const D& d, Rule r);
std::size_t derivation_size(const D& d);

// ---- ACI ----

Exp aci_normalize(Exp e);
bool aci_eq(Exp a, Exp b);
// proves e = aci_normalize(e) with assoc+, comm+, idempot+ and EL only
D aci_primitive(Exp e);
// replaces every ACIStep node by a primitive derivation
D expand_aci(const D& d);

// ---- polynomial normal forms modulo the Mil- axioms without the star axioms ----

struct Normal {
    Exp nf;
    D proof;  // e = nf
};
Normal normalize_poly(Exp e);
// proof of x = y when both sides have the same normal form
std::optional<D> poly_eq(Exp x, Exp y);

// iterative deepening over star unfoldings, body 1-removal and assumption uses, modulo normal forms
std::optional<D> bounded_prove(Exp e, Exp f, const SystemId& s, int depth = 12);

// ---- rule elimination templates ----

struct TemplateError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
D mimic_instance_elimination(const D& d, Rule r, System target);
// replaces Assume nodes whose equation has a supplied derivation
D splice_assumptions(const D& d, const std::vector<std::pair<FormalEq, D>>& subs);

// ---- serialization ----

nlohmann::json derivation_to_json(const D& d);
D derivation_from_json(const nlohmann::json& j);
FormalEq parse_eq(const std::string& s);

}  // namespace sx
