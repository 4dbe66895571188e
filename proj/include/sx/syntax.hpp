#pragma once

#include <cstddef>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sx {

enum class Kind : std::uint8_t { Zero, One, Act, Sum, Prod, Star };

// Interned node. Two expressions are structurally equal iff their pointers are equal.
struct Node {
    Kind kind;
    char act;
    const Node* l;
    const Node* r;
    std::size_t hash;
    std::uint32_t size;
    std::uint16_t height;
    bool term;
};

using Exp = const Node*;

Exp zero();
Exp one();
Exp act(char a);
Exp sum(Exp l, Exp r);
Exp prod(Exp l, Exp r);
Exp star(Exp body);

// Left-associated n-ary sum; the empty sum is 0.
Exp sum_of(const std::vector<Exp>& xs);

inline bool is_sum(Exp e) { return e->kind == Kind::Sum; }
inline bool is_prod(Exp e) { return e->kind == Kind::Prod; }
inline bool is_star(Exp e) { return e->kind == Kind::Star; }

std::size_t star_height(Exp e);
bool terminates(Exp e);
std::size_t exp_size(Exp e);

// true iff some path of length >= 1 in the chart interpretation of e reaches a terminating vertex
bool strongly_normed(Exp e);

// total structural order, used wherever a canonical ordering is needed
int compare(Exp a, Exp b);
struct ExpLess {
    bool operator()(Exp a, Exp b) const { return compare(a, b) < 0; }
};

std::string print(Exp e);
void collect_actions(Exp e, std::vector<char>& out);

struct SyntaxError : std::runtime_error {
    std::size_t offset;
    SyntaxError(const std::string& msg, std::size_t off)
        : std::runtime_error(msg + " at offset " + std::to_string(off)), offset(off) {}
};

Exp parse(std::string_view text);

// ---- stacked star expressions ----

enum class SKind : std::uint8_t { Pure, ProdS, StackProd };

struct SNode {
    SKind kind;
    Exp e;            // Pure: the expression; ProdS: right factor; StackProd: body of the right iteration
    const SNode* l;   // left component for ProdS/StackProd
    std::size_t hash;
};

using SExp = const SNode*;

SExp pure(Exp e);
// ProdS(Pure e1, e2) is canonicalised to Pure(e1.e2)
SExp prods(SExp l, Exp r);
SExp stackprod(SExp l, Exp body);

bool terminates(SExp E);
Exp project(SExp E);
std::size_t star_height(SExp E);
int compare(SExp a, SExp b);

// machine format, '#' stands for the stacked product
std::string print(SExp E);
SExp parse_stacked(std::string_view text);

struct FormalEq {
    Exp lhs;
    Exp rhs;
    bool operator==(const FormalEq& o) const { return lhs == o.lhs && rhs == o.rhs; }
};

std::string print(const FormalEq& eq);

}  // namespace sx
