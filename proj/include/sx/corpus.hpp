#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "sx/chart.hpp"
#include "sx/proof.hpp"

namespace sx {

using Rng = std::mt19937_64;

// uniform-ish random expression with exactly `size` nodes
Exp random_exp(Rng& rng, int size, const std::string& alphabet = "ab");

// distinct expressions of size 1..max_size, deterministic in the seed
std::vector<Exp> expression_corpus(std::uint64_t seed, int count, int max_size, const std::string& alphabet = "ab");

OneChart random_chart(Rng& rng, int vertices, const std::string& alphabet = "ab", double p_edge = 0.3,
                      double p_empty = 0.15, double p_term = 0.3);

// one sound Mil- rewrite at a random position; proof of e = e'
std::optional<D> random_rewrite(Rng& rng, Exp e);

// a chain of `steps` random rewrites starting at e
D random_rewrites(Rng& rng, Exp e, int steps);

struct RspTriple {
    Exp e, f, g;
    D premise;  // e = f.e + g in Mil-
};
// e is a rewritten form of f*.g with non-terminating f
RspTriple random_rsp_triple(Rng& rng, int size, int steps);

// random derivation in Mil (rewrites and RSP* instances)
D random_mil_derivation(Rng& rng, int size, int steps);

}  // namespace sx
