#pragma once

#include <cstdint>
#include <vector>

#include "dacq/info.hpp"
#include "dacq/partition.hpp"
#include "dacq/relation.hpp"

namespace dacq {

// Budget-constrained single-dataset purchase: pick the affordable attribute
// subset maximizing F(X) = (1 - error(X)) + a|X|/m + |U|/|X|, a = m * theta.
struct PurchaseProblem {
    const Relation* relation = nullptr;
    PriceModel price_model;
    double budget = 0.0;
    double theta = 0.1;
    std::size_t max_lhs = 3;   // AFD discovery cap
    std::size_t ell = 1000;    // MCMC iterations
    std::uint64_t seed = 0;
    bool joint_error = false;  // error(X) as 1 - Q under all AFDs inside X
};

struct ObjectiveBreakdown {
    double error = 0.0;        // error(X)
    double error_term = 0.0;   // 1 - error(X)
    double size_term = 0.0;    // a * |X| / m
    double useful_term = 0.0;  // |U| / |X|
    double total = 0.0;
    double amplification = 0.0;  // a = m * theta
};

// Sum over minimal AFDs F: L->R with L+{R} inside X of |L+{R}|; an attribute
// is counted once per AFD it appears in.
std::size_t useful_count(const Relation& rel, const AttrSet& x, double theta,
                         std::size_t max_lhs = 3);

ObjectiveBreakdown objective(const Relation& rel, const AttrSet& x,
                             const PurchaseProblem& problem);

// Members of S plus every outside attribute whose addition stays affordable.
AttrSet candidate_set(const Relation& rel, const AttrSet& s,
                      const PriceModel& prices, double budget);

struct PurchaseTraceEntry {
    char outcome = 'r';  // 'a' accepted, 'r' rejected, 'n' no-op
    double objective = 0.0;
};

struct PurchaseResult {
    AttrSet best;
    ObjectiveBreakdown breakdown;
    double price = 0.0;
    std::vector<PurchaseTraceEntry> trace;
    std::uint64_t seed = 0;
};

// Metropolis-Hastings over single-attribute flips with candidate density
// 1/|C(X)|, returning the best-objective affordable set visited.
PurchaseResult mcmc_purchase(const PurchaseProblem& problem);

// Exact argmax of F over affordable nonempty subsets; guarded at m <= 16.
PurchaseResult brute_force_bcqd(const PurchaseProblem& problem);

}  // namespace dacq
