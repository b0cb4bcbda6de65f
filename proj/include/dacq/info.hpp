#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dacq/relation.hpp"

namespace dacq {

// All entropies are in bits (log base 2).

struct DiscreteDistribution {
    std::vector<std::string> support;
    std::vector<double> probs;

    static DiscreteDistribution from_probs(std::vector<double> probs);
    static DiscreteDistribution from_counts(const std::vector<std::uint64_t>& counts);
    void validate() const;  // ArgumentError unless nonnegative and sums to 1
};

double shannon_entropy(const DiscreteDistribution& d);

// Entropy of the equivalence-class sizes of rel over attrs:
// -sum (|eq|/n) log2 (|eq|/n).
double partition_entropy(const Relation& rel, const AttrSet& attrs);

// Standard empirical mutual information of two attribute sets,
// H(X) + H(Y) - H(XY).
double mutual_information(const Relation& rel, const AttrSet& x, const AttrSet& y);

// Join informativeness of the outer-join key distribution:
// (H - I) / H, in [0,1]. Matched keys carry all the mutual information;
// unmatched (value, NULL) pairs only add entropy, which is exactly the
// penalty for joins with poor key overlap. Lower is a better join.
double ji_from_pairs(const OuterJoinPairs& pairs);
double join_informativeness(const Relation& left, const Relation& right,
                            const AttrSet& on);

// Empirical cumulative entropy -integral P(X<=x) log2 P(X<=x) dx evaluated
// exactly on the empirical CDF staircase.
double cumulative_entropy(std::vector<double> values);

// Entropy-based correlation CORR(X, Y):
//   categorical X: H(X) - H(X|Y)
//   numerical X (single numeric attribute): h(X) - sum_y p(y) h(X|y)
// An attribute set is treated as one compound categorical variable.
double correlation(const Relation& joined, const AttrSet& x, const AttrSet& y);

struct PriceModel {
    double a = 1.0;
    double b = 0.0;
};

// Linear in partition entropy: a * H(pi_attrs) + b.
double price_projection(const Relation& rel, const AttrSet& attrs,
                        const PriceModel& model);

}  // namespace dacq
