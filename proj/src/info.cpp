#include "dacq/info.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <unordered_map>

namespace dacq {

namespace {

inline double plog2p(double p) { return p > 0.0 ? p * std::log2(p) : 0.0; }

}  // namespace

DiscreteDistribution DiscreteDistribution::from_probs(std::vector<double> probs) {
    DiscreteDistribution d;
    d.probs = std::move(probs);
    d.validate();
    return d;
}

DiscreteDistribution DiscreteDistribution::from_counts(
    const std::vector<std::uint64_t>& counts) {
    std::uint64_t total = 0;
    for (auto c : counts) total += c;
    if (total == 0) throw ArgumentError("distribution with no mass");
    DiscreteDistribution d;
    d.probs.reserve(counts.size());
    for (auto c : counts)
        d.probs.push_back(static_cast<double>(c) / static_cast<double>(total));
    return d;
}

void DiscreteDistribution::validate() const {
    double sum = 0.0;
    for (double p : probs) {
        if (!(p >= 0.0)) throw ArgumentError("negative probability");
        sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9)
        throw ArgumentError("probabilities sum to " + std::to_string(sum));
    if (!support.empty() && support.size() != probs.size())
        throw ArgumentError("support/probs size mismatch");
}

double shannon_entropy(const DiscreteDistribution& d) {
    d.validate();
    double h = 0.0;
    for (double p : d.probs) h -= plog2p(p);
    return h;
}

double partition_entropy(const Relation& rel, const AttrSet& attrs) {
    if (rel.rows() == 0) throw ArgumentError("partition entropy of an empty relation");
    auto cols = rel.attr_indexes(attrs);
    std::unordered_map<std::string, std::uint64_t> counts;
    for (std::size_t r = 0; r < rel.rows(); ++r)
        counts[rel.partition_key(r, cols)]++;
    const double n = static_cast<double>(rel.rows());
    double h = 0.0;
    for (const auto& [k, c] : counts) h -= plog2p(static_cast<double>(c) / n);
    return h;
}

double mutual_information(const Relation& rel, const AttrSet& x, const AttrSet& y) {
    return partition_entropy(rel, x) + partition_entropy(rel, y) -
           partition_entropy(rel, attr_union(x, y));
}

double ji_from_pairs(const OuterJoinPairs& pairs) {
    if (pairs.total == 0)
        throw DegenerateDistributionError("outer join pair table is empty");
    const double total = static_cast<double>(pairs.total);

    // marginals over the pair table, NULL as an outcome of each side
    std::unordered_map<std::string, double> left_p, right_p;
    for (const auto& e : pairs.pairs) {
        double p = static_cast<double>(e.count) / total;
        left_p[e.left_null ? std::string("\x01N") : e.left_key] += p;
        right_p[e.right_null ? std::string("\x01N") : e.right_key] += p;
    }

    double h = 0.0;
    double i = 0.0;
    for (const auto& e : pairs.pairs) {
        double p = static_cast<double>(e.count) / total;
        h -= plog2p(p);
        if (!e.left_null && !e.right_null) {
            double px = left_p[e.left_key];
            double py = right_p[e.right_key];
            i += p * std::log2(p / (px * py));
        }
    }
    if (h <= 0.0)
        throw DegenerateDistributionError(
            "outer join key distribution has zero entropy");
    double ji = (h - i) / h;
    return std::clamp(ji, 0.0, 1.0);
}

double join_informativeness(const Relation& left, const Relation& right,
                            const AttrSet& on) {
    return ji_from_pairs(full_outer_join_pairs(left, right, on));
}

double cumulative_entropy(std::vector<double> values) {
    if (values.size() < 2) return 0.0;
    std::sort(values.begin(), values.end());
    const double n = static_cast<double>(values.size());
    double h = 0.0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        double width = values[i] - values[i - 1];
        if (width <= 0.0) continue;
        double p = static_cast<double>(i) / n;
        h -= width * plog2p(p);
    }
    return h;
}

namespace {

double conditional_cumulative_entropy(const Relation& rel, std::size_t xcol,
                                      const std::vector<std::size_t>& ycols) {
    // group rows by Y, weight h(X | y) by group mass; NULL X values are
    // dropped from the integral
    std::unordered_map<std::string, std::vector<double>> groups;
    std::unordered_map<std::string, std::uint64_t> group_rows;
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        auto key = rel.partition_key(r, ycols);
        group_rows[key]++;
        if (!rel.is_null(r, xcol)) groups[key].push_back(rel.cell_value(r, xcol));
    }
    const double n = static_cast<double>(rel.rows());
    double h = 0.0;
    for (auto& [key, vals] : groups)
        h += (static_cast<double>(group_rows[key]) / n) *
             cumulative_entropy(std::move(vals));
    return h;
}

}  // namespace

double correlation(const Relation& joined, const AttrSet& x, const AttrSet& y) {
    if (joined.rows() == 0) throw ArgumentError("correlation on an empty relation");
    if (x.empty() || y.empty()) throw ArgumentError("correlation needs both attribute sets");
    auto ycols = joined.attr_indexes(y);

    bool numeric_x = x.size() == 1 && joined.columns()[joined.attr_index(x[0])].numeric;
    if (numeric_x) {
        std::size_t xcol = joined.attr_index(x[0]);
        std::vector<double> values;
        values.reserve(joined.rows());
        for (std::size_t r = 0; r < joined.rows(); ++r)
            if (!joined.is_null(r, xcol)) values.push_back(joined.cell_value(r, xcol));
        return cumulative_entropy(std::move(values)) -
               conditional_cumulative_entropy(joined, xcol, ycols);
    }
    // categorical: H(X) - H(X|Y) = H(X) + H(Y) - H(XY)
    return mutual_information(joined, x, y);
}

double price_projection(const Relation& rel, const AttrSet& attrs,
                        const PriceModel& model) {
    if (model.a <= 0.0) throw ArgumentError("price model slope must be positive");
    if (model.b < 0.0) throw ArgumentError("price model intercept must be nonnegative");
    return model.a * partition_entropy(rel, attrs) + model.b;
}

}  // namespace dacq
