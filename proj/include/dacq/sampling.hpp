#pragma once

#include <cstdint>
#include <limits>
#include <vector>

#include "dacq/partition.hpp"
#include "dacq/relation.hpp"

namespace dacq {

// Deterministic hash-of-join-key sampler. A key value is either fully in or
// fully out, so two relations sampled with the same seed stay joinable.
struct HashSampler {
    std::uint64_t seed = 0;
    double rate = 1.0;  // in (0, 1]

    // h(key) in [0,1); same seed, same key, same value.
    double key_unit(const std::string& encoded_key) const;
    bool keeps(const std::string& encoded_key) const;
};

// Rows whose hashed join-key falls below the rate.
Relation correlated_sample(const Relation& rel, const AttrSet& join_attrs,
                           const HashSampler& s);

// JI computed on the two correlated samples (Theorem-style estimator).
double estimate_ji(const Relation& left, const Relation& right, const AttrSet& on,
                   const HashSampler& s);

constexpr std::size_t kNoResampleCap = std::numeric_limits<std::size_t>::max();

struct ResampleConfig {
    std::size_t eta = kNoResampleCap;  // intermediate-size threshold
    double resample_rate = 0.5;        // in (0, 1]
    std::uint64_t seed = 0;
    // when set, receives each intermediate row count after optional re-sampling
    std::vector<std::size_t>* stage_sizes = nullptr;
};

// A join chain: rels[0] join rels[1] on `on[0]`, the result joins rels[2] on
// `on[1]`, and so on. samplers[i] draws the correlated sample of rels[i] on
// its own join attributes.
struct JoinChain {
    std::vector<const Relation*> rels;
    std::vector<AttrSet> on;              // size = rels.size() - 1
    std::vector<AttrSet> sample_attrs;    // per relation; empty -> no sampling
};

// Left-fold of equi-joins over the correlated samples. Whenever an
// intermediate result exceeds eta rows it is row-sampled at resample_rate
// before the next join.
Relation resampled_join(const JoinChain& chain,
                        const std::vector<HashSampler>& samplers,
                        const ResampleConfig& cfg);

struct CorrQualityEstimate {
    double corr = 0.0;
    double quality = 0.0;
    std::size_t joined_rows = 0;
};

// Correlation and quality measured on the resampled join. Throws
// EstimationError carrying the seed if the resampled join comes out empty.
CorrQualityEstimate estimate_corr_quality(const JoinChain& chain,
                                          const AttrSet& source_attrs,
                                          const AttrSet& target_attrs,
                                          const std::vector<FD>& fds,
                                          const std::vector<HashSampler>& samplers,
                                          const ResampleConfig& cfg);

}  // namespace dacq
