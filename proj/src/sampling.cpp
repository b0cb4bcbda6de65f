#include "dacq/sampling.hpp"

#include <algorithm>

#include "dacq/hashing.hpp"
#include "dacq/info.hpp"

namespace dacq {

double HashSampler::key_unit(const std::string& encoded_key) const {
    return unit_from_hash(hash_bytes(encoded_key, seed));
}

bool HashSampler::keeps(const std::string& encoded_key) const {
    return key_unit(encoded_key) < rate;
}

Relation correlated_sample(const Relation& rel, const AttrSet& join_attrs,
                           const HashSampler& s) {
    if (s.rate <= 0.0 || s.rate > 1.0)
        throw ArgumentError("sampling rate must be in (0,1]");
    if (s.rate == 1.0) return rel;
    auto cols = rel.attr_indexes(join_attrs);
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        // NULL keys can never join; they hash on the partition encoding so a
        // row's fate is still deterministic.
        auto key = rel.join_key(r, cols);
        if (s.keeps(key ? *key : rel.partition_key(r, cols)))
            keep.push_back(r);
    }
    return rel.take_rows(keep);
}

double estimate_ji(const Relation& left, const Relation& right, const AttrSet& on,
                   const HashSampler& s) {
    auto s1 = correlated_sample(left, on, s);
    auto s2 = correlated_sample(right, on, s);
    if (s1.rows() == 0 && s2.rows() == 0)
        throw DegenerateDistributionError("both samples are empty");
    return ji_from_pairs(full_outer_join_pairs(s1, s2, on));
}

namespace {

Relation resample_rows(const Relation& rel, double rate, std::uint64_t seed) {
    std::vector<std::size_t> keep;
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        auto h = hash_combine(seed, static_cast<std::uint64_t>(r));
        if (unit_from_hash(mix64(h)) < rate) keep.push_back(r);
    }
    return rel.take_rows(keep);
}

}  // namespace

Relation resampled_join(const JoinChain& chain,
                        const std::vector<HashSampler>& samplers,
                        const ResampleConfig& cfg) {
    if (chain.rels.size() < 2) throw ArgumentError("join chain needs >= 2 relations");
    if (chain.on.size() != chain.rels.size() - 1)
        throw ArgumentError("join chain: length mismatch between rels and on");
    if (!chain.sample_attrs.empty() && chain.sample_attrs.size() != chain.rels.size())
        throw ArgumentError("join chain: sample_attrs size mismatch");
    if (samplers.size() != chain.rels.size())
        throw ArgumentError("one sampler per relation required");
    if (cfg.resample_rate <= 0.0 || cfg.resample_rate > 1.0)
        throw ArgumentError("resample_rate must be in (0,1]");

    auto sampled = [&](std::size_t i) {
        const AttrSet& attrs = chain.sample_attrs.empty()
                                   ? (i == 0 ? chain.on[0] : chain.on[i - 1])
                                   : chain.sample_attrs[i];
        if (attrs.empty()) return *chain.rels[i];
        return correlated_sample(*chain.rels[i], attrs, samplers[i]);
    };

    Relation acc = sampled(0);
    std::uint64_t stage_seed = cfg.seed;
    for (std::size_t i = 1; i < chain.rels.size(); ++i) {
        acc = equi_join(acc, sampled(i), chain.on[i - 1]);
        // re-sampling applies to intermediates only, never the final result
        if (i + 1 < chain.rels.size() && acc.rows() > cfg.eta) {
            stage_seed = hash_combine(stage_seed, i);
            acc = resample_rows(acc, cfg.resample_rate, stage_seed);
        }
        if (cfg.stage_sizes) cfg.stage_sizes->push_back(acc.rows());
    }
    return acc;
}

CorrQualityEstimate estimate_corr_quality(const JoinChain& chain,
                                          const AttrSet& source_attrs,
                                          const AttrSet& target_attrs,
                                          const std::vector<FD>& fds,
                                          const std::vector<HashSampler>& samplers,
                                          const ResampleConfig& cfg) {
    auto joined = resampled_join(chain, samplers, cfg);
    if (joined.rows() == 0)
        throw EstimationError("resampled join is empty; retry with another seed",
                              cfg.seed);
    CorrQualityEstimate out;
    out.joined_rows = joined.rows();
    out.corr = correlation(joined, source_attrs, target_attrs);
    out.quality = quality_with_fds(joined, fds);
    return out;
}

}  // namespace dacq
