#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dacq/info.hpp"
#include "dacq/relation.hpp"
#include "dacq/sampling.hpp"

namespace dacq {

// Lattice of all attribute subsets of size >= 2 of one instance.
struct ASLattice {
    std::string instance;
    AttrSet schema;

    static std::uint64_t count_for(std::size_t m);  // 2^m - m - 1
    std::uint64_t vertex_count() const { return count_for(schema.size()); }
    // Materialized vertices, by size then lexicographic. Guarded at m <= 20.
    std::vector<AttrSet> vertices() const;
    // children of `v`: supersets with exactly one more attribute
    std::vector<AttrSet> children(const AttrSet& v) const;
};

// One join-attribute subset shared by an instance pair, with its estimated
// join informativeness. All AS-edges of the pair with these join attributes
// share this weight.
struct EdgeGroup {
    AttrSet join_attrs;
    double weight = 0.0;
};

struct IEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    double weight = 0.0;  // min over the pair's group weights
};

struct JoinGraphConfig {
    PriceModel price_model;
    double sample_rate = 1.0;  // 1.0 builds from the full instances
    std::uint64_t seed = 0;
    std::size_t max_shared_attrs = 16;
};

// Two-layer join graph: instance vertices with weighted edges, and implicit
// per-instance AS-lattices. AS-edge weights are stored once per
// (instance pair, join attrs) group; AS-vertex prices are computed on demand
// from the samples.
class JoinGraph {
  public:
    static JoinGraph build(std::vector<Relation> samples, const JoinGraphConfig& cfg);

    std::size_t instance_count() const { return samples_.size(); }
    const Relation& sample(std::size_t i) const { return samples_[i]; }
    const std::vector<Relation>& samples() const { return samples_; }
    std::size_t index_of(const std::string& name) const;
    bool has_instance(const std::string& name) const;

    const std::vector<IEdge>& i_edges() const { return i_edges_; }
    // neighbors with I-edge weights, by instance index
    const std::vector<std::vector<std::pair<std::size_t, double>>>& adjacency() const {
        return adj_;
    }

    bool joinable(std::size_t a, std::size_t b) const;
    const std::vector<EdgeGroup>& groups(std::size_t a, std::size_t b) const;
    double group_weight(std::size_t a, std::size_t b, const AttrSet& join_attrs) const;

    ASLattice lattice(std::size_t i) const;
    // AS-vertex price, estimated on a row sample drawn at the build rate.
    double vertex_price(std::size_t i, const AttrSet& attrs) const;

    const JoinGraphConfig& config() const { return cfg_; }

    // Deterministic structured-text dump (debugging surface).
    std::string export_text() const;

  private:
    JoinGraphConfig cfg_;
    std::vector<Relation> samples_;
    std::vector<Relation> price_samples_;
    std::map<std::string, std::size_t> index_;
    std::map<std::pair<std::size_t, std::size_t>, std::vector<EdgeGroup>> groups_;
    std::vector<IEdge> i_edges_;
    std::vector<std::vector<std::pair<std::size_t, double>>> adj_;
};

// One AS-vertex pick inside a target vertex set: the instance plus the target
// attributes it covers. A single covered attribute is realized later through
// any lattice vertex containing it.
struct TargetVertex {
    std::string instance;
    AttrSet covered;

    bool operator==(const TargetVertex& o) const {
        return instance == o.instance && covered == o.covered;
    }
    bool operator<(const TargetVertex& o) const {
        return instance != o.instance ? instance < o.instance : covered < o.covered;
    }
};
using TargetVertexSet = std::vector<TargetVertex>;  // sorted

// All unique ways to cover `attrs`: every irredundant cover of the attribute
// set by instance-supported groups, each group placed on an instance whose
// schema contains it, merged per instance. CoverageError if some attribute
// appears nowhere.
std::vector<TargetVertexSet> enumerate_target_vertex_sets(const JoinGraph& graph,
                                                          const AttrSet& attrs);

// Exact shortest weighted paths from every I-vertex to each landmark.
struct LandmarkIndex {
    std::vector<std::size_t> landmarks;
    std::vector<std::vector<double>> dist;          // [landmark][vertex]
    std::vector<std::vector<std::int64_t>> parent;  // toward the landmark, -1 root/unreached

    bool reaches(std::size_t landmark_pos, std::size_t vertex) const;
    // vertex list from `vertex` to the landmark, inclusive
    std::vector<std::size_t> path(std::size_t landmark_pos, std::size_t vertex) const;
};

LandmarkIndex precompute_landmarks(const JoinGraph& graph, std::size_t count,
                                   std::uint64_t seed);

}  // namespace dacq
