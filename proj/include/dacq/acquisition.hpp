#pragma once

#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dacq/join_graph.hpp"
#include "dacq/partition.hpp"
#include "dacq/sampling.hpp"

namespace dacq {

struct AcquisitionRequest {
    std::vector<std::string> source_instances;  // optional; empty means "any"
    AttrSet source_attrs;
    AttrSet target_attrs;
    double budget = std::numeric_limits<double>::infinity();
    double alpha = std::numeric_limits<double>::infinity();  // join-informativeness cap
    double beta = 0.0;                                       // quality floor
    std::size_t ell = 500;                                   // MCMC iterations
    std::uint64_t seed = 0;
};

// How candidate target graphs are measured during the search.
struct EstimatorConfig {
    double sample_rate = 1.0;
    std::size_t eta = kNoResampleCap;
    double resample_rate = 0.5;
    AFDConfig afd;
};

// Minimal weighted I-layer graph connecting a source cover to a target cover.
struct IGraph {
    std::vector<std::size_t> vertices;  // sorted instance indexes
    std::vector<std::pair<std::size_t, std::size_t>> edges;  // a<b, sorted
    double weight = 0.0;
    std::vector<std::size_t> source_cover;
    std::vector<std::size_t> target_cover;
};

// Step 1: per candidate (source cover, target cover) pair and per common
// landmark, the union of stored shortest paths; returns the union graph of
// minimum total weight, or nullopt when that weight exceeds alpha.
std::optional<IGraph> find_min_igraph(const JoinGraph& graph,
                                      const LandmarkIndex& index,
                                      const AcquisitionRequest& req);

struct ChosenEdge {
    std::size_t a = 0;
    std::size_t b = 0;
    AttrSet join_attrs;
};

struct CandidateTG {
    std::vector<std::size_t> vertices;  // sorted
    std::vector<ChosenEdge> edges;
    std::vector<std::size_t> source_cover;
    std::vector<std::size_t> target_cover;
};

struct CandidateEval {
    std::map<std::size_t, AttrSet> projections;  // instance -> purchased attrs
    double price = 0.0;
    double weight = 0.0;
    double corr = 0.0;
    double quality = 0.0;
    bool join_nonempty = false;
};

// Measures one candidate target graph. With `originals` null the estimated
// basis is used: group weights and prices from the graph samples, correlation
// and quality from the resampled sample join. With `originals` set (aligned
// with the graph's instances by name) everything is computed exactly on the
// full data.
CandidateEval evaluate_target_graph(const JoinGraph& graph,
                                    const std::vector<Relation>* originals,
                                    const CandidateTG& cand,
                                    const AcquisitionRequest& req,
                                    const EstimatorConfig& est);

bool feasible(const CandidateEval& eval, const AcquisitionRequest& req);

struct TraceEntry {
    char outcome = 'n';  // 'a' accepted, 'r' rejected, 'i' infeasible, 'n' no-op
    double corr = 0.0;   // estimated correlation of the proposed graph
};

struct SearchReport {
    bool found = false;
    std::string reason;
    std::uint64_t seed = 0;
    CandidateTG chosen;
    CandidateEval eval;
    std::vector<TraceEntry> trace;
};

// Step 2: Metropolis walk over join-attribute-subset assignments of the
// I-graph edges, acceptance min(1, CORR'/CORR), tracking the best feasible
// sample.
SearchReport find_target_graph(const JoinGraph& graph, const IGraph& igraph,
                               const AcquisitionRequest& req,
                               const EstimatorConfig& est);

struct OracleGuards {
    std::size_t max_instances = 8;
    std::size_t max_groups_per_pair = 20;
    std::size_t max_candidates = 200000;
};

struct OracleOutcome {
    bool found = false;
    CandidateTG best;
    CandidateEval eval;
    std::size_t candidates_checked = 0;
};

// Exhaustive optimum over all (tree, join-attribute, cover) candidates.
// GP measures exactly on the originals, LP uses the same estimated basis as
// the heuristic.
OracleOutcome brute_force_gp(const JoinGraph& graph,
                             const std::vector<Relation>& originals,
                             const AcquisitionRequest& req,
                             const EstimatorConfig& est, const OracleGuards& guards);
OracleOutcome brute_force_lp(const JoinGraph& graph, const AcquisitionRequest& req,
                             const EstimatorConfig& est, const OracleGuards& guards);

// Price range over candidates feasible under every constraint but the budget.
struct PriceBounds {
    double lb = 0.0;
    double ub = 0.0;
    bool any = false;
};
PriceBounds oracle_price_bounds(const JoinGraph& graph, const AcquisitionRequest& req,
                                const EstimatorConfig& est,
                                const OracleGuards& guards);

// CD = (opt - heur) / opt, opt > 0.
double correlation_difference(double opt, double heur);

}  // namespace dacq
