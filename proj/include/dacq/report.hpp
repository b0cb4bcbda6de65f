#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dacq/acquisition.hpp"
#include "dacq/join_graph.hpp"
#include "dacq/partition.hpp"
#include "dacq/purchase.hpp"

namespace dacq {

// Reports are plain structured text with a fixed key order so byte-identical
// reruns diff cleanly.

std::string format_number(double v);
std::string config_hash_hex(const std::string& canonical_config);

struct ProfileEntry {
    std::string relation;
    std::size_t rows = 0;
    std::size_t attr_count = 0;
    double full_price = 0.0;
    std::vector<DiscoveredFD> afds;
};

std::string render_profile_report(const std::vector<ProfileEntry>& entries,
                                  const std::string& config_hash,
                                  std::uint64_t seed);

std::string render_search_report(const JoinGraph& graph, const SearchReport& report,
                                 const AcquisitionRequest& req,
                                 const std::string& config_hash,
                                 bool include_trace = true);

std::string render_purchase_report(const PurchaseResult& result,
                                   const std::string& relation,
                                   const std::string& config_hash);

struct EvalRow {
    std::string approach;  // heuristic | lp | gp
    bool found = false;
    double corr_est = 0.0;
    double corr_real = 0.0;
    double cd = 0.0;  // vs gp real correlation
    double quality = 0.0;
    double weight = 0.0;
    double price = 0.0;
};

std::string render_eval_report(const std::vector<EvalRow>& rows,
                               const std::string& config_hash, std::uint64_t seed);

}  // namespace dacq
