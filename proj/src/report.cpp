#include "dacq/report.hpp"

#include <cstdio>

#include "dacq/hashing.hpp"

namespace dacq {

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

std::string config_hash_hex(const std::string& canonical_config) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(hash_bytes(canonical_config, 0)));
    return buf;
}

std::string render_profile_report(const std::vector<ProfileEntry>& entries,
                                  const std::string& config_hash,
                                  std::uint64_t seed) {
    std::string out = "report profile\n";
    out += "config_hash " + config_hash + "\n";
    out += "seed " + std::to_string(seed) + "\n";
    out += "relations " + std::to_string(entries.size()) + "\n";
    for (const auto& e : entries) {
        out += "relation " + e.relation + " rows " + std::to_string(e.rows) +
               " attrs " + std::to_string(e.attr_count) + " price " +
               format_number(e.full_price) + "\n";
        for (const auto& d : e.afds)
            out += "  afd " + fd_to_string(d.fd) + " quality " +
                   format_number(d.quality) + " support " + std::to_string(d.support) +
                   "\n";
    }
    out += "end\n";
    return out;
}

std::string render_search_report(const JoinGraph& graph, const SearchReport& report,
                                 const AcquisitionRequest& req,
                                 const std::string& config_hash, bool include_trace) {
    std::string out = "report acquire\n";
    out += "config_hash " + config_hash + "\n";
    out += "seed " + std::to_string(report.seed) + "\n";
    out += "source_attrs " + attrs_to_string(req.source_attrs) + "\n";
    out += "target_attrs " + attrs_to_string(req.target_attrs) + "\n";
    out += std::string("status ") + (report.found ? "found" : "none") + "\n";
    if (!report.found) {
        if (!report.reason.empty()) out += "reason " + report.reason + "\n";
    } else {
        out += "instances " + std::to_string(report.chosen.vertices.size()) + "\n";
        for (auto v : report.chosen.vertices) {
            const auto& name = graph.sample(v).name();
            out += "query select " + attrs_to_string(report.eval.projections.at(v)) +
                   " from " + name + " price " +
                   format_number(graph.vertex_price(v, report.eval.projections.at(v))) +
                   "\n";
        }
        for (const auto& e : report.chosen.edges)
            out += "edge " + graph.sample(e.a).name() + " " + graph.sample(e.b).name() +
                   " join " + attrs_to_string(e.join_attrs) + " weight " +
                   format_number(graph.group_weight(e.a, e.b, e.join_attrs)) + "\n";
        out += "correlation " + format_number(report.eval.corr) + "\n";
        out += "quality " + format_number(report.eval.quality) + "\n";
        out += "weight " + format_number(report.eval.weight) + "\n";
        out += "price " + format_number(report.eval.price) + "\n";
    }
    out += "trace_length " + std::to_string(report.trace.size()) + "\n";
    std::size_t accepted = 0;
    for (const auto& t : report.trace) accepted += t.outcome == 'a';
    out += "trace_accepted " + std::to_string(accepted) + "\n";
    if (include_trace) {
        for (const auto& t : report.trace) {
            out += "trace ";
            out += t.outcome;
            out += ' ';
            out += format_number(t.corr);
            out += '\n';
        }
    }
    out += "end\n";
    return out;
}

std::string render_purchase_report(const PurchaseResult& result,
                                   const std::string& relation,
                                   const std::string& config_hash) {
    std::string out = "report purchase\n";
    out += "config_hash " + config_hash + "\n";
    out += "seed " + std::to_string(result.seed) + "\n";
    out += "relation " + relation + "\n";
    out += "best " + attrs_to_string(result.best) + "\n";
    out += "objective " + format_number(result.breakdown.total) + "\n";
    out += "error_term " + format_number(result.breakdown.error_term) + "\n";
    out += "size_term " + format_number(result.breakdown.size_term) + "\n";
    out += "useful_term " + format_number(result.breakdown.useful_term) + "\n";
    out += "amplification " + format_number(result.breakdown.amplification) + "\n";
    out += "price " + format_number(result.price) + "\n";
    out += "trace_length " + std::to_string(result.trace.size()) + "\n";
    out += "end\n";
    return out;
}

std::string render_eval_report(const std::vector<EvalRow>& rows,
                               const std::string& config_hash, std::uint64_t seed) {
    std::string out = "report eval\n";
    out += "config_hash " + config_hash + "\n";
    out += "seed " + std::to_string(seed) + "\n";
    for (const auto& r : rows) {
        out += "approach " + r.approach;
        if (!r.found) {
            out += " status none\n";
            continue;
        }
        out += " status found corr_est " + format_number(r.corr_est) + " corr_real " +
               format_number(r.corr_real) + " cd " + format_number(r.cd) + " quality " +
               format_number(r.quality) + " weight " + format_number(r.weight) +
               " price " + format_number(r.price) + "\n";
    }
    out += "end\n";
    return out;
}

}  // namespace dacq
