#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "dacq/acquisition.hpp"
#include "dacq/info.hpp"
#include "dacq/join_graph.hpp"
#include "dacq/partition.hpp"
#include "dacq/purchase.hpp"
#include "dacq/report.hpp"
#include "dacq/sampling.hpp"

namespace {

bool log_enabled() {
    const char* v = std::getenv("DACQ_LOG");
    return v != nullptr && *v != '\0';
}

void log_line(const std::string& msg) {
    if (log_enabled()) std::cerr << "[dacq] " << msg << "\n";
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out) throw dacq::IngestionError("cannot write '" + path + "'");
    out << text;
}

struct CommonOpts {
    std::string manifest;
    std::string out;
    double theta = 0.1;
    std::size_t max_lhs = 3;
    double alpha = std::numeric_limits<double>::infinity();
    double beta = 0.0;
    double budget = std::numeric_limits<double>::infinity();
    double budget_ratio = 0.0;
    bool has_budget = false;
    bool has_ratio = false;
    std::size_t ell = 500;
    double rate = 1.0;
    std::size_t eta = 0;  // 0 means unbounded
    double resample_rate = 0.5;
    std::size_t landmarks = 0;  // 0 means ceil(log2 n)
    std::uint64_t seed = 0;
    std::string source;
    std::string target;
    std::string source_instances;
    std::string relation;
};

dacq::AttrSet parse_attr_list(const std::string& text) {
    dacq::AttrSet out;
    std::string cur;
    for (char c : text) {
        if (c == ',') {
            if (!cur.empty()) out.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(c))) {
            cur += c;
        }
    }
    if (!cur.empty()) out.push_back(cur);
    return dacq::normalize_attrs(out);
}

std::string canonical_config(const std::string& cmd, const CommonOpts& o) {
    std::string s = "cmd=" + cmd + ";manifest=" + o.manifest + ";theta=" +
                    dacq::format_number(o.theta) + ";max_lhs=" +
                    std::to_string(o.max_lhs) + ";alpha=" + dacq::format_number(o.alpha) +
                    ";beta=" + dacq::format_number(o.beta);
    if (o.has_budget) s += ";budget=" + dacq::format_number(o.budget);
    if (o.has_ratio) s += ";budget_ratio=" + dacq::format_number(o.budget_ratio);
    s += ";ell=" + std::to_string(o.ell) + ";rate=" + dacq::format_number(o.rate) +
         ";eta=" + std::to_string(o.eta) + ";resample_rate=" +
         dacq::format_number(o.resample_rate) + ";landmarks=" +
         std::to_string(o.landmarks) + ";seed=" + std::to_string(o.seed) +
         ";source=" + o.source + ";target=" + o.target +
         ";source_instances=" + o.source_instances + ";relation=" + o.relation;
    return s;
}

struct Pipeline {
    dacq::Catalog catalog;
    dacq::JoinGraph graph;
    dacq::LandmarkIndex landmarks;
    dacq::EstimatorConfig est;
};

Pipeline build_pipeline(const CommonOpts& o) {
    auto catalog = dacq::load_manifest(o.manifest);
    log_line("loaded " + std::to_string(catalog.relations().size()) + " relations");
    dacq::JoinGraphConfig cfg;
    cfg.sample_rate = o.rate;
    cfg.seed = o.seed;
    auto graph = dacq::JoinGraph::build(catalog.relations(), cfg);
    std::size_t n = graph.instance_count();
    std::size_t count = o.landmarks;
    if (count == 0) {
        count = 1;
        while ((1ull << count) < n) ++count;  // ceil(log2 n)
        count = std::min(count, n);
    }
    auto index = dacq::precompute_landmarks(graph, count, o.seed);
    dacq::EstimatorConfig est;
    est.sample_rate = o.rate;
    est.eta = o.eta == 0 ? dacq::kNoResampleCap : o.eta;
    est.resample_rate = o.resample_rate;
    est.afd = dacq::AFDConfig{o.theta, o.max_lhs};
    return Pipeline{std::move(catalog), std::move(graph), std::move(index), est};
}

dacq::AcquisitionRequest make_request(const CommonOpts& o) {
    dacq::AcquisitionRequest req;
    req.source_attrs = parse_attr_list(o.source);
    req.target_attrs = parse_attr_list(o.target);
    for (const auto& name : parse_attr_list(o.source_instances))
        req.source_instances.push_back(name);
    req.budget = o.budget;
    req.alpha = o.alpha;
    req.beta = o.beta;
    req.ell = o.ell;
    req.seed = o.seed;
    return req;
}

int cmd_profile(const CommonOpts& o) {
    auto catalog = dacq::load_manifest(o.manifest);
    dacq::PriceModel model;
    std::vector<dacq::ProfileEntry> entries;
    for (const auto& rel : catalog.relations()) {
        dacq::ProfileEntry e;
        e.relation = rel.name();
        e.rows = rel.rows();
        e.attr_count = rel.arity();
        if (rel.rows() > 0) {
            e.full_price = dacq::price_projection(
                rel, dacq::normalize_attrs(rel.attrs()), model);
            e.afds = dacq::discover_afds(rel, dacq::AFDConfig{o.theta, o.max_lhs});
        }
        entries.push_back(std::move(e));
    }
    auto hash = dacq::config_hash_hex(canonical_config("profile", o));
    write_output(o.out, dacq::render_profile_report(entries, hash, o.seed));
    return 0;
}

int cmd_acquire(const CommonOpts& o) {
    auto pipe = build_pipeline(o);
    auto req = make_request(o);
    auto hash = dacq::config_hash_hex(canonical_config("acquire", o));

    if (o.has_ratio) {
        auto bounds = dacq::oracle_price_bounds(pipe.graph, req, pipe.est,
                                                dacq::OracleGuards{});
        if (!bounds.any) {
            dacq::SearchReport none;
            none.seed = o.seed;
            none.reason = "no candidate satisfies the weight and quality constraints";
            write_output(o.out,
                         dacq::render_search_report(pipe.graph, none, req, hash));
            return 0;
        }
        req.budget = o.budget_ratio * bounds.ub;
        log_line("budget bounds lb=" + dacq::format_number(bounds.lb) +
                 " ub=" + dacq::format_number(bounds.ub) +
                 " budget=" + dacq::format_number(req.budget));
        if (req.budget < bounds.lb) {
            dacq::SearchReport none;
            none.seed = o.seed;
            none.reason = "budget ratio too small: r*UB=" +
                          dacq::format_number(req.budget) +
                          " is below LB=" + dacq::format_number(bounds.lb);
            write_output(o.out,
                         dacq::render_search_report(pipe.graph, none, req, hash));
            return 0;
        }
    }

    auto igraph = dacq::find_min_igraph(pipe.graph, pipe.landmarks, req);
    if (!igraph) {
        dacq::SearchReport none;
        none.seed = o.seed;
        none.reason = "no I-layer graph within the join-informativeness cap";
        write_output(o.out, dacq::render_search_report(pipe.graph, none, req, hash));
        return 0;
    }
    auto report = dacq::find_target_graph(pipe.graph, *igraph, req, pipe.est);
    write_output(o.out, dacq::render_search_report(pipe.graph, report, req, hash));
    return 0;
}

int cmd_eval(const CommonOpts& o) {
    using Clock = std::chrono::steady_clock;
    auto pipe = build_pipeline(o);
    auto req = make_request(o);
    auto hash = dacq::config_hash_hex(canonical_config("eval", o));
    dacq::OracleGuards guards;

    if (o.has_ratio) {
        auto bounds =
            dacq::oracle_price_bounds(pipe.graph, req, pipe.est, guards);
        if (!bounds.any || o.budget_ratio * bounds.ub < bounds.lb)
            throw dacq::InfeasibleError("budget ratio does not admit any candidate");
        req.budget = o.budget_ratio * bounds.ub;
    }

    const auto& originals = pipe.graph.samples();
    std::vector<dacq::EvalRow> rows;
    double heur_ms = 0, lp_ms = 0, gp_ms = 0;

    dacq::OracleOutcome gp;
    {
        auto t0 = Clock::now();
        gp = dacq::brute_force_gp(pipe.graph, originals, req, pipe.est, guards);
        gp_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
    }
    double gp_real = gp.found ? gp.eval.corr : 0.0;

    {
        auto t0 = Clock::now();
        auto igraph = dacq::find_min_igraph(pipe.graph, pipe.landmarks, req);
        dacq::EvalRow row;
        row.approach = "heuristic";
        if (igraph) {
            auto report = dacq::find_target_graph(pipe.graph, *igraph, req, pipe.est);
            if (report.found) {
                row.found = true;
                row.corr_est = report.eval.corr;
                auto exact = dacq::evaluate_target_graph(pipe.graph, &originals,
                                                         report.chosen, req, pipe.est);
                row.corr_real = exact.corr;
                row.quality = report.eval.quality;
                row.weight = report.eval.weight;
                row.price = report.eval.price;
                if (gp.found && gp_real > 0.0)
                    row.cd = std::max(
                        0.0, dacq::correlation_difference(gp_real, exact.corr));
            }
        }
        heur_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        rows.push_back(row);
    }
    {
        auto t0 = Clock::now();
        auto lp = dacq::brute_force_lp(pipe.graph, req, pipe.est, guards);
        lp_ms = std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
        dacq::EvalRow row;
        row.approach = "lp";
        if (lp.found) {
            row.found = true;
            row.corr_est = lp.eval.corr;
            auto exact = dacq::evaluate_target_graph(pipe.graph, &originals, lp.best,
                                                     req, pipe.est);
            row.corr_real = exact.corr;
            row.quality = lp.eval.quality;
            row.weight = lp.eval.weight;
            row.price = lp.eval.price;
            if (gp.found && gp_real > 0.0)
                row.cd =
                    std::max(0.0, dacq::correlation_difference(gp_real, exact.corr));
        }
        rows.push_back(row);
    }
    {
        dacq::EvalRow row;
        row.approach = "gp";
        if (gp.found) {
            row.found = true;
            row.corr_est = gp.eval.corr;
            row.corr_real = gp_real;
            row.cd = 0.0;
            row.quality = gp.eval.quality;
            row.weight = gp.eval.weight;
            row.price = gp.eval.price;
        }
        rows.push_back(row);
    }

    write_output(o.out, dacq::render_eval_report(rows, hash, o.seed));
    // wall times stay on stdout so reruns of the report stay byte-identical
    std::cout << "wall_ms heuristic " << dacq::format_number(heur_ms) << " lp "
              << dacq::format_number(lp_ms) << " gp " << dacq::format_number(gp_ms)
              << "\n";
    return 0;
}

int cmd_purchase(const CommonOpts& o) {
    auto catalog = dacq::load_manifest(o.manifest);
    const auto& rel = catalog.at(o.relation);
    dacq::PurchaseProblem problem;
    problem.relation = &rel;
    problem.theta = o.theta;
    problem.max_lhs = o.max_lhs;
    problem.ell = o.ell;
    problem.seed = o.seed;
    if (o.has_ratio) {
        double full = dacq::price_projection(rel, dacq::normalize_attrs(rel.attrs()),
                                             problem.price_model);
        problem.budget = o.budget_ratio * full;
    } else {
        problem.budget = o.budget;
    }
    auto result = dacq::mcmc_purchase(problem);
    auto hash = dacq::config_hash_hex(canonical_config("purchase", o));
    write_output(o.out, dacq::render_purchase_report(result, rel.name(), hash));
    return 0;
}

int cmd_export_graph(const CommonOpts& o) {
    auto pipe = build_pipeline(o);
    auto hash = dacq::config_hash_hex(canonical_config("export-graph", o));
    std::string text = "report graph\nconfig_hash " + hash + "\nseed " +
                       std::to_string(o.seed) + "\n" + pipe.graph.export_text() +
                       "end\n";
    write_output(o.out, text);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"marketplace data acquisition engine"};
    app.require_subcommand(1);
    CommonOpts o;

    auto add_common = [&](CLI::App* cmd, bool with_search) {
        cmd->add_option("--manifest", o.manifest, "catalog manifest file")->required();
        cmd->add_option("--out", o.out, "report output path (default: stdout)");
        cmd->add_option("--theta", o.theta, "AFD error threshold");
        cmd->add_option("--max-lhs", o.max_lhs, "AFD discovery lhs cap");
        cmd->add_option("--seed", o.seed, "RNG seed");
        if (with_search) {
            cmd->add_option("--alpha", o.alpha, "join informativeness cap");
            cmd->add_option("--beta", o.beta, "quality floor");
            auto* b = cmd->add_option("--budget", o.budget, "absolute budget");
            auto* r = cmd->add_option("--budget-ratio", o.budget_ratio,
                                      "budget as a fraction of the oracle UB");
            b->excludes(r);
            r->excludes(b);
            cmd->add_option("--ell", o.ell, "MCMC iterations");
            cmd->add_option("--rate", o.rate, "sampling rate");
            cmd->add_option("--eta", o.eta, "re-sampling threshold (0 = unbounded)");
            cmd->add_option("--resample-rate", o.resample_rate, "re-sampling rate");
            cmd->add_option("--landmarks", o.landmarks,
                            "landmark count (0 = ceil(log2 n))");
        }
    };

    auto* profile = app.add_subcommand("profile", "profile relations: AFDs, quality, prices");
    add_common(profile, false);

    auto* acquire = app.add_subcommand("acquire", "run an acquisition request");
    add_common(acquire, true);
    acquire->add_option("--source", o.source, "source attributes (comma separated)")
        ->required();
    acquire->add_option("--target", o.target, "target attributes (comma separated)")
        ->required();
    acquire->add_option("--source-instances", o.source_instances,
                        "restrict source coverage to these instances");

    auto* eval = app.add_subcommand("eval", "compare heuristic vs LP/GP oracles");
    add_common(eval, true);
    eval->add_option("--source", o.source, "source attributes")->required();
    eval->add_option("--target", o.target, "target attributes")->required();
    eval->add_option("--source-instances", o.source_instances,
                     "restrict source coverage to these instances");

    auto* purchase = app.add_subcommand("purchase", "single-dataset budgeted purchase");
    add_common(purchase, false);
    purchase->add_option("--relation", o.relation, "relation to buy from")->required();
    auto* pb = purchase->add_option("--budget", o.budget, "absolute budget");
    auto* pr = purchase->add_option("--budget-ratio", o.budget_ratio,
                                    "budget as a fraction of the full-schema price");
    pb->excludes(pr);
    pr->excludes(pb);
    purchase->add_option("--ell", o.ell, "MCMC iterations");

    auto* exportg = app.add_subcommand("export-graph", "dump the join graph");
    add_common(exportg, true);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }
    for (auto* sub : app.get_subcommands()) {
        auto* b = sub->get_option_no_throw("--budget");
        auto* r = sub->get_option_no_throw("--budget-ratio");
        if (b && b->count() > 0) o.has_budget = true;
        if (r && r->count() > 0) o.has_ratio = true;
    }

    try {
        if (profile->parsed()) return cmd_profile(o);
        if (acquire->parsed()) return cmd_acquire(o);
        if (eval->parsed()) return cmd_eval(o);
        if (purchase->parsed()) return cmd_purchase(o);
        if (exportg->parsed()) return cmd_export_graph(o);
    } catch (const dacq::Error& e) {
        std::cerr << "dacq: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "dacq: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
