#include "dacq/acquisition.hpp"

#include <algorithm>
#include <queue>
#include <random>
#include <set>
#include <unordered_map>

#include "dacq/hashing.hpp"
#include "dacq/info.hpp"

namespace dacq {

namespace {

void validate_request(const AcquisitionRequest& req) {
    if (req.source_attrs.empty() || req.target_attrs.empty())
        throw ArgumentError("request needs nonempty source and target attribute sets");
    if (req.budget < 0.0) throw ArgumentError("budget must be nonnegative");
    if (req.alpha < 0.0) throw ArgumentError("alpha must be nonnegative");
    if (req.beta < 0.0 || req.beta > 1.0) throw ArgumentError("beta must be in [0,1]");
    if (req.ell < 1) throw ArgumentError("ell must be >= 1");
}

// All minimal instance sets whose united schemas cover `attrs`.
std::vector<std::vector<std::size_t>> minimal_instance_covers(const JoinGraph& graph,
                                                              const AttrSet& attrs) {
    std::vector<std::vector<std::size_t>> holders(attrs.size());
    for (std::size_t k = 0; k < attrs.size(); ++k) {
        for (std::size_t i = 0; i < graph.instance_count(); ++i)
            if (graph.sample(i).has_attr(attrs[k])) holders[k].push_back(i);
        if (holders[k].empty())
            throw CoverageError("attribute '" + attrs[k] + "' is not sold by any instance",
                                attrs[k]);
    }
    std::size_t combos = 1;
    for (const auto& h : holders) {
        combos *= h.size();
        if (combos > 100000)
            throw CapacityError("too many instance covers to enumerate");
    }
    std::set<std::vector<std::size_t>> sets;
    std::vector<std::size_t> choice(attrs.size(), 0);
    while (true) {
        std::set<std::size_t> used;
        for (std::size_t k = 0; k < attrs.size(); ++k) used.insert(holders[k][choice[k]]);
        sets.emplace(used.begin(), used.end());
        std::size_t k = 0;
        while (k < attrs.size() && ++choice[k] == holders[k].size()) {
            choice[k] = 0;
            ++k;
        }
        if (k == attrs.size()) break;
    }
    std::vector<std::vector<std::size_t>> out;
    for (const auto& s : sets) {
        bool minimal = true;
        for (const auto& t : sets) {
            if (t.size() < s.size() &&
                std::includes(s.begin(), s.end(), t.begin(), t.end())) {
                minimal = false;
                break;
            }
        }
        if (minimal) out.push_back(s);
    }
    return out;
}

std::map<std::pair<std::size_t, std::size_t>, double> iedge_weights(
    const JoinGraph& graph) {
    std::map<std::pair<std::size_t, std::size_t>, double> w;
    for (const auto& e : graph.i_edges()) w[{e.a, e.b}] = e.weight;
    return w;
}

struct UnionGraph {
    std::set<std::size_t> vertices;
    std::set<std::pair<std::size_t, std::size_t>> edges;
    double weight = 0.0;
};

void add_path(UnionGraph& g, const std::vector<std::size_t>& path,
              const std::map<std::pair<std::size_t, std::size_t>, double>& weights) {
    for (std::size_t i = 0; i < path.size(); ++i) {
        g.vertices.insert(path[i]);
        if (i + 1 < path.size()) {
            auto a = std::min(path[i], path[i + 1]);
            auto b = std::max(path[i], path[i + 1]);
            if (g.edges.insert({a, b}).second) g.weight += weights.at({a, b});
        }
    }
}

bool better(const UnionGraph& a, const UnionGraph& b) {
    if (a.weight != b.weight) return a.weight < b.weight;
    if (a.vertices.size() != b.vertices.size())
        return a.vertices.size() < b.vertices.size();
    if (a.vertices != b.vertices)
        return std::lexicographical_compare(a.vertices.begin(), a.vertices.end(),
                                            b.vertices.begin(), b.vertices.end());
    return a.edges < b.edges;
}

// Dijkstra fallback when the terminals share no landmark.
std::optional<UnionGraph> direct_paths_graph(
    const JoinGraph& graph, const std::vector<std::size_t>& terminals,
    const std::map<std::pair<std::size_t, std::size_t>, double>& weights) {
    const auto& adj = graph.adjacency();
    std::size_t n = graph.instance_count();
    std::size_t root = terminals.front();
    std::vector<double> dist(n, std::numeric_limits<double>::infinity());
    std::vector<std::int64_t> parent(n, -1);
    using Item = std::pair<double, std::size_t>;
    std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
    dist[root] = 0.0;
    pq.push({0.0, root});
    while (!pq.empty()) {
        auto [d, v] = pq.top();
        pq.pop();
        if (d > dist[v]) continue;
        for (auto [u, w] : adj[v]) {
            if (d + w < dist[u]) {
                dist[u] = d + w;
                parent[u] = static_cast<std::int64_t>(v);
                pq.push({dist[u], u});
            }
        }
    }
    UnionGraph g;
    for (auto t : terminals) {
        if (dist[t] == std::numeric_limits<double>::infinity()) return std::nullopt;
        std::vector<std::size_t> path{t};
        std::size_t cur = t;
        while (parent[cur] >= 0) {
            cur = static_cast<std::size_t>(parent[cur]);
            path.push_back(cur);
        }
        add_path(g, path, weights);
    }
    return g;
}

}  // namespace

std::optional<IGraph> find_min_igraph(const JoinGraph& graph,
                                      const LandmarkIndex& index,
                                      const AcquisitionRequest& req) {
    validate_request(req);
    std::vector<std::vector<std::size_t>> source_covers;
    if (!req.source_instances.empty()) {
        std::vector<std::size_t> sv;
        AttrSet united;
        for (const auto& name : req.source_instances) {
            sv.push_back(graph.index_of(name));
            united = attr_union(united, normalize_attrs(graph.sample(sv.back()).attrs()));
        }
        for (const auto& a : req.source_attrs)
            if (std::find(united.begin(), united.end(), a) == united.end())
                throw CoverageError("source attribute '" + a +
                                        "' is not in the source instances",
                                    a);
        std::sort(sv.begin(), sv.end());
        sv.erase(std::unique(sv.begin(), sv.end()), sv.end());
        source_covers.push_back(std::move(sv));
    } else {
        source_covers = minimal_instance_covers(graph, req.source_attrs);
    }
    auto target_covers = minimal_instance_covers(graph, req.target_attrs);
    auto weights = iedge_weights(graph);

    std::optional<UnionGraph> best;
    std::vector<std::size_t> best_sv, best_tv;
    for (const auto& sv : source_covers) {
        for (const auto& tv : target_covers) {
            std::vector<std::size_t> terminals;
            std::set<std::size_t> term_set(sv.begin(), sv.end());
            term_set.insert(tv.begin(), tv.end());
            terminals.assign(term_set.begin(), term_set.end());

            bool found_landmark = false;
            for (std::size_t lp = 0; lp < index.landmarks.size(); ++lp) {
                bool common = true;
                for (auto t : terminals) common = common && index.reaches(lp, t);
                if (!common) continue;
                found_landmark = true;
                UnionGraph g;
                g.vertices.insert(index.landmarks[lp]);
                for (auto t : terminals) add_path(g, index.path(lp, t), weights);
                if (!best || better(g, *best)) {
                    best = g;
                    best_sv = sv;
                    best_tv = tv;
                }
            }
            if (!found_landmark) {
                if (auto g = direct_paths_graph(graph, terminals, weights)) {
                    if (!best || better(*g, *best)) {
                        best = *g;
                        best_sv = sv;
                        best_tv = tv;
                    }
                }
            }
        }
    }
    if (!best) return std::nullopt;
    if (best->weight > req.alpha) return std::nullopt;

    IGraph out;
    out.vertices.assign(best->vertices.begin(), best->vertices.end());
    out.edges.assign(best->edges.begin(), best->edges.end());
    out.weight = best->weight;
    out.source_cover = best_sv;
    out.target_cover = best_tv;
    return out;
}

namespace {

AttrSet schema_overlap(const Relation& rel, const AttrSet& attrs) {
    return attr_intersection(normalize_attrs(rel.attrs()), attrs);
}

}  // namespace

CandidateEval evaluate_target_graph(const JoinGraph& graph,
                                    const std::vector<Relation>* originals,
                                    const CandidateTG& cand,
                                    const AcquisitionRequest& req,
                                    const EstimatorConfig& est) {
    CandidateEval eval;
    const bool exact = originals != nullptr;
    auto original_of = [&](std::size_t v) -> const Relation& {
        for (const auto& r : *originals)
            if (r.name() == graph.sample(v).name()) return r;
        throw ArgumentError("originals are missing instance '" +
                            graph.sample(v).name() + "'");
    };

    // projection attributes: incident join attrs plus covered request attrs
    std::map<std::size_t, AttrSet> proj;
    for (auto v : cand.vertices) proj[v] = {};
    for (const auto& e : cand.edges) {
        proj[e.a] = attr_union(proj[e.a], e.join_attrs);
        proj[e.b] = attr_union(proj[e.b], e.join_attrs);
    }
    for (auto v : cand.source_cover)
        proj[v] = attr_union(proj[v], schema_overlap(graph.sample(v), req.source_attrs));
    for (auto v : cand.target_cover)
        proj[v] = attr_union(proj[v], schema_overlap(graph.sample(v), req.target_attrs));
    // lattice floor: a purchased vertex has at least two attributes when the
    // schema allows it
    for (auto& [v, attrs] : proj) {
        AttrSet schema = normalize_attrs(graph.sample(v).attrs());
        for (const auto& a : schema) {
            if (attrs.size() >= 2) break;
            if (std::find(attrs.begin(), attrs.end(), a) == attrs.end())
                attrs = attr_union(attrs, {a});
        }
        if (attrs.empty()) throw ArgumentError("instance with empty projection");
    }
    eval.projections = proj;

    for (const auto& [v, attrs] : proj)
        eval.price += exact
                          ? price_projection(original_of(v), attrs,
                                             graph.config().price_model)
                          : graph.vertex_price(v, attrs);
    for (const auto& e : cand.edges)
        eval.weight += exact ? join_informativeness(original_of(e.a), original_of(e.b),
                                                    e.join_attrs)
                             : graph.group_weight(e.a, e.b, e.join_attrs);

    // depth-first spanning order from the source side
    std::size_t root = cand.source_cover.empty() ? cand.vertices.front()
                                                 : cand.source_cover.front();
    std::map<std::size_t, std::vector<std::pair<std::size_t, AttrSet>>> adj;
    for (const auto& e : cand.edges) {
        adj[e.a].push_back({e.b, e.join_attrs});
        adj[e.b].push_back({e.a, e.join_attrs});
    }
    for (auto& [v, nbrs] : adj) std::sort(nbrs.begin(), nbrs.end());

    std::vector<std::size_t> order;
    std::map<std::size_t, AttrSet> entry_attrs;  // tree edge into each vertex
    std::set<std::size_t> seen;
    std::vector<std::size_t> stack{root};
    seen.insert(root);
    while (!stack.empty()) {
        auto v = stack.back();
        stack.pop_back();
        order.push_back(v);
        for (auto it = adj[v].rbegin(); it != adj[v].rend(); ++it) {
            if (seen.insert(it->first).second) {
                entry_attrs[it->first] = it->second;
                stack.push_back(it->first);
            }
        }
    }
    if (order.size() != cand.vertices.size()) {
        eval.join_nonempty = false;  // disconnected candidate
        return eval;
    }
    if (!entry_attrs.empty())
        entry_attrs[root] = adj[root].front().second;  // root samples on its first edge

    try {
        Relation joined;
        if (exact) {
            std::vector<Relation> projected;
            std::vector<const Relation*> ptrs;
            for (auto v : order) projected.push_back(original_of(v).project(proj[v]));
            for (const auto& r : projected) ptrs.push_back(&r);
            joined = join_all(ptrs);
        } else {
            JoinChain chain;
            std::vector<Relation> projected;
            for (auto v : order)
                projected.push_back(graph.sample(v).project(proj[v]));
            std::vector<HashSampler> samplers;
            AttrSet acc;
            for (std::size_t i = 0; i < order.size(); ++i) {
                if (i > 0) chain.on.push_back(attr_intersection(acc, proj[order[i]]));
                acc = attr_union(acc, proj[order[i]]);
                samplers.push_back(HashSampler{
                    hash_bytes(graph.sample(order[i]).name(), req.seed),
                    est.sample_rate});
                chain.sample_attrs.push_back(entry_attrs.count(order[i])
                                                 ? entry_attrs[order[i]]
                                                 : AttrSet{});
            }
            for (const auto& r : projected) chain.rels.push_back(&r);
            if (order.size() == 1) {
                joined = est.sample_rate >= 1.0
                             ? projected[0]
                             : correlated_sample(
                                   projected[0],
                                   normalize_attrs(projected[0].attrs()),
                                   samplers[0]);
            } else {
                joined = resampled_join(
                    chain, samplers,
                    ResampleConfig{est.eta, est.resample_rate,
                                   hash_combine(req.seed, 0x7e5a3ull)});
            }
        }
        if (joined.rows() == 0) {
            eval.join_nonempty = false;
            return eval;
        }
        eval.join_nonempty = true;
        eval.corr = correlation(joined, req.source_attrs, req.target_attrs);
        std::vector<FD> fds;
        for (const auto& d : discover_afds(joined, est.afd)) fds.push_back(d.fd);
        eval.quality = quality_with_fds(joined, fds);
    } catch (const CapacityError&) {
        throw;
    } catch (const Error&) {
        eval.join_nonempty = false;
    }
    return eval;
}

bool feasible(const CandidateEval& eval, const AcquisitionRequest& req) {
    return eval.join_nonempty && eval.price <= req.budget && eval.weight <= req.alpha &&
           eval.quality >= req.beta;
}

SearchReport find_target_graph(const JoinGraph& graph, const IGraph& igraph,
                               const AcquisitionRequest& req,
                               const EstimatorConfig& est) {
    validate_request(req);
    if (igraph.vertices.empty()) throw ArgumentError("empty I-graph");

    SearchReport report;
    report.seed = req.seed;

    const auto& edges = igraph.edges;
    std::vector<const std::vector<EdgeGroup>*> groups;
    groups.reserve(edges.size());
    for (const auto& [a, b] : edges) groups.push_back(&graph.groups(a, b));

    // initial state: the minimum-weight join-attribute subset per edge
    std::vector<std::size_t> state(edges.size(), 0);
    for (std::size_t e = 0; e < edges.size(); ++e) {
        for (std::size_t g = 1; g < groups[e]->size(); ++g)
            if ((*groups[e])[g].weight < (*groups[e])[state[e]].weight) state[e] = g;
    }

    auto make_candidate = [&](const std::vector<std::size_t>& st) {
        CandidateTG cand;
        cand.vertices = igraph.vertices;
        cand.source_cover = igraph.source_cover;
        cand.target_cover = igraph.target_cover;
        for (std::size_t e = 0; e < edges.size(); ++e)
            cand.edges.push_back(
                {edges[e].first, edges[e].second, (*groups[e])[st[e]].join_attrs});
        return cand;
    };
    std::map<std::vector<std::size_t>, CandidateEval> memo;
    auto eval_state = [&](const std::vector<std::size_t>& st) -> const CandidateEval& {
        auto it = memo.find(st);
        if (it == memo.end())
            it = memo.emplace(st, evaluate_target_graph(graph, nullptr,
                                                        make_candidate(st), req, est))
                     .first;
        return it->second;
    };

    std::mt19937_64 rng(req.seed);
    auto uniform_index = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
    auto uniform_unit = [&]() { return unit_from_hash(rng()); };

    const CandidateEval* incumbent = &eval_state(state);
    bool have_best = false;
    std::vector<std::size_t> best_state;
    if (feasible(*incumbent, req)) {
        have_best = true;
        best_state = state;
    }

    report.trace.reserve(req.ell);
    for (std::size_t iter = 0; iter < req.ell; ++iter) {
        std::size_t e = edges.empty() ? 0 : uniform_index(edges.size());
        if (edges.empty() || groups[e]->size() < 2) {
            report.trace.push_back({'n', incumbent->corr});
            continue;
        }
        std::size_t alt = uniform_index(groups[e]->size() - 1);
        if (alt >= state[e]) ++alt;
        auto proposal = state;
        proposal[e] = alt;
        const CandidateEval& cand = eval_state(proposal);
        if (!feasible(cand, req)) {
            report.trace.push_back({'i', cand.corr});
            continue;
        }
        double ratio = incumbent->corr > 0.0
                           ? std::min(1.0, cand.corr / incumbent->corr)
                           : 1.0;
        if (uniform_unit() < ratio) {
            state = proposal;
            incumbent = &cand;
            report.trace.push_back({'a', cand.corr});
            if (!have_best || cand.corr > eval_state(best_state).corr) {
                have_best = true;
                best_state = state;
            }
        } else {
            report.trace.push_back({'r', cand.corr});
        }
    }

    if (!have_best) {
        report.found = false;
        report.reason = "no feasible target graph was sampled in " +
                        std::to_string(req.ell) + " iterations";
        return report;
    }
    report.found = true;
    report.chosen = make_candidate(best_state);
    report.eval = eval_state(best_state);
    return report;
}

namespace {

struct DisjointSet {
    std::vector<std::size_t> parent;
    explicit DisjointSet(std::size_t n) : parent(n) {
        for (std::size_t i = 0; i < n; ++i) parent[i] = i;
    }
    std::size_t find(std::size_t x) {
        while (parent[x] != x) x = parent[x] = parent[parent[x]];
        return x;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        parent[a] = b;
        return true;
    }
};

// Enumerates every candidate target graph within the guards:
// instance subset, spanning tree, join-attribute assignment, covers.
template <typename Fn>
void enumerate_candidates(const JoinGraph& graph, const AcquisitionRequest& req,
                          const OracleGuards& guards, Fn&& fn) {
    validate_request(req);
    std::size_t n = graph.instance_count();
    if (n > guards.max_instances)
        throw CapacityError("oracle guard: " + std::to_string(n) + " instances exceed " +
                            std::to_string(guards.max_instances));

    std::vector<std::size_t> source_fixed;
    for (const auto& name : req.source_instances)
        source_fixed.push_back(graph.index_of(name));
    std::sort(source_fixed.begin(), source_fixed.end());

    auto all_source_covers =
        req.source_instances.empty()
            ? minimal_instance_covers(graph, req.source_attrs)
            : std::vector<std::vector<std::size_t>>{source_fixed};
    auto all_target_covers = minimal_instance_covers(graph, req.target_attrs);

    std::size_t candidates = 0;
    auto bump = [&]() {
        if (++candidates > guards.max_candidates)
            throw CapacityError("oracle guard: candidate count exceeds " +
                                std::to_string(guards.max_candidates));
    };

    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> verts;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) verts.push_back(i);

        auto inside = [&](const std::vector<std::size_t>& cover) {
            return std::all_of(cover.begin(), cover.end(), [&](std::size_t v) {
                return (mask & (1u << v)) != 0;
            });
        };
        std::vector<const std::vector<std::size_t>*> svs, tvs;
        for (const auto& c : all_source_covers)
            if (inside(c)) svs.push_back(&c);
        for (const auto& c : all_target_covers)
            if (inside(c)) tvs.push_back(&c);
        if (svs.empty() || tvs.empty()) continue;

        std::vector<std::pair<std::size_t, std::size_t>> pool;
        for (std::size_t i = 0; i < verts.size(); ++i)
            for (std::size_t j = i + 1; j < verts.size(); ++j)
                if (graph.joinable(verts[i], verts[j]))
                    pool.push_back({verts[i], verts[j]});

        std::vector<std::vector<std::pair<std::size_t, std::size_t>>> trees;
        if (verts.size() == 1) {
            trees.push_back({});
        } else {
            std::size_t need = verts.size() - 1;
            if (pool.size() >= need) {
                std::vector<std::size_t> idx(need);
                for (std::size_t i = 0; i < need; ++i) idx[i] = i;
                while (true) {
                    DisjointSet ds(n);
                    bool acyclic = true;
                    for (auto i : idx)
                        acyclic = acyclic && ds.unite(pool[i].first, pool[i].second);
                    if (acyclic) {
                        std::vector<std::pair<std::size_t, std::size_t>> tree;
                        for (auto i : idx) tree.push_back(pool[i]);
                        trees.push_back(std::move(tree));
                    }
                    std::size_t k = need;
                    while (k > 0 && idx[k - 1] == pool.size() - need + (k - 1)) --k;
                    if (k == 0) break;
                    ++idx[k - 1];
                    for (std::size_t j = k; j < need; ++j) idx[j] = idx[j - 1] + 1;
                }
            }
        }

        for (const auto& tree : trees) {
            std::vector<const std::vector<EdgeGroup>*> groups;
            bool ok = true;
            for (const auto& [a, b] : tree) {
                groups.push_back(&graph.groups(a, b));
                if (groups.back()->size() > guards.max_groups_per_pair)
                    throw CapacityError("oracle guard: instance pair has " +
                                        std::to_string(groups.back()->size()) +
                                        " join-attribute subsets");
                ok = ok && !groups.back()->empty();
            }
            if (!ok) continue;
            std::vector<std::size_t> choice(tree.size(), 0);
            while (true) {
                for (const auto* sv : svs) {
                    for (const auto* tv : tvs) {
                        bump();
                        CandidateTG cand;
                        cand.vertices = verts;
                        cand.source_cover = *sv;
                        cand.target_cover = *tv;
                        for (std::size_t e = 0; e < tree.size(); ++e)
                            cand.edges.push_back({tree[e].first, tree[e].second,
                                                  (*groups[e])[choice[e]].join_attrs});
                        fn(cand);
                    }
                }
                std::size_t e = 0;
                while (e < tree.size() && ++choice[e] == groups[e]->size()) {
                    choice[e] = 0;
                    ++e;
                }
                if (e == tree.size()) break;
            }
        }
    }
}

OracleOutcome run_oracle(const JoinGraph& graph, const std::vector<Relation>* originals,
                         const AcquisitionRequest& req, const EstimatorConfig& est,
                         const OracleGuards& guards) {
    OracleOutcome out;
    enumerate_candidates(graph, req, guards, [&](const CandidateTG& cand) {
        ++out.candidates_checked;
        auto eval = evaluate_target_graph(graph, originals, cand, req, est);
        if (!feasible(eval, req)) return;
        if (!out.found || eval.corr > out.eval.corr) {
            out.found = true;
            out.best = cand;
            out.eval = eval;
        }
    });
    return out;
}

}  // namespace

OracleOutcome brute_force_gp(const JoinGraph& graph,
                             const std::vector<Relation>& originals,
                             const AcquisitionRequest& req,
                             const EstimatorConfig& est, const OracleGuards& guards) {
    return run_oracle(graph, &originals, req, est, guards);
}

OracleOutcome brute_force_lp(const JoinGraph& graph, const AcquisitionRequest& req,
                             const EstimatorConfig& est, const OracleGuards& guards) {
    return run_oracle(graph, nullptr, req, est, guards);
}

PriceBounds oracle_price_bounds(const JoinGraph& graph, const AcquisitionRequest& req,
                                const EstimatorConfig& est,
                                const OracleGuards& guards) {
    AcquisitionRequest unbudgeted = req;
    unbudgeted.budget = std::numeric_limits<double>::infinity();
    PriceBounds bounds;
    enumerate_candidates(graph, unbudgeted, guards, [&](const CandidateTG& cand) {
        auto eval = evaluate_target_graph(graph, nullptr, cand, unbudgeted, est);
        if (!feasible(eval, unbudgeted)) return;
        if (!bounds.any) {
            bounds.lb = bounds.ub = eval.price;
            bounds.any = true;
        } else {
            bounds.lb = std::min(bounds.lb, eval.price);
            bounds.ub = std::max(bounds.ub, eval.price);
        }
    });
    return bounds;
}

double correlation_difference(double opt, double heur) {
    if (opt <= 0.0) throw ArgumentError("correlation difference needs opt > 0");
    return (opt - heur) / opt;
}

}  // namespace dacq
