#include "dacq/join_graph.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

#include "dacq/hashing.hpp"

namespace dacq {

std::uint64_t ASLattice::count_for(std::size_t m) {
    if (m > 62) throw CapacityError("lattice count overflows past m=62");
    return (1ull << m) - static_cast<std::uint64_t>(m) - 1ull;
}

std::vector<AttrSet> ASLattice::vertices() const {
    std::size_t m = schema.size();
    if (m > 20)
        throw CapacityError("refusing to materialize a lattice over " +
                            std::to_string(m) + " attributes");
    std::vector<AttrSet> out;
    out.reserve(static_cast<std::size_t>(count_for(m)));
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        if (__builtin_popcount(mask) < 2) continue;
        AttrSet v;
        for (std::size_t i = 0; i < m; ++i)
            if (mask & (1u << i)) v.push_back(schema[i]);
        out.push_back(std::move(v));
    }
    std::sort(out.begin(), out.end(), [](const AttrSet& a, const AttrSet& b) {
        return a.size() != b.size() ? a.size() < b.size() : a < b;
    });
    return out;
}

std::vector<AttrSet> ASLattice::children(const AttrSet& v) const {
    std::vector<AttrSet> out;
    for (const auto& a : schema) {
        if (std::find(v.begin(), v.end(), a) == v.end())
            out.push_back(attr_union(v, {a}));
    }
    std::sort(out.begin(), out.end());
    return out;
}

JoinGraph JoinGraph::build(std::vector<Relation> samples, const JoinGraphConfig& cfg) {
    if (samples.empty()) throw ArgumentError("join graph needs at least one relation");
    JoinGraph g;
    g.cfg_ = cfg;
    g.samples_ = std::move(samples);
    for (std::size_t i = 0; i < g.samples_.size(); ++i) {
        auto [it, inserted] = g.index_.try_emplace(g.samples_[i].name(), i);
        if (!inserted)
            throw SchemaError("duplicate instance name '" + g.samples_[i].name() + "'");
    }
    g.adj_.resize(g.samples_.size());

    // price basis: one row sample per instance at the build rate
    for (const auto& rel : g.samples_) {
        if (cfg.sample_rate >= 1.0) {
            g.price_samples_.push_back(rel);
            continue;
        }
        std::uint64_t s = hash_bytes(rel.name(), hash_combine(cfg.seed, 0x9101ceull));
        std::vector<std::size_t> keep;
        for (std::size_t r = 0; r < rel.rows(); ++r)
            if (unit_from_hash(hash_combine(s, r)) < cfg.sample_rate) keep.push_back(r);
        g.price_samples_.push_back(keep.empty() ? rel : rel.take_rows(keep));
    }

    for (std::size_t a = 0; a < g.samples_.size(); ++a) {
        AttrSet sa = normalize_attrs(g.samples_[a].attrs());
        for (std::size_t b = a + 1; b < g.samples_.size(); ++b) {
            AttrSet shared = attr_intersection(sa, normalize_attrs(g.samples_[b].attrs()));
            if (shared.empty()) continue;
            if (shared.size() > cfg.max_shared_attrs)
                throw CapacityError("instances '" + g.samples_[a].name() + "' and '" +
                                    g.samples_[b].name() + "' share " +
                                    std::to_string(shared.size()) + " attributes");
            std::vector<EdgeGroup> groups;
            for (std::uint32_t mask = 1; mask < (1u << shared.size()); ++mask) {
                AttrSet j;
                for (std::size_t k = 0; k < shared.size(); ++k)
                    if (mask & (1u << k)) j.push_back(shared[k]);
                HashSampler sampler{
                    hash_bytes(encode_tuple({g.samples_[a].name(), g.samples_[b].name(),
                                             attrs_to_string(j)}),
                               cfg.seed),
                    cfg.sample_rate};
                try {
                    double w = estimate_ji(g.samples_[a], g.samples_[b], j, sampler);
                    groups.push_back({j, w});
                } catch (const DegenerateDistributionError&) {
                    // degenerate joint: this join-attribute subset is unusable
                }
            }
            if (groups.empty()) continue;
            std::sort(groups.begin(), groups.end(),
                      [](const EdgeGroup& x, const EdgeGroup& y) {
                          return x.join_attrs < y.join_attrs;
                      });
            double min_w = groups[0].weight;
            for (const auto& grp : groups) min_w = std::min(min_w, grp.weight);
            g.groups_[{a, b}] = std::move(groups);
            g.i_edges_.push_back({a, b, min_w});
            g.adj_[a].push_back({b, min_w});
            g.adj_[b].push_back({a, min_w});
        }
    }
    for (auto& nbrs : g.adj_) std::sort(nbrs.begin(), nbrs.end());
    return g;
}

std::size_t JoinGraph::index_of(const std::string& name) const {
    auto it = index_.find(name);
    if (it == index_.end())
        throw ArgumentError("join graph has no instance '" + name + "'");
    return it->second;
}

bool JoinGraph::has_instance(const std::string& name) const {
    return index_.count(name) != 0;
}

bool JoinGraph::joinable(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    return groups_.count({a, b}) != 0;
}

const std::vector<EdgeGroup>& JoinGraph::groups(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    auto it = groups_.find({a, b});
    if (it == groups_.end())
        throw ArgumentError("instances " + samples_[a].name() + " and " +
                            samples_[b].name() + " are not joinable");
    return it->second;
}

double JoinGraph::group_weight(std::size_t a, std::size_t b,
                               const AttrSet& join_attrs) const {
    for (const auto& grp : groups(a, b))
        if (grp.join_attrs == join_attrs) return grp.weight;
    throw ArgumentError("no edge group on join attributes " + attrs_to_string(join_attrs));
}

ASLattice JoinGraph::lattice(std::size_t i) const {
    return ASLattice{samples_[i].name(), normalize_attrs(samples_[i].attrs())};
}

double JoinGraph::vertex_price(std::size_t i, const AttrSet& attrs) const {
    return price_projection(price_samples_[i], attrs, cfg_.price_model);
}

std::string JoinGraph::export_text() const {
    std::ostringstream out;
    out.precision(12);
    out << "join_graph instances " << samples_.size() << "\n";
    for (std::size_t i = 0; i < samples_.size(); ++i) {
        const auto& rel = samples_[i];
        out << "instance " << rel.name() << " rows " << rel.rows() << " attrs "
            << attrs_to_string(normalize_attrs(rel.attrs())) << " lattice_vertices "
            << ASLattice::count_for(rel.arity()) << "\n";
    }
    for (const auto& e : i_edges_) {
        out << "i_edge " << samples_[e.a].name() << " " << samples_[e.b].name()
            << " weight " << e.weight << "\n";
        for (const auto& grp : groups(e.a, e.b))
            out << "  group join " << attrs_to_string(grp.join_attrs) << " weight "
                << grp.weight << "\n";
    }
    return out.str();
}

namespace {

// Irredundant covers of `attrs` by nonempty subsets: every group keeps at
// least one privately covered attribute.
void irredundant_covers(const AttrSet& attrs,
                        std::vector<std::vector<AttrSet>>& out) {
    std::size_t k = attrs.size();
    std::vector<AttrSet> stack;
    // recurse on the smallest uncovered attribute
    auto rec = [&](auto&& self, std::uint32_t covered) -> void {
        if (covered == (1u << k) - 1) {
            // irredundancy check: each group has a private attribute
            for (std::size_t g = 0; g < stack.size(); ++g) {
                std::uint32_t others = 0;
                for (std::size_t h = 0; h < stack.size(); ++h) {
                    if (h == g) continue;
                    for (const auto& a : stack[h])
                        others |= 1u << (std::lower_bound(attrs.begin(), attrs.end(), a) -
                                         attrs.begin());
                }
                if (others == (1u << k) - 1) return;  // group g is redundant
            }
            out.push_back(stack);
            return;
        }
        std::size_t first = 0;
        while (covered & (1u << first)) ++first;
        // any subset containing `first`, drawn from uncovered-or-any attrs
        std::vector<std::size_t> rest;
        for (std::size_t i = 0; i < k; ++i)
            if (i != first) rest.push_back(i);
        for (std::uint32_t mask = 0; mask < (1u << rest.size()); ++mask) {
            AttrSet group{attrs[first]};
            std::uint32_t bits = 1u << first;
            for (std::size_t i = 0; i < rest.size(); ++i) {
                if (mask & (1u << i)) {
                    group.push_back(attrs[rest[i]]);
                    bits |= 1u << rest[i];
                }
            }
            group = normalize_attrs(group);
            stack.push_back(group);
            self(self, covered | bits);
            stack.pop_back();
        }
    };
    rec(rec, 0);
}

}  // namespace

std::vector<TargetVertexSet> enumerate_target_vertex_sets(const JoinGraph& graph,
                                                          const AttrSet& attrs_in) {
    AttrSet attrs = normalize_attrs(attrs_in);
    if (attrs.empty())
        throw ArgumentError("enumerate_target_vertex_sets: empty attribute set");
    if (attrs.size() > 8)
        throw CapacityError("target vertex enumeration is guarded at 8 attributes");
    // coverage check
    for (const auto& a : attrs) {
        bool covered = false;
        for (std::size_t i = 0; i < graph.instance_count() && !covered; ++i)
            covered = graph.sample(i).has_attr(a);
        if (!covered)
            throw CoverageError("attribute '" + a + "' is not sold by any instance", a);
    }

    std::vector<std::vector<AttrSet>> covers;
    irredundant_covers(attrs, covers);

    std::set<TargetVertexSet> unique;
    std::vector<std::size_t> choice;
    for (const auto& cover : covers) {
        // candidate instances per group
        std::vector<std::vector<std::size_t>> cands(cover.size());
        bool ok = true;
        for (std::size_t g = 0; g < cover.size(); ++g) {
            for (std::size_t i = 0; i < graph.instance_count(); ++i) {
                if (is_subset(cover[g], normalize_attrs(graph.sample(i).attrs())))
                    cands[g].push_back(i);
            }
            if (cands[g].empty()) {
                ok = false;
                break;
            }
        }
        if (!ok) continue;
        choice.assign(cover.size(), 0);
        while (true) {
            std::map<std::size_t, AttrSet> merged;
            for (std::size_t g = 0; g < cover.size(); ++g) {
                auto& slot = merged[cands[g][choice[g]]];
                slot = attr_union(slot, cover[g]);
            }
            TargetVertexSet vs;
            for (const auto& [idx, covered] : merged)
                vs.push_back({graph.sample(idx).name(), covered});
            std::sort(vs.begin(), vs.end());
            unique.insert(std::move(vs));
            // next assignment
            std::size_t g = 0;
            while (g < cover.size() && ++choice[g] == cands[g].size()) {
                choice[g] = 0;
                ++g;
            }
            if (g == cover.size()) break;
        }
    }
    return {unique.begin(), unique.end()};
}

bool LandmarkIndex::reaches(std::size_t landmark_pos, std::size_t vertex) const {
    return dist[landmark_pos][vertex] < std::numeric_limits<double>::infinity();
}

std::vector<std::size_t> LandmarkIndex::path(std::size_t landmark_pos,
                                             std::size_t vertex) const {
    if (!reaches(landmark_pos, vertex))
        throw ArgumentError("vertex unreachable from landmark");
    std::vector<std::size_t> out{vertex};
    std::size_t cur = vertex;
    while (parent[landmark_pos][cur] >= 0) {
        cur = static_cast<std::size_t>(parent[landmark_pos][cur]);
        out.push_back(cur);
    }
    return out;
}

LandmarkIndex precompute_landmarks(const JoinGraph& graph, std::size_t count,
                                   std::uint64_t seed) {
    std::size_t n = graph.instance_count();
    if (count == 0 || count > n)
        throw ArgumentError("landmark count must be in [1, instance count]");

    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    std::uint64_t state = seed;
    for (std::size_t i = n - 1; i > 0; --i) {
        state = mix64(state ^ i);
        std::swap(order[i], order[state % (i + 1)]);
    }
    LandmarkIndex index;
    index.landmarks.assign(order.begin(), order.begin() + count);
    std::sort(index.landmarks.begin(), index.landmarks.end());

    const auto& adj = graph.adjacency();
    for (auto lm : index.landmarks) {
        std::vector<double> dist(n, std::numeric_limits<double>::infinity());
        std::vector<std::int64_t> parent(n, -1);
        using Item = std::pair<double, std::size_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        dist[lm] = 0.0;
        pq.push({0.0, lm});
        while (!pq.empty()) {
            auto [d, v] = pq.top();
            pq.pop();
            if (d > dist[v]) continue;
            for (auto [u, w] : adj[v]) {
                double nd = d + w;
                if (nd < dist[u]) {
                    dist[u] = nd;
                    parent[u] = static_cast<std::int64_t>(v);
                    pq.push({nd, u});
                }
            }
        }
        index.dist.push_back(std::move(dist));
        index.parent.push_back(std::move(parent));
    }
    return index;
}

}  // namespace dacq
