#include "dacq/partition.hpp"

#include <algorithm>
#include <cctype>
#include <unordered_map>

namespace dacq {

std::size_t Partition::row_count() const {
    std::size_t n = 0;
    for (const auto& c : classes) n += c.size();
    return n;
}

FD make_fd(AttrSet lhs, std::string rhs) {
    lhs = normalize_attrs(std::move(lhs));
    if (lhs.empty()) throw ArgumentError("FD needs a nonempty left-hand side");
    if (std::find(lhs.begin(), lhs.end(), rhs) != lhs.end())
        throw ArgumentError("FD right-hand side '" + rhs + "' appears on the left");
    return FD{std::move(lhs), std::move(rhs)};
}

std::string fd_to_string(const FD& fd) {
    return attrs_to_string(fd.lhs) + "->" + fd.rhs;
}

FD parse_fd(const std::string& text) {
    auto arrow = text.find("->");
    if (arrow == std::string::npos)
        throw ArgumentError("FD text '" + text + "' has no '->'");
    AttrSet lhs;
    std::string cur;
    for (std::size_t i = 0; i < arrow; ++i) {
        if (text[i] == ',') {
            if (!cur.empty()) lhs.push_back(cur);
            cur.clear();
        } else if (!isspace(static_cast<unsigned char>(text[i]))) {
            cur += text[i];
        }
    }
    if (!cur.empty()) lhs.push_back(cur);
    std::string rhs;
    for (std::size_t i = arrow + 2; i < text.size(); ++i)
        if (!isspace(static_cast<unsigned char>(text[i]))) rhs += text[i];
    if (rhs.empty()) throw ArgumentError("FD text '" + text + "' has no right-hand side");
    return make_fd(std::move(lhs), std::move(rhs));
}

Partition compute_partition(const Relation& rel, const AttrSet& attrs) {
    if (attrs.empty()) throw ArgumentError("compute_partition: empty attribute set");
    auto cols = rel.attr_indexes(attrs);
    std::unordered_map<std::string, std::size_t> index;
    Partition out;
    out.over = attrs;
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        auto key = rel.partition_key(r, cols);
        auto [it, inserted] = index.try_emplace(key, out.classes.size());
        if (inserted) out.classes.emplace_back();
        out.classes[it->second].push_back(static_cast<std::uint32_t>(r));
    }
    // first-appearance insertion order == ordering by smallest row id
    return out;
}

std::vector<std::uint32_t> correct_rows(const Relation& rel, const FD& fd) {
    if (rel.rows() == 0)
        throw UndefinedQualityError("quality of an empty relation is undefined");
    auto rhs_col = rel.attr_index(fd.rhs);

    auto pi_x = compute_partition(rel, fd.lhs);
    std::vector<std::uint32_t> correct;
    for (const auto& eq_x : pi_x.classes) {
        // split this X-class by the RHS value; NULL is its own value
        std::unordered_map<std::string, std::vector<std::uint32_t>> sub;
        for (auto r : eq_x)
            sub[rel.partition_key(r, {rhs_col})].push_back(r);
        const std::vector<std::uint32_t>* best = nullptr;
        for (const auto& [k, rows] : sub) {
            if (!best || rows.size() > best->size() ||
                (rows.size() == best->size() && rows.front() < best->front()))
                best = &rows;
        }
        correct.insert(correct.end(), best->begin(), best->end());
    }
    std::sort(correct.begin(), correct.end());
    return correct;
}

double quality_fd(const Relation& rel, const FD& fd) {
    return static_cast<double>(correct_rows(rel, fd).size()) /
           static_cast<double>(rel.rows());
}

double g3_error(const Relation& rel, const FD& fd) {
    return 1.0 - quality_fd(rel, fd);
}

std::vector<DiscoveredFD> discover_afds(const Relation& rel, const AFDConfig& cfg) {
    if (rel.rows() == 0)
        throw UndefinedQualityError("AFD discovery on an empty relation");
    if (cfg.theta <= 0.0 || cfg.theta >= 1.0)
        throw ArgumentError("AFDConfig.theta must be in (0,1)");
    const auto& attrs = rel.attrs();
    std::size_t m = attrs.size();
    std::vector<DiscoveredFD> found;

    // per rhs, qualified lhs sets (for minimality pruning)
    std::unordered_map<std::string, std::vector<AttrSet>> qualified;

    auto emit_level = [&](std::size_t lhs_size) {
        // enumerate index combinations of size lhs_size
        std::vector<std::size_t> idx(lhs_size);
        for (std::size_t i = 0; i < lhs_size; ++i) idx[i] = i;
        while (true) {
            AttrSet lhs;
            for (auto i : idx) lhs.push_back(attrs[i]);
            lhs = normalize_attrs(lhs);
            for (std::size_t rc = 0; rc < m; ++rc) {
                const auto& rhs = attrs[rc];
                if (std::find(lhs.begin(), lhs.end(), rhs) != lhs.end()) continue;
                bool shadowed = false;
                for (const auto& q : qualified[rhs]) {
                    if (q.size() < lhs.size() && is_subset(q, lhs)) {
                        shadowed = true;
                        break;
                    }
                }
                if (shadowed) continue;
                FD fd{lhs, rhs};
                auto rows = correct_rows(rel, fd);
                double q = static_cast<double>(rows.size()) /
                           static_cast<double>(rel.rows());
                if (q >= 1.0 - cfg.theta) {
                    qualified[rhs].push_back(lhs);
                    found.push_back({fd, q, rows.size()});
                }
            }
            // next combination
            std::size_t k = lhs_size;
            while (k > 0 && idx[k - 1] == m - lhs_size + (k - 1)) --k;
            if (k == 0) break;
            ++idx[k - 1];
            for (std::size_t j = k; j < lhs_size; ++j) idx[j] = idx[j - 1] + 1;
        }
    };
    for (std::size_t size = 1; size <= std::min(cfg.max_lhs, m); ++size)
        emit_level(size);
    std::sort(found.begin(), found.end(),
              [](const DiscoveredFD& a, const DiscoveredFD& b) { return a.fd < b.fd; });
    return found;
}

double quality_with_fds(const Relation& rel, const std::vector<FD>& fds) {
    if (rel.rows() == 0)
        throw UndefinedQualityError("quality of an empty relation is undefined");
    if (fds.empty()) return 1.0;
    std::vector<char> in(rel.rows(), 1);
    for (const auto& fd : fds) {
        auto rows = correct_rows(rel, fd);
        std::vector<char> mark(rel.rows(), 0);
        for (auto r : rows) mark[r] = 1;
        for (std::size_t r = 0; r < rel.rows(); ++r) in[r] &= mark[r];
    }
    std::size_t kept = 0;
    for (auto f : in) kept += f;
    return static_cast<double>(kept) / static_cast<double>(rel.rows());
}

Relation join_all(const std::vector<const Relation*>& instances, std::size_t row_cap) {
    if (instances.empty()) throw ArgumentError("join_all: no instances");
    Relation acc = *instances[0];
    for (std::size_t i = 1; i < instances.size(); ++i) {
        AttrSet shared = attr_intersection(normalize_attrs(acc.attrs()),
                                           normalize_attrs(instances[i]->attrs()));
        if (shared.empty())
            throw ArgumentError("join_all: '" + instances[i]->name() +
                                "' shares no attribute with the accumulated join");
        acc = equi_join(acc, *instances[i], shared);
        if (acc.rows() > row_cap)
            throw CapacityError("join_all: intermediate join exceeds " +
                                std::to_string(row_cap) +
                                " rows; use the sampling estimator");
    }
    return acc;
}

double quality_join(const std::vector<const Relation*>& instances,
                    const std::vector<FD>& fds, std::size_t row_cap) {
    auto joined = join_all(instances, row_cap);
    if (joined.rows() == 0)
        throw UndefinedQualityError("quality of an empty join is undefined");
    return quality_with_fds(joined, fds);
}

}  // namespace dacq
