#include "dacq/purchase.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

namespace dacq {

namespace {

// Discovered minimal AFDs plus memoized objective evaluation by bitmask.
struct PurchaseContext {
    const Relation& rel;
    const PurchaseProblem& problem;
    std::vector<DiscoveredFD> afds;
    std::vector<std::uint32_t> afd_masks;  // lhs+rhs as schema bitmask
    std::map<std::uint32_t, ObjectiveBreakdown> objective_memo;
    std::map<std::uint32_t, double> price_memo;

    PurchaseContext(const Relation& r, const PurchaseProblem& p) : rel(r), problem(p) {
        if (r.arity() > 31) throw CapacityError("purchase is guarded at 31 attributes");
        afds = discover_afds(r, AFDConfig{p.theta, p.max_lhs});
        for (const auto& d : afds) {
            std::uint32_t mask = 0;
            for (const auto& a : d.fd.lhs) mask |= 1u << r.attr_index(a);
            mask |= 1u << r.attr_index(d.fd.rhs);
            afd_masks.push_back(mask);
        }
    }

    std::uint32_t mask_of(const AttrSet& x) const {
        std::uint32_t mask = 0;
        for (const auto& a : x) mask |= 1u << rel.attr_index(a);
        return mask;
    }

    AttrSet attrs_of(std::uint32_t mask) const {
        AttrSet out;
        for (std::size_t i = 0; i < rel.arity(); ++i)
            if (mask & (1u << i)) out.push_back(rel.attrs()[i]);
        return normalize_attrs(out);
    }

    double price(std::uint32_t mask) {
        auto it = price_memo.find(mask);
        if (it != price_memo.end()) return it->second;
        double p = price_projection(rel, attrs_of(mask), problem.price_model);
        price_memo[mask] = p;
        return p;
    }

    const ObjectiveBreakdown& evaluate(std::uint32_t mask) {
        auto it = objective_memo.find(mask);
        if (it != objective_memo.end()) return it->second;
        if (mask == 0) throw ArgumentError("objective of the empty attribute set");

        ObjectiveBreakdown b;
        std::size_t m = rel.arity();
        std::size_t size = static_cast<std::size_t>(__builtin_popcount(mask));
        b.amplification = static_cast<double>(m) * problem.theta;

        std::vector<FD> inside;
        std::size_t useful = 0;
        double max_g3 = 0.0;
        for (std::size_t i = 0; i < afds.size(); ++i) {
            if ((afd_masks[i] & mask) != afd_masks[i]) continue;
            inside.push_back(afds[i].fd);
            useful += afds[i].fd.lhs.size() + 1;
            max_g3 = std::max(max_g3, 1.0 - afds[i].quality);
        }
        b.error = problem.joint_error && !inside.empty()
                      ? 1.0 - quality_with_fds(rel, inside)
                      : max_g3;
        b.error_term = 1.0 - b.error;
        b.size_term = b.amplification * static_cast<double>(size) /
                      static_cast<double>(m);
        b.useful_term = static_cast<double>(useful) / static_cast<double>(size);
        b.total = b.error_term + b.size_term + b.useful_term;
        if (!(b.total > 0.0))
            throw Error("objective is not positive; Metropolis ratios undefined");
        return objective_memo.emplace(mask, b).first->second;
    }

    // C(S): members plus affordable additions
    std::vector<std::size_t> candidates(std::uint32_t mask) {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < rel.arity(); ++i) {
            std::uint32_t bit = 1u << i;
            if (mask & bit)
                out.push_back(i);
            else if (price(mask | bit) <= problem.budget)
                out.push_back(i);
        }
        return out;
    }
};

}  // namespace

std::size_t useful_count(const Relation& rel, const AttrSet& x, double theta,
                         std::size_t max_lhs) {
    PurchaseProblem p;
    p.relation = &rel;
    p.theta = theta;
    p.max_lhs = max_lhs;
    PurchaseContext ctx(rel, p);
    std::uint32_t mask = ctx.mask_of(x);
    std::size_t useful = 0;
    for (std::size_t i = 0; i < ctx.afds.size(); ++i)
        if ((ctx.afd_masks[i] & mask) == ctx.afd_masks[i])
            useful += ctx.afds[i].fd.lhs.size() + 1;
    return useful;
}

ObjectiveBreakdown objective(const Relation& rel, const AttrSet& x,
                             const PurchaseProblem& problem) {
    if (x.empty()) throw ArgumentError("objective of the empty attribute set");
    PurchaseContext ctx(rel, problem);
    return ctx.evaluate(ctx.mask_of(x));
}

AttrSet candidate_set(const Relation& rel, const AttrSet& s, const PriceModel& prices,
                      double budget) {
    AttrSet base = normalize_attrs(s);
    if (price_projection(rel, base, prices) > budget)
        throw ArgumentError("candidate_set: S itself is not affordable");
    // each addition is tested against S, not against the growing set
    AttrSet result = base;
    for (const auto& a : rel.attrs()) {
        if (std::find(base.begin(), base.end(), a) != base.end()) continue;
        if (price_projection(rel, attr_union(base, {a}), prices) <= budget)
            result = attr_union(result, {a});
    }
    return result;
}

PurchaseResult mcmc_purchase(const PurchaseProblem& problem) {
    if (!problem.relation) throw ArgumentError("purchase problem has no relation");
    const Relation& rel = *problem.relation;
    if (problem.budget < 0.0) throw ArgumentError("budget must be nonnegative");
    PurchaseContext ctx(rel, problem);
    std::size_t m = rel.arity();
    std::mt19937_64 rng(problem.seed);

    // initial state: uniform random subsets until affordable
    std::uint32_t state = 0;
    bool ok = false;
    for (std::size_t attempt = 0; attempt < 10000; ++attempt) {
        std::uint32_t draw = static_cast<std::uint32_t>(rng()) & ((1u << m) - 1);
        if (draw == 0) continue;
        if (ctx.price(draw) <= problem.budget) {
            state = draw;
            ok = true;
            break;
        }
    }
    if (!ok)
        throw InfeasibleError("no affordable nonempty attribute set found in 10000 draws");

    PurchaseResult result;
    result.seed = problem.seed;
    std::uint32_t best = state;
    double best_f = ctx.evaluate(state).total;
    result.trace.reserve(problem.ell);

    for (std::size_t iter = 0; iter < problem.ell; ++iter) {
        auto cands = ctx.candidates(state);
        std::size_t pick = cands[rng() % cands.size()];
        std::uint32_t bit = 1u << pick;
        double f_s = ctx.evaluate(state).total;
        double c_s = static_cast<double>(cands.size());

        std::uint32_t next = state;
        char outcome = 'r';
        double prob = 0.0;
        double f_next = f_s;
        if (state & bit) {
            std::uint32_t removed = state & ~bit;
            if (removed == 0) {
                // the objective is undefined on the empty set; stay
                result.trace.push_back({'n', f_s});
                continue;
            }
            f_next = ctx.evaluate(removed).total;
            double c_next = static_cast<double>(ctx.candidates(removed).size());
            prob = std::min(f_next * c_s / (f_s * c_next), 1.0);
            next = removed;
        } else {
            std::uint32_t added = state | bit;
            f_next = ctx.evaluate(added).total;
            double c_next = static_cast<double>(ctx.candidates(added).size());
            prob = std::min(f_next * c_s / (f_s * c_next), 1.0);
            next = added;
        }
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < prob) {
            state = next;
            outcome = 'a';
            if (ctx.price(state) > problem.budget)
                throw Error("internal: walked onto an unaffordable attribute set");
            if (f_next > best_f) {
                best_f = f_next;
                best = state;
            }
        }
        result.trace.push_back({outcome, f_next});
    }

    result.best = ctx.attrs_of(best);
    result.breakdown = ctx.evaluate(best);
    result.price = ctx.price(best);
    return result;
}

PurchaseResult brute_force_bcqd(const PurchaseProblem& problem) {
    if (!problem.relation) throw ArgumentError("purchase problem has no relation");
    const Relation& rel = *problem.relation;
    std::size_t m = rel.arity();
    if (m > 16) throw CapacityError("brute-force purchase is guarded at 16 attributes");
    PurchaseContext ctx(rel, problem);

    bool found = false;
    std::uint32_t best = 0;
    double best_f = 0.0;
    for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
        if (ctx.price(mask) > problem.budget) continue;
        double f = ctx.evaluate(mask).total;
        if (!found || f > best_f) {
            found = true;
            best = mask;
            best_f = f;
        }
    }
    if (!found) throw InfeasibleError("no affordable nonempty attribute set exists");
    PurchaseResult result;
    result.seed = problem.seed;
    result.best = ctx.attrs_of(best);
    result.breakdown = ctx.evaluate(best);
    result.price = ctx.price(best);
    return result;
}

}  // namespace dacq
