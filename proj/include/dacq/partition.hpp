#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dacq/relation.hpp"

namespace dacq {

// Equivalence classes of row ids over an attribute set. Classes are ordered
// by their smallest row id, rows ascending inside each class.
struct Partition {
    AttrSet over;
    std::vector<std::vector<std::uint32_t>> classes;
    std::size_t row_count() const;
};

struct FD {
    AttrSet lhs;
    std::string rhs;

    bool operator==(const FD& o) const { return lhs == o.lhs && rhs == o.rhs; }
    bool operator<(const FD& o) const {
        return lhs != o.lhs ? lhs < o.lhs : rhs < o.rhs;
    }
};

FD make_fd(AttrSet lhs, std::string rhs);       // enforces rhs not in lhs
std::string fd_to_string(const FD& fd);         // "A,B->C"
FD parse_fd(const std::string& text);

struct AFDConfig {
    double theta = 0.1;      // an AFD may fail on at most this fraction of rows
    std::size_t max_lhs = 3; // lattice search cap on |lhs|
};

Partition compute_partition(const Relation& rel, const AttrSet& attrs);

// Row ids of the correct set C(D, X->Y): per X-class, the largest contained
// XY-class, ties to the class holding the smallest row id.
std::vector<std::uint32_t> correct_rows(const Relation& rel, const FD& fd);
double quality_fd(const Relation& rel, const FD& fd);

// Minimum fraction of rows whose removal makes the FD exact.
double g3_error(const Relation& rel, const FD& fd);

struct DiscoveredFD {
    FD fd;
    double quality = 0.0;
    std::uint64_t support = 0;  // |C(D, F)|
};

// All minimal-lhs FDs with quality >= 1 - theta and |lhs| <= max_lhs.
std::vector<DiscoveredFD> discover_afds(const Relation& rel, const AFDConfig& cfg);

// Quality of an already-materialized instance under a set of FDs:
// |intersection of correct sets| / rows. No FDs means vacuously 1.
double quality_with_fds(const Relation& rel, const std::vector<FD>& fds);

// Fold of equi-joins over shared attributes, in the given order.
Relation join_all(const std::vector<const Relation*>& instances,
                  std::size_t row_cap = 5'000'000);

// Quality of the materialized join of `instances` under `fds`.
double quality_join(const std::vector<const Relation*>& instances,
                    const std::vector<FD>& fds, std::size_t row_cap = 5'000'000);

}  // namespace dacq
