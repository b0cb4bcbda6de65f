#pragma once

// Shared fixtures for the unit and acceptance suites.

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "dacq/relation.hpp"

namespace fixtures {

using dacq::AttrSet;
using dacq::Relation;
using dacq::RelationBuilder;

// 5-row instance with FD A->B: quality 0.6, correct set {t1, t2, t5}.
inline Relation table2() {
    RelationBuilder b("t2", {"A", "B"});
    b.add_row({"a1", "b1"});
    b.add_row({"a1", "b1"});
    b.add_row({"a1", "b2"});
    b.add_row({"a1", "b3"});
    b.add_row({"a2", "b2"});
    return std::move(b).build();
}

// 1000-row instance with FD A->B holding on 996 rows: quality 0.996.
inline Relation table3_d1() {
    RelationBuilder b("d1", {"A", "B", "C"});
    for (int i = 1; i <= 996; ++i)
        b.add_row({"a1", "b1", "c" + std::to_string(i + 3)});
    b.add_row({"a1", "b2", "c1"});
    b.add_row({"a1", "b2", "c2"});
    b.add_row({"a1", "b3", "c3"});
    b.add_row({"a1", "b3", "c3"});
    return std::move(b).build();
}

// 5-row instance with FD D->E: quality 0.6. The last C value stays outside
// d1's domain so the equi-join on C has exactly 5 tuples.
inline Relation table3_d2() {
    RelationBuilder b("d2", {"C", "D", "E"});
    b.add_row({"c1", "d1", "e1"});
    b.add_row({"c1", "d1", "e1"});
    b.add_row({"c2", "d1", "e2"});
    b.add_row({"c3", "d1", "e2"});
    b.add_row({"c0", "d1", "e2"});
    return std::move(b).build();
}

// Two instances D1(A,B,C), D2(B,C,D,E) where the join informativeness is not
// monotone in the join attributes: JI(B) < JI(BC) < JI(C).
inline Relation fig4_d1() {
    RelationBuilder b("d1", {"A", "B", "C"});
    b.add_row({"x1", "b2", "c2"});
    b.add_row({"x2", "b3", "c1"});
    b.add_row({"x3", "b1", "c2"});
    b.add_row({"x4", "b1", "c2"});
    b.add_row({"x5", "b1", "c2"});
    b.add_row({"x6", "b3", "c1"});
    return std::move(b).build();
}

inline Relation fig4_d2() {
    RelationBuilder b("d2", {"B", "C", "D", "E"});
    b.add_row({"b2", "c5", "d1", "e1"});
    b.add_row({"b2", "c4", "d1", "e2"});
    b.add_row({"b2", "c2", "d2", "e1"});
    b.add_row({"b1", "c3", "d2", "e2"});
    b.add_row({"b2", "c5", "d3", "e1"});
    b.add_row({"b1", "c2", "d3", "e2"});
    return std::move(b).build();
}

// Seven instances whose coverage structure yields exactly 43 unique target
// AS-vertex sets for target attributes {A, B, C}: three carry {A,B}, one
// carries A, one carries B, one carries {B,C}, one carries C.
inline std::vector<Relation> cover43_instances() {
    auto make = [](const std::string& name, const std::vector<std::string>& attrs) {
        RelationBuilder b(name, attrs);
        std::vector<std::string> r1, r2;
        for (std::size_t c = 0; c < attrs.size(); ++c) {
            r1.push_back("u" + std::to_string(c));
            r2.push_back("w" + std::to_string(c));
        }
        b.add_row(r1);
        b.add_row(r2);
        return std::move(b).build();
    };
    return {
        make("i1", {"A", "B"}),       make("i2", {"A", "B", "F1"}),
        make("i3", {"A", "B", "F2"}), make("i4", {"A", "F3"}),
        make("i5", {"B", "F4"}),      make("i6", {"B", "C"}),
        make("i7", {"C", "F5"}),
    };
}

// Uniform random categorical relation: `cols` columns named C0..C{cols-1},
// domain sizes per column, n rows.
inline Relation random_relation(std::uint64_t seed, std::size_t n, std::size_t cols,
                                std::size_t domain, const std::string& name = "r") {
    std::mt19937_64 rng(seed);
    std::vector<std::string> attrs;
    for (std::size_t c = 0; c < cols; ++c) attrs.push_back("C" + std::to_string(c));
    RelationBuilder b(name, attrs);
    std::vector<std::string> row(cols);
    for (std::size_t r = 0; r < n; ++r) {
        for (std::size_t c = 0; c < cols; ++c)
            row[c] = "v" + std::to_string(rng() % domain);
        b.add_row(row);
    }
    return std::move(b).build();
}

// --- estimator fixtures (Theorems on sampling) ---

// Two relations over one join key: mostly unit-frequency matched keys, a few
// heavier ones, some unmatched per side.
struct JiFixture {
    Relation left;
    Relation right;
};

inline JiFixture ji_fixture(std::uint64_t seed = 2024) {
    std::mt19937_64 rng(seed);
    RelationBuilder lb("jl", {"K", "P"});
    RelationBuilder rb("jr", {"K", "Q"});
    auto pay = [&](std::uint64_t i) { return "p" + std::to_string(i % 7); };
    std::uint64_t row = 0;
    for (int i = 0; i < 3500; ++i) {
        std::string k = "k" + std::to_string(i);
        lb.add_row({k, pay(row++)});
        rb.add_row({k, pay(row++)});
    }
    for (int i = 0; i < 40; ++i) {
        std::string k = "h" + std::to_string(i);
        std::uint64_t fl = 3 + rng() % 3, fr = 3 + rng() % 3;
        for (std::uint64_t j = 0; j < fl; ++j) lb.add_row({k, pay(row++)});
        for (std::uint64_t j = 0; j < fr; ++j) rb.add_row({k, pay(row++)});
    }
    for (int i = 0; i < 280; ++i) lb.add_row({"lu" + std::to_string(i), pay(row++)});
    for (int i = 0; i < 280; ++i) rb.add_row({"ru" + std::to_string(i), pay(row++)});
    return {std::move(lb).build(), std::move(rb).build()};
}

// Three-table chain T1(U, AS) - T2(U, W) - T3(W, AT, R) with a planted
// AS ~ AT signal and an approximate FD AT -> R.
struct ChainFixture {
    Relation t1;
    Relation t2;
    Relation t3;
    AttrSet on12{"U"};
    AttrSet on23{"W"};
};

inline ChainFixture chain_fixture(std::uint64_t seed = 99) {
    std::mt19937_64 rng(seed);
    auto noisy = [&](std::uint64_t base, std::uint64_t k, double p) {
        double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
        if (u < p) return base;
        return (base + 1 + rng() % (k - 1)) % k;
    };
    RelationBuilder b1("t1", {"U", "AS"});
    RelationBuilder b2("t2", {"U", "W"});
    RelationBuilder b3("t3", {"W", "AT", "R"});
    const std::uint64_t nu = 1000;
    for (std::uint64_t u = 0; u < nu; ++u) {
        for (std::uint64_t c = 0; c < 4; ++c) {
            b1.add_row({"u" + std::to_string(u),
                        "s" + std::to_string(noisy(u % 4, 4, 0.8))});
            b2.add_row({"u" + std::to_string(u),
                        "w" + std::to_string(2 * u + (c % 2))});
        }
    }
    for (std::uint64_t w = 0; w < 2 * nu; ++w) {
        std::uint64_t block = (w / 2) % 4;
        for (int c = 0; c < 2; ++c) {
            auto at = noisy(block, 4, 0.8);
            b3.add_row({"w" + std::to_string(w), "t" + std::to_string(at),
                        "r" + std::to_string(noisy(at, 3, 0.85))});
        }
    }
    return {std::move(b1).build(), std::move(b2).build(), std::move(b3).build()};
}

}  // namespace fixtures
