#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "dacq/partition.hpp"
#include "dacq/relation.hpp"
#include "fixtures.hpp"

using namespace dacq;

TEST_CASE("load_csv parses the 5-line instance") {
    auto rel = load_csv_text("A,B\na1,b1\na1,b1\na1,b2\na1,b3\na2,b2\n", "t2");
    CHECK(rel.arity() == 2);
    CHECK(rel.rows() == 5);
    CHECK(rel.cell_text(4, 0) == "a2");
    CHECK(rel.same_content(fixtures::table2()));
}

TEST_CASE("header-only file yields an empty relation") {
    auto rel = load_csv_text("A,B\n", "empty");
    CHECK(rel.rows() == 0);
    CHECK(rel.arity() == 2);
}

TEST_CASE("mixed arity is an ingestion error naming the line") {
    CHECK_THROWS_AS(load_csv_text("A,B\n1,2\n1,2,3\n", "bad"), IngestionError);
    try {
        load_csv_text("A,B\n1,2\n1,2,3\n", "bad");
    } catch (const IngestionError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }
}

TEST_CASE("duplicate header names are a schema error") {
    CHECK_THROWS_AS(load_csv_text("A,A\n1,2\n", "dup"), SchemaError);
}

TEST_CASE("empty fields become NULL and columns infer numeric") {
    auto rel = load_csv_text("A,B,C\n1,x,\n2.5,y,3\n-1e2,z,4\n", "typed");
    CHECK(rel.columns()[0].numeric);
    CHECK_FALSE(rel.columns()[1].numeric);
    CHECK(rel.columns()[2].numeric);
    CHECK(rel.is_null(0, 2));
    CHECK(rel.cell_value(2, 0) == doctest::Approx(-100.0));
}

TEST_CASE("csv round trip preserves content") {
    std::mt19937_64 rng(7);
    for (int trial = 0; trial < 20; ++trial) {
        auto rel = fixtures::random_relation(rng(), 50, 4, 6);
        auto back = load_csv_text(to_csv(rel), rel.name());
        CHECK(rel.same_content(back));
        CHECK(load_csv_text(to_csv(back), back.name()).same_content(rel));
    }
    // quoting survives commas, quotes and newlines
    RelationBuilder b("q", {"A", "B"});
    b.add_row({"a,1", "line\nbreak"});
    b.add_row({"say \"hi\"", ""});
    auto rel = std::move(b).build();
    CHECK(load_csv_text(to_csv(rel), "q").same_content(rel));
}

TEST_CASE("equi_join reproduces the 5-tuple join") {
    auto joined = equi_join(fixtures::table3_d1(), fixtures::table3_d2(), {"C"});
    CHECK(joined.rows() == 5);
    // schema is the union with join attributes once
    CHECK(joined.attrs() == std::vector<std::string>{"A", "B", "C", "D", "E"});
    std::multiset<std::string> bs;
    for (std::size_t r = 0; r < joined.rows(); ++r) bs.insert(joined.cell_text(r, 1));
    CHECK(bs == std::multiset<std::string>{"b2", "b2", "b2", "b3", "b3"});
}

TEST_CASE("self join on a key preserves the row count") {
    RelationBuilder b("k", {"K", "V"});
    std::mt19937_64 rng(3);
    for (int r = 0; r < 40; ++r)
        b.add_row({"k" + std::to_string(r), "v" + std::to_string(rng() % 5)});
    auto keyed = std::move(b).build();
    CHECK(equi_join(keyed, keyed, {"K", "V"}).rows() == keyed.rows());
}

TEST_CASE("disjoint join keys produce no rows") {
    RelationBuilder a("a", {"K", "X"}), b("b", {"K", "Y"});
    a.add_row({"k1", "x"});
    b.add_row({"k2", "y"});
    CHECK(equi_join(std::move(a).build(), std::move(b).build(), {"K"}).rows() == 0);
}

TEST_CASE("equi_join argument errors") {
    auto rel = fixtures::table2();
    CHECK_THROWS_AS(equi_join(rel, rel, {}), ArgumentError);
    CHECK_THROWS_AS(equi_join(rel, fixtures::table3_d2(), {"A"}), ArgumentError);
}

TEST_CASE("NULL never equi-joins") {
    auto left = load_csv_text("K,X\n,1\nk,2\n", "l");
    auto right = load_csv_text("K,Y\n,9\nk,8\n", "r");
    auto joined = equi_join(left, right, {"K"});
    CHECK(joined.rows() == 1);
    CHECK(joined.cell_text(0, 1) == "2");
}

TEST_CASE("equi_join matches the nested-loop count on random inputs") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 10; ++trial) {
        auto left = fixtures::random_relation(rng(), 60, 3, 5, "L");
        RelationBuilder rb("R", {"C1", "C2", "Z"});
        auto src = fixtures::random_relation(rng(), 50, 3, 5, "src");
        for (std::size_t r = 0; r < src.rows(); ++r)
            rb.add_row({src.cell_text(r, 0), src.cell_text(r, 1), src.cell_text(r, 2)});
        auto right = std::move(rb).build();
        auto joined = equi_join(left, right, {"C1", "C2"});
        std::size_t brute = 0;
        for (std::size_t l = 0; l < left.rows(); ++l)
            for (std::size_t r = 0; r < right.rows(); ++r)
                if (left.cell_text(l, 1) == right.cell_text(r, 0) &&
                    left.cell_text(l, 2) == right.cell_text(r, 1))
                    ++brute;
        CHECK(joined.rows() == brute);
    }
}

TEST_CASE("full outer join pair frequencies") {
    auto left = load_csv_text("K\na\na\nb\n", "l");
    auto right = load_csv_text("K\na\nc\n", "r");
    auto pairs = full_outer_join_pairs(left, right, {"K"});
    CHECK(pairs.total == 4);
    std::map<std::pair<std::string, std::string>, std::uint64_t> got;
    for (const auto& p : pairs.pairs)
        got[{p.left_null ? "NULL" : p.left_key, p.right_null ? "NULL" : p.right_key}] =
            p.count;
    CHECK(got.at({"1:a", "1:a"}) == 2);
    CHECK(got.at({"1:b", "NULL"}) == 1);
    CHECK(got.at({"NULL", "1:c"}) == 1);
}

TEST_CASE("identical single-column relations match perfectly") {
    auto rel = load_csv_text("K\na\nb\n", "x");
    auto pairs = full_outer_join_pairs(rel, rel, {"K"});
    CHECK(pairs.total == 2);
    for (const auto& p : pairs.pairs) {
        CHECK_FALSE(p.left_null);
        CHECK_FALSE(p.right_null);
        CHECK(p.count == 1);
    }
}

TEST_CASE("fully disjoint keys only produce NULL pairs") {
    auto left = load_csv_text("K\na\nb\n", "l");
    auto right = load_csv_text("K\nc\nd\n", "r");
    for (const auto& p : full_outer_join_pairs(left, right, {"K"}).pairs)
        CHECK((p.left_null || p.right_null));
}

TEST_CASE("outer join total matches the frequency identity") {
    // |J| = sum matched f_l * f_r + sum unmatched f_l + sum unmatched f_r
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 10; ++trial) {
        auto left = fixtures::random_relation(rng(), 80, 2, 7, "L");
        auto right = fixtures::random_relation(rng(), 70, 2, 9, "R");
        auto pairs = full_outer_join_pairs(left, right, {"C0"});
        std::map<std::string, std::uint64_t> fl, fr;
        for (std::size_t r = 0; r < left.rows(); ++r) fl[left.cell_text(r, 0)]++;
        for (std::size_t r = 0; r < right.rows(); ++r) fr[right.cell_text(r, 0)]++;
        std::uint64_t expect = 0;
        for (const auto& [v, f] : fl) expect += fr.count(v) ? f * fr.at(v) : f;
        for (const auto& [v, f] : fr)
            if (!fl.count(v)) expect += f;
        CHECK(pairs.total == expect);
    }
}

TEST_CASE("catalog index inverts the schemas") {
    Catalog cat;
    cat.add(fixtures::table3_d1());
    cat.add(fixtures::table3_d2());
    CHECK(cat.attr_index().at("C") == std::vector<std::string>{"d1", "d2"});
    CHECK(cat.attr_index().at("A") == std::vector<std::string>{"d1"});
    CHECK_THROWS_AS(cat.add(fixtures::table3_d1()), SchemaError);
}

TEST_CASE("inject_inconsistency") {
    auto fd = make_fd({"A"}, "B");
    RelationBuilder b("clean", {"A", "B"});
    std::mt19937_64 rng(5);
    for (int r = 0; r < 1000; ++r) {
        auto a = std::to_string(rng() % 20);
        b.add_row({"a" + a, "b" + a});
    }
    auto rel = std::move(b).build();
    REQUIRE(quality_fd(rel, fd) == doctest::Approx(1.0));

    SUBCASE("fraction 0 is a no-op") {
        auto out = inject_inconsistency(rel, {0.0, {}, 1}, {fd});
        CHECK(out.same_content(rel));
    }
    SUBCASE("fraction 0.3 dirties exactly 300 records and drops quality") {
        auto out = inject_inconsistency(rel, {0.3, {}, 1}, {fd});
        std::size_t changed = 0;
        for (std::size_t r = 0; r < rel.rows(); ++r)
            changed += out.cell_text(r, 1) != rel.cell_text(r, 1);
        CHECK(changed == 300);
        CHECK(quality_fd(out, fd) < 1.0);
        CHECK(quality_fd(out, fd) > 0.6);
    }
    SUBCASE("same seed gives identical output") {
        auto a = inject_inconsistency(rel, {0.25, {}, 42}, {fd});
        auto b2 = inject_inconsistency(rel, {0.25, {}, 42}, {fd});
        CHECK(a.same_content(b2));
        CHECK(to_csv(a) == to_csv(b2));
    }
    SUBCASE("ceil rounding") {
        auto out = inject_inconsistency(rel, {0.0005, {}, 3}, {fd});
        std::size_t changed = 0;
        for (std::size_t r = 0; r < rel.rows(); ++r)
            changed += out.cell_text(r, 1) != rel.cell_text(r, 1);
        CHECK(changed == 1);  // ceil(0.5) rows
    }
    SUBCASE("invalid fraction") {
        CHECK_THROWS_AS(inject_inconsistency(rel, {1.5, {}, 0}, {fd}), ArgumentError);
    }
}
