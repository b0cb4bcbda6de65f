#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "dacq/errors.hpp"

namespace dacq {

// Attribute sets are kept sorted and unique so they can serve as map keys and
// report output stays stable.
using AttrSet = std::vector<std::string>;

AttrSet normalize_attrs(AttrSet attrs);
bool is_subset(const AttrSet& sub, const AttrSet& super);
AttrSet attr_union(const AttrSet& a, const AttrSet& b);
AttrSet attr_intersection(const AttrSet& a, const AttrSet& b);
std::string attrs_to_string(const AttrSet& attrs);  // "A,B,C"

// One dictionary-encoded column. code -1 marks NULL. Numeric columns keep the
// parsed value per dictionary entry alongside the original text.
struct Column {
    bool numeric = false;
    std::vector<std::int32_t> code;
    std::vector<std::string> labels;
    std::vector<double> values;
};

class Relation {
  public:
    Relation() = default;
    Relation(std::string name, std::vector<std::string> attrs,
             std::vector<Column> cols);

    const std::string& name() const { return name_; }
    const std::vector<std::string>& attrs() const { return attrs_; }
    const std::vector<Column>& columns() const { return cols_; }
    std::size_t rows() const { return cols_.empty() ? 0 : cols_[0].code.size(); }
    std::size_t arity() const { return attrs_.size(); }

    bool has_attr(const std::string& a) const;
    std::size_t attr_index(const std::string& a) const;  // ArgumentError if unknown
    std::vector<std::size_t> attr_indexes(const AttrSet& attrs) const;

    bool is_null(std::size_t row, std::size_t col) const {
        return cols_[col].code[row] < 0;
    }
    // NULL renders as the empty string.
    const std::string& cell_text(std::size_t row, std::size_t col) const;
    double cell_value(std::size_t row, std::size_t col) const;

    // Canonical encoding for hashing/join equality over the given columns.
    // nullopt when any component is NULL: NULL never equi-joins.
    std::optional<std::string> join_key(std::size_t row,
                                        const std::vector<std::size_t>& cols) const;
    // Partition key: NULL is an ordinary distinct value here.
    std::string partition_key(std::size_t row,
                              const std::vector<std::size_t>& cols) const;

    Relation project(const AttrSet& attrs, const std::string& new_name = "") const;
    Relation take_rows(const std::vector<std::size_t>& row_ids,
                       const std::string& new_name = "") const;

    bool same_content(const Relation& other) const;

  private:
    std::string name_;
    std::vector<std::string> attrs_;
    std::vector<Column> cols_;
};

// Accumulates textual rows, then dictionary-encodes and infers column types:
// a column is numeric iff every non-NULL cell parses as a finite number.
class RelationBuilder {
  public:
    RelationBuilder(std::string name, std::vector<std::string> attrs);
    void add_row_nullable(const std::vector<std::optional<std::string>>& cells);
    void add_row(const std::vector<std::string>& cells);  // "" means NULL
    Relation build() &&;

  private:
    std::string name_;
    std::vector<std::string> attrs_;
    std::vector<Column> cols_;
    std::vector<std::map<std::string, std::int32_t>> dict_;
};

Relation load_csv(const std::string& path, const std::string& name);
Relation load_csv_text(const std::string& text, const std::string& name);
std::string to_csv(const Relation& rel);

Relation equi_join(const Relation& left, const Relation& right, const AttrSet& on);

// Joint frequency table of the join keys in the full outer join. Matched keys
// contribute f_left(v) * f_right(v) pairs, unmatched keys contribute
// (v, NULL) / (NULL, v) with their own frequencies.
struct OuterPair {
    std::string left_key;
    std::string right_key;
    bool left_null = false;
    bool right_null = false;
    std::uint64_t count = 0;
};
struct OuterJoinPairs {
    std::vector<OuterPair> pairs;
    std::uint64_t total = 0;
};
OuterJoinPairs full_outer_join_pairs(const Relation& left, const Relation& right,
                                     const AttrSet& on);

class Catalog {
  public:
    void add(Relation rel);
    bool has(const std::string& name) const;
    const Relation& at(const std::string& name) const;
    const std::vector<Relation>& relations() const { return relations_; }
    // attribute -> names of relations carrying it
    const std::map<std::string, std::vector<std::string>>& attr_index() const {
        return index_;
    }

  private:
    std::vector<Relation> relations_;
    std::map<std::string, std::vector<std::string>> index_;
};

// Manifest: one "name = path/to.csv" per line, '#' comments. Relative paths
// resolve against the manifest's directory.
Catalog load_manifest(const std::string& path);

struct FD;  // partition.hpp

struct DirtSpec {
    double fraction = 0.0;
    std::vector<std::string> target_relations;
    std::uint64_t seed = 0;
};

// Overwrites one RHS cell of a randomly chosen FD in ceil(fraction * n)
// distinct records with a different value from that column's domain.
Relation inject_inconsistency(const Relation& rel, const DirtSpec& spec,
                              const std::vector<FD>& fds);

}  // namespace dacq
