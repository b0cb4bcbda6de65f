#include "dacq/relation.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <unordered_map>

#include "dacq/hashing.hpp"
#include "dacq/partition.hpp"

namespace dacq {

AttrSet normalize_attrs(AttrSet attrs) {
    std::sort(attrs.begin(), attrs.end());
    attrs.erase(std::unique(attrs.begin(), attrs.end()), attrs.end());
    return attrs;
}

bool is_subset(const AttrSet& sub, const AttrSet& super) {
    return std::includes(super.begin(), super.end(), sub.begin(), sub.end());
}

AttrSet attr_union(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

AttrSet attr_intersection(const AttrSet& a, const AttrSet& b) {
    AttrSet out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(),
                          std::back_inserter(out));
    return out;
}

std::string attrs_to_string(const AttrSet& attrs) {
    std::string out;
    for (std::size_t i = 0; i < attrs.size(); ++i) {
        if (i) out += ',';
        out += attrs[i];
    }
    return out;
}

Relation::Relation(std::string name, std::vector<std::string> attrs,
                   std::vector<Column> cols)
    : name_(std::move(name)), attrs_(std::move(attrs)), cols_(std::move(cols)) {
    for (const auto& c : cols_) {
        if (c.code.size() != rows())
            throw ArgumentError("relation '" + name_ + "': ragged columns");
    }
}

bool Relation::has_attr(const std::string& a) const {
    return std::find(attrs_.begin(), attrs_.end(), a) != attrs_.end();
}

std::size_t Relation::attr_index(const std::string& a) const {
    auto it = std::find(attrs_.begin(), attrs_.end(), a);
    if (it == attrs_.end())
        throw ArgumentError("relation '" + name_ + "' has no attribute '" + a + "'");
    return static_cast<std::size_t>(it - attrs_.begin());
}

std::vector<std::size_t> Relation::attr_indexes(const AttrSet& attrs) const {
    std::vector<std::size_t> out;
    out.reserve(attrs.size());
    for (const auto& a : attrs) out.push_back(attr_index(a));
    return out;
}

const std::string& Relation::cell_text(std::size_t row, std::size_t col) const {
    static const std::string empty;
    auto c = cols_[col].code[row];
    return c < 0 ? empty : cols_[col].labels[static_cast<std::size_t>(c)];
}

double Relation::cell_value(std::size_t row, std::size_t col) const {
    if (!cols_[col].numeric)
        throw ArgumentError("attribute '" + attrs_[col] + "' is not numeric");
    auto c = cols_[col].code[row];
    if (c < 0) throw ArgumentError("NULL has no numeric value");
    return cols_[col].values[static_cast<std::size_t>(c)];
}

std::optional<std::string> Relation::join_key(
    std::size_t row, const std::vector<std::size_t>& cols) const {
    std::vector<std::string> fields;
    fields.reserve(cols.size());
    for (auto c : cols) {
        if (is_null(row, c)) return std::nullopt;
        fields.push_back(cell_text(row, c));
    }
    return encode_tuple(fields);
}

std::string Relation::partition_key(std::size_t row,
                                    const std::vector<std::size_t>& cols) const {
    std::vector<std::string> fields;
    fields.reserve(cols.size());
    for (auto c : cols)
        fields.push_back(is_null(row, c) ? std::string("\x01NULL") : cell_text(row, c));
    return encode_tuple(fields);
}

Relation Relation::project(const AttrSet& attrs, const std::string& new_name) const {
    std::vector<Column> cols;
    std::vector<std::string> names;
    for (const auto& a : attrs) {
        cols.push_back(cols_[attr_index(a)]);
        names.push_back(a);
    }
    return Relation(new_name.empty() ? name_ : new_name, std::move(names),
                    std::move(cols));
}

Relation Relation::take_rows(const std::vector<std::size_t>& row_ids,
                             const std::string& new_name) const {
    std::vector<Column> cols(cols_.size());
    for (std::size_t c = 0; c < cols_.size(); ++c) {
        cols[c].numeric = cols_[c].numeric;
        cols[c].labels = cols_[c].labels;
        cols[c].values = cols_[c].values;
        cols[c].code.reserve(row_ids.size());
        for (auto r : row_ids) cols[c].code.push_back(cols_[c].code[r]);
    }
    return Relation(new_name.empty() ? name_ : new_name, attrs_, std::move(cols));
}

bool Relation::same_content(const Relation& other) const {
    if (attrs_ != other.attrs_ || rows() != other.rows()) return false;
    for (std::size_t c = 0; c < cols_.size(); ++c) {
        if (cols_[c].numeric != other.cols_[c].numeric) return false;
        for (std::size_t r = 0; r < rows(); ++r) {
            if (is_null(r, c) != other.is_null(r, c)) return false;
            if (cell_text(r, c) != other.cell_text(r, c)) return false;
        }
    }
    return true;
}

RelationBuilder::RelationBuilder(std::string name, std::vector<std::string> attrs)
    : name_(std::move(name)), attrs_(std::move(attrs)) {
    std::set<std::string> seen;
    for (const auto& a : attrs_) {
        if (!seen.insert(a).second)
            throw SchemaError("relation '" + name_ + "': duplicate attribute '" + a +
                              "'");
    }
    cols_.resize(attrs_.size());
    dict_.resize(attrs_.size());
}

void RelationBuilder::add_row_nullable(const std::vector<std::optional<std::string>>& cells) {
    if (cells.size() != attrs_.size())
        throw IngestionError("relation '" + name_ + "': row arity " +
                             std::to_string(cells.size()) + " != schema arity " +
                             std::to_string(attrs_.size()));
    for (std::size_t c = 0; c < cells.size(); ++c) {
        if (!cells[c].has_value()) {
            cols_[c].code.push_back(-1);
            continue;
        }
        auto [it, inserted] = dict_[c].try_emplace(
            *cells[c], static_cast<std::int32_t>(cols_[c].labels.size()));
        if (inserted) cols_[c].labels.push_back(*cells[c]);
        cols_[c].code.push_back(it->second);
    }
}

void RelationBuilder::add_row(const std::vector<std::string>& cells) {
    std::vector<std::optional<std::string>> opt;
    opt.reserve(cells.size());
    for (const auto& s : cells) {
        if (s.empty())
            opt.emplace_back(std::nullopt);
        else
            opt.emplace_back(s);
    }
    add_row_nullable(opt);
}

namespace {

bool parse_finite(const std::string& s, double& out) {
    if (s.empty()) return false;
    const char* begin = s.c_str();
    char* end = nullptr;
    errno = 0;
    double v = std::strtod(begin, &end);
    if (end != begin + s.size() || errno == ERANGE) return false;
    if (!std::isfinite(v)) return false;
    out = v;
    return true;
}

}  // namespace

Relation RelationBuilder::build() && {
    for (auto& col : cols_) {
        if (col.labels.empty()) continue;  // all NULL: stays categorical
        std::vector<double> vals(col.labels.size());
        bool numeric = true;
        for (std::size_t i = 0; i < col.labels.size() && numeric; ++i)
            numeric = parse_finite(col.labels[i], vals[i]);
        if (numeric) {
            col.numeric = true;
            col.values = std::move(vals);
        }
    }
    return Relation(std::move(name_), std::move(attrs_), std::move(cols_));
}

namespace {

// RFC-4180-ish: quoted fields, doubled quotes, CRLF tolerated.
std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
    std::vector<std::vector<std::string>> rows;
    std::vector<std::string> row;
    std::string field;
    bool in_quotes = false;
    bool field_started = false;
    std::size_t i = 0;
    auto end_field = [&]() {
        row.push_back(field);
        field.clear();
        field_started = false;
    };
    auto end_row = [&]() {
        end_field();
        rows.push_back(std::move(row));
        row.clear();
    };
    while (i < text.size()) {
        char ch = text[i];
        if (in_quotes) {
            if (ch == '"') {
                if (i + 1 < text.size() && text[i + 1] == '"') {
                    field += '"';
                    ++i;
                } else {
                    in_quotes = false;
                }
            } else {
                field += ch;
            }
        } else if (ch == '"' && !field_started) {
            in_quotes = true;
            field_started = true;
        } else if (ch == ',') {
            end_field();
        } else if (ch == '\n') {
            if (!field.empty() || !row.empty() || field_started) end_row();
        } else if (ch == '\r') {
            // swallow; \n handles the row break
        } else {
            field += ch;
            field_started = true;
        }
        ++i;
    }
    if (in_quotes) throw IngestionError("unterminated quoted field");
    if (!field.empty() || !row.empty() || field_started) end_row();
    return rows;
}

}  // namespace

Relation load_csv_text(const std::string& text, const std::string& name) {
    auto rows = parse_csv(text);
    if (rows.empty())
        throw IngestionError("relation '" + name + "': no header row");
    RelationBuilder builder(name, rows[0]);
    for (std::size_t i = 1; i < rows.size(); ++i) {
        if (rows[i].size() != rows[0].size())
            throw IngestionError("relation '" + name + "': line " +
                                 std::to_string(i + 1) + " has " +
                                 std::to_string(rows[i].size()) + " fields, header has " +
                                 std::to_string(rows[0].size()));
        builder.add_row(rows[i]);
    }
    return std::move(builder).build();
}

Relation load_csv(const std::string& path, const std::string& name) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IngestionError("cannot open '" + path + "'");
    std::ostringstream buf;
    buf << in.rdbuf();
    return load_csv_text(buf.str(), name);
}

namespace {

bool needs_quoting(const std::string& s) {
    return s.find_first_of(",\"\n\r") != std::string::npos;
}

void write_field(std::string& out, const std::string& s) {
    if (!needs_quoting(s)) {
        out += s;
        return;
    }
    out += '"';
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
}

}  // namespace

std::string to_csv(const Relation& rel) {
    std::string out;
    for (std::size_t c = 0; c < rel.arity(); ++c) {
        if (c) out += ',';
        write_field(out, rel.attrs()[c]);
    }
    out += '\n';
    for (std::size_t r = 0; r < rel.rows(); ++r) {
        for (std::size_t c = 0; c < rel.arity(); ++c) {
            if (c) out += ',';
            if (!rel.is_null(r, c)) write_field(out, rel.cell_text(r, c));
        }
        out += '\n';
    }
    return out;
}

Relation equi_join(const Relation& left, const Relation& right, const AttrSet& on) {
    if (on.empty()) throw ArgumentError("equi_join: empty join attribute set");
    for (const auto& a : on) {
        if (!left.has_attr(a) || !right.has_attr(a))
            throw ArgumentError("equi_join: attribute '" + a +
                                "' not shared by both relations");
    }
    auto lkey = left.attr_indexes(on);
    auto rkey = right.attr_indexes(on);

    // output schema: left schema, then right schema minus join attributes
    std::vector<std::string> out_attrs = left.attrs();
    std::vector<std::size_t> right_keep;
    for (std::size_t c = 0; c < right.arity(); ++c) {
        if (std::find(on.begin(), on.end(), right.attrs()[c]) == on.end()) {
            out_attrs.push_back(right.attrs()[c]);
            right_keep.push_back(c);
        }
    }
    RelationBuilder builder(left.name() + "*" + right.name(), out_attrs);

    std::unordered_map<std::string, std::vector<std::size_t>> right_by_key;
    for (std::size_t r = 0; r < right.rows(); ++r) {
        if (auto k = right.join_key(r, rkey)) right_by_key[*k].push_back(r);
    }
    std::vector<std::optional<std::string>> cells(out_attrs.size());
    for (std::size_t l = 0; l < left.rows(); ++l) {
        auto k = left.join_key(l, lkey);
        if (!k) continue;
        auto it = right_by_key.find(*k);
        if (it == right_by_key.end()) continue;
        for (auto r : it->second) {
            std::size_t o = 0;
            for (std::size_t c = 0; c < left.arity(); ++c, ++o)
                cells[o] = left.is_null(l, c)
                               ? std::nullopt
                               : std::optional<std::string>(left.cell_text(l, c));
            for (auto c : right_keep) {
                cells[o++] = right.is_null(r, c)
                                 ? std::nullopt
                                 : std::optional<std::string>(right.cell_text(r, c));
            }
            builder.add_row_nullable(cells);
        }
    }
    return std::move(builder).build();
}

OuterJoinPairs full_outer_join_pairs(const Relation& left, const Relation& right,
                                     const AttrSet& on) {
    if (on.empty())
        throw ArgumentError("full_outer_join_pairs: empty join attribute set");
    auto lkey = left.attr_indexes(on);
    auto rkey = right.attr_indexes(on);

    // Key frequencies per side. A key containing NULL can never match, so it
    // is kept as a side-private value.
    std::map<std::string, std::uint64_t> lfreq, rfreq;
    for (std::size_t r = 0; r < left.rows(); ++r) {
        auto k = left.join_key(r, lkey);
        lfreq[k ? *k : "\x01null:" + left.partition_key(r, lkey) + ":L"]++;
    }
    for (std::size_t r = 0; r < right.rows(); ++r) {
        auto k = right.join_key(r, rkey);
        rfreq[k ? *k : "\x01null:" + right.partition_key(r, rkey) + ":R"]++;
    }

    OuterJoinPairs out;
    for (const auto& [k, fl] : lfreq) {
        auto it = rfreq.find(k);
        if (it != rfreq.end()) {
            out.pairs.push_back({k, k, false, false, fl * it->second});
        } else {
            out.pairs.push_back({k, "", false, true, fl});
        }
    }
    for (const auto& [k, fr] : rfreq) {
        if (lfreq.find(k) == lfreq.end())
            out.pairs.push_back({"", k, true, false, fr});
    }
    for (const auto& p : out.pairs) out.total += p.count;
    return out;
}

void Catalog::add(Relation rel) {
    if (has(rel.name()))
        throw SchemaError("catalog already has relation '" + rel.name() + "'");
    for (const auto& a : rel.attrs()) index_[a].push_back(rel.name());
    for (auto& [a, names] : index_) std::sort(names.begin(), names.end());
    relations_.push_back(std::move(rel));
}

bool Catalog::has(const std::string& name) const {
    for (const auto& r : relations_)
        if (r.name() == name) return true;
    return false;
}

const Relation& Catalog::at(const std::string& name) const {
    for (const auto& r : relations_)
        if (r.name() == name) return r;
    throw ArgumentError("catalog has no relation '" + name + "'");
}

Catalog load_manifest(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw IngestionError("cannot open manifest '" + path + "'");
    auto dir = std::filesystem::path(path).parent_path();
    Catalog catalog;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto h = line.find('#');
        if (h != std::string::npos) line.erase(h);
        auto eq = line.find('=');
        auto trim = [](std::string s) {
            auto b = s.find_first_not_of(" \t\r");
            auto e = s.find_last_not_of(" \t\r");
            return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
        };
        if (trim(line).empty()) continue;
        if (eq == std::string::npos)
            throw IngestionError("manifest line " + std::to_string(lineno) +
                                 ": expected 'name = path'");
        auto name = trim(line.substr(0, eq));
        auto file = trim(line.substr(eq + 1));
        if (name.empty() || file.empty())
            throw IngestionError("manifest line " + std::to_string(lineno) +
                                 ": expected 'name = path'");
        auto full = std::filesystem::path(file).is_absolute()
                        ? std::filesystem::path(file)
                        : dir / file;
        catalog.add(load_csv(full.string(), name));
    }
    return catalog;
}

Relation inject_inconsistency(const Relation& rel, const DirtSpec& spec,
                              const std::vector<FD>& fds) {
    if (spec.fraction < 0.0 || spec.fraction > 1.0)
        throw ArgumentError("inject_inconsistency: fraction must be in [0,1]");
    if (fds.empty() && spec.fraction > 0.0)
        throw ArgumentError("inject_inconsistency: no FDs to violate");
    std::size_t n = rel.rows();
    auto dirty = static_cast<std::size_t>(
        std::ceil(spec.fraction * static_cast<double>(n)));
    if (dirty > n)
        throw ArgumentError("inject_inconsistency: fraction selects more rows than exist");
    if (dirty == 0) return rel;

    std::mt19937_64 rng(spec.seed);
    std::vector<std::size_t> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = i;
    for (std::size_t i = n - 1; i > 0; --i)
        std::swap(order[i], order[rng() % (i + 1)]);

    std::vector<Column> cols = rel.columns();
    for (std::size_t k = 0; k < dirty; ++k) {
        std::size_t row = order[k];
        const FD& fd = fds[rng() % fds.size()];
        std::size_t col = rel.attr_index(fd.rhs);
        auto& column = cols[col];
        std::int32_t cur = column.code[row];
        std::size_t domain = column.labels.size();
        std::int32_t next;
        if (domain >= 2) {
            next = static_cast<std::int32_t>(rng() % (domain - 1));
            if (cur >= 0 && next >= cur) ++next;
        } else {
            // single-value domain: invent a fresh label so the row is dirty
            column.labels.push_back(column.labels.empty()
                                        ? "dirt0"
                                        : column.labels[0] + "_dirt");
            if (column.numeric) column.numeric = false, column.values.clear();
            next = static_cast<std::int32_t>(column.labels.size() - 1);
        }
        column.code[row] = next;
    }
    return Relation(rel.name(), rel.attrs(), std::move(cols));
}

}  // namespace dacq
