#ifndef EPG_MATROID_HPP
#define EPG_MATROID_HPP

#include <algorithm>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "epg/field.hpp"

namespace epg {

using Label = std::uint32_t;
using LabelSet = std::vector<Label>; // sorted, unique

inline LabelSet make_label_set(std::vector<Label> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
}

inline bool set_contains(const LabelSet& s, Label x) {
    return std::binary_search(s.begin(), s.end(), x);
}

inline LabelSet set_union(const LabelSet& a, const LabelSet& b) {
    LabelSet r;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline LabelSet set_intersect(const LabelSet& a, const LabelSet& b) {
    LabelSet r;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

inline LabelSet set_minus(const LabelSet& a, const LabelSet& b) {
    LabelSet r;
    std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(r));
    return r;
}

// Matroid given by a matrix over a finite field: one column per element,
// labels are stable across minors and simplification.  Immutable once built.
class Matroid {
public:
    Matroid(FieldPtr field, std::size_t rows,
            std::vector<std::vector<Elem>> cols, std::vector<Label> labels)
        : field_(std::move(field)), rows_(rows), cols_(std::move(cols)), labels_(std::move(labels)) {
        require(field_ != nullptr, "Matroid: missing field");
        require(cols_.size() == labels_.size(), "Matroid: label/column count mismatch");
        for (const auto& c : cols_) {
            require(c.size() == rows_, "Matroid: ragged column");
            for (Elem x : c)
                require(x < field_->order(), "Matroid: entry out of field range");
        }
        for (std::size_t i = 0; i < labels_.size(); ++i)
            require(index_.emplace(labels_[i], i).second, "Matroid: duplicate label");
    }

    static Matroid from_columns(FieldPtr field, std::size_t rows,
                                std::vector<std::vector<Elem>> cols) {
        std::vector<Label> labels(cols.size());
        for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i);
        return Matroid(std::move(field), rows, std::move(cols), std::move(labels));
    }

    const Field& field() const { return *field_; }
    FieldPtr field_ptr() const { return field_; }
    std::size_t rows() const { return rows_; }
    std::size_t size() const { return cols_.size(); }

    const std::vector<Label>& labels() const { return labels_; }

    LabelSet ground_set() const { return make_label_set(labels_); }

    bool has_label(Label l) const { return index_.count(l) != 0; }

    std::size_t index_of(Label l) const {
        auto it = index_.find(l);
        require(it != index_.end(), "Matroid: unknown label " + std::to_string(l));
        return it->second;
    }

    const std::vector<Elem>& column(std::size_t idx) const { return cols_[idx]; }
    const std::vector<Elem>& column_of(Label l) const { return cols_[index_of(l)]; }

private:
    FieldPtr field_;
    std::size_t rows_;
    std::vector<std::vector<Elem>> cols_;
    std::vector<Label> labels_;
    std::map<Label, std::size_t> index_;
};

namespace detail {

// Incremental reduced column basis (full Gauss-Jordan): each basis vector
// carries a distinct pivot row where it is 1 and all other basis vectors
// are 0.  Pivots are the topmost nonzero rows, matching the deterministic
// elimination order used everywhere else.
class Reducer {
public:
    explicit Reducer(const Field& F) : F_(F) {}

    void reduce(std::vector<Elem>& v) const {
        for (const auto& [row, b] : basis_) {
            if (v[row] == 0) continue;
            Elem f = v[row];
            for (std::size_t i = 0; i < v.size(); ++i)
                if (b[i] != 0) v[i] = F_.sub(v[i], F_.mul(f, b[i]));
        }
    }

    bool in_span(std::vector<Elem> v) const {
        reduce(v);
        return std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
    }

    // Adds v to the basis if independent; returns whether the rank grew.
    bool add(std::vector<Elem> v) {
        reduce(v);
        std::size_t pivot = v.size();
        for (std::size_t i = 0; i < v.size(); ++i)
            if (v[i] != 0) { pivot = i; break; }
        if (pivot == v.size()) return false;
        Elem s = F_.inv(v[pivot]);
        for (auto& x : v) x = F_.mul(x, s);
        for (auto& [row, b] : basis_) {
            if (b[pivot] == 0) continue;
            Elem f = b[pivot];
            for (std::size_t i = 0; i < b.size(); ++i)
                if (v[i] != 0) b[i] = F_.sub(b[i], F_.mul(f, v[i]));
        }
        basis_.emplace_back(pivot, std::move(v));
        return true;
    }

    std::size_t rank() const { return basis_.size(); }

private:
    const Field& F_;
    std::vector<std::pair<std::size_t, std::vector<Elem>>> basis_;
};

// Projective representative: scale so the first nonzero entry is 1.
// Zero columns come back unchanged.
inline std::vector<Elem> normalize_column(const Field& F, std::vector<Elem> v) {
    for (Elem x : v) {
        if (x == 0) continue;
        Elem s = F.inv(x);
        for (auto& y : v) y = F.mul(y, s);
        break;
    }
    return v;
}

} // namespace detail

inline std::size_t rank_of(const Matroid& M, const LabelSet& S) {
    detail::Reducer red(M.field());
    for (Label l : S) red.add(M.column_of(l));
    return red.rank();
}

inline std::size_t rank(const Matroid& M) {
    detail::Reducer red(M.field());
    for (std::size_t i = 0; i < M.size(); ++i) red.add(M.column(i));
    return red.rank();
}

// M / C: row-reduce with C's columns as pivots (labels ascending, pivot the
// topmost unused row), then drop the pivot rows and C's columns.
inline Matroid contract(const Matroid& M, const LabelSet& C) {
    const Field& F = M.field();
    std::vector<std::vector<Elem>> cols;
    cols.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) cols.push_back(M.column(i));

    std::vector<bool> pivot(M.rows(), false);
    for (Label c : C) {
        std::size_t j = M.index_of(c);
        std::size_t pr = M.rows();
        for (std::size_t r = 0; r < M.rows(); ++r)
            if (!pivot[r] && cols[j][r] != 0) { pr = r; break; }
        if (pr == M.rows()) continue; // dependent on earlier contractions
        pivot[pr] = true;
        Elem s = F.inv(cols[j][pr]);
        for (auto& col : cols) col[pr] = F.mul(col[pr], s);
        for (std::size_t r = 0; r < M.rows(); ++r) {
            if (r == pr || cols[j][r] == 0) continue;
            Elem f = cols[j][r];
            for (auto& col : cols)
                if (col[pr] != 0) col[r] = F.sub(col[r], F.mul(f, col[pr]));
        }
    }

    std::vector<std::vector<Elem>> out_cols;
    std::vector<Label> out_labels;
    std::size_t new_rows = 0;
    for (std::size_t r = 0; r < M.rows(); ++r)
        if (!pivot[r]) ++new_rows;
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (set_contains(C, M.labels()[i])) continue;
        std::vector<Elem> col;
        col.reserve(new_rows);
        for (std::size_t r = 0; r < M.rows(); ++r)
            if (!pivot[r]) col.push_back(cols[i][r]);
        out_cols.push_back(std::move(col));
        out_labels.push_back(M.labels()[i]);
    }
    return Matroid(M.field_ptr(), new_rows, std::move(out_cols), std::move(out_labels));
}

inline Matroid delete_elements(const Matroid& M, const LabelSet& D) {
    for (Label l : D) M.index_of(l); // validates membership
    std::vector<std::vector<Elem>> cols;
    std::vector<Label> labels;
    for (std::size_t i = 0; i < M.size(); ++i) {
        if (set_contains(D, M.labels()[i])) continue;
        cols.push_back(M.column(i));
        labels.push_back(M.labels()[i]);
    }
    return Matroid(M.field_ptr(), M.rows(), std::move(cols), std::move(labels));
}

inline Matroid restrict_to(const Matroid& M, const LabelSet& S) {
    for (Label l : S) M.index_of(l);
    return delete_elements(M, set_minus(M.ground_set(), S));
}

struct SimplificationMap {
    std::map<Label, Label> representative; // nonloop label -> least label in its class
    LabelSet loops;
};

// si(M): drop loops, keep the least label of every parallel class.
inline std::pair<Matroid, SimplificationMap> simplify(const Matroid& M) {
    const Field& F = M.field();
    SimplificationMap map;
    std::map<std::vector<Elem>, Label> rep_of_key;
    std::vector<std::pair<std::size_t, std::vector<Elem>>> keyed; // (index, key)
    for (std::size_t i = 0; i < M.size(); ++i) {
        auto key = detail::normalize_column(F, M.column(i));
        bool loop = std::all_of(key.begin(), key.end(), [](Elem x) { return x == 0; });
        if (loop) {
            map.loops.push_back(M.labels()[i]);
            continue;
        }
        keyed.emplace_back(i, std::move(key));
    }
    map.loops = make_label_set(map.loops);
    for (auto& [i, key] : keyed) {
        auto it = rep_of_key.find(key);
        Label l = M.labels()[i];
        if (it == rep_of_key.end()) rep_of_key.emplace(key, l);
        else if (l < it->second) it->second = l;
    }
    std::vector<std::vector<Elem>> cols;
    std::vector<Label> labels;
    for (auto& [i, key] : keyed) {
        Label l = M.labels()[i];
        map.representative[l] = rep_of_key[key];
        if (rep_of_key[key] == l) {
            cols.push_back(M.column(i));
            labels.push_back(l);
        }
    }
    return {Matroid(M.field_ptr(), M.rows(), std::move(cols), std::move(labels)), std::move(map)};
}

// Number of points (parallel classes of nonloops).
inline long long epsilon(const Matroid& M) {
    const Field& F = M.field();
    std::set<std::vector<Elem>> keys;
    for (std::size_t i = 0; i < M.size(); ++i) {
        auto key = detail::normalize_column(F, M.column(i));
        if (std::all_of(key.begin(), key.end(), [](Elem x) { return x == 0; })) continue;
        keys.insert(std::move(key));
    }
    return static_cast<long long>(keys.size());
}

inline bool is_simple(const Matroid& M) {
    return epsilon(M) == static_cast<long long>(M.size());
}

inline LabelSet closure(const Matroid& M, const LabelSet& S) {
    detail::Reducer red(M.field());
    for (Label l : S) red.add(M.column_of(l));
    LabelSet out;
    for (std::size_t i = 0; i < M.size(); ++i)
        if (red.in_span(M.column(i))) out.push_back(M.labels()[i]);
    return make_label_set(out);
}

// All rank-2 flats, each as a sorted label set, in lexicographic order.
// Requires a simple matroid so that lines are exactly pair closures.
inline std::vector<LabelSet> lines_of(const Matroid& M) {
    require(is_simple(M), "lines_of: matroid must be simple");
    std::set<LabelSet> lines;
    const auto& labels = M.labels();
    for (std::size_t i = 0; i < M.size(); ++i)
        for (std::size_t j = i + 1; j < M.size(); ++j) {
            LabelSet pair = make_label_set({labels[i], labels[j]});
            if (rank_of(M, pair) < 2) continue;
            lines.insert(closure(M, pair));
        }
    return {lines.begin(), lines.end()};
}

// Flats of each rank 0..t, deduplicated, each level sorted lexicographically.
inline std::vector<std::vector<LabelSet>> flats_by_rank(const Matroid& M, std::size_t t) {
    std::vector<std::vector<LabelSet>> levels;
    levels.push_back({closure(M, {})});
    if (t == 0) return levels;
    std::set<LabelSet> current;
    for (std::size_t i = 0; i < M.size(); ++i) {
        LabelSet single = {M.labels()[i]};
        if (rank_of(M, single) == 1) current.insert(closure(M, single));
    }
    levels.push_back({current.begin(), current.end()});
    for (std::size_t level = 2; level <= t; ++level) {
        std::set<LabelSet> next;
        for (const auto& flat : levels.back()) {
            for (std::size_t i = 0; i < M.size(); ++i) {
                Label e = M.labels()[i];
                if (set_contains(flat, e)) continue;
                LabelSet grown = set_union(flat, {e});
                if (rank_of(M, grown) != level) continue;
                next.insert(closure(M, grown));
            }
        }
        levels.push_back({next.begin(), next.end()});
    }
    return levels;
}

struct PgCheck {
    bool is_pg = false;
    std::size_t rank_n = 0;
};

// Decides whether simple M is a PG(n-1, q): the point count must equal
// (q^n - 1)/(q - 1) for n = r(M) and every line must have exactly q+1
// points.  For represented matroids these two conditions characterize the
// geometry.
inline PgCheck is_projective_geometry(const Matroid& M, unsigned q) {
    require(q >= 2, "is_projective_geometry: q must be >= 2");
    require(is_simple(M), "is_projective_geometry: matroid must be simple");
    PgCheck res;
    res.rank_n = rank(M);
    unsigned __int128 expected = 0, power = 1;
    for (std::size_t i = 0; i < res.rank_n; ++i) {
        expected += power;
        power *= q;
    }
    if (static_cast<unsigned __int128>(M.size()) != expected) return res;
    if (res.rank_n >= 2) {
        for (const auto& line : lines_of(M))
            if (line.size() != static_cast<std::size_t>(q) + 1) return res;
    }
    res.is_pg = true;
    return res;
}

} // namespace epg

#endif
