#ifndef EPG_NORMALIZE_HPP
#define EPG_NORMALIZE_HPP

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "epg/construct.hpp"
#include "epg/handle.hpp"
#include "epg/matroid.hpp"

namespace epg {

// Row operation matrix plus per-column scalars: column l of the output is
// column_scalars[l] * (row_op * input column l).
struct ProjectiveTransform {
    std::vector<std::vector<Elem>> row_op; // rows x rows, invertible
    std::map<Label, Elem> column_scalars;  // nonzero
};

inline Matroid apply_transform(const Matroid& M, const ProjectiveTransform& T) {
    const Field& F = M.field();
    require(T.row_op.size() == M.rows(), "apply_transform: row_op shape mismatch");
    std::vector<std::vector<Elem>> cols;
    cols.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        std::vector<Elem> v(M.rows(), 0);
        for (std::size_t r = 0; r < M.rows(); ++r)
            for (std::size_t c = 0; c < M.rows(); ++c)
                v[r] = F.add(v[r], F.mul(T.row_op[r][c], M.column(i)[c]));
        Elem s = T.column_scalars.at(M.labels()[i]);
        for (auto& x : v) x = F.mul(x, s);
        cols.push_back(std::move(v));
    }
    return Matroid(M.field_ptr(), M.rows(), std::move(cols), M.labels());
}

struct NormalizeResult {
    Matroid normalized;
    ProjectiveTransform transform;
    PgHandle handle;
};

// Change of projective frame making a spanning PG(n-1, q) restriction take
// entries in GF(q).  Deterministic: the basis is the greedy least-label one
// inside R, pivots are topmost rows, the frame-closing column is the least
// R-label whose basis coordinates are all nonzero, and every column is
// scaled to leading entry 1.  The subgeometry is rigid enough that this
// always lands in the subfield; a failure would be a bug, not bad input.
inline NormalizeResult normalize_spanning_pg(const Matroid& M, const LabelSet& R, unsigned q) {
    const Field& F = M.field();
    require(is_simple(M), "normalize_spanning_pg: matroid must be simple");
    require(static_cast<unsigned long long>(q) * q == F.order(),
            "normalize_spanning_pg: host field is not GF(q^2)");
    for (Label l : R) M.index_of(l);
    auto pg = is_projective_geometry(restrict_to(M, R), q);
    require(pg.is_pg, "normalize_spanning_pg: R is not a projective geometry over GF(q)");
    std::size_t n = rank(M);
    require(pg.rank_n == n, "normalize_spanning_pg: R does not span");
    require(n >= 3, "normalize_spanning_pg: rank must be at least 3");

    // Greedy least-label basis inside R.
    LabelSet basis;
    {
        detail::Reducer red(F);
        for (Label l : R) {
            if (red.add(M.column_of(l))) basis.push_back(l);
            if (basis.size() == n) break;
        }
        ensure(basis.size() == n, "normalize_spanning_pg: basis extraction failed");
    }

    const std::size_t rows = M.rows();
    std::vector<std::vector<Elem>> work;
    work.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) work.push_back(M.column(i));
    std::vector<std::vector<Elem>> T(rows, std::vector<Elem>(rows, 0));
    for (std::size_t r = 0; r < rows; ++r) T[r][r] = 1;

    auto scale_row = [&](std::size_t r, Elem s) {
        for (auto& col : work) col[r] = F.mul(col[r], s);
        for (auto& t : T[r]) t = F.mul(t, s);
    };
    auto add_row = [&](std::size_t dst, std::size_t src, Elem factor) {
        // row dst -= factor * row src
        for (auto& col : work) col[dst] = F.sub(col[dst], F.mul(factor, col[src]));
        for (std::size_t j = 0; j < rows; ++j) T[dst][j] = F.sub(T[dst][j], F.mul(factor, T[src][j]));
    };

    // Jordan elimination on the basis columns; each becomes a unit vector.
    std::vector<bool> used(rows, false);
    std::vector<std::size_t> pivot_rows;
    for (Label b : basis) {
        std::size_t j = M.index_of(b);
        std::size_t pr = rows;
        for (std::size_t r = 0; r < rows; ++r)
            if (!used[r] && work[j][r] != 0) { pr = r; break; }
        ensure(pr != rows, "normalize_spanning_pg: pivot search failed");
        used[pr] = true;
        pivot_rows.push_back(pr);
        scale_row(pr, F.inv(work[j][pr]));
        for (std::size_t r = 0; r < rows; ++r)
            if (r != pr && work[j][r] != 0) add_row(r, pr, work[j][r]);
    }
    for (const auto& col : work)
        for (std::size_t r = 0; r < rows; ++r)
            if (!used[r]) ensure(col[r] == 0, "normalize_spanning_pg: column outside basis span");

    // Least R-label whose coordinates at every pivot row are nonzero closes
    // the frame; scaling those rows pins all remaining freedom.
    Label closing = 0;
    bool have_closing = false;
    for (Label l : R) {
        const auto& col = work[M.index_of(l)];
        bool all = true;
        for (std::size_t pr : pivot_rows)
            if (col[pr] == 0) { all = false; break; }
        if (all) { closing = l; have_closing = true; break; }
    }
    ensure(have_closing, "normalize_spanning_pg: no frame-closing column");
    {
        auto col = work[M.index_of(closing)];
        for (std::size_t pr : pivot_rows) scale_row(pr, F.inv(col[pr]));
    }

    // Projective column normalization: leading entry 1.
    ProjectiveTransform transform;
    transform.row_op = T;
    std::vector<std::vector<Elem>> out_cols;
    out_cols.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) {
        auto col = work[i];
        Elem s = 1;
        for (Elem x : col)
            if (x != 0) { s = F.inv(x); break; }
        for (auto& x : col) x = F.mul(x, s);
        transform.column_scalars[M.labels()[i]] = s;
        out_cols.push_back(std::move(col));
    }
    Matroid normalized(M.field_ptr(), rows, std::move(out_cols), M.labels());

    for (Label l : R)
        for (Elem x : normalized.column_of(l))
            ensure(F.in_subfield(x, q),
                   "normalize_spanning_pg: normalized entry escaped GF(q)");

    auto handle = certify_pg_handle(normalized, R, q);
    return {std::move(normalized), std::move(transform), std::move(handle)};
}

struct RestrictionWitness {
    bool found = false;
    LabelSet points;
};

namespace detail {

// Backtracking extension of a partial point set toward a PG(n-1, q) inside
// the flat: every pair of chosen points must be able to reach exactly q+1
// chosen points on its line.
class PgRestrictionSearch {
public:
    PgRestrictionSearch(const Matroid& M, const LabelSet& flat, unsigned q, long long target)
        : M_(M), flat_(flat), q_(q), target_(target) {}

    bool run(LabelSet& out) {
        chosen_.clear();
        return extend(0, out);
    }

private:
    const LabelSet& line_in_flat(Label a, Label b) {
        std::pair<Label, Label> key = std::minmax(a, b);
        auto it = lines_.find(key);
        if (it == lines_.end())
            it = lines_.emplace(key, set_intersect(closure(M_, {a, b}), flat_)).first;
        return it->second;
    }

    bool extend(std::size_t from, LabelSet& out) {
        if (static_cast<long long>(chosen_.size()) == target_) {
            auto sub = restrict_to(M_, make_label_set(chosen_));
            if (!is_projective_geometry(sub, q_).is_pg) return false;
            out = make_label_set(chosen_);
            return true;
        }
        if (from >= flat_.size()) return false;
        long long needed = target_ - static_cast<long long>(chosen_.size());
        if (static_cast<long long>(flat_.size() - from) < needed) return false;
        if (++nodes_ > budget_) throw Error("find_pg_restriction: search budget exceeded");

        Label cand = flat_[from];
        bool ok = true;
        for (Label a : chosen_) {
            const auto& L = line_in_flat(a, cand);
            long long inside = 1; // cand itself
            long long avail = 0;
            for (Label x : L) {
                bool picked = std::find(chosen_.begin(), chosen_.end(), x) != chosen_.end();
                if (picked) ++inside;
                if (picked || x == cand || (std::find(flat_.begin() + static_cast<long long>(from) + 1,
                                                      flat_.end(), x) != flat_.end()))
                    ++avail;
            }
            if (inside > q_ + 1 || avail < q_ + 1) { ok = false; break; }
        }
        if (ok) {
            chosen_.push_back(cand);
            if (extend(from + 1, out)) return true;
            chosen_.pop_back();
        }
        return extend(from + 1, out);
    }

    const Matroid& M_;
    LabelSet flat_;
    unsigned q_;
    long long target_;
    std::vector<Label> chosen_;
    std::map<std::pair<Label, Label>, LabelSet> lines_;
    std::uint64_t nodes_ = 0, budget_ = 4'000'000;
};

} // namespace detail

// First (in deterministic order) point set S with M|S a PG(n-1, q), or
// absence.  Candidate point sets are confined to rank-n flats.
inline RestrictionWitness find_pg_restriction(const Matroid& M, unsigned n, unsigned q) {
    require(is_simple(M), "find_pg_restriction: matroid must be simple");
    require(n >= 1, "find_pg_restriction: n must be >= 1");
    RestrictionWitness w;
    std::size_t r = rank(M);
    if (n > r) return w;
    long long target = geometric_sum(q, n);

    std::vector<LabelSet> flats;
    if (n == r) flats.push_back(M.ground_set());
    else flats = flats_by_rank(M, n)[n];

    for (const auto& flat : flats) {
        if (static_cast<long long>(flat.size()) < target) continue;
        detail::PgRestrictionSearch search(M, flat, q, target);
        LabelSet out;
        if (search.run(out)) {
            w.found = true;
            w.points = out;
            return w;
        }
    }
    return w;
}

struct MinorWitness {
    bool found = false;
    LabelSet contracted; // flat C with si(M/C)|points a projective geometry
    LabelSet points;
};

// Exhaustive PG(n-1, q) minor search: every contraction is realized by a
// flat of rank 0..max_contract (one representative per closure class), and
// each candidate minor is pruned by point count before the restriction
// search runs.  Witnesses are re-verified before being returned.
inline MinorWitness has_pg_minor(const Matroid& M, unsigned n, unsigned q, unsigned max_contract) {
    require(is_simple(M), "has_pg_minor: matroid must be simple");
    MinorWitness w;
    long long target = geometric_sum(q, n);
    std::size_t r = rank(M);
    auto levels = flats_by_rank(M, std::min<std::size_t>(max_contract, r));
    for (std::size_t t = 0; t < levels.size(); ++t) {
        for (const auto& C : levels[t]) {
            if (r - t < n) continue;
            auto minor = simplify(contract(M, C)).first;
            if (static_cast<long long>(minor.size()) < target) continue;
            auto res = find_pg_restriction(minor, n, q);
            if (!res.found) continue;
            auto check = is_projective_geometry(restrict_to(minor, res.points), q);
            ensure(check.is_pg && check.rank_n == n, "has_pg_minor: witness failed re-verification");
            w.found = true;
            w.contracted = C;
            w.points = res.points;
            return w;
        }
    }
    return w;
}

} // namespace epg

#endif
