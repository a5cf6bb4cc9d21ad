#ifndef EPG_GEOMETRY_HPP
#define EPG_GEOMETRY_HPP

#include <algorithm>
#include <map>
#include <utility>
#include <vector>

#include "epg/construct.hpp"
#include "epg/handle.hpp"
#include "epg/isomorphism.hpp"
#include "epg/matroid.hpp"

namespace epg {

// Upper bound on the number of exceptional lines a rank-<k cover may leave
// uncovered: (q^{2k}-1)(q^{2k+3}-1)/(q-1)^2.
inline long long matching_cover_bound(unsigned q, unsigned k) {
    __int128 a = geometric_sum(q, 2 * k);
    __int128 b = geometric_sum(q, 2 * k + 3);
    return detail::int128_to_ll(a * b, "matching_cover_bound");
}

namespace detail {

// Host-and-handle consistency: the handle must be certified, spanning, and
// built over this exact matroid (same labels, same columns).
inline void check_host_handle(const Matroid& M, const PgHandle& R, const char* who) {
    require(R.certified, std::string(who) + ": handle is not certified");
    require(R.rank_n == rank(M), std::string(who) + ": handle does not span the host");
    for (Label l : R.members) {
        require(M.column_of(l) == R.host.column_of(l),
                std::string(who) + ": handle does not match the host matroid");
    }
}

inline bool is_line_of(const Matroid& Rm, const LabelSet& L, unsigned q) {
    if (L.size() != static_cast<std::size_t>(q) + 1) return false;
    for (Label l : L)
        if (!set_contains(Rm.ground_set(), l)) return false;
    return closure(Rm, {L[0], L[1]}) == L;
}

} // namespace detail

// The unique line of R whose closure in M contains e, located by splitting
// the column of e over the subfield basis {1, omega}.  Fails exactly when e
// is a loop or parallel to a point of R (no such line exists then).
inline LabelSet line_through(const Matroid& M, const PgHandle& R, Label e) {
    detail::check_host_handle(M, R, "line_through");
    const Field& F = M.field();
    unsigned q = R.q;
    Elem omega = F.pick_omega(q);
    const auto& col = M.column_of(e);

    std::vector<Elem> v(col.size()), vp(col.size());
    bool v_zero = true, vp_zero = true;
    for (std::size_t i = 0; i < col.size(); ++i) {
        auto [a, b] = F.decompose(omega, col[i], q);
        v[i] = a;
        vp[i] = b;
        if (a != 0) v_zero = false;
        if (b != 0) vp_zero = false;
    }
    require(!(v_zero && vp_zero), "line_through: e is a loop");
    if (!v_zero && !vp_zero) {
        detail::Reducer red(F);
        red.add(v);
        require(!red.in_span(vp), "line_through: e is parallel to a point of R");
    } else {
        throw Error("line_through: e is parallel to a point of R");
    }

    detail::Reducer red(F);
    red.add(v);
    red.add(vp);
    LabelSet line;
    for (Label m : R.members)
        if (red.in_span(M.column_of(m))) line.push_back(m);
    ensure(line.size() == static_cast<std::size_t>(q) + 1,
           "line_through: located line has the wrong point count");
    ensure(set_contains(closure(M, line), e), "line_through: e escaped the located line");
    return line;
}

// Dichotomy for a list of lines of R: either k+1 mutually skew lines, or a
// low-rank flat cover with a bounded exceptional list.
struct MatchingOutcome {
    bool matched = false;
    std::vector<LabelSet> matching;    // k+1 mutually skew lines
    LabelSet cover_flat;               // flat of rank <= k met by all covered lines
    std::vector<LabelSet> exceptional; // lines skew to the flat
};

inline MatchingOutcome find_line_matching(const PgHandle& R, const std::vector<LabelSet>& lines,
                                          unsigned k) {
    require(R.certified, "find_line_matching: handle is not certified");
    unsigned q = R.q;
    auto Rm = members_matroid(R);
    for (std::size_t i = 0; i < lines.size(); ++i) {
        require(detail::is_line_of(Rm, lines[i], q), "find_line_matching: input is not a line of R");
        for (std::size_t j = i + 1; j < lines.size(); ++j)
            require(lines[i] != lines[j], "find_line_matching: duplicate line");
    }

    std::map<Label, std::vector<std::size_t>> through; // label -> indices of lines on it
    for (std::size_t i = 0; i < lines.size(); ++i)
        for (Label l : lines[i]) through[l].push_back(i);

    long long tau = geometric_sum(q, 2 * k + 3);

    // Maximal independent set of high-degree points, in label order.
    LabelSet C;
    {
        detail::Reducer red(R.host.field());
        for (Label l : R.members) {
            auto it = through.find(l);
            long long deg = (it == through.end()) ? 0 : static_cast<long long>(it->second.size());
            if (deg > tau && red.add(R.host.column_of(l))) C.push_back(l);
        }
    }

    // Matching extension: given anchors with one line to pick through each
    // (plus an optional seed line), each step takes the first listed line
    // through the anchor owning a point outside everything chosen so far.
    auto extend = [&](const LabelSet& anchors,
                      const std::vector<LabelSet>& seed) -> std::vector<LabelSet> {
        std::vector<LabelSet> match = seed;
        for (Label e : anchors) {
            LabelSet span_set = anchors;
            for (const auto& L : match) span_set = set_union(span_set, L);
            LabelSet flat = closure(Rm, span_set);
            bool picked = false;
            for (std::size_t li : through[e]) {
                const auto& L = lines[li];
                for (Label x : L)
                    if (!set_contains(flat, x)) {
                        match.push_back(L);
                        picked = true;
                        break;
                    }
                if (picked) break;
            }
            ensure(picked, "find_line_matching: extension step found no free line");
        }
        return match;
    };

    auto finish_matching = [&](std::vector<LabelSet> match) {
        LabelSet all;
        for (const auto& L : match) all = set_union(all, L);
        ensure(rank_of(Rm, all) == 2 * match.size(), "find_line_matching: matching is not skew");
        MatchingOutcome out;
        out.matched = true;
        out.matching = std::move(match);
        return out;
    };

    if (C.size() >= static_cast<std::size_t>(k) + 1) {
        LabelSet anchors(C.begin(), C.begin() + k + 1);
        return finish_matching(extend(anchors, {}));
    }

    LabelSet F = closure(Rm, C);
    std::vector<LabelSet> L0;
    for (const auto& L : lines)
        if (set_intersect(L, F).empty()) L0.push_back(L);

    if (C.size() == static_cast<std::size_t>(k) && !L0.empty())
        return finish_matching(extend(C, {L0.front()}));

    // A maximal matching inside the exceptional lines either reaches k+1 or
    // certifies the cover bound.
    std::vector<LabelSet> greedy;
    LabelSet greedy_union;
    for (const auto& L : L0) {
        LabelSet u = set_union(greedy_union, L);
        if (rank_of(Rm, u) == 2 * (greedy.size() + 1)) {
            greedy.push_back(L);
            greedy_union = std::move(u);
            if (greedy.size() == static_cast<std::size_t>(k) + 1) return finish_matching(greedy);
        }
    }

    ensure(static_cast<long long>(L0.size()) <= matching_cover_bound(q, k),
           "find_line_matching: exceptional list exceeds its bound");
    ensure(C.size() < static_cast<std::size_t>(k) || L0.empty(),
           "find_line_matching: full-rank cover left exceptional lines");
    MatchingOutcome out;
    out.cover_flat = F;
    out.exceptional = L0;
    return out;
}

// Independent set of non-R points whose carrier lines in R are mutually
// skew.
struct UnstableSet {
    LabelSet elements;
    std::map<Label, LabelSet> line_map; // e -> the unique R-line with e in cl(L)
};

namespace detail {

inline void validate_unstable(const Matroid& M, const PgHandle& R, const UnstableSet& X,
                              const char* who) {
    check_host_handle(M, R, who);
    auto Rm = members_matroid(R);
    require(X.line_map.size() == X.elements.size(),
            std::string(who) + ": line_map does not match elements");
    Reducer red(M.field());
    LabelSet line_union;
    for (Label e : X.elements) {
        require(!set_contains(R.members, e), std::string(who) + ": element lies in R");
        auto norm_e = normalize_column(M.field(), M.column_of(e));
        bool nonloop = false;
        for (Elem x : norm_e)
            if (x != 0) { nonloop = true; break; }
        require(nonloop, std::string(who) + ": element is a loop");
        for (Label m : R.members)
            require(norm_e != normalize_column(M.field(), M.column_of(m)),
                    std::string(who) + ": element is parallel to a point of R");
        require(red.add(M.column_of(e)), std::string(who) + ": elements are dependent");
        auto it = X.line_map.find(e);
        require(it != X.line_map.end(), std::string(who) + ": element missing from line_map");
        require(is_line_of(Rm, it->second, R.q), std::string(who) + ": mapped set is not an R-line");
        require(set_contains(closure(M, it->second), e),
                std::string(who) + ": element escapes its mapped line");
        line_union = set_union(line_union, it->second);
    }
    require(rank_of(Rm, line_union) == 2 * X.elements.size(),
            std::string(who) + ": carrier lines are not mutually skew");
}

} // namespace detail

// Either an unstable set of size k+1, or a rank-<=k contraction after which
// the host is provably barely denser than the geometry.
struct UnstableOutcome {
    bool found = false;
    UnstableSet set;            // found case
    LabelSet cover;             // contraction set C, cover case
    long long eps_contracted = 0; // eps(M/C)
    long long eps_reference = 0;  // eps(R/C)
    long long slack_bound = 0;    // (q^2+1) * matching_cover_bound(q,k)
};

inline UnstableOutcome find_unstable_set(const Matroid& M, const PgHandle& R, unsigned k) {
    detail::check_host_handle(M, R, "find_unstable_set");
    require(is_simple(M), "find_unstable_set: matroid must be simple");
    unsigned q = R.q;
    auto Rm = members_matroid(R);

    std::vector<LabelSet> enriched;
    for (const auto& L : lines_of(Rm))
        if (closure(M, L).size() > L.size()) enriched.push_back(L);

    auto out = find_line_matching(R, enriched, k);
    if (out.matched) {
        UnstableOutcome res;
        res.found = true;
        for (const auto& L : out.matching) {
            LabelSet extra = set_minus(closure(M, L), L);
            ensure(!extra.empty(), "find_unstable_set: enriched line lost its extra point");
            ensure(!set_contains(R.members, extra.front()),
                   "find_unstable_set: extra point lies in R");
            res.set.elements.push_back(extra.front());
            res.set.line_map[extra.front()] = L;
        }
        res.set.elements = make_label_set(res.set.elements);
        detail::validate_unstable(M, R, res.set, "find_unstable_set");
        return res;
    }

    UnstableOutcome res;
    res.cover = out.cover_flat;
    res.eps_contracted = epsilon(contract(M, res.cover));
    res.eps_reference = epsilon(contract(Rm, res.cover));
    res.slack_bound = detail::int128_to_ll(
        (static_cast<__int128>(q) * q + 1) * matching_cover_bound(q, k),
        "find_unstable_set slack bound");
    ensure(res.eps_contracted <= res.eps_reference + res.slack_bound,
           "find_unstable_set: cover branch violates its density bound");
    return res;
}

// si((M/X)|E(R)) for an unstable X of size k: guaranteed isomorphic to the
// rank n'-k extension geometry, and asserted so before returning.
inline Matroid contract_unstable(const Matroid& M, const PgHandle& R, const UnstableSet& X) {
    detail::validate_unstable(M, R, X, "contract_unstable");
    std::size_t k = X.elements.size();
    std::size_t n_prime = rank(M);
    require(n_prime >= 2 * k, "contract_unstable: rank must be at least 2|X|");

    auto result = simplify(restrict_to(contract(M, X.elements), R.members)).first;
    ensure(static_cast<long long>(result.size()) ==
               epg_size_formula(static_cast<unsigned>(n_prime - k), R.q, static_cast<unsigned>(k)),
           "contract_unstable: point count gate failed");
    auto target = build_epg(static_cast<unsigned>(n_prime - k - 1), R.q, static_cast<unsigned>(k));
    ensure(matroid_isomorphic(result, target).isomorphic,
           "contract_unstable: result is not the extension geometry");
    return result;
}

// Independent centers, each carrying an independent star of partners whose
// joint lines are long.
struct ConstellationCert {
    LabelSet centers;
    std::map<Label, LabelSet> stars;
};

enum class ConstellationStatus { found, absent, inconclusive };

struct ConstellationResult {
    ConstellationStatus status = ConstellationStatus::absent;
    ConstellationCert cert;
};

inline bool verify_constellation(const Matroid& M, const ConstellationCert& cert, unsigned s,
                                 unsigned ell, unsigned j) {
    if (cert.centers.size() != s || cert.stars.size() != s) return false;
    detail::Reducer red(M.field());
    for (Label e : cert.centers)
        if (!red.add(M.column_of(e))) return false;
    LabelSet all = cert.centers;
    for (Label e : cert.centers) {
        auto it = cert.stars.find(e);
        if (it == cert.stars.end() || it->second.size() != j) return false;
        detail::Reducer star_red(M.field());
        for (Label f : it->second) {
            if (f == e || !star_red.add(M.column_of(f))) return false;
            if (closure(M, {e, f}).size() < static_cast<std::size_t>(ell) + 2) return false;
        }
        all = set_union(all, it->second);
    }
    return rank_of(M, all) <= static_cast<std::size_t>(s) * (j + 1);
}

// Exhaustive constellation search via partner ranks: a center is viable iff
// the union of its long lines has rank >= j, and a certificate exists iff
// the viable centers have rank >= s.  Above the cap a failed search is
// reported as inconclusive rather than proven absence.
inline ConstellationResult find_constellation(const Matroid& M, unsigned s, unsigned ell,
                                              unsigned j) {
    require(is_simple(M), "find_constellation: matroid must be simple");
    require(s >= 1 && ell >= 1 && j >= 1, "find_constellation: parameters must be positive");
    constexpr std::size_t kExhaustiveCap = 2048;

    std::map<Label, LabelSet> partners;
    for (const auto& L : lines_of(M)) {
        if (L.size() < static_cast<std::size_t>(ell) + 2) continue;
        for (Label e : L) partners[e] = set_union(partners[e], set_minus(L, {e}));
    }

    LabelSet good;
    for (const auto& [e, P] : partners)
        if (rank_of(M, P) >= j) good.push_back(e);

    ConstellationResult res;
    if (rank_of(M, good) >= s) {
        detail::Reducer red(M.field());
        for (Label e : good) {
            if (res.cert.centers.size() == s) break;
            if (red.add(M.column_of(e))) res.cert.centers.push_back(e);
        }
        for (Label e : res.cert.centers) {
            LabelSet star;
            detail::Reducer star_red(M.field());
            for (Label f : partners[e]) {
                if (star.size() == j) break;
                if (star_red.add(M.column_of(f))) star.push_back(f);
            }
            ensure(star.size() == j, "find_constellation: viable center lost its star");
            res.cert.stars[e] = star;
        }
        ensure(verify_constellation(M, res.cert, s, ell, j),
               "find_constellation: certificate failed re-verification");
        res.status = ConstellationStatus::found;
        return res;
    }
    res.status = M.size() <= kExhaustiveCap ? ConstellationStatus::absent
                                            : ConstellationStatus::inconclusive;
    return res;
}

// eps(M) - eps(R), the host's surplus of points over the subgeometry.  The
// caller's lists of long lines feed the density predicate: more than
// C(d+1,2) long lines force a surplus greater than d.
inline long long distinct_points_excess(const Matroid& M, const PgHandle& R,
                                        const std::vector<LabelSet>& long_lines) {
    detail::check_host_handle(M, R, "distinct_points_excess");
    require(is_simple(M), "distinct_points_excess: matroid must be simple");
    unsigned q = R.q;
    for (const auto& L : long_lines) {
        require(L.size() >= 2, "distinct_points_excess: listed line too small");
        for (Label l : L) M.index_of(l);
        require(closure(M, {L[0], L[1]}) == L, "distinct_points_excess: input is not a line");
        require(L.size() > static_cast<std::size_t>(q) + 1,
                "distinct_points_excess: listed line is not long");
    }
    return epsilon(M) - static_cast<long long>(R.members.size());
}

} // namespace epg

#endif
