#ifndef EPG_CONSTRUCT_HPP
#define EPG_CONSTRUCT_HPP

#include <utility>
#include <vector>

#include "epg/matroid.hpp"

namespace epg {

namespace detail {

inline long long int128_to_ll(__int128 v, const char* what) {
    require(v >= 0 && v <= (static_cast<__int128>(1) << 62), what);
    return static_cast<long long>(v);
}

// Splits a prime power q into (p, e); rejects other inputs.
inline std::pair<unsigned, unsigned> split_prime_power(unsigned q) {
    require(q >= 2, "q must be >= 2");
    unsigned p = q;
    for (unsigned d = 2; d * d <= q; ++d)
        if (q % d == 0) { p = d; break; }
    unsigned e = 0, t = q;
    while (t % p == 0) { t /= p; ++e; }
    require(t == 1, "q must be a prime power");
    return {p, e};
}

} // namespace detail

// 1 + q + ... + q^{n-1}, the point count of PG(n-1, q).
inline long long geometric_sum(long long q, unsigned n) {
    __int128 sum = 0, power = 1;
    for (unsigned i = 0; i < n; ++i) {
        sum += power;
        power *= q;
        require(power <= (static_cast<__int128>(1) << 62), "geometric_sum: overflow");
    }
    return detail::int128_to_ll(sum, "geometric_sum: overflow");
}

// Best possible point count at rank r for matroids with no (ell+2)-point
// line; attained exactly by PG(r-1, ell) when ell is a prime power.
inline long long kung_bound(unsigned ell, unsigned r) {
    require(ell >= 2, "kung_bound: ell must be >= 2");
    return geometric_sum(ell, r);
}

// Point count of the rank-n extension geometry with parameter k over GF(q):
// (q^{n+k} - 1)/(q - 1) - q (q^{2k} - 1)/(q^2 - 1).
inline long long epg_size_formula(unsigned n, unsigned q, unsigned k) {
    detail::split_prime_power(q);
    require(k <= n, "epg_size_formula: need 0 <= k <= n");
    __int128 a = geometric_sum(q, n + k);
    __int128 b = static_cast<__int128>(q) * geometric_sum(static_cast<long long>(q) * q, k);
    return detail::int128_to_ll(a - b, "epg_size_formula: overflow");
}

// The density ceiling for rank-n members of the projection class with
// parameters (q, k); coincides with the extension geometry's point count.
inline long long growth_rate_formula(unsigned n, unsigned q, unsigned k) {
    return epg_size_formula(n, q, k);
}

namespace detail {

// Mixed-radix enumeration of vectors whose i-th coordinate ranges over
// allowed[i] (ascending), coordinate 0 most significant.  Emits every
// combination except the all-zero vector when skip_zero is set.
inline std::vector<std::vector<Elem>> enumerate_vectors(
    const std::vector<std::vector<Elem>>& allowed, bool skip_zero) {
    std::size_t n = allowed.size();
    unsigned long long total = 1;
    for (const auto& a : allowed) {
        total *= a.size();
        require(total <= (1ull << 22), "vector enumeration exceeds size cap");
    }
    std::vector<std::vector<Elem>> out;
    out.reserve(static_cast<std::size_t>(total));
    for (unsigned long long z = 0; z < total; ++z) {
        std::vector<Elem> v(n);
        unsigned long long t = z;
        for (std::size_t i = n; i-- > 0;) {
            v[i] = allowed[i][static_cast<std::size_t>(t % allowed[i].size())];
            t /= allowed[i].size();
        }
        bool zero = std::all_of(v.begin(), v.end(), [](Elem x) { return x == 0; });
        if (zero && skip_zero) continue;
        out.push_back(std::move(v));
    }
    return out;
}

} // namespace detail

// PG(n-1, q): one column per projective point of GF(q)^n, first nonzero
// coordinate 1, ascending by base-q value with coordinate 0 most
// significant.  Labels are 0..count-1 in that order.
inline Matroid build_pg(unsigned n_minus_1, unsigned q) {
    auto [p, e] = detail::split_prime_power(q);
    unsigned n = n_minus_1 + 1;
    auto F = Field::make(p, e);
    std::vector<Elem> all(q);
    for (unsigned i = 0; i < q; ++i) all[i] = i;
    auto vectors = detail::enumerate_vectors(std::vector<std::vector<Elem>>(n, all), true);
    std::vector<std::vector<Elem>> cols;
    for (auto& v : vectors) {
        std::size_t first = 0;
        while (v[first] == 0) ++first;
        if (v[first] != 1) continue;
        cols.push_back(std::move(v));
    }
    ensure(static_cast<long long>(cols.size()) == geometric_sum(q, n),
           "build_pg: wrong point count");
    return Matroid::from_columns(std::move(F), n, std::move(cols));
}

// Same point set as PG(n-1, q) but represented over the quadratic extension
// GF(q^2): every entry is Frobenius-fixed.  This is the canonical spanning
// subgeometry other constructions attach extension elements to.
inline Matroid build_pg_in_square_field(unsigned n_minus_1, unsigned q) {
    auto [p, e] = detail::split_prime_power(q);
    unsigned n = n_minus_1 + 1;
    auto F = Field::make(p, 2 * e);
    auto sub = F->subfield_elements(q);
    auto vectors = detail::enumerate_vectors(std::vector<std::vector<Elem>>(n, sub), true);
    std::vector<std::vector<Elem>> cols;
    for (auto& v : vectors) {
        std::size_t first = 0;
        while (v[first] == 0) ++first;
        if (v[first] != 1) continue;
        cols.push_back(std::move(v));
    }
    ensure(static_cast<long long>(cols.size()) == geometric_sum(q, n),
           "build_pg_in_square_field: wrong point count");
    return Matroid::from_columns(std::move(F), n, std::move(cols));
}

// The full column set over GF(q^2) whose simplification is the extension
// geometry: first k coordinates range over GF(q^2), the rest over GF(q).
// Includes the zero column (a loop) and all parallel copies; labels follow
// the mixed-radix enumeration order.
inline Matroid build_epg_host(unsigned n_minus_1, unsigned q, unsigned k) {
    auto [p, e] = detail::split_prime_power(q);
    unsigned n = n_minus_1 + 1;
    require(k <= n, "build_epg_host: need 0 <= k <= n");
    auto F = Field::make(p, 2 * e);
    auto sub = F->subfield_elements(q);
    std::vector<Elem> all(F->order());
    for (unsigned i = 0; i < F->order(); ++i) all[i] = i;
    std::vector<std::vector<Elem>> allowed;
    for (unsigned i = 0; i < k; ++i) allowed.push_back(all);
    for (unsigned i = k; i < n; ++i) allowed.push_back(sub);
    auto vectors = detail::enumerate_vectors(allowed, false);
    return Matroid::from_columns(std::move(F), n, std::move(vectors));
}

// PG^(k)(n-1, q): the simplification of the host above.  Point count obeys
// epg_size_formula(n, q, k) and the rank is n.
inline Matroid build_epg(unsigned n_minus_1, unsigned q, unsigned k) {
    auto host = build_epg_host(n_minus_1, q, k);
    auto M = simplify(host).first;
    ensure(static_cast<long long>(M.size()) == epg_size_formula(n_minus_1 + 1, q, k),
           "build_epg: point count disagrees with the size formula");
    ensure(rank(M) == n_minus_1 + 1, "build_epg: wrong rank");
    return M;
}

// Representation of the rank-n extension geometry with k = 1 built from an
// explicit omega: first coordinates take the q^2 values alpha*omega + beta
// (alpha, beta in GF(q), enumerated in that order), remaining coordinates
// range over GF(q).  The simplified matroid does not depend on which omega
// outside GF(q) was chosen.
inline Matroid build_extension_rep(const FieldPtr& F, Elem omega, unsigned n) {
    require(n >= 1, "build_extension_rep: n must be >= 1");
    unsigned q = 0;
    for (unsigned t = 2; static_cast<unsigned long long>(t) * t <= F->order(); ++t)
        if (static_cast<unsigned long long>(t) * t == F->order()) { q = t; break; }
    require(q != 0, "build_extension_rep: field order is not a square");
    require(!F->in_subfield(omega, q), "build_extension_rep: omega lies in GF(q)");
    auto sub = F->subfield_elements(q);

    std::vector<Elem> first;
    std::set<Elem> seen;
    for (Elem a : sub)
        for (Elem b : sub) {
            Elem v = F->add(F->mul(a, omega), b);
            require(seen.insert(v).second, "build_extension_rep: degenerate omega span");
            first.push_back(v);
        }
    ensure(first.size() == static_cast<std::size_t>(q) * q,
           "build_extension_rep: first coordinate span has wrong size");

    std::vector<std::vector<Elem>> allowed;
    allowed.push_back(first);
    for (unsigned i = 1; i < n; ++i) allowed.push_back(sub);
    auto vectors = detail::enumerate_vectors(allowed, false);
    auto host = Matroid::from_columns(F, n, std::move(vectors));
    return simplify(host).first;
}

struct ProjectionResult {
    Matroid member;                                // si(M'/C), a projection of PG(n'-1, q)
    std::vector<std::vector<Elem>> contracted_cols; // the k columns of C
    unsigned attempts = 0;
};

// Seeded random member of the projection class: PG(n'-1, q) over GF(q^2)
// plus k random independent extension columns, contracted and simplified.
inline ProjectionResult random_projection_member(unsigned n_prime, unsigned q, unsigned k,
                                                 std::uint64_t seed) {
    require(n_prime >= 1 && k < n_prime, "random_projection_member: need 0 <= k < n'");
    auto base = build_pg_in_square_field(n_prime - 1, q);
    const Field& F = base.field();
    Rng rng(seed);
    for (unsigned attempt = 1; attempt <= 64; ++attempt) {
        std::vector<std::vector<Elem>> cols;
        for (std::size_t i = 0; i < base.size(); ++i) cols.push_back(base.column(i));
        std::vector<std::vector<Elem>> added;
        for (unsigned i = 0; i < k; ++i) {
            std::vector<Elem> c(n_prime);
            for (auto& x : c) x = static_cast<Elem>(rng.below(F.order()));
            added.push_back(c);
            cols.push_back(std::move(c));
        }
        auto M = Matroid::from_columns(base.field_ptr(), n_prime, std::move(cols));
        LabelSet C;
        for (unsigned i = 0; i < k; ++i) C.push_back(static_cast<Label>(base.size() + i));
        if (rank_of(M, C) != k) continue;
        auto result = simplify(contract(M, C)).first;
        ensure(rank(result) == n_prime - k, "random_projection_member: wrong rank");
        return {std::move(result), std::move(added), attempt};
    }
    throw Error("random_projection_member: could not draw independent columns");
}

} // namespace epg

#endif
