#pragma once

// Density machinery: exact scalars in Z[sqrt(5)] for golden-ratio
// thresholds, density functions with checked growth invariants, weak
// roundness with hyperplane witnesses, dense weakly round restriction
// extraction, and skew dense subsets.

#include <algorithm>
#include <string>
#include <vector>

#include "epg/common.hpp"
#include "epg/construct.hpp"
#include "epg/matroid.hpp"

namespace epg {

namespace detail {

inline __int128 gcd128(__int128 x, __int128 y) {
    if (x < 0) x = -x;
    if (y < 0) y = -y;
    while (y != 0) {
        __int128 t = x % y;
        x = y;
        y = t;
    }
    return x;
}

} // namespace detail

// Exact scalar (a + b*sqrt(5)) / d with d > 0, reduced to lowest terms.
// Rationals embed as b == 0; golden-ratio powers stay exact.
struct Quad {
    long long a = 0;
    long long b = 0;
    long long d = 1;

    static Quad make(__int128 a128, __int128 b128, __int128 d128) {
        require(d128 != 0, "Quad: zero denominator");
        if (d128 < 0) {
            a128 = -a128;
            b128 = -b128;
            d128 = -d128;
        }
        __int128 g = detail::gcd128(detail::gcd128(a128, b128), d128);
        if (g > 1) {
            a128 /= g;
            b128 /= g;
            d128 /= g;
        }
        Quad out;
        bool neg_a = a128 < 0, neg_b = b128 < 0;
        out.a = detail::int128_to_ll(neg_a ? -a128 : a128, "Quad: coefficient overflow");
        if (neg_a) out.a = -out.a;
        out.b = detail::int128_to_ll(neg_b ? -b128 : b128, "Quad: coefficient overflow");
        if (neg_b) out.b = -out.b;
        out.d = detail::int128_to_ll(d128, "Quad: denominator overflow");
        return out;
    }

    static Quad integer(long long v) { return Quad{v, 0, 1}; }
    static Quad rational(long long num, long long den) { return make(num, 0, den); }

    friend Quad operator+(const Quad& x, const Quad& y) {
        return make(static_cast<__int128>(x.a) * y.d + static_cast<__int128>(y.a) * x.d,
                    static_cast<__int128>(x.b) * y.d + static_cast<__int128>(y.b) * x.d,
                    static_cast<__int128>(x.d) * y.d);
    }
    friend Quad operator-(const Quad& x, const Quad& y) {
        return make(static_cast<__int128>(x.a) * y.d - static_cast<__int128>(y.a) * x.d,
                    static_cast<__int128>(x.b) * y.d - static_cast<__int128>(y.b) * x.d,
                    static_cast<__int128>(x.d) * y.d);
    }
    friend Quad operator*(const Quad& x, const Quad& y) {
        return make(static_cast<__int128>(x.a) * y.a + 5 * static_cast<__int128>(x.b) * y.b,
                    static_cast<__int128>(x.a) * y.b + static_cast<__int128>(x.b) * y.a,
                    static_cast<__int128>(x.d) * y.d);
    }

    // sign of a + b*sqrt(5); exact because sqrt(5) is irrational
    int sign() const {
        if (b == 0) return a < 0 ? -1 : (a > 0 ? 1 : 0);
        if (a == 0) return b < 0 ? -1 : 1;
        if (a > 0 && b > 0) return 1;
        if (a < 0 && b < 0) return -1;
        __int128 aa = static_cast<__int128>(a) * a;
        __int128 bb = 5 * static_cast<__int128>(b) * b;
        if (a > 0) return aa > bb ? 1 : -1;
        return bb > aa ? 1 : -1;
    }

    friend bool operator==(const Quad& x, const Quad& y) { return (x - y).sign() == 0; }
    friend bool operator!=(const Quad& x, const Quad& y) { return (x - y).sign() != 0; }
    friend bool operator<(const Quad& x, const Quad& y) { return (x - y).sign() < 0; }
    friend bool operator>(const Quad& x, const Quad& y) { return (x - y).sign() > 0; }
    friend bool operator<=(const Quad& x, const Quad& y) { return (x - y).sign() <= 0; }
    friend bool operator>=(const Quad& x, const Quad& y) { return (x - y).sign() >= 0; }
};

inline Quad quad_pow(const Quad& base, unsigned e) {
    Quad out = Quad::integer(1);
    for (unsigned i = 0; i < e; ++i) out = out * base;
    return out;
}

// Exact phi^m for any integer m, where phi = (1 + sqrt(5)) / 2.
inline Quad phi_power(int m) {
    if (m >= 0) return quad_pow(Quad{1, 1, 2}, static_cast<unsigned>(m));
    return quad_pow(Quad{-1, 1, 2}, static_cast<unsigned>(-m));
}

enum class DensityKind { fibonacci, doubling };

// Rank-indexed density thresholds with the growth invariant of their kind
// checked on the stored range: fibonacci means f(n) >= f(n-1) + f(n-2)
// with 0 < f(1) <= f(2); doubling means g(1) >= alpha and g(n) >= 2g(n-1).
class DensityFunction {
public:
    static DensityFunction fibonacci(std::vector<Quad> values) {
        require(!values.empty(), "DensityFunction: no values");
        require(Quad::integer(0) < values[0], "DensityFunction: f(1) must be positive");
        if (values.size() >= 2)
            require(values[0] <= values[1], "DensityFunction: need f(1) <= f(2)");
        for (std::size_t i = 2; i < values.size(); ++i)
            require(values[i] >= values[i - 1] + values[i - 2],
                    "DensityFunction: fibonacci growth fails at rank " + std::to_string(i + 1));
        DensityFunction f;
        f.kind_ = DensityKind::fibonacci;
        f.values_ = std::move(values);
        return f;
    }

    static DensityFunction doubling(const Quad& alpha, std::vector<Quad> values) {
        require(!values.empty(), "DensityFunction: no values");
        require(Quad::integer(0) < alpha, "DensityFunction: alpha must be positive");
        require(values[0] >= alpha, "DensityFunction: need g(1) >= alpha");
        for (std::size_t i = 1; i < values.size(); ++i)
            require(values[i] >= Quad::integer(2) * values[i - 1],
                    "DensityFunction: doubling growth fails at rank " + std::to_string(i + 1));
        DensityFunction f;
        f.kind_ = DensityKind::doubling;
        f.alpha_ = alpha;
        f.values_ = std::move(values);
        return f;
    }

    DensityKind kind() const { return kind_; }
    const Quad& alpha() const { return alpha_; }
    unsigned max_rank() const { return static_cast<unsigned>(values_.size()); }

    Quad at(unsigned n) const {
        require(n >= 1 && n <= values_.size(),
                "DensityFunction: rank " + std::to_string(n) + " outside stored range");
        return values_[n - 1];
    }

private:
    DensityFunction() = default;
    DensityKind kind_ = DensityKind::fibonacci;
    Quad alpha_{};
    std::vector<Quad> values_;
};

// f(n) = phi^{n - top_rank} * scale for n = 1..top_rank; satisfies the
// fibonacci growth identity exactly.
inline DensityFunction golden_ratio_density(const Quad& scale, unsigned top_rank) {
    require(top_rank >= 1, "golden_ratio_density: top rank must be at least 1");
    require(Quad::integer(0) < scale, "golden_ratio_density: scale must be positive");
    std::vector<Quad> values;
    values.reserve(top_rank);
    for (unsigned n = 1; n <= top_rank; ++n)
        values.push_back(phi_power(static_cast<int>(n) - static_cast<int>(top_rank)) * scale);
    return DensityFunction::fibonacci(std::move(values));
}

struct WeakRoundness {
    bool weakly_round = true;
    LabelSet part_a; // low-rank side, subset of a hyperplane, rank <= r-1
    LabelSet part_b; // complement, rank <= r-2
};

// A matroid is weakly round when no partition (A, B) of the ground set has
// rank(A) <= r-1 and rank(B) <= r-2.  Any violating A extends into a
// hyperplane of the column space, so scanning the (|F|^r - 1)/(|F| - 1)
// projective functionals is exhaustive; the first witness in functional
// order is returned.
inline WeakRoundness is_weakly_round(const Matroid& M) {
    require(M.size() >= 1, "is_weakly_round: matroid has no elements");
    const Field& F = M.field();
    auto r = static_cast<unsigned>(rank(M));
    WeakRoundness out;
    if (r < 2) return out; // part B would need negative rank

    // row-reduce a copy of the representation; pivot rows then hold every
    // column's coordinates relative to the column space
    std::vector<std::vector<Elem>> cols;
    cols.reserve(M.size());
    for (std::size_t i = 0; i < M.size(); ++i) cols.push_back(M.column(i));
    std::vector<std::size_t> pivot_rows;
    std::vector<bool> used(M.rows(), false);
    for (std::size_t c = 0; c < cols.size() && pivot_rows.size() < r; ++c) {
        std::size_t p = M.rows();
        for (std::size_t row = 0; row < M.rows(); ++row)
            if (!used[row] && cols[c][row] != 0) {
                p = row;
                break;
            }
        if (p == M.rows()) continue;
        Elem s = F.inv(cols[c][p]);
        for (auto& col : cols) col[p] = F.mul(col[p], s);
        for (std::size_t row = 0; row < M.rows(); ++row) {
            if (row == p) continue;
            Elem f = cols[c][row];
            if (f == 0) continue;
            for (auto& col : cols) col[row] = F.sub(col[row], F.mul(f, col[p]));
        }
        used[p] = true;
        pivot_rows.push_back(p);
    }
    ensure(pivot_rows.size() == r, "is_weakly_round: reduction lost rank");

    std::vector<Elem> all(F.order());
    for (unsigned i = 0; i < F.order(); ++i) all[i] = static_cast<Elem>(i);
    auto funcs = detail::enumerate_vectors(std::vector<std::vector<Elem>>(r, all), true);
    for (const auto& phi : funcs) {
        std::size_t first = 0;
        while (phi[first] == 0) ++first;
        if (phi[first] != 1) continue;
        LabelSet bpart;
        for (std::size_t i = 0; i < cols.size(); ++i) {
            Elem dot = 0;
            for (std::size_t j = 0; j < r; ++j)
                dot = F.add(dot, F.mul(phi[j], cols[i][pivot_rows[j]]));
            if (dot != 0) bpart.push_back(M.labels()[i]);
        }
        bpart = make_label_set(bpart);
        if (rank_of(M, bpart) + 2 <= r) {
            out.weakly_round = false;
            out.part_b = bpart;
            out.part_a = set_minus(M.ground_set(), bpart);
            return out;
        }
    }
    return out;
}

// Extracts a weakly round restriction that stays above the fibonacci-kind
// density threshold for its own rank.  While the current matroid has a
// witness partition, at least one side inherits its bound (otherwise
// epsilon(M) <= f(r-1) + f(r-2) <= f(r), a contradiction); the hyperplane
// side is preferred when both qualify.
inline Matroid weakly_round_restriction(const Matroid& M, const DensityFunction& f) {
    require(f.kind() == DensityKind::fibonacci,
            "weakly_round_restriction: density function must be fibonacci kind");
    auto r = static_cast<unsigned>(rank(M));
    require(r >= 1, "weakly_round_restriction: rank must be at least 1");
    require(f.max_rank() >= r, "weakly_round_restriction: density function does not cover rank");
    require(Quad::integer(epsilon(M)) > f.at(r), "weakly_round_restriction: matroid not dense enough");

    Matroid N = M;
    while (true) {
        auto w = is_weakly_round(N);
        if (w.weakly_round) break;
        auto qualifies = [&](const LabelSet& side, Matroid& sub_out) {
            Matroid sub = restrict_to(N, side);
            auto rs = static_cast<unsigned>(rank(sub));
            if (rs < 1) return false;
            if (!(Quad::integer(epsilon(sub)) > f.at(rs))) return false;
            sub_out = std::move(sub);
            return true;
        };
        Matroid next = N;
        if (qualifies(w.part_a, next) || qualifies(w.part_b, next)) {
            N = std::move(next);
            continue;
        }
        ensure(false, "weakly_round_restriction: neither witness side kept its density bound");
    }
    ensure(rank(N) >= 1, "weakly_round_restriction: result lost all rank");
    ensure(Quad::integer(epsilon(N)) > f.at(static_cast<unsigned>(rank(N))),
           "weakly_round_restriction: result not dense enough");
    return N;
}

// Smallest rank R with alpha * (sqrt(5) - 1)^R >= 2 (ell^{r_target-1} - 1)/(ell - 1);
// input ranks at or above it make the doubling-kind extraction certify its
// output rank.
inline unsigned weak_roundness_rank_threshold(unsigned ell, const Quad& alpha, unsigned r_target) {
    require(ell >= 2, "weak_roundness_rank_threshold: ell must be at least 2");
    require(Quad::integer(0) < alpha, "weak_roundness_rank_threshold: alpha must be positive");
    require(r_target >= 1, "weak_roundness_rank_threshold: target rank must be at least 1");
    Quad rhs = Quad::integer(2 * geometric_sum(ell, r_target - 1));
    Quad lhs = alpha;
    const Quad base{-1, 1, 1}; // sqrt(5) - 1
    for (unsigned rank_bound = 1; rank_bound <= 256; ++rank_bound) {
        lhs = lhs * base;
        if (lhs >= rhs) return rank_bound;
    }
    throw Error("weak_roundness_rank_threshold: threshold exceeds supported range");
}

// Doubling-kind variant: additionally guarantees the output rank reaches
// r_target.  Internally runs the fibonacci-kind extraction with
// f(n) = phi^{n - r(M)} * g(r(M)); the counting bound at ell then forces
// the rank.  (Scaling by g(r(M)) rather than epsilon(M) keeps the strict
// density precondition of the extraction intact; every inequality in the
// certification chain goes through unchanged because epsilon(M) > g(r(M)).)
inline Matroid weakly_round_with_rank_guarantee(const Matroid& M, unsigned ell, const Quad& alpha,
                                                const DensityFunction& g, unsigned r_target) {
    require(g.kind() == DensityKind::doubling,
            "weakly_round_with_rank_guarantee: density function must be doubling kind");
    require(g.at(1) >= alpha, "weakly_round_with_rank_guarantee: g(1) below alpha");
    auto r = static_cast<unsigned>(rank(M));
    require(r >= 1, "weakly_round_with_rank_guarantee: rank must be at least 1");
    require(g.max_rank() >= r,
            "weakly_round_with_rank_guarantee: density function does not cover rank");
    require(Quad::integer(epsilon(M)) > g.at(r),
            "weakly_round_with_rank_guarantee: matroid not dense enough");
    unsigned need = weak_roundness_rank_threshold(ell, alpha, r_target);
    require(r >= need, "weakly_round_with_rank_guarantee: rank " + std::to_string(r) +
                           " below threshold; minimal satisfying rank is " + std::to_string(need));

    Matroid N = weakly_round_restriction(M, golden_ratio_density(g.at(r), r));

    auto rn = static_cast<unsigned>(rank(N));
    require(Quad::integer(epsilon(N)) <= Quad::integer(kung_bound(ell, rn)),
            "weakly_round_with_rank_guarantee: counting bound violated, matroid outside U(ell)");
    ensure(rn >= r_target, "weakly_round_with_rank_guarantee: rank guarantee failed");
    ensure(Quad::integer(epsilon(N)) > g.at(rn),
           "weakly_round_with_rank_guarantee: density guarantee failed");
    return N;
}

namespace detail {

// Candidate replacements for the dense side cur, each skew to the nonloop
// anchor e and dense enough to carry the next recursion level, best first.
// Walks the reduction: split at a corank-2 flat W avoiding e, keep every
// hyperplane piece through W that clears lam (mu-1)/ell mu^{rank}, and
// descend into the hyperplane through e while it holds more than
// lam mu^{rank-1}.  Returns empty when every nonloop of cur is parallel
// to e; no skew subset with positive density exists there.
inline std::vector<LabelSet> skew_anchor_candidates(const Matroid& M, LabelSet cur, Label e,
                                                    const Quad& lam, const Quad& mu,
                                                    unsigned ell) {
    Quad lam_next = lam * (mu - Quad::integer(1)) * Quad::rational(1, ell);
    std::vector<LabelSet> cands;
    std::vector<long long> weight;
    auto push = [&](LabelSet X) {
        if (X.empty()) return;
        long long ce = epsilon(restrict_to(M, X));
        auto rx = static_cast<unsigned>(rank_of(M, X));
        if (Quad::integer(ce) > lam_next * quad_pow(mu, rx)) {
            cands.push_back(std::move(X));
            weight.push_back(ce);
        }
    };
    while (!cur.empty()) {
        if (!set_contains(closure(M, cur), e)) push(cur); // already skew as a whole

        auto work_set = set_union(cur, LabelSet{e});
        Matroid work = restrict_to(M, work_set);
        auto rw = static_cast<unsigned>(rank(work));
        if (rw < 2) break; // everything parallel to the anchor

        // basis starting at e; dropping e and the last pick leaves a
        // corank-2 flat W avoiding e
        Reducer red(M.field());
        red.add(M.column_of(e));
        LabelSet w_basis;
        for (Label l : cur)
            if (red.add(M.column_of(l))) w_basis.push_back(l);
        w_basis.pop_back();
        LabelSet w_flat = closure(work, w_basis);
        LabelSet h0 = closure(work, set_union(w_flat, LabelSet{e}));

        // pieces of cur in the hyperplanes through W other than h0; each
        // avoids e outright, so closure keeps it skew to the anchor
        LabelSet rest = set_minus(work_set, h0);
        LabelSet seen;
        std::size_t sheets = 0;
        for (Label y : rest) {
            if (set_contains(seen, y)) continue;
            LabelSet flat = closure(work, set_union(w_flat, LabelSet{y}));
            ++sheets;
            seen = set_union(seen, flat);
            push(set_intersect(cur, flat));
        }
        require(sheets <= ell,
                "find_skew_dense_subset: line bound exceeded, matroid outside U(ell)");

        LabelSet in_h0 = set_intersect(cur, h0);
        if (rw >= 3 &&
            Quad::integer(epsilon(restrict_to(M, in_h0))) > lam * quad_pow(mu, rw - 1)) {
            cur = in_h0; // strictly shrinks: cur inside h0 caps the next rank below rw
            continue;
        }
        break;
    }
    // best first: stable order by density
    std::vector<std::size_t> order(cands.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return weight[a] > weight[b]; });
    std::vector<LabelSet> out;
    out.reserve(cands.size());
    for (std::size_t i : order) out.push_back(std::move(cands[i]));
    return out;
}

// Depth-first over the candidate tree: contract one anchor per level and
// try each dense skew piece until one survives all remaining anchors.
inline bool skew_recurse(const Matroid& ctx, LabelSet A, const LabelSet& B, const Quad& lam,
                         const Quad& mu, unsigned ell, unsigned k, LabelSet& out) {
    Label anchor = 0;
    bool found = false;
    for (Label b : B) {
        const auto& col = ctx.column_of(b);
        if (std::any_of(col.begin(), col.end(), [](Elem x) { return x != 0; })) {
            anchor = b;
            found = true;
            break;
        }
    }
    if (!found) { // B spans nothing here, everything is skew to it
        out = std::move(A);
        return true;
    }
    require(k >= 1, "find_skew_dense_subset: B kept positive rank with no levels left");
    auto cands = skew_anchor_candidates(ctx, std::move(A), anchor, lam, mu, ell);
    if (cands.empty()) return false;
    Matroid ctx2 = contract(ctx, {anchor});
    LabelSet b2;
    for (Label b : B)
        if (b != anchor) b2.push_back(b);
    Quad lam2 = lam * (mu - Quad::integer(1)) * Quad::rational(1, ell);
    for (auto& cand : cands)
        if (skew_recurse(ctx2, std::move(cand), b2, lam2, mu, ell, k - 1, out)) return true;
    return false;
}

} // namespace detail

// Finds A' inside A, skew to B, with epsilon(M|A') > lambda ((mu-1)/ell)^k mu^{rank(A')}.
// Follows the proof shape: per nonloop of B, shrink A until a hyperplane
// separates a dense part from that anchor, then contract the anchor and
// recurse, backtracking across the valid hyperplane pieces; both
// postconditions are re-verified in M itself.
inline LabelSet find_skew_dense_subset(const Matroid& M, const LabelSet& A, const LabelSet& B,
                                       const Quad& lambda, const Quad& mu, unsigned ell,
                                       unsigned k) {
    require(ell >= 2, "find_skew_dense_subset: ell must be at least 2");
    require(Quad::integer(0) < lambda, "find_skew_dense_subset: lambda must be positive");
    require(Quad::integer(1) < mu, "find_skew_dense_subset: mu must exceed 1");
    require(set_intersect(A, B).empty(), "find_skew_dense_subset: A and B intersect");
    for (Label l : A) require(M.has_label(l), "find_skew_dense_subset: unknown label in A");
    for (Label l : B) require(M.has_label(l), "find_skew_dense_subset: unknown label in B");
    require(rank_of(M, B) <= k, "find_skew_dense_subset: rank of B exceeds k");
    auto ra = static_cast<unsigned>(rank_of(M, A));
    require(Quad::integer(epsilon(restrict_to(M, A))) > lambda * quad_pow(mu, ra),
            "find_skew_dense_subset: A is not dense enough");

    LabelSet out;
    require(detail::skew_recurse(M, A, B, lambda, mu, ell, k, out),
            "find_skew_dense_subset: every dense branch collapsed onto an anchor");

    ensure(rank_of(M, set_union(out, B)) == rank_of(M, out) + rank_of(M, B),
           "find_skew_dense_subset: result is not skew to B");
    Quad factor = (mu - Quad::integer(1)) * Quad::rational(1, ell);
    Quad target = lambda * quad_pow(factor, k) *
                  quad_pow(mu, static_cast<unsigned>(rank_of(M, out)));
    ensure(Quad::integer(epsilon(restrict_to(M, out))) > target,
           "find_skew_dense_subset: density postcondition failed");
    return out;
}

// Exact difference epsilon(M) - epg_size_formula(rank(M), q, k); positive
// values witness density above the extension geometry of the same rank.
// Inherits the formula's own constraint k <= rank(M).
inline long long density_vs_epg(const Matroid& M, unsigned q, unsigned k) {
    return epsilon(M) - epg_size_formula(static_cast<unsigned>(rank(M)), q, k);
}

} // namespace epg
