#ifndef EPG_FIELD_HPP
#define EPG_FIELD_HPP

#include <algorithm>
#include <cstdint>
#include <memory>
#include <utility>
#include <vector>

#include "epg/common.hpp"

namespace epg {

// Element of a finite field, encoded as an integer in [0, q).
// The encoding is positional base p over the polynomial basis:
//   value = c0 + c1*p + ... + c_{e-1}*p^{e-1}
// where the element is c0 + c1*a + ... + c_{e-1}*a^{e-1} and a is a root of
// the canonical modulus.  Addition of encodings is digit-wise mod p, so the
// prime subfield occupies encodings 0..p-1 and 0/1 are the field's 0/1.
using Elem = std::uint32_t;

namespace detail {

inline bool is_prime(unsigned n) {
    if (n < 2) return false;
    for (unsigned d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

// Dense polynomial over GF(p), coefficients ascending by degree.
using Poly = std::vector<unsigned>;

inline void poly_trim(Poly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

inline int poly_deg(const Poly& f) { return static_cast<int>(f.size()) - 1; }

// Remainder of f mod g, g monic nonconstant.
inline Poly poly_rem(Poly f, const Poly& g, unsigned p) {
    poly_trim(f);
    const int dg = poly_deg(g);
    while (poly_deg(f) >= dg) {
        unsigned lead = f.back();
        int shift = poly_deg(f) - dg;
        for (int i = 0; i <= dg; ++i) {
            unsigned sub = (lead * g[static_cast<std::size_t>(i)]) % p;
            unsigned& c = f[static_cast<std::size_t>(i + shift)];
            c = (c + p - sub) % p;
        }
        poly_trim(f);
    }
    return f;
}

inline Poly poly_mul(const Poly& a, const Poly& b, unsigned p) {
    if (a.empty() || b.empty()) return {};
    Poly r(a.size() + b.size() - 1, 0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + a[i] * b[j]) % p;
    poly_trim(r);
    return r;
}

// Irreducibility over GF(p) by trial division with every monic divisor of
// degree 1..deg/2.  Fine at this scale: moduli have degree <= 16.
inline bool poly_irreducible(const Poly& f, unsigned p) {
    const int df = poly_deg(f);
    if (df < 1) return false;
    if (df == 1) return true;
    for (int dd = 1; dd <= df / 2; ++dd) {
        std::uint64_t count = 1;
        for (int i = 0; i < dd; ++i) count *= p;
        for (std::uint64_t n = 0; n < count; ++n) {
            Poly g(static_cast<std::size_t>(dd) + 1, 0);
            std::uint64_t t = n;
            for (int i = 0; i < dd; ++i) { g[static_cast<std::size_t>(i)] = t % p; t /= p; }
            g[static_cast<std::size_t>(dd)] = 1;
            if (poly_rem(f, g, p).empty()) return false;
        }
    }
    return true;
}

} // namespace detail

class Field;
using FieldPtr = std::shared_ptr<const Field>;

// GF(p^e) with q = p^e capped at 2^16.  Multiplication runs on exp/log
// tables over a fixed generator; addition is digit-wise mod p on encodings.
// Immutable after construction and safe to share across threads.
class Field {
public:
    // Canonical construction: modulus is the least monic irreducible of
    // degree e over GF(p), comparing coefficient tuples (c_{e-1},...,c_0);
    // the generator is the least-encoded element of multiplicative order q-1.
    static FieldPtr make(unsigned p, unsigned e) {
        require(detail::is_prime(p), "make_field: p must be prime");
        require(e >= 1, "make_field: e must be >= 1");
        std::uint64_t q = 1;
        for (unsigned i = 0; i < e; ++i) {
            q *= p;
            require(q <= 65536, "make_field: field order exceeds 2^16 cap");
        }
        return FieldPtr(new Field(p, e, static_cast<unsigned>(q)));
    }

    unsigned p() const { return p_; }
    unsigned e() const { return e_; }
    unsigned order() const { return q_; }

    // Coefficients of the modulus, ascending by degree; length e+1, monic.
    const std::vector<unsigned>& modulus() const { return modulus_; }

    Elem generator() const { return gen_; }

    bool same_as(const Field& other) const {
        return p_ == other.p_ && e_ == other.e_ && modulus_ == other.modulus_;
    }

    Elem add(Elem a, Elem b) const {
        check_elem(a); check_elem(b);
        if (p_ == 2) return a ^ b;
        Elem r = 0, mult = 1;
        for (unsigned i = 0; i < e_; ++i) {
            unsigned da = a % p_, db = b % p_;
            a /= p_; b /= p_;
            r += ((da + db) % p_) * mult;
            mult *= p_;
        }
        return r;
    }

    Elem neg(Elem a) const {
        check_elem(a);
        if (p_ == 2) return a;
        Elem r = 0, mult = 1;
        for (unsigned i = 0; i < e_; ++i) {
            unsigned da = a % p_;
            a /= p_;
            r += ((p_ - da) % p_) * mult;
            mult *= p_;
        }
        return r;
    }

    Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }

    Elem mul(Elem a, Elem b) const {
        check_elem(a); check_elem(b);
        if (a == 0 || b == 0) return 0;
        std::uint64_t s = static_cast<std::uint64_t>(log_[a]) + log_[b];
        return exp_[s % (q_ - 1)];
    }

    Elem inv(Elem a) const {
        check_elem(a);
        require(a != 0, "inv: zero has no inverse");
        return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
    }

    Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }

    Elem pow(Elem a, std::uint64_t n) const {
        check_elem(a);
        if (n == 0) return 1;
        if (a == 0) return 0;
        std::uint64_t s = (static_cast<std::uint64_t>(log_[a]) % (q_ - 1)) * (n % (q_ - 1)) % (q_ - 1);
        return exp_[s];
    }

    // Frobenius power x -> x^s for a subfield order s = p^d, d | e.
    Elem frobenius(Elem a, unsigned s) const {
        require(subfield_degree(s) > 0, "frobenius: s is not a subfield order");
        return pow(a, s);
    }

    // All elements fixed by x -> x^s, ascending; these form the unique
    // subfield of order s.
    std::vector<Elem> subfield_elements(unsigned s) const {
        require(subfield_degree(s) > 0, "subfield_elements: s is not a subfield order");
        std::vector<Elem> out;
        for (Elem a = 0; a < q_; ++a)
            if (pow(a, s) == a) out.push_back(a);
        ensure(out.size() == s, "subfield_elements: wrong fixed-point count");
        return out;
    }

    bool in_subfield(Elem a, unsigned s) const {
        require(subfield_degree(s) > 0, "in_subfield: s is not a subfield order");
        return pow(a, s) == a;
    }

    // Least element outside the index-2 subfield; requires order() == q^2.
    Elem pick_omega(unsigned q) const {
        require(q >= 2 && static_cast<std::uint64_t>(q) * q == q_,
                "pick_omega: field order is not q^2");
        for (Elem a = 0; a < q_; ++a)
            if (pow(a, q) != a) return a;
        throw InternalError("pick_omega: no element outside subfield");
    }

    // Writes x uniquely as v + omega*v' with v, v' in the subfield GF(q),
    // where order() == q^2 and omega lies outside GF(q).
    std::pair<Elem, Elem> decompose(Elem omega, Elem x, unsigned q) const {
        require(q >= 2 && static_cast<std::uint64_t>(q) * q == q_,
                "decompose: field order is not q^2");
        require(pow(omega, q) != omega, "decompose: omega lies in the subfield");
        Elem denom = sub(pow(omega, q), omega);
        Elem vp = div(sub(pow(x, q), x), denom);
        Elem v = sub(x, mul(omega, vp));
        ensure(pow(v, q) == v && pow(vp, q) == vp, "decompose: parts not in subfield");
        return {v, vp};
    }

private:
    Field(unsigned p, unsigned e, unsigned q) : p_(p), e_(e), q_(q) {
        find_modulus();
        build_tables();
    }

    void check_elem(Elem a) const {
        require(a < q_, "field element encoding out of range");
    }

    // Degree d with s == p^d and d | e, or 0 if s is not a subfield order.
    unsigned subfield_degree(unsigned s) const {
        std::uint64_t v = p_;
        for (unsigned d = 1; d <= e_; ++d, v *= p_)
            if (v == s) return (e_ % d == 0) ? d : 0;
        return 0;
    }

    detail::Poly elem_poly(Elem a) const {
        detail::Poly f;
        while (a) { f.push_back(a % p_); a /= p_; }
        return f;
    }

    Elem poly_elem(const detail::Poly& f) const {
        Elem v = 0;
        for (std::size_t i = f.size(); i-- > 0;) v = v * p_ + f[i];
        return v;
    }

    Elem mul_poly(Elem a, Elem b) const {
        return poly_elem(detail::poly_rem(
            detail::poly_mul(elem_poly(a), elem_poly(b), p_), modulus_, p_));
    }

    void find_modulus() {
        std::uint64_t count = 1;
        for (unsigned i = 0; i < e_; ++i) count *= p_;
        for (std::uint64_t n = 0; n < count; ++n) {
            // n's base-p digits give (c_{e-1}, ..., c_0), most significant
            // first, so ascending n scans coefficient tuples in order.
            detail::Poly f(e_ + 1, 0);
            std::uint64_t t = n;
            for (unsigned i = 0; i < e_; ++i) { f[i] = static_cast<unsigned>(t % p_); t /= p_; }
            f[e_] = 1;
            if (detail::poly_irreducible(f, p_)) { modulus_ = f; return; }
        }
        throw InternalError("make_field: no irreducible modulus found");
    }

    // Order of a divides q-1; a generates iff a^((q-1)/f) != 1 for every
    // prime factor f of q-1.
    bool generates(Elem a, const std::vector<unsigned>& prime_factors) const {
        for (unsigned f : prime_factors) {
            Elem x = 1;
            std::uint64_t n = (q_ - 1) / f;
            Elem base = a;
            while (n) {
                if (n & 1) x = mul_poly(x, base);
                base = mul_poly(base, base);
                n >>= 1;
            }
            if (x == 1) return false;
        }
        return true;
    }

    void build_tables() {
        std::vector<unsigned> pf;
        unsigned r = q_ - 1;
        for (unsigned d = 2; d * d <= r; ++d)
            while (r % d == 0) { if (pf.empty() || pf.back() != d) pf.push_back(d); r /= d; }
        if (r > 1) pf.push_back(r);

        gen_ = 0;
        for (Elem a = 1; a < q_; ++a)
            if (generates(a, pf)) { gen_ = a; break; }
        ensure(gen_ != 0, "make_field: no generator found");

        exp_.assign(q_ - 1, 0);
        log_.assign(q_, 0);
        Elem x = 1;
        for (unsigned i = 0; i < q_ - 1; ++i) {
            exp_[i] = x;
            log_[x] = i;
            x = mul_poly(x, gen_);
        }
        ensure(x == 1, "make_field: generator order mismatch");
    }

    unsigned p_, e_, q_;
    std::vector<unsigned> modulus_;
    Elem gen_ = 0;
    std::vector<Elem> exp_, log_;
};

// Embedding table of `sub` into `big`: image of encoding a sits at index a.
// The embedding maps the generator root of sub's modulus to that modulus'
// least-encoded root in big; its image is big's unique subfield of the same
// order.
inline std::vector<Elem> subfield_embedding(const Field& sub, const Field& big) {
    require(sub.p() == big.p(), "subfield_embedding: characteristic mismatch");
    require(big.e() % sub.e() == 0, "subfield_embedding: no such subfield");

    Elem root = 0;
    bool found = false;
    for (Elem t = 0; t < big.order() && !found; ++t) {
        Elem acc = 0;
        const auto& m = sub.modulus();
        for (std::size_t i = m.size(); i-- > 0;)
            acc = big.add(big.mul(acc, t), m[i] % big.p());
        if (acc == 0) { root = t; found = true; }
    }
    ensure(found, "subfield_embedding: modulus has no root in big field");

    std::vector<Elem> table(sub.order());
    for (Elem a = 0; a < sub.order(); ++a) {
        Elem img = 0, apow = 1, rest = a;
        for (unsigned i = 0; i < sub.e(); ++i) {
            img = big.add(img, big.mul(rest % sub.p(), apow));
            apow = big.mul(apow, root);
            rest /= sub.p();
        }
        table[a] = img;
    }
    return table;
}

} // namespace epg

#endif
