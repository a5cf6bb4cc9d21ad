#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <set>
#include <vector>

#include "epg/field.hpp"

using namespace epg;

namespace {

// Oracle: least monic irreducible of degree e over GF(p), found by brute
// root/divisor checks written independently of the library's search.
std::vector<unsigned> oracle_least_irreducible(unsigned p, unsigned e) {
    auto eval = [&](const std::vector<unsigned>& f, unsigned x) {
        unsigned acc = 0;
        for (std::size_t i = f.size(); i-- > 0;) acc = (acc * x + f[i]) % p;
        return acc;
    };
    std::uint64_t count = 1;
    for (unsigned i = 0; i < e; ++i) count *= p;
    for (std::uint64_t n = 0; n < count; ++n) {
        std::vector<unsigned> f(e + 1, 0);
        std::uint64_t t = n;
        for (unsigned i = 0; i < e; ++i) { f[i] = static_cast<unsigned>(t % p); t /= p; }
        f[e] = 1;
        bool irreducible = true;
        if (e <= 3) {
            // Degree 2 and 3 are irreducible iff rootless; degree 1 always.
            if (e >= 2) {
                for (unsigned x = 0; x < p && irreducible; ++x)
                    if (eval(f, x) == 0) irreducible = false;
            }
        } else if (e == 4 && p == 2) {
            // Rootless and not a product of two irreducible quadratics.
            for (unsigned x = 0; x < 2 && irreducible; ++x)
                if (eval(f, x) == 0) irreducible = false;
            // x^4+x^2+1 = (x^2+x+1)^2 is the only rootless reducible quartic
            // over GF(2).
            if (irreducible && f == std::vector<unsigned>{1, 0, 1, 0, 1}) irreducible = false;
        } else {
            continue;
        }
        if (irreducible) return f;
    }
    FAIL("oracle found no irreducible polynomial");
    return {};
}

void check_axioms_exhaustive(const Field& F) {
    const unsigned q = F.order();
    for (Elem a = 0; a < q; ++a) {
        REQUIRE(F.add(a, 0) == a);
        REQUIRE(F.mul(a, 1) == a);
        REQUIRE(F.add(a, F.neg(a)) == 0);
        if (a != 0) REQUIRE(F.mul(a, F.inv(a)) == 1);
        for (Elem b = 0; b < q; ++b) {
            REQUIRE(F.add(a, b) == F.add(b, a));
            REQUIRE(F.mul(a, b) == F.mul(b, a));
            for (Elem c = 0; c < q; ++c) {
                REQUIRE(F.add(F.add(a, b), c) == F.add(a, F.add(b, c)));
                REQUIRE(F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c)));
                REQUIRE(F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c)));
            }
        }
    }
}

} // namespace

TEST_CASE("canonical moduli match brute-force least irreducibles", "[field]") {
    for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{
             {2, 1}, {2, 2}, {2, 3}, {2, 4}, {3, 1}, {3, 2}, {3, 3}, {5, 2}, {7, 1}}) {
        auto F = Field::make(p, e);
        REQUIRE(F->modulus() == oracle_least_irreducible(p, e));
    }
}

TEST_CASE("frozen moduli for the workhorse fields", "[field]") {
    REQUIRE(Field::make(2, 2)->modulus() == std::vector<unsigned>{1, 1, 1}); // x^2+x+1
    REQUIRE(Field::make(3, 2)->modulus() == std::vector<unsigned>{1, 0, 1}); // x^2+1
    REQUIRE(Field::make(2, 4)->modulus() == std::vector<unsigned>{1, 1, 0, 0, 1}); // x^4+x+1
    REQUIRE(Field::make(2, 1)->modulus() == std::vector<unsigned>{0, 1}); // x
}

TEST_CASE("construction rejects bad parameters", "[field]") {
    REQUIRE_THROWS_AS(Field::make(4, 1), Error);
    REQUIRE_THROWS_AS(Field::make(1, 3), Error);
    REQUIRE_THROWS_AS(Field::make(2, 17), Error);
    REQUIRE_THROWS_AS(Field::make(0, 1), Error);
}

TEST_CASE("field axioms hold exhaustively for q <= 16", "[field]") {
    for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{
             {2, 1}, {3, 1}, {2, 2}, {5, 1}, {7, 1}, {2, 3}, {3, 2}, {11, 1}, {13, 1}, {2, 4}}) {
        check_axioms_exhaustive(*Field::make(p, e));
    }
}

TEST_CASE("field axioms hold on sampled triples of GF(81)", "[field]") {
    auto F = Field::make(3, 4);
    Rng rng(20260819);
    for (int t = 0; t < 2000; ++t) {
        Elem a = static_cast<Elem>(rng.below(81));
        Elem b = static_cast<Elem>(rng.below(81));
        Elem c = static_cast<Elem>(rng.below(81));
        REQUIRE(F->add(a, b) == F->add(b, a));
        REQUIRE(F->mul(F->mul(a, b), c) == F->mul(a, F->mul(b, c)));
        REQUIRE(F->mul(a, F->add(b, c)) == F->add(F->mul(a, b), F->mul(a, c)));
        if (a != 0) REQUIRE(F->mul(a, F->inv(a)) == 1);
    }
}

TEST_CASE("GF(2) and GF(4) arithmetic facts", "[field]") {
    auto F2 = Field::make(2, 1);
    REQUIRE(F2->add(1, 1) == 0);
    REQUIRE(F2->generator() == 1);

    auto F4 = Field::make(2, 2);
    // Encodings: 0, 1, 2 = w, 3 = w+1 with w^2 = w+1.
    REQUIRE(F4->mul(2, 3) == 1);
    REQUIRE(F4->mul(2, 2) == 3);
    REQUIRE(F4->generator() == 2);
}

TEST_CASE("exp/log round-trip on every nonzero element", "[field]") {
    for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 4}, {3, 3}}) {
        auto F = Field::make(p, e);
        Elem g = F->generator();
        // g's powers enumerate all nonzero elements exactly once.
        std::set<Elem> seen;
        Elem x = 1;
        for (unsigned i = 0; i + 1 < F->order(); ++i) {
            seen.insert(x);
            x = F->mul(x, g);
        }
        REQUIRE(x == 1);
        REQUIRE(seen.size() == F->order() - 1);
    }
}

TEST_CASE("frobenius is a field automorphism fixing exactly the subfield", "[field]") {
    for (auto [p, e, s] : std::vector<std::array<unsigned, 3>>{
             {2, 2, 2}, {3, 2, 3}, {2, 4, 4}, {2, 4, 2}, {3, 4, 9}}) {
        auto F = Field::make(p, e);
        unsigned fixed = 0;
        for (Elem a = 0; a < F->order(); ++a) {
            if (F->frobenius(a, s) == a) ++fixed;
            for (Elem b = 0; b < F->order(); ++b) {
                REQUIRE(F->frobenius(F->add(a, b), s) == F->add(F->frobenius(a, s), F->frobenius(b, s)));
                REQUIRE(F->frobenius(F->mul(a, b), s) == F->mul(F->frobenius(a, s), F->frobenius(b, s)));
            }
        }
        REQUIRE(fixed == s);
    }
    auto F9 = Field::make(3, 2);
    REQUIRE_THROWS_AS(F9->frobenius(1, 4), Error);
    // w = encoding 2 in GF(4): w^2 = w+1 = encoding 3.
    REQUIRE(Field::make(2, 2)->frobenius(2, 2) == 3);
}

TEST_CASE("subfield_elements returns the closed subfield, ascending", "[field]") {
    auto F4 = Field::make(2, 2);
    REQUIRE(F4->subfield_elements(2) == std::vector<Elem>{0, 1});

    auto F16 = Field::make(2, 4);
    auto sub = F16->subfield_elements(4);
    REQUIRE(sub.size() == 4);
    REQUIRE(std::is_sorted(sub.begin(), sub.end()));
    std::set<Elem> s(sub.begin(), sub.end());
    for (Elem a : sub)
        for (Elem b : sub) {
            REQUIRE(s.count(F16->add(a, b)) == 1);
            REQUIRE(s.count(F16->mul(a, b)) == 1);
        }

    auto F9 = Field::make(3, 2);
    REQUIRE(F9->subfield_elements(3) == std::vector<Elem>{0, 1, 2});
    REQUIRE_THROWS_AS(F9->subfield_elements(4), Error);
}

TEST_CASE("pick_omega selects the least element outside GF(q)", "[field]") {
    REQUIRE(Field::make(2, 2)->pick_omega(2) == 2);
    REQUIRE(Field::make(3, 2)->pick_omega(3) == 3);
    // In GF(16) with modulus x^4+x+1, x itself is primitive, so the least
    // element outside GF(4) is already encoding 2.
    REQUIRE(Field::make(2, 4)->pick_omega(4) == 2);
    REQUIRE_THROWS_AS(Field::make(2, 3)->pick_omega(2), Error);
}

TEST_CASE("decompose splits GF(q^2) as GF(q) + omega GF(q)", "[field]") {
    for (auto [p, e] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 4}}) {
        auto F = Field::make(p, e);
        unsigned q = 1;
        for (unsigned i = 0; i < e / 2; ++i) q *= p;
        Elem omega = F->pick_omega(q);
        std::set<std::pair<Elem, Elem>> images;
        for (Elem x = 0; x < F->order(); ++x) {
            auto [v, vp] = F->decompose(omega, x, q);
            REQUIRE(F->in_subfield(v, q));
            REQUIRE(F->in_subfield(vp, q));
            REQUIRE(F->add(v, F->mul(omega, vp)) == x);
            images.insert({v, vp});
        }
        REQUIRE(images.size() == F->order()); // bijection onto GF(q)^2
        // Subfield elements decompose with zero omega part.
        for (Elem v : F->subfield_elements(q))
            REQUIRE(F->decompose(omega, v, q) == std::make_pair(v, Elem{0}));
        REQUIRE(F->decompose(omega, omega, q) == std::make_pair(Elem{0}, Elem{1}));
        REQUIRE_THROWS_AS(F->decompose(1, 2, q), Error); // omega inside GF(q)
    }
}

TEST_CASE("subfield embedding is an injective homomorphism onto the subfield", "[field]") {
    for (auto [sp, se, bp, be] : std::vector<std::array<unsigned, 4>>{
             {2, 1, 2, 2}, {3, 1, 3, 2}, {2, 2, 2, 4}}) {
        auto S = Field::make(sp, se);
        auto B = Field::make(bp, be);
        auto emb = subfield_embedding(*S, *B);
        REQUIRE(emb.size() == S->order());
        REQUIRE(emb[0] == 0);
        REQUIRE(emb[1] == 1);
        std::vector<Elem> image(emb.begin(), emb.end());
        std::sort(image.begin(), image.end());
        REQUIRE(image == B->subfield_elements(S->order()));
        for (Elem a = 0; a < S->order(); ++a)
            for (Elem b = 0; b < S->order(); ++b) {
                REQUIRE(emb[S->add(a, b)] == B->add(emb[a], emb[b]));
                REQUIRE(emb[S->mul(a, b)] == B->mul(emb[a], emb[b]));
            }
    }
    REQUIRE_THROWS_AS(subfield_embedding(*Field::make(2, 2), *Field::make(3, 2)), Error);
    REQUIRE_THROWS_AS(subfield_embedding(*Field::make(2, 2), *Field::make(2, 3)), Error);
}

TEST_CASE("prime subfield encodings agree across hosts", "[field]") {
    // Constants encode as themselves, so GF(p) sits at encodings 0..p-1.
    auto F9 = Field::make(3, 2);
    REQUIRE(F9->add(2, 2) == 1);
    REQUIRE(F9->mul(2, 2) == 1);
    auto F4 = Field::make(2, 2);
    REQUIRE(F4->add(1, 1) == 0);
}
