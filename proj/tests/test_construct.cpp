#include <catch2/catch_amalgamated.hpp>

#include "epg/construct.hpp"
#include "epg/handle.hpp"
#include "epg/isomorphism.hpp"

using namespace epg;

TEST_CASE("geometric sums and the line-free density bound", "[construct]") {
    REQUIRE(geometric_sum(2, 0) == 0);
    REQUIRE(geometric_sum(2, 1) == 1);
    REQUIRE(geometric_sum(2, 3) == 7);
    REQUIRE(geometric_sum(3, 4) == 40);
    REQUIRE(kung_bound(2, 3) == 7);
    REQUIRE(kung_bound(4, 2) == 5);
    REQUIRE(kung_bound(3, 0) == 0);
    REQUIRE(kung_bound(9, 3) == 91);
    REQUIRE_THROWS_AS(kung_bound(1, 3), Error);
    REQUIRE_THROWS_AS(geometric_sum(3, 60), Error);
}

TEST_CASE("extension geometry size formula, frozen values", "[construct]") {
    REQUIRE(epg_size_formula(3, 2, 0) == 7);
    REQUIRE(epg_size_formula(3, 2, 1) == 13);
    REQUIRE(epg_size_formula(2, 2, 1) == 5);
    REQUIRE(epg_size_formula(4, 2, 1) == 29);
    REQUIRE(epg_size_formula(5, 2, 1) == 61);
    REQUIRE(epg_size_formula(4, 3, 1) == 118);
    REQUIRE(epg_size_formula(3, 3, 1) == 37);
    REQUIRE(epg_size_formula(3, 2, 2) == 21); // equals PG(2,4)
    REQUIRE(epg_size_formula(3, 3, 2) == 91); // equals PG(2,9)
    REQUIRE(epg_size_formula(2, 3, 2) == 10); // equals PG(1,9)
    REQUIRE(epg_size_formula(0, 2, 0) == 0); // rank-0 geometry is empty
    REQUIRE(epg_size_formula(1, 2, 0) == 1);
    REQUIRE_THROWS_AS(epg_size_formula(2, 6, 1), Error);   // q not a prime power
    REQUIRE_THROWS_AS(epg_size_formula(2, 2, 3), Error);   // k > n
    REQUIRE_THROWS_AS(epg_size_formula(40, 3, 2), Error);  // overflow
    for (unsigned q : {2u, 3u})
        for (unsigned k = 0; k <= 2; ++k)
            for (unsigned n = k; n <= 5; ++n)
                REQUIRE(growth_rate_formula(n, q, k) == epg_size_formula(n, q, k));
}

TEST_CASE("build_pg enumerates canonical projective points", "[construct]") {
    auto M = build_pg(2, 2);
    REQUIRE(M.size() == 7);
    REQUIRE(rank(M) == 3);
    REQUIRE(M.column(0) == std::vector<Elem>{0, 0, 1});
    REQUIRE(M.column(1) == std::vector<Elem>{0, 1, 0});
    REQUIRE(M.column(2) == std::vector<Elem>{0, 1, 1});
    REQUIRE(M.column(6) == std::vector<Elem>{1, 1, 1});
    REQUIRE(is_projective_geometry(M, 2).is_pg);

    REQUIRE(build_pg(0, 3).size() == 1);
    REQUIRE(build_pg(1, 3).size() == 4);
    auto P4 = build_pg(2, 4);
    REQUIRE(P4.size() == 21);
    REQUIRE(P4.field().order() == 4);
    REQUIRE(is_projective_geometry(P4, 4).is_pg);
    for (unsigned q : {2u, 3u, 4u})
        for (unsigned r = 1; r <= 3; ++r)
            REQUIRE(static_cast<long long>(build_pg(r - 1, q).size()) == kung_bound(q, r));
}

TEST_CASE("build_pg_in_square_field embeds PG(n-1,q) over GF(q^2)", "[construct]") {
    auto M = build_pg_in_square_field(2, 2);
    REQUIRE(M.field().order() == 4);
    REQUIRE(M.size() == 7);
    REQUIRE(is_simple(M));
    REQUIRE(is_projective_geometry(M, 2).is_pg);
    for (std::size_t i = 0; i < M.size(); ++i)
        for (Elem x : M.column(i)) REQUIRE((x == 0 || x == 1));
    REQUIRE(matroid_isomorphic(M, build_pg(2, 2)).isomorphic);

    auto handle = canonical_pg_handle(M, 2);
    REQUIRE(handle.certified);
    REQUIRE(handle.members.size() == 7);
    REQUIRE(handle.rank_n == 3);
    REQUIRE(handle_spans(handle));
}

TEST_CASE("extension geometry host collapses to the formula count", "[construct]") {
    auto host = build_epg_host(2, 2, 1);
    REQUIRE(host.size() == 16); // 4 * 2 * 2 vectors including zero
    auto [si, smap] = simplify(host);
    REQUIRE(smap.loops == LabelSet{0});
    REQUIRE(si.size() == 13);

    auto M = build_epg(2, 2, 1);
    REQUIRE(M.size() == 13);
    REQUIRE(rank(M) == 3);
    REQUIRE_FALSE(is_projective_geometry(M, 2).is_pg);
    REQUIRE(epsilon(M) == epg_size_formula(3, 2, 1));
}

TEST_CASE("extension geometry with k = 0 is the projective geometry itself", "[construct]") {
    for (auto [n1, q] : std::vector<std::pair<unsigned, unsigned>>{{2, 2}, {3, 2}, {2, 3}}) {
        auto E = build_epg(n1, q, 0);
        REQUIRE(is_projective_geometry(E, q).is_pg);
        REQUIRE(matroid_isomorphic(E, build_pg(n1, q)).isomorphic);
    }
}

TEST_CASE("point counts match the formula on a subgrid", "[construct]") {
    for (unsigned q : {2u, 3u})
        for (unsigned k = 0; k <= 2; ++k)
            for (unsigned n = std::max(k, 1u); n <= 4; ++n)
                REQUIRE(static_cast<long long>(build_epg(n - 1, q, k).size()) ==
                        epg_size_formula(n, q, k));
}

TEST_CASE("smaller extension geometries embed as restrictions", "[construct]") {
    // Zeroing the trailing coordinate embeds the rank-(n-1) geometry.
    for (auto [n1, q, k] : std::vector<std::array<unsigned, 3>>{{3, 2, 1}, {2, 2, 1}, {2, 3, 1}}) {
        auto big = build_epg(n1, q, k);
        LabelSet sub;
        for (std::size_t i = 0; i < big.size(); ++i)
            if (big.column(i).back() == 0) sub.push_back(big.labels()[i]);
        auto R = restrict_to(big, make_label_set(sub));
        auto small = build_epg(n1 - 1, q, k);
        REQUIRE(R.size() == small.size());
        REQUIRE(matroid_isomorphic(R, small).isomorphic);
    }
}

TEST_CASE("extension representation is independent of the chosen omega", "[construct]") {
    auto F4 = Field::make(2, 2);
    REQUIRE_THROWS_AS(build_extension_rep(F4, 1, 3), Error); // omega inside GF(2)
    auto A = build_extension_rep(F4, 2, 3);
    auto B = build_extension_rep(F4, 3, 3);
    REQUIRE(A.size() == 13);
    REQUIRE(B.size() == 13);
    REQUIRE(matroid_isomorphic(A, B).isomorphic);
    REQUIRE(matroid_isomorphic(A, build_epg(2, 2, 1)).isomorphic);

    auto F9 = Field::make(3, 2);
    auto C = build_extension_rep(F9, 3, 2);
    REQUIRE(C.size() == epg_size_formula(2, 3, 1));
    REQUIRE(matroid_isomorphic(C, build_epg(1, 3, 1)).isomorphic);
}

TEST_CASE("random projections have the right rank and density", "[construct]") {
    auto zero = random_projection_member(3, 2, 0, 5);
    REQUIRE(zero.member.size() == 7);
    REQUIRE(matroid_isomorphic(zero.member, build_pg(2, 2)).isomorphic);

    for (std::uint64_t seed = 1; seed <= 6; ++seed) {
        auto proj = random_projection_member(4, 2, 1, seed);
        REQUIRE(rank(proj.member) == 3);
        REQUIRE(proj.contracted_cols.size() == 1);
        REQUIRE(is_simple(proj.member));
        REQUIRE(epsilon(proj.member) <= growth_rate_formula(3, 2, 1));
    }
    auto two = random_projection_member(5, 2, 2, 11);
    REQUIRE(rank(two.member) == 3);
    REQUIRE(epsilon(two.member) <= growth_rate_formula(3, 2, 2));
    REQUIRE_THROWS_AS(random_projection_member(3, 2, 3, 1), Error);
}

TEST_CASE("certify_pg_handle rejects broken handles", "[construct]") {
    auto M = build_pg_in_square_field(2, 2);
    REQUIRE_THROWS_AS(certify_pg_handle(M, {0, 1}, 2), Error); // two points are no geometry
    REQUIRE_THROWS_AS(certify_pg_handle(M, {0, 1, 3}, 2), Error); // independent triple, count off
    REQUIRE_THROWS_AS(certify_pg_handle(M, {0, 1, 99}, 2), Error);
    REQUIRE_THROWS_AS(certify_pg_handle(build_pg(2, 2), {0, 1, 2}, 2), Error); // host not GF(q^2)
    // A line of the plane is PG(1, 2): a valid non-spanning handle.
    auto h = certify_pg_handle(M, {0, 1, 2}, 2);
    REQUIRE(h.rank_n == 2);
    REQUIRE_FALSE(handle_spans(h));
}
