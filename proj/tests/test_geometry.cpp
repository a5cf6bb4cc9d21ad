#include <catch2/catch_amalgamated.hpp>

#include <cstdint>
#include <utility>
#include <vector>

#include "epg/construct.hpp"
#include "epg/geometry.hpp"

using namespace epg;

namespace {

Matroid with_extra_columns(const Matroid& base, const std::vector<std::vector<Elem>>& extras) {
    std::vector<std::vector<Elem>> cols;
    cols.reserve(base.size() + extras.size());
    for (std::size_t i = 0; i < base.size(); ++i) cols.push_back(base.column(i));
    for (const auto& c : extras) cols.push_back(c);
    return Matroid::from_columns(base.field_ptr(), base.rows(), cols);
}

Label unit_label(const Matroid& M, std::size_t row) {
    for (std::size_t i = 0; i < M.size(); ++i) {
        const auto& col = M.column(i);
        bool unit = col[row] == 1;
        for (std::size_t r = 0; unit && r < col.size(); ++r)
            if (r != row && col[r] != 0) unit = false;
        if (unit) return M.labels()[i];
    }
    throw InternalError("unit_label: no unit column");
}

// Projective host plus k fresh points, one per disjoint coordinate-pair
// line, with subfield-escaping coefficient ratios: a ready-made unstable
// set of size k.
struct SeededInstance {
    Matroid M;
    UnstableSet X;
};

SeededInstance seeded_unstable_instance(unsigned n_prime, unsigned q, unsigned k,
                                        std::uint64_t seed) {
    auto base = build_pg_in_square_field(n_prime - 1, q);
    const Field& F = base.field();
    Rng rng(seed);
    std::vector<std::vector<Elem>> extras;
    std::vector<LabelSet> lines;
    for (unsigned i = 0; i < k; ++i) {
        Label la = unit_label(base, 2 * i);
        Label lb = unit_label(base, 2 * i + 1);
        lines.push_back(closure(base, {la, lb}));
        Elem a = static_cast<Elem>(1 + rng.below(F.order() - 1));
        Elem mu = 0;
        do {
            mu = static_cast<Elem>(rng.below(F.order()));
        } while (F.in_subfield(mu, q));
        std::vector<Elem> col(base.rows(), 0);
        col[2 * i] = a;
        col[2 * i + 1] = F.mul(a, mu);
        extras.push_back(col);
    }
    SeededInstance inst{with_extra_columns(base, extras), {}};
    for (unsigned i = 0; i < k; ++i) {
        Label e = static_cast<Label>(base.size() + i);
        inst.X.elements.push_back(e);
        inst.X.line_map[e] = lines[i];
    }
    return inst;
}

// PG(2,2) over GF(4) together with the point (1, omega, 0): the classic one
// extension-point host.
Matroid hand_host() {
    return with_extra_columns(build_pg_in_square_field(2, 2), {{1, 2, 0}});
}

} // namespace

TEST_CASE("line location by subfield decomposition", "[geometry]") {
    auto M = hand_host();
    auto R = canonical_pg_handle(M, 2);
    REQUIRE(R.members == LabelSet{0, 1, 2, 3, 4, 5, 6});

    SECTION("the hand instance") {
        CHECK(line_through(M, R, 7) == LabelSet{1, 3, 5});
    }
    SECTION("points parallel to R have no line") {
        auto M2 = with_extra_columns(build_pg_in_square_field(2, 2), {{2, 2, 2}});
        CHECK_THROWS_AS(line_through(M2, R, 7), Error);
        CHECK_THROWS_AS(line_through(M, R, 0), Error);
    }
    SECTION("loops have no line") {
        auto M3 = with_extra_columns(build_pg_in_square_field(2, 2), {{0, 0, 0}});
        CHECK_THROWS_AS(line_through(M3, R, 7), Error);
    }
    SECTION("agrees with the exhaustive scan on extension geometries") {
        const std::vector<std::pair<unsigned, unsigned>> hosts = {{2, 2}, {2, 3}};
        for (auto [n1, q] : hosts) {
            auto host = build_epg(n1, q, 1);
            auto H = canonical_pg_handle(host, q);
            auto Rm = members_matroid(H);
            auto all_lines = lines_of(Rm);
            for (Label e : set_minus(host.ground_set(), H.members)) {
                CAPTURE(q, e);
                LabelSet unique_line;
                int hits = 0;
                for (const auto& L : all_lines)
                    if (set_contains(closure(host, L), e)) {
                        ++hits;
                        unique_line = L;
                    }
                REQUIRE(hits == 1);
                CHECK(line_through(host, H, e) == unique_line);
            }
        }
    }
}

TEST_CASE("matching dichotomy on line lists", "[geometry]") {
    auto R = canonical_pg_handle(build_pg_in_square_field(3, 2), 2);
    auto Rm = members_matroid(R);

    SECTION("cover bound values") {
        CHECK(matching_cover_bound(2, 0) == 0);
        CHECK(matching_cover_bound(2, 1) == 93);
        CHECK(matching_cover_bound(3, 1) == 484);
        CHECK(matching_cover_bound(2, 2) == 1905);
    }
    SECTION("two skew lines match") {
        auto L1 = closure(Rm, {0, 1});
        auto L2 = closure(Rm, {3, 7});
        REQUIRE(L1 == LabelSet{0, 1, 2});
        REQUIRE(L2 == LabelSet{3, 7, 11});
        auto out = find_line_matching(R, {L1, L2}, 1);
        REQUIRE(out.matched);
        REQUIRE(out.matching.size() == 2);
        LabelSet all = set_union(out.matching[0], out.matching[1]);
        CHECK(rank_of(Rm, all) == 4);
    }
    SECTION("three concurrent lines cover") {
        std::vector<LabelSet> pencil = {closure(Rm, {0, 1}), closure(Rm, {0, 3}),
                                        closure(Rm, {0, 7})};
        auto out = find_line_matching(R, pencil, 1);
        REQUIRE_FALSE(out.matched);
        CHECK(out.cover_flat.empty());
        CHECK(out.exceptional.size() == 3);
        CHECK(static_cast<long long>(out.exceptional.size()) <= matching_cover_bound(2, 1));
        // every line outside the exceptional list meets the flat: vacuous here
        for (const auto& L : pencil) {
            bool excepted = false;
            for (const auto& E : out.exceptional) excepted = excepted || E == L;
            CHECK((excepted || !set_intersect(L, out.cover_flat).empty()));
        }
    }
    SECTION("one concurrent line suffices for k = 0") {
        std::vector<LabelSet> pencil = {closure(Rm, {0, 1}), closure(Rm, {0, 3}),
                                        closure(Rm, {0, 7})};
        auto out = find_line_matching(R, pencil, 0);
        REQUIRE(out.matched);
        CHECK(out.matching.size() == 1);
    }
    SECTION("no lines gives the empty cover") {
        auto out = find_line_matching(R, {}, 2);
        REQUIRE_FALSE(out.matched);
        CHECK(out.cover_flat.empty());
        CHECK(out.exceptional.empty());
    }
    SECTION("high degree point anchors the matching") {
        auto R5 = canonical_pg_handle(build_pg_in_square_field(4, 2), 2);
        auto Rm5 = members_matroid(R5);
        std::vector<LabelSet> pencil;
        for (const auto& L : lines_of(Rm5))
            if (set_contains(L, 0)) pencil.push_back(L);
        REQUIRE(pencil.size() == 15);
        auto out = find_line_matching(R5, pencil, 0);
        REQUIRE(out.matched);
        REQUIRE(out.matching.size() == 1);
        CHECK(set_contains(out.matching[0], 0));
    }
    SECTION("full-rank anchor set is completed by a skew line") {
        auto R7 = canonical_pg_handle(build_pg_in_square_field(6, 2), 2);
        auto Rm7 = members_matroid(R7);
        std::vector<LabelSet> lines;
        for (const auto& L : lines_of(Rm7))
            if (set_contains(L, 0)) lines.push_back(L);
        REQUIRE(lines.size() == 63);
        lines.push_back(closure(Rm7, {1, 3}));
        REQUIRE(lines.back() == LabelSet{1, 3, 5});
        auto out = find_line_matching(R7, lines, 1);
        REQUIRE(out.matched);
        REQUIRE(out.matching.size() == 2);
        CHECK(out.matching[0] == LabelSet{1, 3, 5});
        CHECK(set_contains(out.matching[1], 0));
        CHECK(rank_of(Rm7, set_union(out.matching[0], out.matching[1])) == 4);
    }
    SECTION("bad input lines are rejected") {
        CHECK_THROWS_AS(find_line_matching(R, {{0, 1, 3}}, 1), Error);
        CHECK_THROWS_AS(find_line_matching(R, {{0, 1}}, 1), Error);
        auto L = closure(Rm, {0, 1});
        CHECK_THROWS_AS(find_line_matching(R, {L, L}, 1), Error);
    }
}

TEST_CASE("unstable set search", "[geometry]") {
    auto M = hand_host();
    auto R = canonical_pg_handle(M, 2);

    SECTION("the hand instance yields the extension point") {
        auto out = find_unstable_set(M, R, 0);
        REQUIRE(out.found);
        CHECK(out.set.elements == LabelSet{7});
        CHECK(out.set.line_map.at(7) == LabelSet{1, 3, 5});
    }
    SECTION("a bare geometry lands in the cover branch") {
        auto host = build_pg_in_square_field(2, 2);
        auto H = canonical_pg_handle(host, 2);
        auto out = find_unstable_set(host, H, 0);
        REQUIRE_FALSE(out.found);
        CHECK(out.cover.empty());
        CHECK(out.eps_contracted == 7);
        CHECK(out.eps_reference == 7);
        CHECK(out.slack_bound == 0);
    }
    SECTION("extension geometries always carry a singleton") {
        auto host = build_epg(3, 2, 1);
        auto H = canonical_pg_handle(host, 2);
        auto out = find_unstable_set(host, H, 0);
        REQUIRE(out.found);
        CHECK(out.set.elements.size() == 1);
    }
    SECTION("rank three blocks a two element unstable set") {
        auto host = build_epg(2, 2, 1);
        auto H = canonical_pg_handle(host, 2);
        auto out = find_unstable_set(host, H, 1);
        REQUIRE_FALSE(out.found);
        CHECK(out.cover.empty());
        CHECK(out.eps_contracted == 13);
        CHECK(out.eps_reference == 7);
        CHECK(out.slack_bound == 5 * 93);
    }
    SECTION("the extension geometry is a cone, so its lines never pair up") {
        // every extension point of build_epg(4, 2, 1) lies on a line through
        // the same apex, hence no two enriched lines are skew
        auto host = build_epg(4, 2, 1);
        auto H = canonical_pg_handle(host, 2);
        auto out = find_unstable_set(host, H, 1);
        REQUIRE_FALSE(out.found);
        CHECK(out.cover.empty());
        CHECK(out.eps_contracted <= out.eps_reference + out.slack_bound);
    }
    SECTION("found sets feed the contraction") {
        auto inst = seeded_unstable_instance(5, 2, 2, 7);
        auto H = canonical_pg_handle(inst.M, 2);
        auto out = find_unstable_set(inst.M, H, 1);
        REQUIRE(out.found);
        CHECK(out.set.elements == inst.X.elements);
        auto minor = contract_unstable(inst.M, H, out.set);
        CHECK(minor.size() == 21);
        CHECK(rank(minor) == 3);
    }
    SECTION("bad handles are rejected") {
        PgHandle fake = R;
        fake.certified = false;
        CHECK_THROWS_AS(find_unstable_set(M, fake, 0), Error);
        auto line_handle = certify_pg_handle(M, {0, 1, 2}, 2);
        CHECK_THROWS_AS(find_unstable_set(M, line_handle, 0), Error);
        auto M2 = with_extra_columns(build_pg_in_square_field(2, 2), {{2, 2, 2}});
        CHECK_THROWS_AS(find_unstable_set(M2, R, 0), Error);
    }
}

TEST_CASE("contraction onto the extension geometry", "[geometry]") {
    auto M = hand_host();
    auto R = canonical_pg_handle(M, 2);

    SECTION("empty set contracts to the geometry itself") {
        auto res = contract_unstable(M, R, UnstableSet{});
        CHECK(res.ground_set() == R.members);
        CHECK(rank(res) == 3);
    }
    SECTION("the hand instance, spelled out") {
        UnstableSet X;
        X.elements = {7};
        X.line_map[7] = {1, 3, 5};
        auto res = contract_unstable(M, R, X);
        CHECK(res.size() == 5);
        CHECK(rank(res) == 2);
        CHECK(res.ground_set() == LabelSet{0, 1, 2, 4, 6});
    }
    SECTION("seeded instances reach the smaller extension geometry") {
        struct Combo {
            unsigned q, k, n_prime;
        };
        for (Combo c : {Combo{2, 1, 3}, Combo{2, 1, 4}, Combo{2, 2, 4}, Combo{3, 1, 3},
                        Combo{3, 1, 4}, Combo{3, 2, 4}}) {
            for (std::uint64_t seed : {11u, 12u}) {
                CAPTURE(c.q, c.k, c.n_prime, seed);
                auto inst = seeded_unstable_instance(c.n_prime, c.q, c.k, seed);
                auto H = canonical_pg_handle(inst.M, c.q);
                auto res = contract_unstable(inst.M, H, inst.X);
                CHECK(static_cast<long long>(res.size()) ==
                      epg_size_formula(c.n_prime - c.k, c.q, c.k));
                CHECK(rank(res) == c.n_prime - c.k);
            }
        }
    }
    SECTION("invalid unstable sets are rejected") {
        UnstableSet wrong_line;
        wrong_line.elements = {7};
        wrong_line.line_map[7] = {0, 1, 2};
        CHECK_THROWS_AS(contract_unstable(M, R, wrong_line), Error);

        UnstableSet member;
        member.elements = {0};
        member.line_map[0] = {1, 3, 5};
        CHECK_THROWS_AS(contract_unstable(M, R, member), Error);

        auto inst = seeded_unstable_instance(4, 2, 2, 5);
        auto H = canonical_pg_handle(inst.M, 2);
        UnstableSet shared = inst.X;
        shared.line_map[shared.elements[1]] = shared.line_map[shared.elements[0]];
        CHECK_THROWS_AS(contract_unstable(inst.M, H, shared), Error);
    }
}

TEST_CASE("constellation search", "[geometry]") {
    auto M = hand_host();

    SECTION("the hand instance carries a one point constellation") {
        auto res = find_constellation(M, 1, 2, 1);
        REQUIRE(res.status == ConstellationStatus::found);
        CHECK(res.cert.centers == LabelSet{1});
        CHECK(res.cert.stars.at(1) == LabelSet{3});
        CHECK(verify_constellation(M, res.cert, 1, 2, 1));
    }
    SECTION("a bare geometry has no long lines") {
        auto host = build_pg_in_square_field(2, 2);
        CHECK(find_constellation(host, 1, 2, 1).status == ConstellationStatus::absent);
    }
    SECTION("center count is limited by the rank of viable centers") {
        CHECK(find_constellation(M, 2, 2, 1).status == ConstellationStatus::found);
        CHECK(find_constellation(M, 3, 2, 1).status == ConstellationStatus::absent);
    }
    SECTION("line length threshold") {
        CHECK(find_constellation(M, 1, 3, 1).status == ConstellationStatus::absent);
        auto line5 = build_epg(1, 2, 1);
        CHECK(find_constellation(line5, 1, 3, 1).status == ConstellationStatus::found);
        CHECK(find_constellation(line5, 2, 3, 1).status == ConstellationStatus::found);
        CHECK(find_constellation(line5, 3, 3, 1).status == ConstellationStatus::absent);
    }
    SECTION("star size is limited by partner rank") {
        auto res = find_constellation(M, 1, 2, 2);
        REQUIRE(res.status == ConstellationStatus::found);
        CHECK(verify_constellation(M, res.cert, 1, 2, 2));
        CHECK(find_constellation(M, 1, 2, 3).status == ConstellationStatus::absent);
    }
    SECTION("verification rejects tampered certificates") {
        auto res = find_constellation(M, 1, 2, 1);
        REQUIRE(res.status == ConstellationStatus::found);
        auto bad_star = res.cert;
        bad_star.stars[1] = {0}; // line {001,010,011} has only 3 points
        CHECK_FALSE(verify_constellation(M, bad_star, 1, 2, 1));
        auto bad_size = res.cert;
        bad_size.centers.push_back(3);
        CHECK_FALSE(verify_constellation(M, bad_size, 1, 2, 1));
        CHECK_FALSE(verify_constellation(M, res.cert, 2, 2, 1));
    }
    SECTION("parameters must be positive") {
        CHECK_THROWS_AS(find_constellation(M, 0, 2, 1), Error);
        CHECK_THROWS_AS(find_constellation(M, 1, 0, 1), Error);
        CHECK_THROWS_AS(find_constellation(M, 1, 2, 0), Error);
    }
}

TEST_CASE("point surplus over the subgeometry", "[geometry]") {
    auto M = hand_host();
    auto R = canonical_pg_handle(M, 2);

    SECTION("one long line forces one extra point") {
        auto excess = distinct_points_excess(M, R, {{1, 3, 5, 7}});
        CHECK(excess == 1);
        // 1 long line > C(1,2) = 0, so the excess must exceed d = 0.
        CHECK(excess > 0);
    }
    SECTION("no long lines, no claim") {
        auto host = build_pg_in_square_field(2, 2);
        auto H = canonical_pg_handle(host, 2);
        CHECK(distinct_points_excess(host, H, {}) == 0);
    }
    SECTION("bad line lists are rejected") {
        CHECK_THROWS_AS(distinct_points_excess(M, R, {{0, 1, 2}}), Error);
        CHECK_THROWS_AS(distinct_points_excess(M, R, {{0, 1}}), Error);
        CHECK_THROWS_AS(distinct_points_excess(M, R, {{1, 3, 5}}), Error);
    }
    SECTION("the counting predicate holds on extension geometries") {
        struct Combo {
            unsigned n1, q, k;
        };
        for (Combo c : {Combo{2, 2, 1}, Combo{3, 2, 1}, Combo{2, 3, 1}}) {
            CAPTURE(c.n1, c.q, c.k);
            auto host = build_epg(c.n1, c.q, c.k);
            auto H = canonical_pg_handle(host, c.q);
            std::vector<LabelSet> long_lines;
            for (const auto& L : lines_of(host))
                if (L.size() > static_cast<std::size_t>(c.q) + 1) long_lines.push_back(L);
            auto excess = distinct_points_excess(host, H, long_lines);
            CHECK(excess == epsilon(host) - geometric_sum(c.q, c.n1 + 1));
            for (long long d = 0; d <= 12; ++d)
                if (static_cast<long long>(long_lines.size()) > (d + 1) * d / 2) CHECK(excess > d);
        }
    }
    SECTION("seeded restrictions keep the predicate") {
        auto host = build_epg(3, 2, 1);
        auto H = canonical_pg_handle(host, 2);
        auto extras = set_minus(host.ground_set(), H.members);
        for (std::uint64_t seed = 1; seed <= 20; ++seed) {
            CAPTURE(seed);
            Rng rng(seed);
            LabelSet keep = H.members;
            for (Label e : extras)
                if (rng.below(2) == 0) keep.push_back(e);
            auto sub = restrict_to(host, make_label_set(keep));
            auto HS = certify_pg_handle(sub, H.members, 2);
            std::vector<LabelSet> long_lines;
            for (const auto& L : lines_of(sub))
                if (L.size() > 3) long_lines.push_back(L);
            auto excess = distinct_points_excess(sub, HS, long_lines);
            CHECK(excess == epsilon(sub) - 15);
            for (long long d = 0; d <= 12; ++d)
                if (static_cast<long long>(long_lines.size()) > (d + 1) * d / 2) CHECK(excess > d);
        }
    }
}
