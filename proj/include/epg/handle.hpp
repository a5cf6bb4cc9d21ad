#ifndef EPG_HANDLE_HPP
#define EPG_HANDLE_HPP

#include <utility>

#include "epg/construct.hpp"
#include "epg/matroid.hpp"

namespace epg {

// A certified projective subgeometry inside a represented host: host is a
// simple matroid over GF(q^2), members are labels whose columns take values
// in GF(q) and whose restriction is a PG(rank_n - 1, q).
struct PgHandle {
    Matroid host;
    LabelSet members;
    unsigned q = 0;
    std::size_t rank_n = 0;
    bool certified = false;
};

// Verifies the handle invariants and stamps the certificate; throws on any
// violation.
inline PgHandle certify_pg_handle(Matroid host, LabelSet members, unsigned q) {
    require(is_simple(host), "certify_pg_handle: host must be simple");
    require(static_cast<unsigned long long>(q) * q == host.field().order(),
            "certify_pg_handle: host field is not GF(q^2)");
    members = make_label_set(std::move(members));
    for (Label l : members)
        for (Elem x : host.column_of(l))
            require(host.field().in_subfield(x, q),
                    "certify_pg_handle: member column leaves GF(q)");
    auto pg = is_projective_geometry(restrict_to(host, members), q);
    require(pg.is_pg, "certify_pg_handle: members do not form a projective geometry");
    return PgHandle{std::move(host), std::move(members), q, pg.rank_n, true};
}

// Handle whose members are every GF(q)-valued column of the host.
inline PgHandle canonical_pg_handle(Matroid host, unsigned q) {
    require(static_cast<unsigned long long>(q) * q == host.field().order(),
            "canonical_pg_handle: host field is not GF(q^2)");
    LabelSet members;
    for (std::size_t i = 0; i < host.size(); ++i) {
        bool fixed = true;
        for (Elem x : host.column(i))
            if (!host.field().in_subfield(x, q)) { fixed = false; break; }
        if (fixed) members.push_back(host.labels()[i]);
    }
    return certify_pg_handle(std::move(host), std::move(members), q);
}

inline bool handle_spans(const PgHandle& R) {
    return R.rank_n == rank(R.host);
}

inline Matroid members_matroid(const PgHandle& R) {
    return restrict_to(R.host, R.members);
}

} // namespace epg

#endif
