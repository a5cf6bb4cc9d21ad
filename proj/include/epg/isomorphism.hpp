#ifndef EPG_ISOMORPHISM_HPP
#define EPG_ISOMORPHISM_HPP

#include <algorithm>
#include <map>
#include <set>
#include <vector>

#include "epg/matroid.hpp"

namespace epg {

struct IsoResult {
    bool isomorphic = false;
    std::map<Label, Label> mapping; // witness bijection when isomorphic
};

namespace detail {

// Combinatorial side of one matroid, on positions 0..m-1.
struct IsoSide {
    std::vector<Label> labels;
    std::vector<std::vector<std::size_t>> lines;      // sorted positions
    std::vector<std::vector<int>> point_lines;        // line ids through a point
    std::vector<std::vector<int>> pair_line;          // m*m -> line id
    std::vector<std::vector<std::size_t>> profile;    // sorted line sizes per point
    std::vector<std::set<std::vector<std::size_t>>> flat_sets; // by rank, positions

    static IsoSide build(const Matroid& M, std::size_t r) {
        IsoSide s;
        const std::size_t m = M.size();
        s.labels = M.labels();
        std::map<Label, std::size_t> pos;
        for (std::size_t i = 0; i < m; ++i) pos[s.labels[i]] = i;

        auto to_positions = [&](const LabelSet& ls) {
            std::vector<std::size_t> v;
            v.reserve(ls.size());
            for (Label l : ls) v.push_back(pos.at(l));
            std::sort(v.begin(), v.end());
            return v;
        };

        auto levels = flats_by_rank(M, r > 0 ? r - 1 : 0);
        s.flat_sets.resize(levels.size());
        for (std::size_t t = 0; t < levels.size(); ++t)
            for (const auto& f : levels[t]) s.flat_sets[t].insert(to_positions(f));

        if (levels.size() > 2)
            for (const auto& f : s.flat_sets[2]) s.lines.push_back(f);

        s.point_lines.assign(m, {});
        s.pair_line.assign(m, std::vector<int>(m, -1));
        for (std::size_t id = 0; id < s.lines.size(); ++id)
            for (std::size_t a : s.lines[id]) {
                s.point_lines[a].push_back(static_cast<int>(id));
                for (std::size_t b : s.lines[id])
                    if (a != b) s.pair_line[a][b] = static_cast<int>(id);
            }
        s.profile.assign(m, {});
        for (std::size_t i = 0; i < m; ++i) {
            for (int id : s.point_lines[i]) s.profile[i].push_back(s.lines[static_cast<std::size_t>(id)].size());
            std::sort(s.profile[i].begin(), s.profile[i].end());
        }
        return s;
    }
};

class IsoSearch {
public:
    IsoSearch(const IsoSide& a, const IsoSide& b, std::size_t m)
        : A(a), B(b), m_(m), map_(m, npos), rmap_(m, npos) {}

    bool run() { return extend(0); }

    const std::vector<std::size_t>& mapping() const { return map_; }

    static constexpr std::size_t npos = static_cast<std::size_t>(-1);

private:
    bool consistent(std::size_t e, std::size_t f) const {
        if (A.profile[e] != B.profile[f]) return false;
        std::set<int> used;
        for (int id1 : A.point_lines[e]) {
            const auto& L1 = A.lines[static_cast<std::size_t>(id1)];
            int id2 = -1;
            for (std::size_t p : L1) {
                if (map_[p] == npos) continue;
                if (id2 == -1) {
                    id2 = B.pair_line[f][map_[p]];
                    if (id2 == -1) return false;
                    if (B.lines[static_cast<std::size_t>(id2)].size() != L1.size()) return false;
                    if (!used.insert(id2).second) return false; // two lines collapsing
                } else {
                    const auto& L2 = B.lines[static_cast<std::size_t>(id2)];
                    if (!std::binary_search(L2.begin(), L2.end(), map_[p])) return false;
                }
            }
        }
        return true;
    }

    // Score for choosing the next point: lines with >= 2 mapped points first,
    // then lines with exactly one.
    std::pair<std::size_t, std::size_t> anchor_score(std::size_t e) const {
        std::size_t two = 0, one = 0;
        for (int id : A.point_lines[e]) {
            std::size_t mapped = 0;
            for (std::size_t p : A.lines[static_cast<std::size_t>(id)])
                if (map_[p] != npos) ++mapped;
            if (mapped >= 2) ++two;
            else if (mapped == 1) ++one;
        }
        return {two, one};
    }

    std::vector<std::size_t> candidates_for(std::size_t e) const {
        for (int id1 : A.point_lines[e]) {
            const auto& L1 = A.lines[static_cast<std::size_t>(id1)];
            std::size_t p = npos, q = npos;
            for (std::size_t x : L1)
                if (map_[x] != npos) { (p == npos ? p : q) = x; if (q != npos) break; }
            if (q == npos) continue;
            int id2 = B.pair_line[map_[p]][map_[q]];
            if (id2 == -1) return {};
            std::vector<std::size_t> out;
            for (std::size_t y : B.lines[static_cast<std::size_t>(id2)])
                if (rmap_[y] == npos) out.push_back(y);
            return out;
        }
        std::vector<std::size_t> out;
        for (std::size_t y = 0; y < m_; ++y)
            if (rmap_[y] == npos) out.push_back(y);
        return out;
    }

    bool verify_flats() const {
        for (std::size_t t = 2; t < A.flat_sets.size(); ++t)
            for (const auto& flat : A.flat_sets[t]) {
                std::vector<std::size_t> img;
                img.reserve(flat.size());
                for (std::size_t p : flat) img.push_back(map_[p]);
                std::sort(img.begin(), img.end());
                if (!B.flat_sets[t].count(img)) return false;
            }
        return true;
    }

    bool extend(std::size_t depth) {
        if (depth == m_) return verify_flats();
        std::size_t best = npos;
        std::pair<std::size_t, std::size_t> best_score{0, 0};
        for (std::size_t e = 0; e < m_; ++e) {
            if (map_[e] != npos) continue;
            auto sc = anchor_score(e);
            if (best == npos || sc > best_score) { best = e; best_score = sc; }
        }
        for (std::size_t f : candidates_for(best)) {
            if (++nodes_ > budget_)
                throw Error("matroid_isomorphic: search budget exceeded");
            if (!consistent(best, f)) continue;
            map_[best] = f;
            rmap_[f] = best;
            if (extend(depth + 1)) return true;
            map_[best] = npos;
            rmap_[f] = npos;
        }
        return false;
    }

    const IsoSide& A;
    const IsoSide& B;
    std::size_t m_;
    std::vector<std::size_t> map_, rmap_;
    mutable std::uint64_t nodes_ = 0;
    std::uint64_t budget_ = 20'000'000;
};

} // namespace detail

// Exact isomorphism test for simple matroids.  Invariant pruning (per-rank
// flat counts and sizes, per-point line-size profiles) feeds a backtracking
// point map driven by line forcing; a complete map is accepted only after
// every flat of every rank maps onto a flat of the other side.
inline IsoResult matroid_isomorphic(const Matroid& M1, const Matroid& M2,
                                    std::size_t max_elements = 256) {
    require(is_simple(M1) && is_simple(M2), "matroid_isomorphic: inputs must be simple");
    require(M1.size() <= max_elements && M2.size() <= max_elements,
            "matroid_isomorphic: input exceeds element cap");
    IsoResult res;
    if (M1.size() != M2.size()) return res;
    std::size_t r = rank(M1);
    if (r != rank(M2)) return res;

    if (r <= 2 || M1.size() <= 1) {
        // Simple matroids of rank <= 2 are uniform: any label bijection works.
        res.isomorphic = true;
        for (std::size_t i = 0; i < M1.size(); ++i)
            res.mapping[M1.labels()[i]] = M2.labels()[i];
        return res;
    }

    auto A = detail::IsoSide::build(M1, r);
    auto B = detail::IsoSide::build(M2, r);

    for (std::size_t t = 2; t < A.flat_sets.size(); ++t) {
        if (A.flat_sets[t].size() != B.flat_sets[t].size()) return res;
        std::multiset<std::size_t> sa, sb;
        for (const auto& f : A.flat_sets[t]) sa.insert(f.size());
        for (const auto& f : B.flat_sets[t]) sb.insert(f.size());
        if (sa != sb) return res;
    }
    {
        std::multiset<std::vector<std::size_t>> pa(A.profile.begin(), A.profile.end());
        std::multiset<std::vector<std::size_t>> pb(B.profile.begin(), B.profile.end());
        if (pa != pb) return res;
    }

    detail::IsoSearch search(A, B, M1.size());
    if (!search.run()) return res;
    res.isomorphic = true;
    for (std::size_t i = 0; i < M1.size(); ++i)
        res.mapping[A.labels[i]] = B.labels[search.mapping()[i]];
    return res;
}

} // namespace epg

#endif
