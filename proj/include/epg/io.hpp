#ifndef EPG_IO_HPP
#define EPG_IO_HPP

#include <fstream>
#include <sstream>
#include <string>

#include "epg/matroid.hpp"

namespace epg {

// Text format, one matroid per file:
//   line 1: "p e r m"  (field GF(p^e), r rows, m columns)
//   lines 2..r+1: m space-separated element encodings in [0, p^e)
//   optional final line: "labels l0 ... l_{m-1}"  (omitted when 0..m-1)
// Writing then reading is the identity, and writing a read file reproduces
// it byte for byte when the file is in canonical form.
inline std::string to_text(const Matroid& M) {
    std::ostringstream out;
    out << M.field().p() << ' ' << M.field().e() << ' ' << M.rows() << ' ' << M.size() << '\n';
    for (std::size_t r = 0; r < M.rows(); ++r) {
        for (std::size_t i = 0; i < M.size(); ++i) {
            if (i) out << ' ';
            out << M.column(i)[r];
        }
        out << '\n';
    }
    bool trivial_labels = true;
    for (std::size_t i = 0; i < M.size(); ++i)
        if (M.labels()[i] != i) { trivial_labels = false; break; }
    if (!trivial_labels) {
        out << "labels";
        for (Label l : M.labels()) out << ' ' << l;
        out << '\n';
    }
    return out.str();
}

inline Matroid from_text(const std::string& text) {
    std::istringstream in(text);
    std::string head;
    std::getline(in, head);
    std::istringstream hs(head);
    long long p = -1, e = -1, r = -1, m = -1;
    std::string extra;
    require(static_cast<bool>(hs >> p >> e >> r >> m), "matroid file: bad header");
    require(!(hs >> extra), "matroid file: trailing data in header");
    require(p >= 2 && e >= 1 && r >= 0 && m >= 0, "matroid file: bad header values");
    auto F = Field::make(static_cast<unsigned>(p), static_cast<unsigned>(e));

    std::vector<std::vector<Elem>> cols(static_cast<std::size_t>(m),
                                        std::vector<Elem>(static_cast<std::size_t>(r)));
    for (long long row = 0; row < r; ++row) {
        std::string line;
        require(static_cast<bool>(std::getline(in, line)), "matroid file: missing row");
        std::istringstream ls(line);
        for (long long i = 0; i < m; ++i) {
            long long v = -1;
            require(static_cast<bool>(ls >> v), "matroid file: short row");
            require(v >= 0 && static_cast<unsigned long long>(v) < F->order(),
                    "matroid file: entry out of field range");
            cols[static_cast<std::size_t>(i)][static_cast<std::size_t>(row)] = static_cast<Elem>(v);
        }
        require(!(ls >> extra), "matroid file: long row");
    }

    std::vector<Label> labels(static_cast<std::size_t>(m));
    for (std::size_t i = 0; i < labels.size(); ++i) labels[i] = static_cast<Label>(i);
    std::string tail;
    while (std::getline(in, tail)) {
        if (tail.empty()) continue;
        std::istringstream ts(tail);
        std::string word;
        ts >> word;
        require(word == "labels", "matroid file: unexpected trailing line");
        for (long long i = 0; i < m; ++i) {
            long long v = -1;
            require(static_cast<bool>(ts >> v), "matroid file: short label line");
            require(v >= 0, "matroid file: negative label");
            labels[static_cast<std::size_t>(i)] = static_cast<Label>(v);
        }
        require(!(ts >> extra), "matroid file: long label line");
    }
    return Matroid(std::move(F), static_cast<std::size_t>(r), std::move(cols), std::move(labels));
}

inline void save_matroid(const std::string& path, const Matroid& M) {
    std::ofstream out(path, std::ios::binary);
    require(static_cast<bool>(out), "cannot open for writing: " + path);
    out << to_text(M);
    require(static_cast<bool>(out), "write failed: " + path);
}

inline Matroid load_matroid(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    require(static_cast<bool>(in), "cannot open for reading: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return from_text(buf.str());
}

} // namespace epg

#endif
