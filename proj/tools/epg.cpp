// Command line front end for the library: construction, point counting,
// growth tables, frame normalization, minor search, and the verification
// suites.  Exit codes: 0 success, 1 check or search failure, 2 usage error.
#include <algorithm>
#include <cstdint>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "epg/checks.hpp"
#include "epg/io.hpp"

using nlohmann::ordered_json;

namespace {

struct GlobalOpts {
    std::uint64_t seed = 1; // fixed default, never wall clock
    std::string format = "table";
    std::size_t max_elements = 4096;
    unsigned max_contract = 1;
};

std::string join_labels(const epg::LabelSet& s) {
    std::ostringstream os;
    for (std::size_t i = 0; i < s.size(); ++i) {
        if (i) os << ' ';
        os << s[i];
    }
    return os.str();
}

epg::LabelSet parse_labels(const std::string& csv) {
    epg::LabelSet out;
    std::istringstream is(csv);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t used = 0;
        unsigned long v = std::stoul(tok, &used);
        epg::require(used == tok.size(), "bad label '" + tok + "'");
        out.push_back(static_cast<epg::Label>(v));
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

void print_stats(const epg::Matroid& M, const std::string& out_path,
                 const std::string& format) {
    auto r = epg::rank(M);
    auto eps = epg::epsilon(M);
    if (format == "json") {
        ordered_json j;
        j["elements"] = M.size();
        j["rank"] = r;
        j["epsilon"] = eps;
        j["simple"] = epg::is_simple(M);
        if (!out_path.empty()) j["file"] = out_path;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << M.size() << " points, rank " << r << ", epsilon " << eps;
        if (!out_path.empty()) std::cout << ", written to " << out_path;
        std::cout << "\n";
    }
}

int run_build(const std::string& kind, unsigned q, unsigned n, unsigned k,
              std::optional<unsigned> omega, const std::string& out,
              const GlobalOpts& g) {
    epg::require(n >= 1, "build: --n must be >= 1");
    std::optional<epg::Matroid> M;
    if (kind == "pg") {
        M.emplace(epg::build_pg(n - 1, q));
    } else if (kind == "epg") {
        M.emplace(epg::build_epg(n - 1, q, k));
    } else { // extension
        auto [p, e] = epg::detail::split_prime_power(q * q);
        auto F = epg::Field::make(p, e);
        epg::Elem om = omega ? static_cast<epg::Elem>(*omega) : F->pick_omega(q);
        epg::require(om < F->order(), "build: --omega outside the host field");
        M.emplace(epg::build_extension_rep(F, om, n));
    }
    if (!out.empty()) epg::save_matroid(out, *M);
    print_stats(*M, out, g.format);
    return 0;
}

int run_count(const std::string& in, const GlobalOpts& g) {
    auto M = epg::load_matroid(in);
    print_stats(M, "", g.format);
    return 0;
}

int run_table(unsigned q, unsigned k_max, unsigned n_max, const GlobalOpts& g) {
    epg::require(n_max >= 1, "table: --n-max must be >= 1");
    // cell(n, k) = densest point count among rank-n members of the (q, k)
    // projection class; blank where the formula's k <= n constraint fails
    std::vector<std::vector<std::optional<long long>>> cells(n_max + 1);
    for (unsigned n = 1; n <= n_max; ++n) {
        cells[n].resize(k_max + 1);
        for (unsigned k = 0; k <= k_max; ++k) {
            if (k > n) continue;
            cells[n][k] = epg::growth_rate_formula(n, q, k);
        }
    }
    if (g.format == "json") {
        ordered_json j;
        j["q"] = q;
        j["rows"] = ordered_json::array();
        for (unsigned n = 1; n <= n_max; ++n) {
            ordered_json row;
            row["n"] = n;
            row["values"] = ordered_json::array();
            for (unsigned k = 0; k <= k_max; ++k) {
                ordered_json cell;
                cell["k"] = k;
                if (cells[n][k])
                    cell["value"] = *cells[n][k];
                else
                    cell["value"] = nullptr;
                row["values"].push_back(cell);
            }
            j["rows"].push_back(row);
        }
        std::cout << j.dump(2) << "\n";
    } else {
        std::size_t width = 6;
        for (unsigned n = 1; n <= n_max; ++n)
            for (unsigned k = 0; k <= k_max; ++k)
                if (cells[n][k])
                    width = std::max(width,
                                     std::to_string(*cells[n][k]).size() + 2);
        std::cout << "growth table, q = " << q << "\n";
        std::cout << std::setw(6) << "n";
        for (unsigned k = 0; k <= k_max; ++k)
            std::cout << std::setw(static_cast<int>(width))
                      << ("k=" + std::to_string(k));
        std::cout << "\n";
        for (unsigned n = 1; n <= n_max; ++n) {
            std::cout << std::setw(6) << n;
            for (unsigned k = 0; k <= k_max; ++k) {
                if (cells[n][k])
                    std::cout << std::setw(static_cast<int>(width))
                              << *cells[n][k];
                else
                    std::cout << std::setw(static_cast<int>(width)) << "-";
            }
            std::cout << "\n";
        }
    }
    return 0;
}

int run_verify(const std::string& suite, const GlobalOpts& g,
               const std::string& echo) {
    epg::checks::SuiteOptions opt;
    opt.seed = g.seed;
    opt.max_elements = g.max_elements;
    opt.max_contract = g.max_contract;
    auto results = epg::checks::run_suite(suite, opt);
    if (suite != "all")
        for (auto& r : results) r.name = suite + "/" + r.name;
    bool all_pass = std::all_of(results.begin(), results.end(),
                                [](const auto& r) { return r.pass; });
    if (g.format == "json") {
        ordered_json j;
        j["command"] = echo;
        j["suite"] = suite;
        j["seed"] = g.seed;
        j["max_elements"] = g.max_elements;
        j["max_contract"] = g.max_contract;
        j["checks"] = ordered_json::array();
        for (const auto& r : results) {
            ordered_json c;
            c["name"] = r.name;
            c["params"] = r.params;
            c["expected"] = r.expected;
            c["actual"] = r.actual;
            c["provenance"] = r.provenance;
            c["pass"] = r.pass;
            c["elapsed_seconds"] = r.elapsed_seconds;
            j["checks"].push_back(c);
        }
        j["pass"] = all_pass;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "command: " << echo << "\n";
        std::cout << "suite: " << suite << ", seed: " << g.seed << "\n\n";
        for (const auto& r : results) {
            std::cout << (r.pass ? "[PASS] " : "[FAIL] ") << r.name << "\n";
            std::cout << "       provenance=" << r.provenance;
            if (!r.params.empty()) std::cout << " params=(" << r.params << ")";
            std::cout << "\n";
            std::cout << "       expected: " << r.expected << "\n";
            std::cout << "       actual:   " << r.actual << "\n";
            std::cout << "       elapsed:  " << std::fixed
                      << std::setprecision(3) << r.elapsed_seconds << "s\n";
        }
        std::size_t failed = 0;
        for (const auto& r : results)
            if (!r.pass) ++failed;
        std::cout << "\noverall: "
                  << (all_pass ? "PASS" : "FAIL") << " (" << results.size()
                  << " checks";
        if (failed) std::cout << ", " << failed << " failed";
        std::cout << ")\n";
    }
    return all_pass ? 0 : 1;
}

int run_minor_search(const std::string& in, unsigned n, unsigned q,
                     const GlobalOpts& g) {
    auto loaded = epg::load_matroid(in);
    auto M = epg::simplify(loaded).first; // witness labels refer to this
    auto w = epg::has_pg_minor(M, n, q, g.max_contract);
    if (g.format == "json") {
        ordered_json j;
        j["target_n"] = n;
        j["target_q"] = q;
        j["max_contract"] = g.max_contract;
        j["found"] = w.found;
        if (w.found) {
            j["contracted"] = w.contracted;
            j["points"] = w.points;
        }
        std::cout << j.dump(2) << "\n";
    } else if (w.found) {
        std::cout << "minor found: contract {" << join_labels(w.contracted)
                  << "}, points {" << join_labels(w.points) << "}\n";
    } else {
        std::cout << "no rank-" << n << " order-" << q
                  << " projective geometry minor within contraction budget "
                  << g.max_contract << "\n";
    }
    return w.found ? 0 : 1;
}

int run_normalize(const std::string& in, unsigned q,
                  const std::string& members_csv, const std::string& out,
                  const GlobalOpts& g) {
    auto M = epg::load_matroid(in);
    epg::PgHandle R = members_csv.empty()
                          ? epg::canonical_pg_handle(M, q)
                          : epg::certify_pg_handle(M, parse_labels(members_csv), q);
    auto res = epg::normalize_spanning_pg(M, R.members, q);
    const auto& N = res.normalized;
    const auto& F = N.field();
    std::size_t subfield_cols = 0;
    for (std::size_t i = 0; i < N.size(); ++i) {
        bool sub = true;
        for (epg::Elem x : N.column(i))
            if (!F.in_subfield(x, q)) sub = false;
        if (sub) ++subfield_cols;
    }
    if (!out.empty()) epg::save_matroid(out, N);
    if (g.format == "json") {
        ordered_json j;
        j["elements"] = N.size();
        j["rank"] = epg::rank(N);
        j["frame_members"] = res.handle.members;
        j["subfield_columns"] = subfield_cols;
        if (!out.empty()) j["file"] = out;
        std::cout << j.dump(2) << "\n";
    } else {
        std::cout << "normalized " << N.size() << " columns, rank "
                  << epg::rank(N) << "; frame of " << res.handle.members.size()
                  << " members now subfield valued; " << subfield_cols << " of "
                  << N.size() << " columns lie in GF(" << q << ")";
        if (!out.empty()) std::cout << "; written to " << out;
        std::cout << "\n";
    }
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    std::ostringstream echo_os;
    echo_os << "epg";
    for (int i = 1; i < argc; ++i) echo_os << ' ' << argv[i];
    std::string echo = echo_os.str();

    CLI::App app{"exact computation with matrix represented matroids over "
                 "finite fields"};
    app.require_subcommand(1);

    GlobalOpts g;
    app.add_option("--seed", g.seed,
                   "seed for stochastic suites (fixed default, never wall clock)")
        ->capture_default_str();
    app.add_option("--format", g.format, "output format")
        ->check(CLI::IsMember({"table", "json"}))
        ->capture_default_str();
    app.add_option("--max-elements", g.max_elements,
                   "skip generated instances with larger ground sets")
        ->capture_default_str();
    app.add_option("--max-contract", g.max_contract,
                   "minor search contraction budget")
        ->capture_default_str();

    // build
    auto* build = app.add_subcommand(
        "build", "construct a matroid and optionally write it to a file");
    build->fallthrough();
    std::string build_kind;
    unsigned build_q = 2, build_n = 3, build_k = 0;
    std::optional<unsigned> build_omega;
    std::string build_out;
    build->add_option("kind", build_kind,
                      "pg (projective geometry over GF(q)), epg (extension "
                      "geometry), extension (subfield extension columns)")
        ->required()
        ->check(CLI::IsMember({"pg", "epg", "extension"}));
    build->add_option("--q", build_q, "base field order")->required();
    build->add_option("--n", build_n, "rank (pg, epg) or column count (extension)")
        ->required();
    build->add_option("--k", build_k, "extension level (epg only)");
    build->add_option("--omega", build_omega,
                      "element outside GF(q) spanning the extension "
                      "(extension only; default: least such element)");
    build->add_option("--out", build_out, "write the matroid file here");

    // count
    auto* count = app.add_subcommand(
        "count", "load a matroid file and report size, rank, and point count");
    count->fallthrough();
    std::string count_in;
    count->add_option("--in", count_in, "matroid file")->required();

    // table
    auto* table = app.add_subcommand(
        "table", "exact growth table: densest point count by rank and level");
    table->fallthrough();
    unsigned table_q = 2, table_kmax = 2, table_nmax = 5;
    table->add_option("--q", table_q, "base field order")->required();
    table->add_option("--k-max", table_kmax, "largest extension level")
        ->capture_default_str();
    table->add_option("--n-max", table_nmax, "largest rank")
        ->capture_default_str();

    // verify
    auto* verify = app.add_subcommand(
        "verify", "run a verification suite and print its report");
    verify->fallthrough();
    std::string verify_suite = "all";
    {
        std::vector<std::string> allowed = epg::checks::suite_names();
        allowed.push_back("all");
        verify->add_option("suite", verify_suite, "suite name or 'all'")
            ->check(CLI::IsMember(allowed))
            ->capture_default_str();
    }

    // minor-search
    auto* minor = app.add_subcommand(
        "minor-search",
        "search a matroid file for a projective geometry minor");
    minor->fallthrough();
    std::string minor_in;
    unsigned minor_n = 3, minor_q = 2;
    minor->add_option("--in", minor_in, "matroid file")->required();
    minor->add_option("--n", minor_n, "target geometry rank")->required();
    minor->add_option("--q", minor_q, "target geometry field order")->required();

    // normalize
    auto* norm = app.add_subcommand(
        "normalize",
        "change projective frame so a spanning GF(q) geometry restriction "
        "takes subfield values");
    norm->fallthrough();
    std::string norm_in, norm_members, norm_out;
    unsigned norm_q = 2;
    norm->add_option("--in", norm_in, "matroid file")->required();
    norm->add_option("--q", norm_q, "subfield order of the spanning geometry")
        ->required();
    norm->add_option("--members", norm_members,
                     "comma separated labels of the spanning geometry "
                     "(default: all subfield valued columns)");
    norm->add_option("--out", norm_out, "write the normalized matroid here");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // help request
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    }

    try {
        if (app.got_subcommand(build))
            return run_build(build_kind, build_q, build_n, build_k, build_omega,
                             build_out, g);
        if (app.got_subcommand(count)) return run_count(count_in, g);
        if (app.got_subcommand(table))
            return run_table(table_q, table_kmax, table_nmax, g);
        if (app.got_subcommand(verify)) return run_verify(verify_suite, g, echo);
        if (app.got_subcommand(minor))
            return run_minor_search(minor_in, minor_n, minor_q, g);
        if (app.got_subcommand(norm))
            return run_normalize(norm_in, norm_q, norm_members, norm_out, g);
    } catch (const epg::Error& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "internal error: " << e.what() << "\n";
        return 2;
    }
    std::cerr << "usage error: no subcommand\n";
    return 2;
}
