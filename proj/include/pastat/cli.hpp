// Command-line driver: test, localmin, gen, audit, bench.
//
// Exit codes are scriptable: 0 when the queried property holds, 1 when it
// fails, 2 on any input error.  All reports are also available as JSON so
// corpus harnesses can diff them against generator metadata.

#pragma once

#include "pastat/gadgets.hpp"
#include "pastat/instance_io.hpp"
#include "pastat/oracle.hpp"
#include "pastat/subdiff.hpp"
#include "pastat/sweeps.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace pastat {

namespace cli_detail {

inline std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw input_error("cannot open file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

inline void write_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw input_error("cannot write file: " + path);
    out << text;
}

inline std::string stem_of(const std::string& path) {
    std::size_t slash = path.find_last_of("/\\");
    std::string base = slash == std::string::npos ? path : path.substr(slash + 1);
    std::size_t dot = base.find_last_of('.');
    return dot == std::string::npos ? base : base.substr(0, dot);
}

inline Notion notion_of(const std::string& s) {
    if (s == "frechet") return Notion::Frechet;
    if (s == "clarke") return Notion::Clarke;
    throw input_error("notion must be 'frechet' or 'clarke'");
}

inline Verdict run_instance(const Instance& inst, const Rational& eps, Notion notion) {
    if (inst.is_dc) return stationarity_test(*inst.dc, inst.w, eps, notion);
    return stationarity_test(*inst.maxmin, inst.w, eps, notion);
}

inline void print_verdict(std::ostream& out, const Verdict& v, bool as_json) {
    if (as_json) {
        out << verdict_to_json(v).dump(2) << "\n";
        return;
    }
    out << (v.notion == Notion::Frechet ? "frechet" : "clarke") << " dist^2 = "
        << (v.dist_finite ? format_rational(v.dist_sq) : std::string("inf"))
        << ", epsilon = " << format_rational(v.epsilon) << ", "
        << (v.yes ? "stationary (YES)" : "not stationary (NO)") << "\n";
}

inline std::pair<long, long> parse_range(const std::string& s) {
    const std::size_t colon = s.find(':');
    if (colon == std::string::npos) {
        const long v = std::stol(s);
        return {v, v};
    }
    return {std::stol(s.substr(0, colon)), std::stol(s.substr(colon + 1))};
}

inline unsigned verdict_bits(const Verdict& v) {
    unsigned bits = v.dist_finite ? bit_length(v.dist_sq) : 0;
    if (v.witness)
        for (const auto& c : *v.witness) bits = std::max(bits, bit_length(c));
    for (const auto& p : v.cert_support)
        for (const auto& c : p) bits = std::max(bits, bit_length(c));
    return bits;
}

// ---- gen ------------------------------------------------------------------

inline int cmd_gen(const std::string& family, const std::string& graph_path, long k,
                   std::string repr, const std::string& outdir, std::ostream& out) {
    if (k < 2) throw input_error("gen: k must be at least 2");
    const Graph g = Graph::parse(read_file(graph_path));
    const bool is_cnn = family.rfind("cnn-", 0) == 0;
    if (repr == "auto") repr = is_cnn ? "maxmin" : "both";
    if (is_cnn && repr != "maxmin")
        throw input_error("gen: cnn families come in max-min form only");

    const bool has = oracle::has_k_clique(g, static_cast<std::size_t>(k));
    Instance base;
    base.epsilon = 0;
    std::size_t padded_n = 0;

    std::optional<MaxMinFormula> mm;
    std::optional<DcFunction> dc;
    if (family == "clique-frechet" || family == "clique-clarke") {
        GadgetInstance gi = family == "clique-frechet"
                                ? gen_frechet_gadget(g, static_cast<std::size_t>(k))
                                : gen_clarke_gadget(g, static_cast<std::size_t>(k));
        base.dim = gi.dim;
        padded_n = gi.n;
        mm = std::move(gi.maxmin);
        dc = std::move(gi.dc);
    } else if (family == "cnn-frechet" || family == "cnn-clarke") {
        CnnInstance ci = gen_cnn_losses(g, static_cast<std::size_t>(k));
        padded_n = ci.n;
        if (family == "cnn-frechet") {
            base.dim = 2 * ci.k;
            mm = std::move(ci.lf_maxmin);
        } else {
            base.dim = 2 * ci.k + 1;
            mm = std::move(ci.lc_maxmin);
        }
    } else {
        throw input_error("gen: unknown family '" + family + "'");
    }
    base.w = zero_vec(base.dim);
    base.meta = Json::object();
    base.meta["source"] = is_cnn ? "cnn" : "clique";
    base.meta["N"] = padded_n;
    base.meta["k"] = k;
    base.meta["has_clique"] = has;

    const std::string stem = outdir + "/" + stem_of(graph_path) + "-" + family + "-k" +
                             std::to_string(k);
    std::vector<std::string> written;
    if (repr == "maxmin" || repr == "both") {
        Instance inst = base;
        inst.is_dc = false;
        inst.maxmin = mm;
        write_file(stem + "-maxmin.json", serialize_instance(inst));
        written.push_back(stem + "-maxmin.json");
    }
    if (repr == "dc" || repr == "both") {
        if (!dc) throw input_error("gen: no DC representation for this family");
        Instance inst = base;
        inst.is_dc = true;
        inst.dc = dc;
        write_file(stem + "-dc.json", serialize_instance(inst));
        written.push_back(stem + "-dc.json");
    }
    if (written.empty()) throw input_error("gen: repr must be maxmin, dc, or both");
    for (const auto& p : written) out << p << "\n";
    return 0;
}

// ---- audit ------------------------------------------------------------------

inline int cmd_audit(const std::string& sweep, long max_n, long jobs, bool as_json,
                     std::ostream& out) {
    std::size_t mismatches = 0;
    if (sweep == "graphs" || sweep == "all") {
        for (std::size_t n = 3; n <= static_cast<std::size_t>(max_n); ++n) {
            auto recs = graph_dichotomy_sweep(n, {2, 3}, static_cast<std::size_t>(jobs));
            for (const auto& r : recs) {
                if (!r.match) ++mismatches;
                if (as_json) {
                    Json j = Json::object();
                    j["sweep"] = "graphs";
                    j["n"] = r.n;
                    j["mask"] = r.mask;
                    j["k"] = r.k;
                    j["oracle_has_clique"] = r.has_clique;
                    j["engine_frechet"] = r.frechet_infinite
                                              ? "infinite"
                                              : (r.frechet_zero ? "zero" : "positive");
                    j["engine_clarke_dist_sq"] = format_rational(r.clarke_dist_sq);
                    j["match"] = r.match;
                    out << j.dump() << "\n";
                } else if (!r.match) {
                    out << "MISMATCH graphs n=" << r.n << " mask=" << r.mask << " k=" << r.k
                        << "\n";
                }
            }
            if (!as_json)
                out << "graphs n=" << n << ": " << recs.size() << " instances checked\n";
        }
    }
    if (sweep == "polytopes" || sweep == "all") {
        auto recs = polytope_audit_sweep(200, default_seed(), static_cast<std::size_t>(jobs));
        for (const auto& r : recs) {
            const bool ok = r.minkowski_ok && r.facet_roundtrip_ok;
            if (!ok) ++mismatches;
            if (as_json) {
                Json j = Json::object();
                j["sweep"] = "polytopes";
                j["index"] = r.index;
                j["minkowski_ok"] = r.minkowski_ok;
                j["facet_roundtrip_ok"] = r.facet_roundtrip_ok;
                j["match"] = ok;
                out << j.dump() << "\n";
            } else if (!ok) {
                out << "MISMATCH polytopes index=" << r.index << "\n";
            }
        }
        if (!as_json) out << "polytopes: " << recs.size() << " instances checked\n";
    }
    if (!as_json) out << (mismatches == 0 ? "all checks passed" : "MISMATCHES FOUND") << "\n";
    return mismatches == 0 ? 0 : 1;
}

// ---- bench ------------------------------------------------------------------

inline int cmd_bench(const std::string& family, const std::string& n_range,
                     const std::string& k_range, bool as_json, std::ostream& out) {
    const auto [n_lo, n_hi] = parse_range(n_range);
    const auto [k_lo, k_hi] = parse_range(k_range);
    if (!as_json)
        out << "family          N  k  dim  gen_ms   test_ms  dist^2   cones  vx    vy    bits\n";
    for (long n = n_lo; n <= n_hi; ++n) {
        for (long k = k_lo; k <= k_hi; ++k) {
            const auto t0 = std::chrono::steady_clock::now();
            Verdict v;
            std::size_t dim = 0;
            double gen_ms = 0;
            if (family == "trivial") {
                MaxMinFormula abs_f;
                abs_f.dim = 1;
                abs_f.affine = {{{Rational(1)}, 0}, {{Rational(-1)}, 0}};
                abs_f.groups = {{0}, {1}};
                gen_ms = elapsed_ms(t0);
                const auto t1 = std::chrono::steady_clock::now();
                v = stationarity_test(abs_f, {Rational(0)}, 0, Notion::Frechet);
                dim = 1;
                (void)t1;
            } else if (family == "clique-frechet" || family == "clique-clarke") {
                const Graph g = Graph::cycle(static_cast<std::size_t>(n));
                GadgetInstance gi = family == "clique-frechet"
                                        ? gen_frechet_gadget(g, static_cast<std::size_t>(k))
                                        : gen_clarke_gadget(g, static_cast<std::size_t>(k));
                gen_ms = elapsed_ms(t0);
                dim = gi.dim;
                SubdiffCache cache;
                v = stationarity_test(gi.dc, zero_vec(gi.dim), 0,
                                      family == "clique-frechet" ? Notion::Frechet
                                                                 : Notion::Clarke,
                                      &cache);
            } else if (family == "cnn-frechet" || family == "cnn-clarke") {
                const Graph g = Graph::cycle(static_cast<std::size_t>(n));
                CnnInstance ci = gen_cnn_losses(g, static_cast<std::size_t>(k));
                gen_ms = elapsed_ms(t0);
                if (family == "cnn-frechet") {
                    dim = 2 * ci.k;
                    v = stationarity_test(ci.lf_maxmin, zero_vec(dim), 0, Notion::Frechet);
                } else {
                    dim = 2 * ci.k + 1;
                    v = stationarity_test(ci.lc_maxmin, zero_vec(dim), 0, Notion::Clarke);
                }
            } else {
                throw input_error("bench: unknown family '" + family + "'");
            }
            const double total_ms = elapsed_ms(t0);
            const double test_ms = total_ms - gen_ms;
            const std::string dist = v.dist_finite ? format_rational(v.dist_sq) : "inf";
            if (as_json) {
                Json j = Json::object();
                j["family"] = family;
                j["n"] = n;
                j["k"] = k;
                j["dim"] = dim;
                j["gen_ms"] = gen_ms;
                j["test_ms"] = test_ms;
                j["dist_sq"] = dist;
                j["cones"] = v.cone_count;
                j["vertices_x"] = v.vcount_x;
                j["vertices_y"] = v.vcount_y;
                j["max_bits"] = verdict_bits(v);
                out << j.dump() << "\n";
            } else {
                char line[256];
                std::snprintf(line, sizeof(line), "%-15s %-2ld %-2ld %-4zu %-8.1f %-8.1f %-8s %-6zu %-5zu %-5zu %u\n",
                              family.c_str(), n, k, dim, gen_ms, test_ms, dist.c_str(),
                              v.cone_count, v.vcount_x, v.vcount_y, verdict_bits(v));
                out << line;
            }
            if (family == "trivial") break;
        }
        if (family == "trivial") break;
    }
    return 0;
}

}  // namespace cli_detail

inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
    CLI::App app{"exact stationarity tests for piecewise-affine functions"};
    app.require_subcommand(1);

    // test
    std::string t_path, t_notion = "frechet", t_polarity = "yes", t_epsilon;
    bool t_json = false;
    auto* t = app.add_subcommand("test", "decide a stationarity polarity for an instance");
    t->add_option("instance", t_path, "instance JSON file")->required();
    t->add_option("--notion", t_notion, "frechet|clarke")->required();
    t->add_option("--polarity", t_polarity, "yes|no (default yes)");
    t->add_option("--epsilon", t_epsilon, "override the instance tolerance, e.g. 1/3");
    t->add_flag("--json", t_json, "emit the verdict as JSON");

    // localmin
    std::string l_path;
    bool l_json = false;
    auto* l = app.add_subcommand("localmin", "decide local minimality at the query point");
    l->add_option("instance", l_path, "instance JSON file")->required();
    l->add_flag("--json", l_json, "emit the verdict as JSON");

    // gen
    std::string g_family, g_graph, g_repr = "auto", g_out = ".";
    long g_k = 2;
    auto* g = app.add_subcommand("gen", "generate instances from a graph");
    g->add_option("--family", g_family,
                  "clique-frechet|clique-clarke|cnn-frechet|cnn-clarke")
        ->required();
    g->add_option("--graph", g_graph, "edge-list file: 'N M' then M lines 'u v'")->required();
    g->add_option("-k,--k", g_k, "clique size parameter (>= 2)")->required();
    g->add_option("--repr", g_repr, "maxmin|dc|both (default: both; cnn: maxmin)");
    g->add_option("--out", g_out, "output directory (default .)");

    // audit
    std::string a_sweep = "all";
    long a_max_n = 4, a_jobs = 1;
    bool a_json = false;
    auto* a = app.add_subcommand("audit", "oracle-agreement sweeps");
    a->add_option("--sweep", a_sweep, "graphs|polytopes|all (default all)");
    a->add_option("--max-n", a_max_n, "largest labeled-graph size (default 4)");
    a->add_option("--jobs", a_jobs, "parallel workers (default 1)");
    a->add_flag("--json", a_json, "emit one JSON record per instance");

    // bench
    std::string b_family = "clique-frechet", b_n = "5:8", b_k = "2";
    bool b_json = false;
    auto* b = app.add_subcommand("bench", "timing table over generated instances");
    b->add_option("--family", b_family,
                  "clique-frechet|clique-clarke|cnn-frechet|cnn-clarke|trivial");
    b->add_option("--n-range", b_n, "graph sizes, e.g. 6:10 (cycle graphs)");
    b->add_option("--k-range", b_k, "clique sizes, e.g. 2:3");
    b->add_flag("--json", b_json, "emit one JSON record per row");

    args.insert(args.begin(), "pastat");
    std::vector<char*> argv;
    for (auto& s : args) argv.push_back(s.data());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) {  // --help
            out << app.help();
            return 0;
        }
        err << e.what() << "\n";
        return 2;
    }

    try {
        if (t->parsed()) {
            Instance inst = parse_instance(cli_detail::read_file(t_path));
            const Rational eps = t_epsilon.empty() ? inst.epsilon : parse_rational(t_epsilon);
            const Notion notion = cli_detail::notion_of(t_notion);
            if (t_polarity != "yes" && t_polarity != "no")
                throw input_error("polarity must be 'yes' or 'no'");
            Verdict v = cli_detail::run_instance(inst, eps, notion);
            cli_detail::print_verdict(out, v, t_json);
            const bool holds =
                polarity_holds(v, t_polarity == "yes" ? Polarity::Yes : Polarity::No);
            return holds ? 0 : 1;
        }
        if (l->parsed()) {
            Instance inst = parse_instance(cli_detail::read_file(l_path));
            Verdict v = cli_detail::run_instance(inst, 0, Notion::Frechet);
            cli_detail::print_verdict(out, v, l_json);
            if (!l_json)
                out << (v.yes ? "local minimum" : "not a local minimum") << "\n";
            return v.yes ? 0 : 1;
        }
        if (g->parsed()) return cli_detail::cmd_gen(g_family, g_graph, g_k, g_repr, g_out, out);
        if (a->parsed()) return cli_detail::cmd_audit(a_sweep, a_max_n, a_jobs, a_json, out);
        if (b->parsed()) return cli_detail::cmd_bench(b_family, b_n, b_k, b_json, out);
    } catch (const input_error& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "internal error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}

}  // namespace pastat
