#pragma once

#include <algorithm>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "pmuplace/bip.hpp"
#include "pmuplace/network.hpp"
#include "pmuplace/observability.hpp"
#include "pmuplace/oracle.hpp"
#include "pmuplace/record.hpp"
#include "pmuplace/sqp.hpp"

namespace pmuplace {

inline constexpr const char* kToolVersion = "0.1.0";

// Exit codes shared by all subcommands.
enum ExitCode {
    kExitOk = 0,
    kExitFailure = 1,          // verify: placement not observable
    kExitParse = 2,            // unreadable input, bad file, bad arguments
    kExitInfeasible = 3,
    kExitLimit = 4,            // iteration/node budget exhausted or solver stalled
    kExitNonBinary = 5,        // NLP converged away from a usable binary point
};

inline int exit_code_for(SolveStatus s) {
    switch (s) {
        case SolveStatus::Optimal: return kExitOk;
        case SolveStatus::Infeasible: return kExitInfeasible;
        case SolveStatus::IterationLimit: return kExitLimit;
        case SolveStatus::Stalled: return kExitLimit;
        case SolveStatus::NonBinary: return kExitNonBinary;
        case SolveStatus::RoundingFailed: return kExitNonBinary;
    }
    return kExitFailure;
}

class ResolveError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

inline std::string default_data_dir() {
#ifdef PMUPLACE_DATA_DIR
    return PMUPLACE_DATA_DIR;
#else
    return "";
#endif
}

// Fixture names resolve against $PMUPLACE_DATA, then the build-time data
// directory; anything that exists as a path is used verbatim.
inline std::string resolve_input(const std::string& name) {
    namespace fs = std::filesystem;
    if (fs::exists(name) && fs::is_regular_file(name)) return name;
    std::vector<std::string> dirs;
    if (const char* env = std::getenv("PMUPLACE_DATA")) dirs.push_back(env);
    if (!default_data_dir().empty()) dirs.push_back(default_data_dir());
    for (const auto& d : dirs)
        for (const char* suffix : {".graph", ""}) {
            std::string p = d + "/" + name + suffix;
            if (fs::exists(p) && fs::is_regular_file(p)) return p;
        }
    throw ResolveError("cannot resolve network '" + name + "'");
}

struct LoadedNetwork {
    std::string given;          // the name or path as typed
    std::string path;
    std::string bytes;
    Network net;                // renumbered, dense ascending-label indices
    bool connected = true;
};

inline LoadedNetwork load_network(const std::string& name) {
    LoadedNetwork ld;
    ld.given = name;
    ld.path = resolve_input(name);
    std::ifstream in(ld.path, std::ios::binary);
    if (!in) throw ResolveError("cannot open '" + ld.path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    ld.bytes = ss.str();
    ld.net = renumber(parse_network(ld.bytes));
    ld.connected = is_connected(ld.net);
    return ld;
}

inline std::vector<long long> placement_labels(const Network& net, const Placement& p) {
    std::vector<long long> labels;
    for (int b : p.buses()) labels.push_back(net.original_labels[b]);
    std::sort(labels.begin(), labels.end());
    return labels;
}

inline std::string join_csv(const std::vector<long long>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) {
        if (i) s += ',';
        s += std::to_string(v[i]);
    }
    return s;
}

inline Weights load_weights(const std::string& path, int n) {
    std::ifstream in(path);
    if (!in) throw ResolveError("cannot open weights file '" + path + "'");
    Weights w;
    double v;
    while (in >> v) {
        if (v <= 0) throw ResolveError("weights must be strictly positive");
        w.w.push_back(v);
    }
    if ((int)w.w.size() != n)
        throw ResolveError("weights file has " + std::to_string(w.w.size()) +
                           " entries, expected " + std::to_string(n));
    return w;
}

inline StartStrategy::Kind parse_strategy(const std::string& s) {
    if (s == "all-ones") return StartStrategy::Kind::AllOnes;
    if (s == "grid-random") return StartStrategy::Kind::GridRandom;
    if (s == "uniform-random") return StartStrategy::Kind::UniformRandom;
    throw ResolveError("unknown start strategy '" + s + "'");
}

inline const char* strategy_name(StartStrategy::Kind k) {
    switch (k) {
        case StartStrategy::Kind::AllOnes: return "all-ones";
        case StartStrategy::Kind::GridRandom: return "grid-random";
        case StartStrategy::Kind::UniformRandom: return "uniform-random";
    }
    return "?";
}

struct CmdResult {
    int exit_code = 0;
    std::string human;
    std::string record;
    std::string warning;   // printed to stderr by the CLI
};

namespace rundetail {

inline long long now_ms() {
    using namespace std::chrono;
    return duration_cast<milliseconds>(steady_clock::now().time_since_epoch()).count();
}

inline void add_header(RunRecord& r, const char* command, const LoadedNetwork& ld) {
    r.add("record", std::string("pmuplace/1"));
    r.add("version", std::string(kToolVersion));
    r.add("command", std::string(command));
    r.add("input", ld.given);
    r.add("input_digest", "fnv1a64:" + hex16(fnv1a64(ld.bytes)));
    r.add("n", (long long)ld.net.n);
    r.add("branches", (long long)ld.net.branches.size());
    r.add("connected", (long long)(ld.connected ? 1 : 0));
}

inline void warn_disconnected(const LoadedNetwork& ld, CmdResult& res) {
    if (!ld.connected)
        res.warning = "warning: network is disconnected; observability constraints still "
                      "apply per bus\n";
}

inline void add_solution_fields(RunRecord& r, const std::string& prefix, const Network& net,
                                const ConnectivityMatrix& A, const SolveReport& rep) {
    r.add(prefix + "status", std::string(status_name(rep.status)));
    r.add(prefix + "pmus", (long long)rep.placement.buses().size());
    r.add(prefix + "objective", rep.objective);
    r.add(prefix + "placement", join_csv(placement_labels(net, rep.placement)));
    if (is_success(rep.status)) r.add(prefix + "sori", sori(A, rep.placement));
}

}  // namespace rundetail

struct SolveArgs {
    std::string input;
    std::string method = "bip";   // bip | nlp
    std::string weights_file;
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iter = 200;
    int starts = 1;
    std::string strategy = "all-ones";
    double threshold = 0.5;
    long long node_limit = 2'000'000;
};

inline CmdResult cmd_solve(const SolveArgs& a) {
    CmdResult res;
    long long t0 = rundetail::now_ms();
    LoadedNetwork ld;
    try {
        ld = load_network(a.input);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }
    rundetail::warn_disconnected(ld, res);
    const Network& net = ld.net;
    ConnectivityMatrix A = build_connectivity(net);

    Weights w = Weights::unit(net.n);
    std::string weights_tag = "unit";
    if (!a.weights_file.empty()) {
        try {
            w = load_weights(a.weights_file, net.n);
        } catch (const std::exception& e) {
            res.exit_code = kExitParse;
            res.human = std::string("error: ") + e.what() + "\n";
            return res;
        }
        weights_tag = "file";
    }

    SqpConfig cfg;
    cfg.tol_con = cfg.tol_x = cfg.tol_fun = a.tol;
    cfg.max_iter = a.max_iter;
    cfg.round_threshold = a.threshold;

    RunRecord r;
    rundetail::add_header(r, "solve", ld);
    r.add("method", a.method);
    r.add("weights", weights_tag);

    SolveReport rep;
    MultistartStats stats;
    if (a.method == "bip") {
        BipOptions opt;
        opt.node_limit = a.node_limit;
        rep = solve_bip(A, w, opt);
        r.add("node_limit", a.node_limit);
    } else if (a.method == "nlp") {
        StartStrategy st;
        st.kind = parse_strategy(a.strategy);
        st.count = a.starts;
        st.seed = a.seed;
        auto sols = multistart(net, w, st, cfg, &stats);
        if (!sols.empty())
            rep = sols.front();
        else if (!stats.failures.empty())
            rep = stats.failures.front();
        r.add("seed", (long long)a.seed);
        r.add("starts", (long long)st.count);
        r.add("strategy", std::string(strategy_name(st.kind)));
        r.add("tol_con", cfg.tol_con);
        r.add("tol_x", cfg.tol_x);
        r.add("tol_fun", cfg.tol_fun);
        r.add("max_iter", (long long)cfg.max_iter);
        r.add("threshold", cfg.round_threshold);
        r.add("failed_starts", (long long)stats.failed_starts);
    } else {
        res.exit_code = kExitParse;
        res.human = "error: unknown method '" + a.method + "'\n";
        return res;
    }

    rundetail::add_solution_fields(r, "", net, A, rep);
    if (a.method == "bip") {
        r.add("nodes", rep.nodes);
        r.add("bound_gap", rep.residuals.bound_gap);
    } else {
        r.add("iterations", rep.nodes);
        r.add("maxf", rep.residuals.max_violation);
        r.add("kkt", rep.residuals.kkt);
        r.add("binarity", rep.residuals.binarity);
    }
    r.add("wall_ms", rundetail::now_ms() - t0);
    res.record = r.serialize();

    std::ostringstream hs;
    auto labels = placement_labels(net, rep.placement);
    hs << "system: " << ld.given << " (n=" << net.n << ", branches=" << net.branches.size()
       << ")\n";
    hs << "method: " << a.method << "\n";
    hs << "status: " << status_name(rep.status) << "\n";
    hs << "placement (" << labels.size() << " PMUs):";
    for (long long b : labels) hs << ' ' << b;
    hs << "\nobjective: " << format_double(rep.objective) << "\n";
    if (is_success(rep.status)) hs << "SORI: " << sori(A, rep.placement) << "\n";
    res.human = hs.str();
    res.exit_code = exit_code_for(rep.status);
    return res;
}

struct EnumerateArgs {
    std::string input;
    int starts = 50;
    std::string strategy = "grid-random";
    std::uint64_t seed = 0;
    double tol = 1e-6;
    int max_iter = 200;
    double threshold = 0.5;
};

inline CmdResult cmd_enumerate(const EnumerateArgs& a) {
    CmdResult res;
    long long t0 = rundetail::now_ms();
    LoadedNetwork ld;
    try {
        ld = load_network(a.input);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }
    rundetail::warn_disconnected(ld, res);
    const Network& net = ld.net;
    ConnectivityMatrix A = build_connectivity(net);
    Weights w = Weights::unit(net.n);

    SqpConfig cfg;
    cfg.tol_con = cfg.tol_x = cfg.tol_fun = a.tol;
    cfg.max_iter = a.max_iter;
    cfg.round_threshold = a.threshold;

    StartStrategy st;
    StartStrategy::Kind kind;
    try {
        kind = parse_strategy(a.strategy);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }
    st.kind = kind;
    st.count = a.starts;
    st.seed = a.seed;

    MultistartStats stats;
    auto sols = multistart(net, w, st, cfg, &stats);

    double best_obj = sols.empty() ? 0.0 : sols.front().objective;
    std::vector<SolveReport> optimal, rest;
    for (auto& s : sols)
        (s.objective <= best_obj + 1e-9 ? optimal : rest).push_back(s);
    optimal = rank_by_sori(std::move(optimal), A);

    RunRecord r;
    rundetail::add_header(r, "enumerate", ld);
    r.add("seed", (long long)a.seed);
    r.add("starts", (long long)st.count);
    r.add("strategy", std::string(strategy_name(st.kind)));
    r.add("tol_con", cfg.tol_con);
    r.add("max_iter", (long long)cfg.max_iter);
    r.add("threshold", cfg.round_threshold);
    r.add("distinct", (long long)sols.size());
    r.add("failed_starts", (long long)stats.failed_starts);
    if (!sols.empty()) {
        r.add("optimal_pmus", (long long)optimal.front().placement.buses().size());
        r.add("best", 1);
    }
    int idx = 0;
    auto emit = [&](const SolveReport& s, bool opt_flag) {
        ++idx;
        std::string p = "solution." + std::to_string(idx) + ".";
        r.add(p + "placement", join_csv(placement_labels(net, s.placement)));
        r.add(p + "pmus", (long long)s.placement.buses().size());
        r.add(p + "sori", sori(A, s.placement));
        r.add(p + "optimal", (long long)(opt_flag ? 1 : 0));
        r.add(p + "start", (long long)s.start_index);
    };
    for (const auto& s : optimal) emit(s, true);
    for (const auto& s : rest) emit(s, false);
    r.add("wall_ms", rundetail::now_ms() - t0);
    res.record = r.serialize();

    std::ostringstream hs;
    hs << "system: " << ld.given << " (n=" << net.n << ")\n";
    hs << "starts: " << st.count << " (" << strategy_name(st.kind) << ", seed " << a.seed
       << "), failed: " << stats.failed_starts << "\n";
    if (sols.empty()) {
        hs << "no successful convergences\n";
        res.exit_code =
            stats.failures.empty() ? kExitLimit : exit_code_for(stats.failures.front().status);
    } else {
        hs << "distinct optimal placements (" << (long long)optimal.front().objective
           << " PMUs):\n";
        for (size_t i = 0; i < optimal.size(); ++i) {
            auto labels = placement_labels(net, optimal[i].placement);
            hs << (i == 0 ? "  * " : "    ");
            for (long long b : labels) hs << b << ' ';
            hs << " SORI " << sori(A, optimal[i].placement) << "\n";
        }
        if (!rest.empty()) {
            hs << "suboptimal local optima:\n";
            for (const auto& s : rest) {
                auto labels = placement_labels(net, s.placement);
                hs << "    ";
                for (long long b : labels) hs << b << ' ';
                hs << " (" << labels.size() << " PMUs, SORI " << sori(A, s.placement) << ")\n";
            }
        }
        hs << "flagged: the first optimal set maximizes SORI among those found\n";
        res.exit_code = kExitOk;
    }
    res.human = hs.str();
    return res;
}

struct VerifyArgs {
    std::string input;
    std::string placement;   // comma-separated original bus labels
};

inline CmdResult cmd_verify(const VerifyArgs& a) {
    CmdResult res;
    LoadedNetwork ld;
    try {
        ld = load_network(a.input);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }
    rundetail::warn_disconnected(ld, res);
    const Network& net = ld.net;
    ConnectivityMatrix A = build_connectivity(net);

    std::vector<long long> labels;
    {
        std::string tok;
        std::istringstream ss(a.placement);
        while (std::getline(ss, tok, ',')) {
            if (tok.empty()) continue;
            try {
                labels.push_back(std::stoll(tok));
            } catch (...) {
                res.exit_code = kExitParse;
                res.human = "error: bad bus label '" + tok + "'\n";
                return res;
            }
        }
    }
    Placement p;
    p.x.assign(net.n, 0);
    for (long long lab : labels) {
        int internal = -1;
        for (int i = 1; i <= net.n; ++i)
            if (net.original_labels[i] == lab) {
                internal = i;
                break;
            }
        if (internal < 0) {
            res.exit_code = kExitParse;
            res.human = "error: bus label " + std::to_string(lab) + " is not in the network\n";
            return res;
        }
        p.x[internal - 1] = 1;
    }

    auto cov = coverage(A, p);
    bool obs = true;
    std::vector<long long> uncovered;
    for (int i = 1; i <= net.n; ++i)
        if (cov[i - 1] < 1) {
            obs = false;
            uncovered.push_back(net.original_labels[i]);
        }
    long long s = sori(A, p);

    RunRecord r;
    rundetail::add_header(r, "verify", ld);
    r.add("placement", join_csv(placement_labels(net, p)));
    r.add("pmus", (long long)p.buses().size());
    r.add("observable", (long long)(obs ? 1 : 0));
    r.add("sori", s);
    {
        std::string c;
        for (int i = 0; i < net.n; ++i) {
            if (i) c += ',';
            c += std::to_string(cov[i]);
        }
        r.add("coverage", c);
    }
    r.add("uncovered", join_csv(uncovered));
    res.record = r.serialize();

    std::ostringstream hs;
    hs << "placement:";
    for (long long b : placement_labels(net, p)) hs << ' ' << b;
    hs << "\nobservable: " << (obs ? "yes" : "no") << "\n";
    hs << "SORI: " << s << "\n";
    hs << "coverage (by bus, ascending label):";
    for (int i = 0; i < net.n; ++i) hs << ' ' << cov[i];
    hs << "\n";
    if (!obs) {
        hs << "uncovered buses:";
        for (long long b : uncovered) hs << ' ' << b;
        hs << "\n";
    }
    res.human = hs.str();
    res.exit_code = obs ? kExitOk : kExitFailure;
    return res;
}

struct BenchArgs {
    std::vector<std::string> systems{"ieee14", "ieee30", "ieee57", "ieee118", "ieee300"};
    std::vector<std::string> methods{"bip", "nlp"};
    std::uint64_t seed = 0;
    int starts_override = 0;   // 0 means per-system default
};

// Start budget for best-of-multistart NLP in benchmarks; small systems get
// many cheap starts, large ones rely on the all-ones start plus a few draws.
inline int bench_starts(int n) {
    if (n <= 20) return 50;
    if (n <= 40) return 30;
    if (n <= 80) return 12;
    if (n <= 150) return 4;
    return 2;
}

inline CmdResult cmd_bench(const BenchArgs& a) {
    CmdResult res;
    long long t0 = rundetail::now_ms();
    RunRecord r;
    r.add("record", std::string("pmuplace/1"));
    r.add("version", std::string(kToolVersion));
    r.add("command", std::string("bench"));
    r.add("seed", (long long)a.seed);
    {
        std::string s;
        for (size_t i = 0; i < a.systems.size(); ++i) s += (i ? "," : "") + a.systems[i];
        r.add("systems", s);
        std::string m;
        for (size_t i = 0; i < a.methods.size(); ++i) m += (i ? "," : "") + a.methods[i];
        r.add("methods", m);
    }

    std::ostringstream hs;
    hs << "system      method  pmus  status           wall_ms\n";
    int worst = kExitOk;

    for (const auto& sys : a.systems) {
        LoadedNetwork ld;
        try {
            ld = load_network(sys);
        } catch (const std::exception& e) {
            res.exit_code = kExitParse;
            res.human = std::string("error: ") + e.what() + "\n";
            return res;
        }
        const Network& net = ld.net;
        ConnectivityMatrix A = build_connectivity(net);
        Weights w = Weights::unit(net.n);
        for (const auto& method : a.methods) {
            if (method != "bip" && method != "nlp") {
                res.exit_code = kExitParse;
                res.human = "error: unknown method '" + method + "'\n";
                return res;
            }
            long long m0 = rundetail::now_ms();
            SolveReport rep;
            if (method == "bip") {
                rep = solve_bip(A, w);
            } else {
                StartStrategy st;
                st.kind = StartStrategy::Kind::GridRandom;
                st.count = a.starts_override > 0 ? a.starts_override : bench_starts(net.n);
                st.seed = a.seed;
                MultistartStats stats;
                auto sols = multistart(net, w, st, {}, &stats);
                if (!sols.empty())
                    rep = sols.front();
                else if (!stats.failures.empty())
                    rep = stats.failures.front();
            }
            long long ms = rundetail::now_ms() - m0;
            std::string pre = "row." + sys + "." + method + ".";
            rundetail::add_solution_fields(r, pre, net, A, rep);
            r.add(pre + "wall_ms", ms);
            char line[160];
            std::snprintf(line, sizeof line, "%-11s %-7s %-5lld %-16s %lld\n", sys.c_str(),
                          method.c_str(), (long long)rep.placement.buses().size(),
                          status_name(rep.status), ms);
            hs << line;
            worst = std::max(worst, exit_code_for(rep.status));
        }
    }
    r.add("wall_ms", rundetail::now_ms() - t0);
    res.record = r.serialize();
    res.human = hs.str();
    res.exit_code = worst;
    return res;
}

struct OracleArgs {
    std::string input;
    int size_cap = -1;
    int n_cap = 30;
};

inline CmdResult cmd_oracle(const OracleArgs& a) {
    CmdResult res;
    long long t0 = rundetail::now_ms();
    LoadedNetwork ld;
    try {
        ld = load_network(a.input);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }
    const Network& net = ld.net;

    OracleResult orc;
    try {
        orc = min_dominating_set_exact(net, a.size_cap, a.n_cap);
    } catch (const std::exception& e) {
        res.exit_code = kExitParse;
        res.human = std::string("error: ") + e.what() + "\n";
        return res;
    }

    RunRecord r;
    rundetail::add_header(r, "oracle", ld);
    r.add("minimum", (long long)orc.minimum_size);
    r.add("count", (long long)orc.optima.size());
    r.add("nodes", orc.nodes);
    for (size_t i = 0; i < orc.optima.size(); ++i) {
        std::vector<long long> labels;
        for (int b : orc.optima[i]) labels.push_back(net.original_labels[b]);
        std::sort(labels.begin(), labels.end());
        r.add("optimum." + std::to_string(i + 1), join_csv(labels));
    }
    r.add("wall_ms", rundetail::now_ms() - t0);
    res.record = r.serialize();

    std::ostringstream hs;
    if (orc.minimum_size < 0) {
        hs << "no dominating set within the size cap\n";
        res.exit_code = kExitInfeasible;
    } else {
        hs << "minimum size: " << orc.minimum_size << "\n";
        hs << "optimal placements: " << orc.optima.size() << "\n";
        for (const auto& o : orc.optima) {
            hs << " ";
            for (int b : o) hs << ' ' << net.original_labels[b];
            hs << "\n";
        }
        res.exit_code = kExitOk;
    }
    res.human = hs.str();
    return res;
}

}  // namespace pmuplace
