#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "pmuplace/runner.hpp"

namespace {

int finish(const pmuplace::CmdResult& res, const std::string& record_path) {
    if (!res.warning.empty()) std::cerr << res.warning;
    std::cout << res.human;
    if (!res.record.empty()) {
        if (record_path.empty()) {
            std::cout << res.record;
        } else {
            std::ofstream out(record_path, std::ios::binary);
            if (!out) {
                std::cerr << "error: cannot write record to '" << record_path << "'\n";
                return pmuplace::kExitParse;
            }
            out << res.record;
        }
    }
    return res.exit_code;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"PMU placement for full network observability"};
    app.require_subcommand(1);

    std::string record_path;

    pmuplace::SolveArgs sa;
    auto* solve = app.add_subcommand("solve", "compute a minimum placement");
    solve->add_option("file", sa.input, "network file or fixture name")->required();
    solve->add_option("--method", sa.method, "bip or nlp")->default_val("bip");
    solve->add_option("--weights", sa.weights_file, "per-bus installation costs");
    solve->add_option("--seed", sa.seed, "RNG seed for nlp starts");
    solve->add_option("--tol", sa.tol, "convergence tolerance")->default_val(1e-6);
    solve->add_option("--max-iter", sa.max_iter, "iteration cap per start")->default_val(200);
    solve->add_option("--starts", sa.starts, "number of nlp starts")->default_val(1);
    solve->add_option("--strategy", sa.strategy, "all-ones, grid-random, uniform-random")
        ->default_val("all-ones");
    solve->add_option("--threshold", sa.threshold, "rounding threshold")->default_val(0.5);
    solve->add_option("--node-limit", sa.node_limit, "bip node budget")->default_val(2'000'000);
    solve->add_option("--record", record_path, "write the run record to this file");

    pmuplace::EnumerateArgs ea;
    auto* enumerate = app.add_subcommand("enumerate", "collect alternative optimal placements");
    enumerate->add_option("file", ea.input, "network file or fixture name")->required();
    enumerate->add_option("--starts", ea.starts, "number of starts")->default_val(50);
    enumerate->add_option("--strategy", ea.strategy, "all-ones, grid-random, uniform-random")
        ->default_val("grid-random");
    enumerate->add_option("--seed", ea.seed, "RNG seed");
    enumerate->add_option("--tol", ea.tol, "convergence tolerance")->default_val(1e-6);
    enumerate->add_option("--max-iter", ea.max_iter, "iteration cap per start")->default_val(200);
    enumerate->add_option("--threshold", ea.threshold, "rounding threshold")->default_val(0.5);
    enumerate->add_option("--record", record_path, "write the run record to this file");

    pmuplace::VerifyArgs va;
    auto* verify = app.add_subcommand("verify", "check a placement for observability");
    verify->add_option("file", va.input, "network file or fixture name")->required();
    verify->add_option("--placement", va.placement, "comma-separated bus labels")->required();
    verify->add_option("--record", record_path, "write the run record to this file");

    pmuplace::BenchArgs ba;
    auto* bench = app.add_subcommand("bench", "run both solvers across test systems");
    bench->add_option("--systems", ba.systems, "systems to run")->delimiter(',');
    bench->add_option("--methods", ba.methods, "bip, nlp")->delimiter(',');
    bench->add_option("--seed", ba.seed, "RNG seed for nlp starts");
    bench->add_option("--starts", ba.starts_override, "override the per-system start budget");
    bench->add_option("--record", record_path, "write the run record to this file");

    pmuplace::OracleArgs oa;
    auto* oracle = app.add_subcommand("oracle", "exhaustive minimum dominating sets");
    oracle->add_option("file", oa.input, "network file or fixture name")->required();
    oracle->add_option("--size-cap", oa.size_cap, "give up beyond this many PMUs");
    oracle->add_option("--record", record_path, "write the run record to this file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return finish(pmuplace::cmd_solve(sa), record_path);
        if (enumerate->parsed()) return finish(pmuplace::cmd_enumerate(ea), record_path);
        if (verify->parsed()) return finish(pmuplace::cmd_verify(va), record_path);
        if (bench->parsed()) return finish(pmuplace::cmd_bench(ba), record_path);
        if (oracle->parsed()) return finish(pmuplace::cmd_oracle(oa), record_path);
    } catch (const pmuplace::ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pmuplace::kExitParse;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return pmuplace::kExitFailure;
    }
    return pmuplace::kExitParse;
}
