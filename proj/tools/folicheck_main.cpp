// folicheck: tangency loci of embedded submanifolds against foliations on
// quotient model spaces, with monodromy pairing tables, degree/covering
// verdicts, and machine-readable reports.

#include <cstdio>
#include <exception>

#include "CLI11.hpp"
#include "folicheck/runner.hpp"

namespace {

void add_common_flags(CLI::App* cmd, folicheck::RunOptions& o) {
    cmd->add_option("--eps", o.eps, "perturbation amplitude override (>= 0)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--seed", o.seed, "perturbation seed override (>= 0)")
        ->check(CLI::NonNegativeNumber);
    cmd->add_option("--grid", o.grid, "sampling grid override per parameter axis")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--max-tries", o.max_tries, "genericity retry budget override")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--out", o.out_path, "write the report to a file instead of stdout");
    cmd->add_option("--format", o.format, "report format")
        ->check(CLI::IsMember({"json", "csv"}));
}

void add_torus_flags(CLI::App* cmd, folicheck::RunOptions& o) {
    cmd->add_option("--p", o.p, "torus_pq meridian winding");
    cmd->add_option("--q", o.q, "torus_pq longitude winding");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{
        "tangency loci, determinant-line monodromy, and degree/covering checks\n"
        "for embedded submanifolds of foliated quotient model spaces"};
    app.require_subcommand(1);

    folicheck::RunOptions check_opts;
    auto* check = app.add_subcommand("check", "run one scenario and print a canonical report");
    check->add_option("scenario", check_opts.scenario, "builtin id or scenario file path")
        ->required();
    add_common_flags(check, check_opts);
    add_torus_flags(check, check_opts);

    folicheck::SweepOptions sweep_opts;
    long long seed_count = 0;
    auto* sweep = app.add_subcommand("sweep", "run a scenario over seed/eps lists, CSV output");
    sweep->add_option("scenario", sweep_opts.base.scenario, "builtin id or scenario file path")
        ->required();
    sweep->add_option("--seeds", sweep_opts.seeds, "explicit seed list")->delimiter(',');
    sweep->add_option("--seed-count", seed_count, "use seeds 1..N");
    sweep->add_option("--eps-list", sweep_opts.eps_list, "perturbation amplitudes")
        ->delimiter(',');
    add_common_flags(sweep, sweep_opts.base);
    add_torus_flags(sweep, sweep_opts.base);
    sweep_opts.base.format = "csv";

    folicheck::RunOptions oracle_opts;
    auto* oracle = app.add_subcommand("oracle", "recompute counts by dense scan and compare");
    oracle->add_option("scenario", oracle_opts.scenario, "builtin id or scenario file path")
        ->required();
    add_common_flags(oracle, oracle_opts);
    add_torus_flags(oracle, oracle_opts);

    folicheck::RunOptions verify_opts;
    auto* verify = app.add_subcommand("verify", "run every builtin against its expectation block");
    add_common_flags(verify, verify_opts);

    folicheck::RunOptions list_opts;
    auto* list = app.add_subcommand("list-scenarios", "list builtin scenarios");
    list->add_option("--out", list_opts.out_path, "write to a file instead of stdout");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        // collapse the parser's internal exit codes into the documented 0/1 split
        return app.exit(e) == 0 ? 0 : folicheck::kExitError;
    }

    try {
        if (*check) return folicheck::run_check(check_opts);
        if (*sweep) {
            if (seed_count > 0) {
                sweep_opts.seeds.clear();
                for (long long s = 1; s <= seed_count; ++s) sweep_opts.seeds.push_back(s);
            }
            return folicheck::run_sweep(sweep_opts);
        }
        if (*oracle) return folicheck::run_oracle(oracle_opts);
        if (*verify) return folicheck::run_verify(verify_opts);
        if (*list) return folicheck::run_list(list_opts);
    } catch (const folicheck::GenericityFailed& e) {
        std::fprintf(stderr, "genericity search failed: %s\n", e.what());
        return folicheck::kExitGenericityFailed;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return folicheck::kExitError;
    }
    return folicheck::kExitError;
}
