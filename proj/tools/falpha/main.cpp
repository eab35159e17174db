// falpha: mass functions, staircase functions and linear fractal differential
// systems on Cantor-like subsets of the real line.

#include <cstdio>
#include <string>

#include <CLI11.hpp>

#include "commands.hpp"
#include "config.hpp"

namespace {

using falpha::cli::RunConfig;
using falpha::cli::RunOptions;

struct CommonArgs {
    std::string config_path;
    RunOptions options;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
    cmd->add_option("--config", args.config_path, "configuration file (JSON)")
        ->required();
    cmd->add_option("--out", args.options.out_dir, "output directory")
        ->default_val(".");
    cmd->add_option("--seed", args.options.seed,
                    "seed for randomized sample selection (0 = deterministic grid)")
        ->default_val(0);
    cmd->add_option("--depth", args.options.depth,
                    "staircase evaluation depth override")
        ->default_val(48)
        ->check(CLI::Range(4, 60));
}

int dispatch(int (*fn)(const RunConfig&, const RunOptions&), const CommonArgs& args) {
    RunConfig cfg = falpha::cli::load_config(args.config_path);
    return fn(cfg, args.options);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"F-alpha calculus on Cantor-like fractal sets"};
    app.require_subcommand(1);

    CommonArgs staircase_args, mass_args, dimension_args, solve_args, verify_args;
    auto* staircase =
        app.add_subcommand("staircase", "tabulate and plot the integral staircase");
    add_common(staircase, staircase_args);
    auto* mass_cmd = app.add_subcommand("mass", "mass-function refinement per alpha");
    add_common(mass_cmd, mass_args);
    auto* dimension =
        app.add_subcommand("dimension", "gamma-dimension estimate by bisection");
    add_common(dimension, dimension_args);
    auto* solve = app.add_subcommand(
        "solve", "solve D_F^alpha x = A x and tabulate the general solution");
    add_common(solve, solve_args);
    auto* verify = app.add_subcommand(
        "verify", "residual, Abel, Wronskian-dichotomy and round-trip checks");
    add_common(verify, verify_args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (staircase->parsed()) {
            return dispatch(falpha::cli::cmd_staircase, staircase_args);
        }
        if (mass_cmd->parsed()) return dispatch(falpha::cli::cmd_mass, mass_args);
        if (dimension->parsed()) return dispatch(falpha::cli::cmd_dimension, dimension_args);
        if (solve->parsed()) return dispatch(falpha::cli::cmd_solve, solve_args);
        if (verify->parsed()) return dispatch(falpha::cli::cmd_verify, verify_args);
    } catch (const falpha::ArgumentError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const falpha::ResourceError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    } catch (const falpha::ConvergenceError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const falpha::NumericError& e) {
        std::fprintf(stderr, "numeric error: %s\n", e.what());
        return 2;
    } catch (const falpha::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
