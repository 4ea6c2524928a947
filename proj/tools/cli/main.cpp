#include "commands.hpp"

#include "wopsip/errors.hpp"
#include "wopsip/parallel.hpp"

#include <CLI11.hpp>

#include <iostream>

namespace {

using wopsip::cli::RunConfig;

void add_common(CLI::App& sub, RunConfig& c) {
    sub.add_option("--scheme", c.scheme, "Discretisation: wopsip, sip or rsip")->capture_default_str();
    sub.add_option("--dim", c.dim, "Space dimension (2 or 3); inferred from --family when omitted")
        ->check(CLI::Range(2, 3));
    sub.add_option("--family", c.family,
                   "Mesh family: diagonal, crisscross, graded (2D) or kuhn (3D); default diagonal, kuhn for --dim 3");
    sub.add_option("--levels", c.levels, "Number of refinement levels")->capture_default_str();
    sub.add_option("--base", c.base, "Cells per unit edge on level 0 (default 8 in 2D, 2 in 3D)");
    sub.add_option("--aniso-ratio", c.aniso_ratio, "Refinement factor of the last axis relative to x")
        ->capture_default_str();
    sub.add_option("--gamma", c.gamma, "Penalty scale for sip/rsip (ignored for wopsip)")->capture_default_str();
    sub.add_option("--grading", c.grading, "Grading strength of the graded family")->capture_default_str();
    sub.add_option("--solution", c.solution, "Manufactured solution: sinsin, poly or layer")->capture_default_str();
    sub.add_option("--output-dir", c.output_dir, "Directory for CSV, VTK and run.json")->capture_default_str();
    sub.add_option("--seed", c.seed, "Seed for randomised probes")->capture_default_str();
    sub.add_option("--threads", c.threads, "Worker threads (0: hardware concurrency)")->capture_default_str();
}

} // namespace

int main(int argc, char** argv) {
    namespace cli = wopsip::cli;
    CLI::App app{"WOPSIP discontinuous Galerkin solver for the Poisson problem on simplicial meshes"};
    app.require_subcommand(1);

    RunConfig config;
    CLI::App* converge = app.add_subcommand("converge", "Convergence study against a manufactured solution");
    CLI::App* probe = app.add_subcommand("probe", "Commuting, integration-by-parts, Poincare and consistency probes");
    CLI::App* meshinfo = app.add_subcommand("meshinfo", "Mesh quality statistics and per-cell shape data");
    for (CLI::App* sub : {converge, probe, meshinfo}) add_common(*sub, config);

    converge->add_flag("--assert-rates", config.assert_rates, "Exit 3 unless the final rates reach the minimums");
    CLI::Option* min_energy =
        converge->add_option("--min-energy-rate", config.min_energy_rate, "Minimum final energy rate (implies --assert-rates)")
            ->capture_default_str();
    CLI::Option* min_l2 =
        converge->add_option("--min-l2-rate", config.min_l2_rate, "Minimum final L2 rate (implies --assert-rates)")
            ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return cli::k_exit_usage;
    }

    if (min_energy->count() > 0 || min_l2->count() > 0) config.assert_rates = true;
    wopsip::set_num_threads(config.threads);

    try {
        if (converge->parsed()) {
            config.command = "converge";
            return cli::run_converge(config, std::cout);
        }
        if (probe->parsed()) {
            config.command = "probe";
            return cli::run_probe(config, std::cout);
        }
        config.command = "meshinfo";
        return cli::run_meshinfo(config, std::cout);
    } catch (const cli::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n" << "run with --help for the list of flags\n";
        return cli::k_exit_usage;
    } catch (const wopsip::IndefiniteMatrix& e) {
        std::cerr << "IndefiniteMatrix: " << e.what() << "\n";
        return cli::k_exit_failure;
    } catch (const wopsip::NoConvergence& e) {
        std::cerr << "NoConvergence: " << e.what() << "\n";
        return cli::k_exit_failure;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return cli::k_exit_failure;
    }
}
