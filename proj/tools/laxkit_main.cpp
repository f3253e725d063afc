#include "config.hpp"
#include "runners.hpp"

#include "laxkit/expr.hpp"
#include "laxkit/version.hpp"

#include <CLI11.hpp>

#include <iostream>

using namespace laxkit::tools;

int main(int argc, char** argv) {
    CLI::App app{"laxkit: Lax pairs, classical r-matrices and conserved charges "
                 "for integrable lattice and field models"};
    app.set_version_flag("--version", laxkit::kVersion);
    app.require_subcommand(1);

    std::string config_path, out_path, format = "csv", check;
    std::uint64_t seed = 0;
    bool seed_set = false;
    int jobs = 1;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--config", config_path, "run configuration file")->required();
        cmd->add_option("--out", out_path, "output path (default: [output] path, else stdout)");
        cmd->add_option("--format", format, "output format: csv|json");
        cmd->add_option("--seed", seed, "override the config seed")
            ->each([&](const std::string&) { seed_set = true; });
        cmd->add_option("--jobs", jobs, "worker threads for sample sweeps");
    };

    CLI::App* verify = app.add_subcommand("verify", "run a named residual check suite");
    verify->add_option("check", check,
                       "cybe|sklyanin|linear-bracket|involution|zero-curvature-discrete|"
                       "zero-curvature-continuum|wz|jacobi|cartan")
        ->required();
    add_common(verify);
    CLI::App* charges = app.add_subcommand("charges", "closed-form and series-extracted charges");
    add_common(charges);
    CLI::App* simulate = app.add_subcommand("simulate", "time evolution with drift monitoring");
    add_common(simulate);
    CLI::App* monodromy = app.add_subcommand("monodromy", "tr T(lambda) over a spectral grid");
    add_common(monodromy);
    CLI::App* climit = app.add_subcommand("climit", "discrete-to-continuum limit harness");
    add_common(climit);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;  // usage errors are exit 2
    }

    try {
        RunConfig cfg = RunConfig::parse_file(config_path);
        RunOptions opt;
        opt.out_path = out_path.empty() ? cfg.get_or("output", "path", "") : out_path;
        opt.format = (format != "csv") ? format : cfg.get_or("output", "format", "csv");
        if (opt.format != "csv" && opt.format != "json")
            throw ConfigError("output format must be csv or json");
        opt.seed_override = seed_set;
        opt.seed = seed;
        opt.jobs = std::max(1, jobs);

        if (verify->parsed()) return run_verify(check, cfg, opt);
        if (charges->parsed()) return run_charges(cfg, opt);
        if (simulate->parsed()) return run_simulate(cfg, opt);
        if (monodromy->parsed()) return run_monodromy(cfg, opt);
        if (climit->parsed()) return run_climit(cfg, opt);
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const laxkit::expr::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
