#include "ifpt/cli/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"Inverse first-passage boundary solver"};
    app.require_subcommand(1);

    ifpt::cli::CliOptions opts;
    std::string out_dir;
    std::uint64_t seed = 0;
    unsigned threads = 0;

    for (const char* name : {"calibrate", "verify", "compare", "classify"}) {
        auto* sub = app.add_subcommand(name);
        sub->add_option("-c,--config", opts.config, "JSON run config")->required();
        sub->add_option("-o,--out", out_dir, "Output directory");
        sub->add_option("--seed", seed, "Override the config seed");
        sub->add_option("--threads", threads, "Worker threads (0 = all cores)");
        sub->callback([&, sub] {
            opts.command = sub->get_name();
            if (sub->count("--out")) opts.out_dir = out_dir;
            if (sub->count("--seed")) opts.seed = seed;
            opts.threads = sub->count("--threads") ? threads : 0u;
        });
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return e.get_exit_code() == 0 ? rc : ifpt::cli::kConfigError;
    }
    return ifpt::cli::run_command(opts, std::cout, std::cerr);
}
