#include "macro/commands.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv)
{
    using namespace macro;
    CLI::App app{"Macroscopicity of quantum superposition experiments"};
    app.require_subcommand(1);

    CommandOptions opt;
    auto add_input = [&](CLI::App* c) {
        c->add_option("--input", opt.input, "experiment JSON document");
        c->add_option("--id", opt.id, "builtin catalog id");
    };
    auto add_grid = [&](CLI::App* c) {
        c->add_option("--grid-min", opt.grid_min, "smallest hbar/sigma_q [m]");
        c->add_option("--grid-max", opt.grid_max, "largest hbar/sigma_q [m]");
        c->add_option("--grid-points", opt.grid_points, "grid points (mu: points per decade)");
    };
    auto add_common = [&](CLI::App* c) {
        c->add_option("--out", opt.out, "output file (written atomically)");
        c->add_option("--format", opt.format, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    };

    auto* mu = app.add_subcommand("mu", "maximize the excluded tau_e over the parameter bounds");
    add_input(mu);
    add_grid(mu);
    add_common(mu);
    mu->add_option("--bounds", opt.bounds, "parameter bounds preset")->check(CLI::IsMember({"default", "squid"}));

    auto* curve = app.add_subcommand("curve", "excluded tau_e versus hbar/sigma_q at fixed sigma_s");
    add_input(curve);
    add_grid(curve);
    add_common(curve);
    curve->add_option("--bounds", opt.bounds, "preset supplying the default sigma_s")
        ->check(CLI::IsMember({"default", "squid"}));
    curve->add_option("--sigma-s", opt.sigma_s, "position kick width [m]");

    auto* timeline = app.add_subcommand("timeline", "recompute mu for catalog entries");
    add_common(timeline);
    timeline->add_option("--filter", opt.filter, "all, a class name or an id substring (default: dated entries)");

    auto* validate = app.add_subcommand("validate", "run the Monte Carlo and quadrature oracle suite");
    add_common(validate);
    validate->add_option("--seed", opt.seed, "base seed");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : kExitInput;
    }

    if (*mu) return cmd_mu(opt, std::cout, std::cerr);
    if (*curve) return cmd_curve(opt, std::cout, std::cerr);
    if (*timeline) return cmd_timeline(opt, std::cout, std::cerr);
    return cmd_validate(opt, std::cout, std::cerr);
}
