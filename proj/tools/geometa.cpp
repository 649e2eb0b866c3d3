#include <iostream>
#include <optional>
#include <utility>
#include <string>

#include <CLI11.hpp>

#include "geometa/cli.hpp"

int main(int argc, char** argv) {
    using namespace geometa;

    CLI::App app{"geometa: fixed-point iteration experiments in geodesic pseudometric spaces"};
    app.require_subcommand(1);

    std::optional<std::string> config;
    std::optional<std::string> eps;
    cli::Overrides o;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config, "experiment configuration (JSON)");
        sub->add_option("--out", o.out, "CSV output path (default: stdout)");
        sub->add_option("--seed", o.seed, "random seed");
        sub->add_option("--cap", o.cap, "metastability scan cap");
        sub->add_option("--eps", eps, "comma-separated epsilon list");
        sub->add_option("--F", o.F, "sampling function, e.g. 2*n or n^2+1");
    };
    const std::pair<const char*, const char*> subs[] = {
        {"iterate", "run a lambda-Mann iteration and write the trace"},
        {"check", "run the configured condition and axiom checks"},
        {"metastab", "least metastability witnesses per sequence and epsilon"},
        {"net", "greedy epsilon-net and the beta-to-alpha conversion"},
        {"family", "uniform metastability bound over a seeded family"},
    };
    for (const auto& [name, help] : subs) add_common(app.add_subcommand(name, help));
    CLI::App* ev = app.add_subcommand("eval-formula", "evaluate a formula over the configured structure");
    add_common(ev);
    ev->add_option("--formula", o.formula_file, "formula file");
    ev->add_option("--builtin", o.builtin, "builtin formula, e.g. condition_E(3)");
    ev->add_option("formula_file", o.formula_file, "formula file");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : cli::ValidationFailed;
    }

    if (eps) {
        try {
            o.eps = cli::parse_eps_list(*eps);
        } catch (const Error& e) {
            std::cerr << "validation error: " << e.what() << '\n';
            return cli::ValidationFailed;
        }
    }
    const std::string name = app.get_subcommands().front()->get_name();
    return cli::run(name, config, o, std::cout, std::cout, std::cerr);
}
