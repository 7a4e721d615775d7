#include "psicalc/cli.hpp"

#include <CLI11.hpp>

#include <iostream>

int main(int argc, char** argv) {
    CLI::App app{"psicalc: exact psi-operator engine and congruence workbench"};
    app.require_subcommand(1);

    psicalc::CliConfig cfg;

    auto add_output = [&](CLI::App* sub) {
        sub->add_option("--format", cfg.format, "output format: text | json | csv");
        sub->add_option("--output", cfg.output_path, "write the report to this file");
    };
    auto add_modulus = [&](CLI::App* sub) {
        sub->add_option("--p", cfg.p, "prime p");
        sub->add_option("--a", cfg.a, "exponent a: congruences run mod p^a, psi iterates a times");
    };

    CLI::App* fleck = app.add_subcommand(
        "fleck", "alternating binomial sums over a residue class mod p^a");
    CLI::App* multi = app.add_subcommand(
        "multi", "weighted multinomial sums S_j(n, r, p^a)");
    for (CLI::App* sub : {fleck, multi}) {
        add_modulus(sub);
        add_output(sub);
        sub->add_option("--n", cfg.n, "n (grid start)");
        sub->add_option("--n-max", cfg.n_max, "grid end for n (defaults to --n)");
        sub->add_option("--r", cfg.r, "residue r (grid start, may be negative)");
        sub->add_option("--r-max", cfg.r_max, "grid end for r");
        sub->add_option("--j", cfg.j, "binomial index j (grid start)");
        sub->add_option("--j-max", cfg.j_max, "grid end for j");
        sub->add_option("--bounds", cfg.bounds,
                        "comma list of bounds: fleck,weak,sun_davis,multinomial");
    }

    CLI::App* psi = app.add_subcommand("psi", "apply psi^a to a series expression");
    add_modulus(psi);
    add_output(psi);
    psi->add_option("--expr", cfg.expr,
                    "series expression: terms c*pi^k and (1+pi)^m with + - * and powers")
        ->required();
    psi->add_option("--M", cfg.big_m, "pi-precision of the input window");
    psi->add_option("--N", cfg.big_n, "coefficient precision (work mod p^N)");

    CLI::App* verify = app.add_subcommand(
        "verify", "sweep a parameter grid and check every valuation bound");
    CLI::App* scan = app.add_subcommand(
        "scan", "report instances whose valuation meets the bound exactly");
    for (CLI::App* sub : {verify, scan}) {
        add_modulus(sub);
        add_output(sub);
        sub->add_option("--kind", cfg.kind, "sum family: fleck | multinomial");
        sub->add_option("--n-max", cfg.n_max, "largest n (default 40 fleck / 20 multinomial)");
        sub->add_option("--j-max", cfg.j_max, "largest j (default 5 fleck / 4 multinomial)");
        sub->add_option("--r-min", cfg.r_min, "replace the default residue set: range start");
        sub->add_option("--r-max", cfg.r_max, "replace the default residue set: range end");
        sub->add_option("--bounds", cfg.bounds, "comma list of bounds to check");
        sub->add_option("--workers", cfg.workers,
                        "worker threads (PSI_CALC_WORKERS overrides)");
    }

    CLI::App* fixed = app.add_subcommand(
        "fixed", "check psi-fixedness of the cyclotomic element family");
    add_modulus(fixed);
    add_output(fixed);
    fixed->add_option("--n-max", cfg.n_max, "largest family parameter a (default 4)");
    fixed->add_option("--M", cfg.big_m, "pi-precision");
    fixed->add_option("--N", cfg.big_n, "coefficient precision");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    cfg.command = app.get_subcommands().front()->get_name();
    return psicalc::run(cfg, std::cout, std::cerr);
}
