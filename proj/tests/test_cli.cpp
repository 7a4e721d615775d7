#include "psicalc/cli.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>

using namespace psicalc;

namespace {

struct RunResult {
    int code;
    std::string out;
    std::string err;
};

RunResult run_cfg(const CliConfig& cfg) {
    std::ostringstream out, err;
    const int code = run(cfg, out, err);
    return {code, out.str(), err.str()};
}

}  // namespace

TEST_CASE("series expressions") {
    PadicContext ctx(3, 6);
    LaurentSeries a = parse_series("pi^2", ctx, 12);
    CHECK(a.lowest() == 2);
    CHECK(a.coeff(2).value() == 1);

    LaurentSeries b = parse_series(" ( 1 + pi ) ^ 2 ", ctx, 12);
    CHECK(b.coeff(0).value() == 1);
    CHECK(b.coeff(1).value() == 2);
    CHECK(b.coeff(2).value() == 1);

    LaurentSeries c = parse_series("2*pi^-3 + (1+pi)^2 - 5", ctx, 12);
    CHECK(c.coeff(-3).value() == 2);
    CHECK(c.coeff(0).value() == ctx.reduce(BigInt(-4)));
    CHECK(c.coeff(1).value() == 2);
    CHECK(c.coeff(2).value() == 1);

    LaurentSeries d = parse_series("-pi + pi", ctx, 12);
    CHECK(d.is_zero());

    LaurentSeries e = parse_series("(1+pi)^-1", ctx, 12);
    CHECK(e.coeff(0).value() == 1);
    CHECK(e.coeff(1).value() == ctx.reduce(BigInt(-1)));
    CHECK(e.coeff(2).value() == 1);

    LaurentSeries f = parse_series("(2+pi)^0", ctx, 12);
    CHECK(f.coeff(0).value() == 1);
    CHECK(f.coeff(1).value() == 0);

    CHECK_THROWS_AS(parse_series("pi +", ctx, 12), ExprError);
    CHECK_THROWS_AS(parse_series("(pi", ctx, 12), ExprError);
    CHECK_THROWS_AS(parse_series("foo", ctx, 12), ExprError);
    CHECK_THROWS_AS(parse_series("pi^2x", ctx, 12), ExprError);
    CHECK_THROWS_AS(parse_series("pi^(2)", ctx, 12), ExprError);
}

TEST_CASE("fleck command prints the requested record") {
    CliConfig cfg;
    cfg.command = "fleck";
    cfg.p = 3;
    cfg.a = 1;
    cfg.n = 5;
    cfg.r = 0;
    cfg.j = 0;
    cfg.format = "csv";
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("3,1,5,0,0,9,2,2,fleck,true") != std::string::npos);

    cfg.format = "text";
    res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("sum=9") != std::string::npos);
    CHECK(res.out.find("tight") != std::string::npos);
}

TEST_CASE("multi command covers a grid") {
    CliConfig cfg;
    cfg.command = "multi";
    cfg.p = 2;
    cfg.a = 1;
    cfg.n = 0;
    cfg.n_max = 6;
    cfg.r = 0;
    cfg.r_max = 1;
    cfg.j = 0;
    cfg.j_max = 2;
    cfg.format = "json";
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    auto records = parse_json(res.out);
    CHECK(records.size() == 7 * 2 * 3);
    for (const auto& rec : records) {
        CHECK(rec.passes());
        CHECK(rec.bound_kind == BoundKind::Multinomial);
    }
}

TEST_CASE("psi command applies the operator to an expression") {
    CliConfig cfg;
    cfg.command = "psi";
    cfg.p = 2;
    cfg.expr = "pi^2";
    cfg.big_m = 16;
    cfg.big_n = 8;
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("2 + pi + O(pi^8)") != std::string::npos);
    CHECK(res.out.find("precision:") != std::string::npos);

    cfg.format = "json";
    res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("\"rendered\":\"2 + pi + O(pi^8)\"") != std::string::npos);

    cfg.format = "csv";
    res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("exponent,coefficient,precision") != std::string::npos);
    CHECK(res.out.find("0,2,8") != std::string::npos);
    CHECK(res.out.find("1,1,8") != std::string::npos);

    // iterate twice
    cfg.format = "text";
    cfg.expr = "(1+pi)^4";
    cfg.a = 2;
    cfg.big_m = 24;
    res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("1 + pi + O(") != std::string::npos);
}

TEST_CASE("config errors exit with code 2") {
    CliConfig cfg;
    cfg.command = "fleck";
    cfg.p = 6;  // composite
    CHECK(run_cfg(cfg).code == 2);

    cfg.p = 3;
    cfg.format = "yaml";
    CHECK(run_cfg(cfg).code == 2);

    cfg.format = "text";
    cfg.command = "nonsense";
    CHECK(run_cfg(cfg).code == 2);

    CliConfig psi_cfg;
    psi_cfg.command = "psi";
    psi_cfg.expr = "";
    CHECK(run_cfg(psi_cfg).code == 2);

    psi_cfg.expr = "pi + (";
    CHECK(run_cfg(psi_cfg).code == 2);

    // pole headroom refusal
    psi_cfg.p = 5;
    psi_cfg.expr = "pi^-4";
    psi_cfg.big_m = 10;
    psi_cfg.big_n = 4;
    RunResult res = run_cfg(psi_cfg);
    CHECK(res.code == 2);
    CHECK(res.err.find("pi-precision") != std::string::npos);

    CliConfig sweep_cfg;
    sweep_cfg.command = "verify";
    sweep_cfg.kind = "quadratic";
    CHECK(run_cfg(sweep_cfg).code == 2);

    sweep_cfg.kind = "fleck";
    sweep_cfg.bounds = "fleck,banana";
    CHECK(run_cfg(sweep_cfg).code == 2);
}

TEST_CASE("verify exits zero on theorem-backed ranges and reports") {
    CliConfig cfg;
    cfg.command = "verify";
    cfg.kind = "fleck";
    cfg.p = 2;
    cfg.a = 2;
    cfg.n_max = 30;
    cfg.format = "csv";
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.rfind(kCsvHeader, 0) == 0);
    CHECK(res.err.find("failures=0") != std::string::npos);
    CHECK(res.err.find("[timing]") != std::string::npos);
}

TEST_CASE("scan emits only tight instances") {
    CliConfig cfg;
    cfg.command = "scan";
    cfg.kind = "multinomial";
    cfg.p = 3;
    cfg.a = 1;
    cfg.n_max = 6;
    cfg.j_max = 2;
    cfg.format = "json";
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    auto records = parse_json(res.out);
    CHECK(!records.empty());
    bool witness = false;
    for (const auto& rec : records) {
        CHECK(rec.tight);
        CHECK(rec.sum != 0);
        if (rec.n == 2 && rec.r == 0 && rec.j == 0 && rec.valuation == Valuation::finite(1)) {
            witness = true;
        }
    }
    CHECK(witness);
}

TEST_CASE("fixed command confirms the cyclotomic family") {
    CliConfig cfg;
    cfg.command = "fixed";
    cfg.p = 5;
    cfg.n_max = 4;
    cfg.big_m = 40;
    cfg.big_n = 6;
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.find("a=1") != std::string::npos);
    CHECK(res.out.find("a=4") != std::string::npos);
    CHECK(res.out.find("NOT FIXED") == std::string::npos);
}

TEST_CASE("reports are byte-identical across worker counts") {
    CliConfig cfg;
    cfg.command = "verify";
    cfg.kind = "fleck";
    cfg.p = 3;
    cfg.a = 1;
    cfg.n_max = 20;
    cfg.format = "json";

    setenv("PSI_CALC_WORKERS", "1", 1);
    RunResult solo = run_cfg(cfg);
    setenv("PSI_CALC_WORKERS", "8", 1);
    RunResult pooled = run_cfg(cfg);
    unsetenv("PSI_CALC_WORKERS");
    CHECK(solo.code == 0);
    CHECK(pooled.code == 0);
    REQUIRE(solo.out == pooled.out);

    setenv("PSI_CALC_WORKERS", "zero", 1);
    CHECK(run_cfg(cfg).code == 2);
    unsetenv("PSI_CALC_WORKERS");
}

TEST_CASE("reports can be written to a file") {
    CliConfig cfg;
    cfg.command = "fleck";
    cfg.p = 2;
    cfg.n = 7;
    cfg.j = 1;
    cfg.format = "csv";
    cfg.output_path = "cli_test_report.csv";
    RunResult res = run_cfg(cfg);
    CHECK(res.code == 0);
    CHECK(res.out.empty());
    std::ifstream in(cfg.output_path);
    REQUIRE(in.good());
    std::stringstream buffer;
    buffer << in.rdbuf();
    CHECK(buffer.str().find("2,1,7,0,1,-112,4,4,fleck,true") != std::string::npos);
    in.close();
    std::remove(cfg.output_path.c_str());
}
