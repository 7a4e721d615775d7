#pragma once

#include "psicalc/expr.hpp"
#include "psicalc/report.hpp"

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace psicalc {

// Exit codes: 0 success, 1 verification failures, 2 configuration or
// input errors.
struct CliConfig {
    std::string command;  // fleck | multi | psi | verify | scan | fixed
    long long p = 2;
    long long a = 1;
    long long n = 0;
    std::optional<long long> n_max;
    long long r = 0;
    std::optional<long long> r_max;
    std::optional<long long> r_min;  // sweep override; default residue set otherwise
    long long j = 0;
    std::optional<long long> j_max;
    std::string kind = "fleck";      // verify/scan sum family
    std::string bounds;              // comma list; empty selects the defaults
    std::string expr;
    long big_m = 64;                 // pi-precision
    int big_n = 32;                  // coefficient precision
    std::string format = "text";     // text | json | csv
    unsigned workers = 1;
    std::string output_path;         // empty = stdout
};

namespace detail {

inline std::vector<BoundKind> parse_bounds(const std::string& selection, SweepKind kind) {
    if (selection.empty()) {
        return kind == SweepKind::Fleck
                   ? std::vector<BoundKind>{BoundKind::Fleck, BoundKind::Weak,
                                            BoundKind::SunDavis}
                   : std::vector<BoundKind>{BoundKind::Multinomial};
    }
    std::vector<BoundKind> out;
    std::stringstream ss(selection);
    std::string token;
    while (std::getline(ss, token, ',')) {
        if (!token.empty()) {
            out.push_back(bound_kind_from_string(token));
        }
    }
    if (out.empty()) {
        throw std::invalid_argument("no bounds selected");
    }
    return out;
}

inline void emit_records(std::ostream& os, const std::string& format,
                         const std::vector<CongruenceRecord>& records) {
    if (format == "csv") {
        emit_csv(os, records);
    } else if (format == "json") {
        emit_json(os, records);
    } else {
        for (const auto& rec : records) {
            os << to_text_line(rec) << '\n';
        }
    }
}

inline void emit_series(std::ostream& os, const std::string& format,
                        const PsiResult& result, long long power, const PadicContext& ctx) {
    const LaurentSeries& s = result.series;
    if (format == "json") {
        os << "{\"power\":" << power << ",\"p\":" << ctx.p()
           << ",\"coefficient_precision\":" << ctx.precision()
           << ",\"lowest\":" << s.lowest() << ",\"pi_precision\":" << s.pi_precision()
           << ",\"coefficients\":[";
        for (long e = s.lowest(); e < s.pi_precision(); ++e) {
            os << (e == s.lowest() ? "" : ",") << '"' << s.coeff(e).value() << '"';
        }
        os << "],\"precision\":[";
        for (long e = s.lowest(); e < s.pi_precision(); ++e) {
            os << (e == s.lowest() ? "" : ",") << result.profile.g(e);
        }
        os << "],\"rendered\":\"" << to_string(s) << "\"}\n";
    } else if (format == "csv") {
        os << "exponent,coefficient,precision\n";
        for (long e = s.lowest(); e < s.pi_precision(); ++e) {
            os << e << ',' << s.coeff(e).value() << ',' << result.profile.g(e) << '\n';
        }
    } else {
        os << to_string(s) << '\n';
        os << "precision:";
        for (long e = s.lowest(); e < s.pi_precision(); ++e) {
            os << " g(" << e << ")=" << result.profile.g(e);
        }
        os << "  (coefficients mod " << ctx.p() << "^" << ctx.precision() << ")\n";
    }
}

inline std::vector<CongruenceRecord> grid_records(const CliConfig& cfg, SweepKind kind) {
    const auto bounds = parse_bounds(cfg.bounds, kind);
    const long long n_hi = cfg.n_max.value_or(cfg.n);
    const long long r_hi = cfg.r_max.value_or(cfg.r);
    const long long j_hi = cfg.j_max.value_or(cfg.j);
    std::vector<CongruenceRecord> records;
    for (long long n = cfg.n; n <= n_hi; ++n) {
        for (long long r = cfg.r; r <= r_hi; ++r) {
            for (long long j = cfg.j; j <= j_hi; ++j) {
                const BigInt sum = kind == SweepKind::Fleck
                                       ? fleck_sum(n, r, j, cfg.p, cfg.a)
                                       : multinomial_sum(n, r, j, cfg.p, cfg.a);
                const Valuation v = ord_int(sum, cfg.p);
                for (BoundKind bk : bounds) {
                    CongruenceRecord rec;
                    rec.p = cfg.p;
                    rec.a = cfg.a;
                    rec.n = n;
                    rec.r = r;
                    rec.j = j;
                    rec.sum = sum;
                    rec.valuation = v;
                    rec.bound_kind = bk;
                    switch (bk) {
                        case BoundKind::Fleck:
                            rec.bound = bound_fleck(n, j, cfg.p, cfg.a);
                            break;
                        case BoundKind::Weak:
                            rec.bound = bound_weak(n, j, ipow(cfg.p, cfg.a));
                            break;
                        case BoundKind::SunDavis:
                            rec.bound = bound_sun_davis(n, j, cfg.p, cfg.a);
                            break;
                        case BoundKind::Multinomial:
                            rec.bound = bound_multinomial(n, j, cfg.p, cfg.a);
                            break;
                    }
                    rec.tight = v.is_finite() && v.known() == rec.bound;
                    records.push_back(std::move(rec));
                }
            }
        }
    }
    return records;
}

}  // namespace detail

inline int run(const CliConfig& config, std::ostream& out, std::ostream& err) {
    CliConfig cfg = config;
    try {
        if (!is_prime(cfg.p)) {
            throw std::invalid_argument("p must be prime");
        }
        if (cfg.a < 1 || cfg.big_n < 1 || cfg.big_m < 1) {
            throw std::invalid_argument("need a >= 1, M >= 1, N >= 1");
        }
        if (cfg.format != "text" && cfg.format != "json" && cfg.format != "csv") {
            throw std::invalid_argument("unknown format: " + cfg.format);
        }
        if (const char* env = std::getenv("PSI_CALC_WORKERS")) {
            const long v = std::strtol(env, nullptr, 10);
            if (v < 1) {
                throw std::invalid_argument("PSI_CALC_WORKERS must be a positive integer");
            }
            cfg.workers = static_cast<unsigned>(v);
        }

        std::ofstream file;
        if (!cfg.output_path.empty()) {
            file.open(cfg.output_path);
            if (!file) {
                throw std::invalid_argument("cannot open output path: " + cfg.output_path);
            }
        }
        std::ostream& sink = file.is_open() ? file : out;

        if (cfg.command == "fleck" || cfg.command == "multi") {
            const SweepKind kind =
                cfg.command == "fleck" ? SweepKind::Fleck : SweepKind::Multinomial;
            detail::emit_records(sink, cfg.format, detail::grid_records(cfg, kind));
            return 0;
        }

        if (cfg.command == "psi") {
            if (cfg.expr.empty()) {
                throw std::invalid_argument("psi needs --expr");
            }
            PadicContext ctx(cfg.p, cfg.big_n);
            LaurentSeries x = parse_series(cfg.expr, ctx, cfg.big_m);
            if (x.lowest() < 0) {
                const long needed = -x.lowest() * static_cast<long>(cfg.p - 1) + 1;
                if (x.pi_precision() < needed) {
                    throw PrecisionTooLow(
                        "pole of order " + std::to_string(-x.lowest()) +
                        " needs pi-precision at least " + std::to_string(needed));
                }
            }
            PsiResult result = psi_iterate(x, cfg.a);
            detail::emit_series(sink, cfg.format, result, cfg.a, ctx);
            return 0;
        }

        if (cfg.command == "verify" || cfg.command == "scan") {
            SweepKind kind;
            if (cfg.kind == "fleck") {
                kind = SweepKind::Fleck;
            } else if (cfg.kind == "multinomial" || cfg.kind == "multi") {
                kind = SweepKind::Multinomial;
            } else {
                throw std::invalid_argument("unknown sweep kind: " + cfg.kind);
            }
            SweepRanges ranges;
            ranges.n_max = cfg.n_max.value_or(kind == SweepKind::Fleck ? 40 : 20);
            ranges.j_max = cfg.j_max.value_or(kind == SweepKind::Fleck ? 5 : 4);
            if (cfg.r_min || cfg.r_max) {
                const long long lo = cfg.r_min.value_or(0);
                const long long hi = cfg.r_max.value_or(lo);
                for (long long r = lo; r <= hi; ++r) {
                    ranges.r_values.push_back(r);
                }
            } else {
                ranges.r_values = default_r_values(ipow(cfg.p, cfg.a));
            }
            // scan defaults to the theorem's own bound: tightness against
            // the sharp exponent is what the probe is for.
            std::vector<BoundKind> bounds;
            if (cfg.bounds.empty() && cfg.command == "scan") {
                bounds = {kind == SweepKind::Fleck ? BoundKind::Fleck
                                                   : BoundKind::Multinomial};
            } else {
                bounds = detail::parse_bounds(cfg.bounds, kind);
            }
            SweepReport report =
                verify_sweep(kind, ranges, cfg.p, cfg.a, bounds, cfg.workers);
            if (cfg.command == "scan") {
                detail::emit_records(sink, cfg.format, report.tight_instances);
            } else {
                detail::emit_records(sink, cfg.format, report.records);
            }
            for (const auto& t : report.timing) {
                err << "[timing] " << t.label << ": " << t.milliseconds << " ms\n";
            }
            err << "[summary] records=" << report.records.size()
                << " failures=" << report.failures.size()
                << " tight=" << report.tight_instances.size() << "\n";
            return cfg.command == "verify" && !report.passed() ? 1 : 0;
        }

        if (cfg.command == "fixed") {
            PadicContext ctx(cfg.p, cfg.big_n);
            const long long family_max = cfg.n_max.value_or(4);
            bool all_fixed = true;
            for (long long a = 1; a <= family_max; ++a) {
                if (a % cfg.p == 0) {
                    continue;
                }
                LaurentSeries den = sub(epsilon_power(a, ctx, cfg.big_m),
                                        constant(BigInt(1), ctx, cfg.big_m));
                const bool pole_fixed = check_fixed_point(invert_unit(den));
                const bool cyclo_fixed =
                    check_fixed_point(cyclotomic_element(a, ctx, cfg.big_m));
                all_fixed = all_fixed && pole_fixed && cyclo_fixed;
                sink << "a=" << a << " 1/((1+pi)^a-1): "
                     << (pole_fixed ? "FIXED" : "NOT FIXED")
                     << "  a/((1+pi)^a-1)-1/pi: "
                     << (cyclo_fixed ? "FIXED" : "NOT FIXED") << "\n";
            }
            return all_fixed ? 0 : 1;
        }

        throw std::invalid_argument("unknown command: " + cfg.command);
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace psicalc
