#pragma once

#include "psicalc/psi.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <exception>
#include <functional>
#include <mutex>
#include <numeric>
#include <thread>

namespace psicalc {

class EnumerationTooLarge : public std::length_error {
  public:
    explicit EnumerationTooLarge(const std::string& what) : std::length_error(what) {}
};

enum class BoundKind { Fleck, Weak, SunDavis, Multinomial };

inline const char* to_string(BoundKind kind) {
    switch (kind) {
        case BoundKind::Fleck: return "fleck";
        case BoundKind::Weak: return "weak";
        case BoundKind::SunDavis: return "sun_davis";
        default: return "multinomial";
    }
}

inline BoundKind bound_kind_from_string(const std::string& s) {
    if (s == "fleck") return BoundKind::Fleck;
    if (s == "weak") return BoundKind::Weak;
    if (s == "sun_davis") return BoundKind::SunDavis;
    if (s == "multinomial") return BoundKind::Multinomial;
    throw std::invalid_argument("unknown bound kind: " + s);
}

// One verified instance: the exact sum, its certified valuation, and the
// claimed lower bound it was checked against.
struct CongruenceRecord {
    long long p = 2;
    long long a = 1;
    long long n = 0;
    long long r = 0;
    long long j = 0;
    BigInt sum;
    Valuation valuation = Valuation::infinity();
    long long bound = 0;
    BoundKind bound_kind = BoundKind::Fleck;
    bool tight = false;

    bool passes() const { return valuation.meets(bound); }

    friend bool operator==(const CongruenceRecord&, const CongruenceRecord&) = default;
};

// sum_{k = r (mod p^a), 0 <= k <= n} (-1)^(n-k) C(n,k) C((k-r)/p^a, j),
// over exact integers.
inline BigInt fleck_sum(long long n, long long r, long long j, long long p, long long a) {
    if (n < 0 || j < 0 || a < 1) {
        throw std::invalid_argument("fleck_sum: need n >= 0, j >= 0, a >= 1");
    }
    const long long q = ipow(p, a);
    BigInt total(0);
    for (long long k = ((r % q) + q) % q; k <= n; k += q) {
        BigInt term = binomial(n, k) * gen_binomial((k - r) / q, j);
        if ((n - k) % 2 != 0) {
            term = -term;
        }
        total += term;
    }
    return total;
}

namespace detail {

// Coefficients of (1 + T + ... + T^(q-1))^n.
inline std::vector<BigInt> composition_polynomial(long long n, long long q) {
    std::vector<BigInt> c{BigInt(1)};
    for (long long step = 0; step < n; ++step) {
        std::vector<BigInt> next(c.size() + static_cast<size_t>(q) - 1);
        for (size_t m = 0; m < c.size(); ++m) {
            if (c[m] == 0) {
                continue;
            }
            for (long long t = 0; t < q; ++t) {
                next[m + static_cast<size_t>(t)] += c[m];
            }
        }
        c = std::move(next);
    }
    return c;
}

}  // namespace detail

// S_j(n, r, q): the weighted-multinomial sum, computed through the
// generating-function regrouping: take the coefficients c_m of
// (1 + T + ... + T^(q-1))^n, then sum c_m C((m-r)/q, j) over m = r (q).
// Identical to the literal composition sum, polynomial time in n*q.
inline BigInt multinomial_sum(long long n, long long r, long long j, long long p, long long a) {
    if (n < 0 || j < 0 || a < 1) {
        throw std::invalid_argument("multinomial_sum: need n >= 0, j >= 0, a >= 1");
    }
    const long long q = ipow(p, a);
    const auto c = detail::composition_polynomial(n, q);
    BigInt total(0);
    for (long long m = ((r % q) + q) % q; m < static_cast<long long>(c.size()); m += q) {
        if (c[static_cast<size_t>(m)] == 0) {
            continue;
        }
        total += c[static_cast<size_t>(m)] * gen_binomial((m - r) / q, j);
    }
    return total;
}

// Literal enumeration over compositions (i_0, ..., i_{q-1}) of n; the
// guarded oracle for multinomial_sum.
inline BigInt multinomial_sum_bruteforce(long long n, long long r, long long j,
                                         long long p, long long a,
                                         long long guard = 10'000'000) {
    if (n < 0 || j < 0 || a < 1) {
        throw std::invalid_argument("multinomial_sum_bruteforce: need n >= 0, j >= 0, a >= 1");
    }
    const long long q = ipow(p, a);
    if (binomial(n + q - 1, q - 1) > guard) {
        throw EnumerationTooLarge("multinomial_sum_bruteforce: composition count exceeds guard");
    }
    BigInt total(0);
    std::vector<long long> parts(static_cast<size_t>(q));
    std::function<void(long long, long long, long long)> walk =
        [&](long long slot, long long remaining, long long weight) {
            if (slot == q - 1) {
                parts[static_cast<size_t>(slot)] = remaining;
                const long long w = weight + slot * remaining;
                if ((w - r) % q == 0) {
                    total += multinomial(n, parts) * gen_binomial((w - r) / q, j);
                }
                return;
            }
            for (long long take = 0; take <= remaining; ++take) {
                parts[static_cast<size_t>(slot)] = take;
                walk(slot + 1, remaining - take, weight + slot * take);
            }
        };
    walk(0, n, 0);
    return total;
}

// Divisibility exponents. The two sharp bounds coincide with the
// psi-side estimate formulas; Weisman's j = 0 case and Fleck's prime
// case fall out at a = 1.
inline long long bound_fleck(long long n, long long j, long long p, long long a) {
    return estimate_exponent_i(n, j, p, a);
}

inline long long bound_multinomial(long long n, long long j, long long p, long long a) {
    return estimate_exponent_ii(n, j, p, a);
}

inline long long bound_weak(long long n, long long j, long long p) {
    return clamped_floor(n - j * p, p);
}

inline long long bound_sun_davis(long long n, long long j, long long p, long long a) {
    const long long m = n / ipow(p, a - 1);
    const long long e = ord_factorial(m, p) - j - ord_factorial(j, p);
    return e < 0 ? 0 : e;
}

enum class SweepKind { Fleck, Multinomial };

struct SweepRanges {
    long long n_max = 0;
    std::vector<long long> r_values;  // kept sorted for deterministic reports
    long long j_max = 0;
};

// All residues mod q plus a few negatives: the standard sweep set.
inline std::vector<long long> default_r_values(long long q, long long extra_negative = 3) {
    std::vector<long long> r;
    for (long long v = -extra_negative; v < q; ++v) {
        r.push_back(v);
    }
    return r;
}

struct SweepTiming {
    std::string label;
    double milliseconds = 0.0;
};

struct SweepReport {
    std::vector<CongruenceRecord> records;
    std::vector<CongruenceRecord> failures;
    std::vector<CongruenceRecord> tight_instances;
    std::vector<SweepTiming> timing;

    bool passed() const { return failures.empty(); }
};

namespace detail {

inline void parallel_for(long long count, unsigned workers,
                         const std::function<void(long long)>& body) {
    if (workers <= 1 || count <= 1) {
        for (long long i = 0; i < count; ++i) {
            body(i);
        }
        return;
    }
    std::atomic<long long> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    std::vector<std::thread> pool;
    const unsigned spawn = static_cast<unsigned>(
        std::min<long long>(workers, count));
    for (unsigned t = 0; t < spawn; ++t) {
        pool.emplace_back([&] {
            try {
                for (long long i; (i = next.fetch_add(1)) < count;) {
                    body(i);
                }
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) {
                    failure = std::current_exception();
                }
                next.store(count);
            }
        });
    }
    for (auto& th : pool) {
        th.join();
    }
    if (failure) {
        std::rethrow_exception(failure);
    }
}

}  // namespace detail

// Evaluates every (n, r, j) tuple in the ranges, records the exact sum,
// its valuation and each selected bound. Work is split by n across
// workers; the report is assembled in lexicographic (n, r, j, bound)
// order no matter how the workers finish.
inline SweepReport verify_sweep(SweepKind kind, const SweepRanges& ranges,
                                long long p, long long a,
                                std::vector<BoundKind> bounds = {},
                                unsigned workers = 1) {
    if (bounds.empty()) {
        bounds = kind == SweepKind::Fleck
                     ? std::vector<BoundKind>{BoundKind::Fleck, BoundKind::Weak,
                                              BoundKind::SunDavis}
                     : std::vector<BoundKind>{BoundKind::Multinomial};
    }
    std::vector<long long> r_values = ranges.r_values;
    std::sort(r_values.begin(), r_values.end());
    r_values.erase(std::unique(r_values.begin(), r_values.end()), r_values.end());

    const long long q = ipow(p, a);
    const auto t0 = std::chrono::steady_clock::now();
    std::vector<std::vector<CongruenceRecord>> by_n(
        ranges.n_max >= 0 ? static_cast<size_t>(ranges.n_max) + 1 : 0);

    detail::parallel_for(
        static_cast<long long>(by_n.size()), workers, [&](long long n) {
            auto& out = by_n[static_cast<size_t>(n)];
            std::vector<BigInt> composition;
            if (kind == SweepKind::Multinomial) {
                composition = detail::composition_polynomial(n, q);
            }
            for (long long r : r_values) {
                for (long long j = 0; j <= ranges.j_max; ++j) {
                    BigInt sum;
                    if (kind == SweepKind::Fleck) {
                        sum = fleck_sum(n, r, j, p, a);
                    } else {
                        sum = 0;
                        for (long long m = ((r % q) + q) % q;
                             m < static_cast<long long>(composition.size()); m += q) {
                            sum += composition[static_cast<size_t>(m)] *
                                   gen_binomial((m - r) / q, j);
                        }
                    }
                    const Valuation v = ord_int(sum, p);
                    for (BoundKind bk : bounds) {
                        CongruenceRecord rec;
                        rec.p = p;
                        rec.a = a;
                        rec.n = n;
                        rec.r = r;
                        rec.j = j;
                        rec.sum = sum;
                        rec.valuation = v;
                        rec.bound_kind = bk;
                        switch (bk) {
                            case BoundKind::Fleck:
                                rec.bound = bound_fleck(n, j, p, a);
                                break;
                            case BoundKind::Weak:
                                // modulus-q reading of the weak bracket;
                                // always dominated by the sharp bound.
                                rec.bound = bound_weak(n, j, q);
                                break;
                            case BoundKind::SunDavis:
                                rec.bound = bound_sun_davis(n, j, p, a);
                                break;
                            case BoundKind::Multinomial:
                                rec.bound = bound_multinomial(n, j, p, a);
                                break;
                        }
                        rec.tight = v.is_finite() && v.known() == rec.bound;
                        out.push_back(std::move(rec));
                    }
                }
            }
        });

    SweepReport report;
    for (auto& chunk : by_n) {
        for (auto& rec : chunk) {
            if (!rec.passes()) {
                report.failures.push_back(rec);
            }
            if (rec.tight) {
                report.tight_instances.push_back(rec);
            }
            report.records.push_back(std::move(rec));
        }
    }
    const auto t1 = std::chrono::steady_clock::now();
    report.timing.push_back(
        {std::string(kind == SweepKind::Fleck ? "fleck" : "multinomial") +
             " p=" + std::to_string(p) + " a=" + std::to_string(a),
         std::chrono::duration<double, std::milli>(t1 - t0).count()});
    return report;
}

// psi^a(pi^n (1+pi)^(-r)) coefficient by coefficient against fleck_sum,
// at the certified precision of the engine's profile.
inline bool cross_check_fleck(long long n, long long r, long long p, long long a,
                              const PadicContext& ctx, long pi_precision) {
    if (ctx.p() != p) {
        throw std::invalid_argument("cross_check_fleck: context prime mismatch");
    }
    LaurentSeries x = mul(from_monomials({{static_cast<long>(n), BigInt(1)}}, ctx, pi_precision),
                          epsilon_power(-r, ctx, pi_precision));
    PsiResult res = psi_iterate(x, a);
    const BigInt bp(p);
    for (long jj = res.series.lowest(); jj < res.series.pi_precision(); ++jj) {
        const int g = res.profile.g(jj);
        if (g < 1 || jj < 0) {
            continue;
        }
        const BigInt expect = fleck_sum(n, r, jj, p, a);
        const BigInt diff = res.series.coeff(jj).value() - expect;
        if (diff % big_pow(bp, static_cast<unsigned long long>(g)) != 0) {
            return false;
        }
    }
    return true;
}

// psi^a((1+pi)^(-r) / pi^n) against multinomial_sum: the coefficient at
// pi^(j-n) carries S_j(n, r, p^a).
inline bool cross_check_multinomial(long long n, long long r, long long p, long long a,
                                    const PadicContext& ctx, long pi_precision) {
    if (ctx.p() != p) {
        throw std::invalid_argument("cross_check_multinomial: context prime mismatch");
    }
    LaurentSeries pole = from_monomials({{static_cast<long>(-n), BigInt(1)}}, ctx, pi_precision);
    LaurentSeries eps = epsilon_power(-r, ctx, pi_precision + static_cast<long>(n));
    PsiResult res = psi_iterate(mul(pole, eps), a);
    const BigInt bp(p);
    for (long e = res.series.lowest(); e < res.series.pi_precision(); ++e) {
        const int g = res.profile.g(e);
        const long long jj = e + n;
        if (g < 1 || jj < 0) {
            continue;
        }
        const BigInt expect = multinomial_sum(n, r, jj, p, a);
        const BigInt diff = res.series.coeff(e).value() - expect;
        if (diff % big_pow(bp, static_cast<unsigned long long>(g)) != 0) {
            return false;
        }
    }
    return true;
}

// Empirical probe for attained bounds: all instances whose valuation
// lands exactly on the theorem exponent. Evidence, never an assertion.
inline std::vector<CongruenceRecord> sharpness_scan(SweepKind kind,
                                                    const SweepRanges& ranges,
                                                    long long p, long long a,
                                                    unsigned workers = 1) {
    const std::vector<BoundKind> own{kind == SweepKind::Fleck ? BoundKind::Fleck
                                                              : BoundKind::Multinomial};
    return verify_sweep(kind, ranges, p, a, own, workers).tight_instances;
}

}  // namespace psicalc
