#pragma once

#include "psicalc/laurent.hpp"

#include <cassert>
#include <utility>
#include <vector>

namespace psicalc {

class PrecisionTooLow : public std::runtime_error {
  public:
    explicit PrecisionTooLow(const std::string& what) : std::runtime_error(what) {}
};

// Certified tail exponent for the a-th iterate on the power series
// part: coefficient j of an image of pi^n A+ is divisible by
// p^[(n - p^(a-1) - j p^a) / (p^(a-1)(p-1))].
inline long long estimate_exponent_i(long long n, long long j, long long p, long long a = 1) {
    if (j < 0 || a < 1 || p < 2) {
        throw std::invalid_argument("estimate_exponent_i: need j >= 0, a >= 1, p >= 2");
    }
    const BigInt pa1 = big_pow(BigInt(p), static_cast<unsigned long long>(a - 1));
    const BigInt num = BigInt(n) - pa1 - BigInt(j) * pa1 * p;
    const BigInt den = pa1 * (p - 1);
    return static_cast<long long>(clamped_floor(num, den));
}

// Pole-side analogue: coefficient of pi^-(n-j) in an image of pi^-n A+
// is divisible by p^[((an-a+1)(p-1) - j(ap-a+1) - 1) / (p-1)].
inline long long estimate_exponent_ii(long long n, long long j, long long p, long long a = 1) {
    if (j < 0 || a < 1 || p < 2) {
        throw std::invalid_argument("estimate_exponent_ii: need j >= 0, a >= 1, p >= 2");
    }
    const BigInt num = (BigInt(a) * n - a + 1) * (p - 1) - BigInt(j) * (a * p - a + 1) - 1;
    return static_cast<long long>(clamped_floor(num, BigInt(p - 1)));
}

struct PsiResult {
    LaurentSeries series;
    PrecisionProfile profile;
};

namespace detail {

// Certified output profile for one application on a window of width W:
// the unknown tail pi^W A+ contributes the estimate at n = W, and each
// stored coefficient known only mod p^g contributes g plus the estimate
// at its own exponent. Returns the profile values up to the first zero.
inline std::vector<int> psi_output_profile(const LaurentSeries& x, long w) {
    const long long p = x.context().p();
    const int full = x.context().precision();
    std::vector<long> uncertain;  // exponents with g < N, relative to 0
    for (long e = std::max<long>(x.lowest(), 0); e < x.pi_precision(); ++e) {
        if (x.precision_at(e) < full) {
            uncertain.push_back(e);
        }
    }
    std::vector<int> g;
    for (long j = 0;; ++j) {
        long long best = std::min<long long>(full, estimate_exponent_i(w, j, p));
        for (long e : uncertain) {
            if (best <= 0) {
                break;
            }
            best = std::min<long long>(
                best, x.precision_at(e) + estimate_exponent_i(e, j, p));
        }
        if (best <= 0) {
            break;
        }
        g.push_back(static_cast<int>(best));
    }
    return g;
}

// Core transform on the power series part: convert to the
// (1+pi)-power basis, keep indices divisible by p, divide them by p,
// convert back. Exactly correct on the stored window; the profile
// accounts for everything past it.
inline LaurentSeries psi_polynomial_part(const LaurentSeries& x) {
    const auto& ctx = x.context();
    const long long p = ctx.p();
    const long w = x.pi_precision();
    assert(x.lowest() >= 0);

    std::vector<int> g = psi_output_profile(x, w);
    if (g.empty()) {
        throw PrecisionTooLow("psi: no output coefficient is certified; widen the pi-window");
    }
    const long m_out = static_cast<long>(g.size());

    std::vector<BigInt> v(static_cast<size_t>(w));
    for (long e = x.lowest(); e < w; ++e) {
        v[static_cast<size_t>(e)] = x.raw(e);
    }
    auto table = binomial_rows_mod(static_cast<size_t>(w), ctx.modulus());
    auto c = pi_to_eps_raw(v, table, ctx);
    std::vector<BigInt> d;
    for (size_t k = 0; k < c.size(); k += static_cast<size_t>(p)) {
        d.push_back(c[k]);
    }
    auto out = eps_to_pi_raw(d, static_cast<size_t>(m_out), table, ctx);
    return LaurentSeries(ctx, 0, m_out, std::move(out), std::move(g));
}

}  // namespace detail

// The left inverse of Frobenius. A Laurent input x = y/pi^n routes
// through the identity psi(x) = pi^-n psi(y * (sum_{i<p} (1+pi)^i)^n);
// the multiplier is phi(pi)/pi raised to the pole order.
inline PsiResult psi(const LaurentSeries& x) {
    const auto& ctx = x.context();
    const long long p = ctx.p();
    if (x.lowest() >= 0) {
        LaurentSeries s = detail::psi_polynomial_part(x);
        return PsiResult{s, s.profile()};
    }
    const long n = -x.lowest();
    const long headroom = n * static_cast<long>(p - 1) + 1;
    if (x.pi_precision() < headroom) {
        throw PrecisionTooLow("psi: pole of order " + std::to_string(n) +
                              " needs pi-precision at least " + std::to_string(headroom));
    }
    const long w = x.pi_precision() + n;
    LaurentSeries z = shift(x, n);
    LaurentSeries u = LaurentSeries::zero(ctx, w);
    for (long long i = 0; i < p; ++i) {
        u = add(u, epsilon_power(i, ctx, w));
    }
    for (long t = 0; t < n; ++t) {
        z = mul(z, u);
    }
    LaurentSeries s = shift(detail::psi_polynomial_part(z), -n);
    return PsiResult{s, s.profile()};
}

// a-fold composition; a = 0 is the identity.
inline PsiResult psi_iterate(const LaurentSeries& x, long long a) {
    if (a < 0) {
        throw std::invalid_argument("psi_iterate: a must be non-negative");
    }
    LaurentSeries s = x;
    for (long long t = 0; t < a; ++t) {
        s = psi(s).series;
    }
    return PsiResult{s, s.profile()};
}

// Independent reference: recover x_0 from the basis decomposition
// x = sum_{i<p} (1+pi)^i phi(x_i) by solving the triangular linear
// system that equates pi-coefficients. Column (i,m) carries the
// coefficients of (1+pi)^i phi(pi)^m, a polynomial of degree pm+i with
// leading coefficient 1, so the system is upper triangular with unit
// diagonal and back-substitution is exact over Z/p^N.
inline LaurentSeries psi_reference(const LaurentSeries& x) {
    if (x.lowest() < 0) {
        throw std::invalid_argument("psi_reference: polynomial part only");
    }
    const auto& ctx = x.context();
    const long long p = ctx.p();
    const long w = x.pi_precision();
    const size_t wu = static_cast<size_t>(w);

    std::vector<int> g = detail::psi_output_profile(x, w);
    if (g.empty()) {
        throw PrecisionTooLow("psi_reference: nothing certified at this window");
    }

    const auto phi = detail::phi_pi_poly(p);
    const std::vector<BigInt> eps{BigInt(1), BigInt(1)};  // 1 + pi
    std::vector<std::vector<BigInt>> columns(wu);
    std::vector<BigInt> phi_m{BigInt(1)};
    for (size_t c = 0; c < wu; ++c) {
        const long long i = static_cast<long long>(c) % p;
        if (i == 0) {
            if (c > 0) {
                phi_m = detail::poly_mul_trunc(phi_m, phi, wu, ctx.modulus());
            }
            columns[c] = phi_m;
        } else {
            columns[c] = detail::poly_mul_trunc(columns[c - 1], eps, wu, ctx.modulus());
        }
        if (columns[c].size() == static_cast<size_t>(c) + 1 && columns[c][c] != 1) {
            throw std::logic_error("psi_reference: system lost its unit diagonal");
        }
    }

    std::vector<BigInt> v(wu);
    for (size_t c = wu; c-- > 0;) {
        BigInt acc = x.coeff(static_cast<long>(c)).value();
        for (size_t cc = c + 1; cc < wu; ++cc) {
            if (c < columns[cc].size() && columns[cc][c] != 0) {
                acc -= columns[cc][c] * v[cc];
            }
        }
        v[c] = ctx.reduce(acc);
    }

    const long m_out = static_cast<long>(g.size());
    std::vector<BigInt> out(static_cast<size_t>(m_out));
    for (long m = 0; m < m_out; ++m) {
        const size_t c = static_cast<size_t>(m) * static_cast<size_t>(p);
        out[static_cast<size_t>(m)] = c < wu ? v[c] : BigInt(0);
    }
    return LaurentSeries(ctx, 0, m_out, std::move(out), std::move(g));
}

// psi(phi(a) x) = a psi(x), checked within the shared certified profile.
inline bool check_semilinearity(const LaurentSeries& a, const LaurentSeries& x) {
    LaurentSeries lhs = psi(mul(frobenius(a), x)).series;
    LaurentSeries rhs = mul(a, psi(x).series);
    return equal_within_certified(lhs, rhs);
}

// psi(x) = x within the certified profile.
inline bool check_fixed_point(const LaurentSeries& x) {
    return equal_within_certified(psi(x).series, x);
}

}  // namespace psicalc
