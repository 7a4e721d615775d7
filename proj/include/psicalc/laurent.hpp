#pragma once

#include "psicalc/padic.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace psicalc {

// Per-exponent guaranteed p-precision attached to a series window
// [lowest, limit). Exponents below the window are exact zeros (full
// precision); exponents at or past the limit carry no information.
class PrecisionProfile {
  public:
    PrecisionProfile(long lowest, std::vector<int> g, int full)
        : lowest_(lowest), g_(std::move(g)), full_(full) {
        for (int& v : g_) {
            v = std::clamp(v, 0, full_);
        }
    }

    int full() const { return full_; }
    long lowest() const { return lowest_; }
    long limit() const { return lowest_ + static_cast<long>(g_.size()); }

    int g(long exponent) const {
        if (exponent < lowest_) {
            return full_;
        }
        if (exponent >= limit()) {
            return 0;
        }
        return g_[static_cast<size_t>(exponent - lowest_)];
    }

    const std::vector<int>& values() const { return g_; }

  private:
    long lowest_;
    std::vector<int> g_;
    int full_;
};

class NonInvertible : public std::domain_error {
  public:
    explicit NonInvertible(const std::string& what) : std::domain_error(what) {}
};

// Truncated Laurent series in pi over Z/p^N: coefficients for exponents
// [lowest, pi_precision), an unknown O(pi^M) tail, and a per-exponent
// precision profile. Values are immutable once built.
class LaurentSeries {
  public:
    LaurentSeries(PadicContext ctx, long lowest, long pi_precision,
                  std::vector<BigInt> coeffs, std::vector<int> prec)
        : ctx_(std::move(ctx)), lowest_(lowest), limit_(pi_precision),
          coeffs_(std::move(coeffs)), prec_(std::move(prec)) {
        if (limit_ <= lowest_) {
            throw std::invalid_argument("LaurentSeries: pi-precision must exceed lowest exponent");
        }
        if (coeffs_.size() != static_cast<size_t>(limit_ - lowest_) ||
            prec_.size() != coeffs_.size()) {
            throw std::invalid_argument("LaurentSeries: coefficient window size mismatch");
        }
        const int full = ctx_.precision();
        for (auto& c : coeffs_) {
            c = ctx_.reduce(c);
        }
        for (auto& g : prec_) {
            g = std::clamp(g, 0, full);
        }
        // Canonical form: a negative part is stored only when genuinely
        // present. Only exactly-known zeros may be stripped.
        size_t drop = 0;
        while (lowest_ + static_cast<long>(drop) < 0 &&
               drop + 1 < coeffs_.size() &&
               coeffs_[drop] == 0 && prec_[drop] == full) {
            ++drop;
        }
        if (drop > 0) {
            coeffs_.erase(coeffs_.begin(), coeffs_.begin() + static_cast<long>(drop));
            prec_.erase(prec_.begin(), prec_.begin() + static_cast<long>(drop));
            lowest_ += static_cast<long>(drop);
        }
    }

    // The zero series known mod pi^M.
    static LaurentSeries zero(const PadicContext& ctx, long pi_precision) {
        if (pi_precision < 1) {
            throw std::invalid_argument("LaurentSeries: pi-precision must be positive");
        }
        return LaurentSeries(ctx, 0, pi_precision,
                             std::vector<BigInt>(static_cast<size_t>(pi_precision)),
                             std::vector<int>(static_cast<size_t>(pi_precision),
                                              ctx.precision()));
    }

    const PadicContext& context() const { return ctx_; }
    long lowest() const { return lowest_; }          // L
    long pi_precision() const { return limit_; }     // M

    // Coefficient of pi^e. Exact zero below the window; the tail past
    // pi_precision() is unknown and queries there are rejected.
    Residue coeff(long e) const {
        if (e >= limit_) {
            throw std::out_of_range("LaurentSeries: coefficient beyond pi-precision");
        }
        if (e < lowest_) {
            return Residue(BigInt(0), ctx_);
        }
        return Residue(coeffs_[static_cast<size_t>(e - lowest_)], ctx_);
    }

    const BigInt& raw(long e) const {
        return coeffs_[static_cast<size_t>(e - lowest_)];
    }

    int precision_at(long e) const {
        if (e < lowest_) {
            return ctx_.precision();
        }
        if (e >= limit_) {
            return 0;
        }
        return prec_[static_cast<size_t>(e - lowest_)];
    }

    PrecisionProfile profile() const {
        return PrecisionProfile(lowest_, prec_, ctx_.precision());
    }

    bool is_zero() const {
        return std::all_of(coeffs_.begin(), coeffs_.end(),
                           [](const BigInt& c) { return c == 0; });
    }

  private:
    PadicContext ctx_;
    long lowest_;
    long limit_;
    std::vector<BigInt> coeffs_;
    std::vector<int> prec_;
};

namespace detail {

inline void require_same_context(const LaurentSeries& x, const LaurentSeries& y) {
    if (x.context() != y.context()) {
        throw std::invalid_argument("LaurentSeries: context mismatch");
    }
}

// Triangular table of C(e,k) mod m for e < rows.
inline std::vector<std::vector<BigInt>> binomial_rows_mod(size_t rows, const BigInt& m) {
    std::vector<std::vector<BigInt>> table(rows);
    for (size_t e = 0; e < rows; ++e) {
        table[e].resize(e + 1);
        table[e][0] = 1 % m;
        table[e][e] = 1 % m;
        for (size_t k = 1; k < e; ++k) {
            table[e][k] = table[e - 1][k - 1] + table[e - 1][k];
            if (table[e][k] >= m) {
                table[e][k] -= m;
            }
        }
    }
    return table;
}

}  // namespace detail

// Exact series from explicit monomials; every exponent must fall below
// the requested pi-precision.
inline LaurentSeries from_monomials(const std::vector<std::pair<long, BigInt>>& terms,
                                    const PadicContext& ctx, long pi_precision) {
    long lowest = terms.empty() ? 0 : terms.front().first;
    for (const auto& [e, c] : terms) {
        if (e >= pi_precision) {
            throw std::invalid_argument("from_monomials: exponent at or beyond pi-precision");
        }
        lowest = std::min(lowest, e);
    }
    std::vector<BigInt> coeffs(static_cast<size_t>(pi_precision - lowest));
    for (const auto& [e, c] : terms) {
        coeffs[static_cast<size_t>(e - lowest)] += c;
    }
    return LaurentSeries(ctx, lowest, pi_precision, std::move(coeffs),
                         std::vector<int>(coeffs.size(), ctx.precision()));
}

inline LaurentSeries constant(const BigInt& c, const PadicContext& ctx, long pi_precision) {
    return from_monomials({{0, c}}, ctx, pi_precision);
}

inline LaurentSeries add(const LaurentSeries& x, const LaurentSeries& y) {
    detail::require_same_context(x, y);
    const long L = std::min(x.lowest(), y.lowest());
    const long M = std::min(x.pi_precision(), y.pi_precision());
    std::vector<BigInt> coeffs(static_cast<size_t>(M - L));
    std::vector<int> prec(coeffs.size());
    for (long e = L; e < M; ++e) {
        const size_t i = static_cast<size_t>(e - L);
        coeffs[i] = x.coeff(e).value() + y.coeff(e).value();
        prec[i] = std::min(x.precision_at(e), y.precision_at(e));
    }
    return LaurentSeries(x.context(), L, M, std::move(coeffs), std::move(prec));
}

inline LaurentSeries negate(const LaurentSeries& x) {
    std::vector<BigInt> coeffs;
    std::vector<int> prec;
    coeffs.reserve(static_cast<size_t>(x.pi_precision() - x.lowest()));
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        coeffs.push_back(-x.raw(e));
        prec.push_back(x.precision_at(e));
    }
    return LaurentSeries(x.context(), x.lowest(), x.pi_precision(),
                         std::move(coeffs), std::move(prec));
}

inline LaurentSeries sub(const LaurentSeries& x, const LaurentSeries& y) {
    return add(x, negate(y));
}

// Product with truncation bookkeeping: the unknown tail of one factor
// meets the lowest stored exponent of the other, so the result is only
// known below min(M_x + L_y, M_y + L_x).
inline LaurentSeries mul(const LaurentSeries& x, const LaurentSeries& y) {
    detail::require_same_context(x, y);
    const long L = x.lowest() + y.lowest();
    const long M = std::min(x.pi_precision() + y.lowest(),
                            y.pi_precision() + x.lowest());
    std::vector<BigInt> coeffs(static_cast<size_t>(M - L));
    std::vector<int> prec(coeffs.size(), x.context().precision());
    for (long i = x.lowest(); i < x.pi_precision(); ++i) {
        const BigInt& xi = x.raw(i);
        const int gi = x.precision_at(i);
        const long kmax = std::min(y.pi_precision(), M - i);
        for (long k = y.lowest(); k < kmax; ++k) {
            const size_t slot = static_cast<size_t>(i + k - L);
            coeffs[slot] += xi * y.raw(k);
            prec[slot] = std::min(prec[slot], std::min(gi, y.precision_at(k)));
        }
    }
    return LaurentSeries(x.context(), L, M, std::move(coeffs), std::move(prec));
}

// Multiply by an exact integer scalar; windows and profile unchanged.
inline LaurentSeries scale(const LaurentSeries& x, const BigInt& c) {
    std::vector<BigInt> coeffs;
    std::vector<int> prec;
    coeffs.reserve(static_cast<size_t>(x.pi_precision() - x.lowest()));
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        coeffs.push_back(x.raw(e) * c);
        prec.push_back(x.precision_at(e));
    }
    return LaurentSeries(x.context(), x.lowest(), x.pi_precision(),
                         std::move(coeffs), std::move(prec));
}

// Multiply by pi^k (exponent shift).
inline LaurentSeries shift(const LaurentSeries& x, long k) {
    std::vector<BigInt> coeffs;
    std::vector<int> prec;
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        coeffs.push_back(x.raw(e));
        prec.push_back(x.precision_at(e));
    }
    return LaurentSeries(x.context(), x.lowest() + k, x.pi_precision() + k,
                         std::move(coeffs), std::move(prec));
}

// (1+pi)^m truncated at pi^M; a polynomial for m >= 0, the generalized
// binomial expansion for m < 0.
inline LaurentSeries epsilon_power(long long m, const PadicContext& ctx, long pi_precision) {
    if (pi_precision < 1) {
        throw std::invalid_argument("epsilon_power: pi-precision must be positive");
    }
    std::vector<BigInt> coeffs(static_cast<size_t>(pi_precision));
    const long jmax = m >= 0 ? std::min<long>(static_cast<long>(m), pi_precision - 1)
                             : pi_precision - 1;
    for (long j = 0; j <= jmax; ++j) {
        coeffs[static_cast<size_t>(j)] = gen_binomial(m, j);
    }
    return LaurentSeries(ctx, 0, pi_precision, std::move(coeffs),
                         std::vector<int>(coeffs.size(), ctx.precision()));
}

namespace detail {

// pi-basis -> epsilon-basis on raw coefficients indexed from exponent 0:
// pi^e = sum_k (-1)^(e-k) C(e,k) eps^k.
inline std::vector<BigInt> pi_to_eps_raw(const std::vector<BigInt>& v,
                                         const std::vector<std::vector<BigInt>>& table,
                                         const PadicContext& ctx) {
    const size_t w = v.size();
    std::vector<BigInt> c(w);
    for (size_t e = 0; e < w; ++e) {
        if (v[e] == 0) {
            continue;
        }
        for (size_t k = 0; k <= e; ++k) {
            const BigInt term = v[e] * table[e][k];
            if ((e - k) % 2 == 0) {
                c[k] += term;
            } else {
                c[k] -= term;
            }
        }
    }
    for (auto& x : c) {
        x = ctx.reduce(x);
    }
    return c;
}

// epsilon-basis -> pi-basis: eps^m = sum_j C(m,j) pi^j, truncated to
// `width` pi-coefficients.
inline std::vector<BigInt> eps_to_pi_raw(const std::vector<BigInt>& c, size_t width,
                                         const std::vector<std::vector<BigInt>>& table,
                                         const PadicContext& ctx) {
    std::vector<BigInt> out(width);
    for (size_t m = 0; m < c.size(); ++m) {
        if (c[m] == 0) {
            continue;
        }
        for (size_t j = 0; j <= m && j < width; ++j) {
            out[j] += c[m] * table[m][j];
        }
    }
    for (auto& x : out) {
        x = ctx.reduce(x);
    }
    return out;
}

}  // namespace detail

// Coefficients of x in the (1+pi)-power basis. Defined for the
// polynomial part only: negative exponents have infinite expansions.
inline std::vector<Residue> pi_to_epsilon(const LaurentSeries& x) {
    if (x.lowest() < 0) {
        throw std::invalid_argument("pi_to_epsilon: series has a negative part");
    }
    const auto& ctx = x.context();
    const size_t w = static_cast<size_t>(x.pi_precision());
    std::vector<BigInt> v(w);
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        v[static_cast<size_t>(e)] = x.raw(e);
    }
    auto table = detail::binomial_rows_mod(w, ctx.modulus());
    auto c = detail::pi_to_eps_raw(v, table, ctx);
    std::vector<Residue> out;
    out.reserve(c.size());
    for (auto& ck : c) {
        out.emplace_back(std::move(ck), ctx);
    }
    return out;
}

// sum_m c_m (1+pi)^m truncated at pi^M.
inline LaurentSeries epsilon_to_pi(const std::vector<Residue>& c,
                                   const PadicContext& ctx, long pi_precision) {
    if (pi_precision < 1) {
        throw std::invalid_argument("epsilon_to_pi: pi-precision must be positive");
    }
    std::vector<BigInt> raw;
    raw.reserve(c.size());
    for (const auto& r : c) {
        if (r.context() != ctx) {
            throw std::invalid_argument("epsilon_to_pi: context mismatch");
        }
        raw.push_back(r.value());
    }
    auto table = detail::binomial_rows_mod(std::max(raw.size(), size_t(1)), ctx.modulus());
    auto out = detail::eps_to_pi_raw(raw, static_cast<size_t>(pi_precision), table, ctx);
    return LaurentSeries(ctx, 0, pi_precision, std::move(out),
                         std::vector<int>(static_cast<size_t>(pi_precision),
                                          ctx.precision()));
}

namespace detail {

// phi(pi) = (1+pi)^p - 1 as raw polynomial coefficients (degree p).
inline std::vector<BigInt> phi_pi_poly(long long p) {
    std::vector<BigInt> c(static_cast<size_t>(p) + 1);
    for (long long i = 1; i <= p; ++i) {
        c[static_cast<size_t>(i)] = binomial(p, i);
    }
    return c;
}

// F with phi(pi) = pi^p + p*pi*F; F(0) = 1, degree p-2.
inline std::vector<BigInt> phi_unit_poly(long long p) {
    std::vector<BigInt> f(static_cast<size_t>(p) - 1);
    for (long long t = 0; t + 2 <= p; ++t) {
        f[static_cast<size_t>(t)] = binomial(p, t + 1) / p;
    }
    return f;
}

inline std::vector<BigInt> poly_mul_trunc(const std::vector<BigInt>& a,
                                          const std::vector<BigInt>& b,
                                          size_t width, const BigInt& m) {
    std::vector<BigInt> out(std::min(width, a.size() + b.size() - 1));
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) {
            continue;
        }
        for (size_t k = 0; k < b.size() && i + k < out.size(); ++k) {
            out[i + k] += a[i] * b[k];
        }
    }
    for (auto& x : out) {
        x %= m;
        if (x < 0) {
            x += m;
        }
    }
    return out;
}

// phi(pi)^e for e < 0 is a finite Laurent polynomial mod p^N: writing
// phi(pi) = pi^p (1 + p*F*pi^(1-p)) and expanding the negative binomial,
// powers of p beyond N-1 vanish. All exponents sit in
// [pe - (N-1)(p-1), pe]. Returns coefficients from `lowest`.
inline std::pair<long, std::vector<BigInt>> phi_pi_power_negative(
    long e, const PadicContext& ctx) {
    const long long p = ctx.p();
    const int n = ctx.precision();
    const long lowest = static_cast<long>(p) * e -
                        static_cast<long>(n - 1) * static_cast<long>(p - 1);
    std::vector<BigInt> acc(static_cast<size_t>(static_cast<long>(p) * e - lowest) + 1);
    const auto f = phi_unit_poly(p);
    std::vector<BigInt> fk{BigInt(1)};  // F^k
    BigInt pk(1);                       // p^k
    for (int k = 0; k < n; ++k) {
        const BigInt w = ctx.reduce(gen_binomial(e, k) * pk);
        const long base = static_cast<long>(p) * e -
                          static_cast<long>(k) * static_cast<long>(p - 1) - lowest;
        if (w != 0) {
            for (size_t t = 0; t < fk.size(); ++t) {
                acc[static_cast<size_t>(base) + t] += w * fk[t];
            }
        }
        pk *= p;
        if (k + 1 < n) {
            fk = poly_mul_trunc(fk, f, acc.size(), ctx.modulus());
        }
    }
    for (auto& x : acc) {
        x = ctx.reduce(x);
    }
    return {lowest, std::move(acc)};
}

}  // namespace detail

// Frobenius substitution pi -> (1+pi)^p - 1. Negative exponents go
// through the normalized factorization phi(pi) = pi^p (1 + p F pi^(1-p)),
// whose second factor inverts as a finite expansion mod p^N.
inline LaurentSeries frobenius(const LaurentSeries& x) {
    const auto& ctx = x.context();
    const long long p = ctx.p();
    const int full = ctx.precision();
    const long M = x.pi_precision();
    const long L_out = x.lowest() >= 0
                           ? x.lowest()
                           : static_cast<long>(p) * x.lowest() -
                                 static_cast<long>(full - 1) * static_cast<long>(p - 1);
    if (M <= L_out) {
        throw std::invalid_argument("frobenius: window collapses");
    }
    std::vector<BigInt> coeffs(static_cast<size_t>(M - L_out));
    std::vector<int> prec(coeffs.size(), full);

    auto accumulate = [&](long base, const std::vector<BigInt>& poly, const BigInt& c) {
        for (size_t t = 0; t < poly.size(); ++t) {
            const long e = base + static_cast<long>(t);
            if (e >= M) {
                break;
            }
            if (e >= L_out && poly[t] != 0) {
                coeffs[static_cast<size_t>(e - L_out)] += c * poly[t];
            }
        }
    };

    // Negative exponents: independent exact expansions per power.
    for (long e = x.lowest(); e < 0; ++e) {
        const BigInt& xe = x.raw(e);
        if (xe == 0) {
            continue;
        }
        auto [lo, poly] = detail::phi_pi_power_negative(e, ctx);
        accumulate(lo, poly, xe);
    }
    // Non-negative exponents: incremental truncated powers of phi(pi).
    const auto phi = detail::phi_pi_poly(p);
    std::vector<BigInt> power{BigInt(1)};
    for (long e = 0; e < x.pi_precision(); ++e) {
        if (e >= std::max<long>(x.lowest(), 0)) {
            const BigInt& xe = x.raw(e);
            if (xe != 0) {
                accumulate(0, power, xe);
            }
        }
        power = detail::poly_mul_trunc(power, phi, static_cast<size_t>(M), ctx.modulus());
    }

    // Uncertainty in coefficient e lands at output exponents j <= pe with
    // a p-power boost from the expansion terms that reach that low.
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        const int ge = x.precision_at(e);
        if (ge >= full) {
            continue;
        }
        for (long j = L_out; j < M; ++j) {
            if (j > p * e || (e >= 0 && j < e)) {
                continue;
            }
            const long deficit = static_cast<long>(p) * e - j;
            const long boost = deficit <= 0 ? 0 : (deficit + p - 2) / (p - 1);
            const long certified = std::min<long>(full, ge + boost);
            prec[static_cast<size_t>(j - L_out)] =
                std::min<int>(prec[static_cast<size_t>(j - L_out)],
                              static_cast<int>(certified));
        }
    }
    return LaurentSeries(ctx, L_out, M, std::move(coeffs), std::move(prec));
}

// Inverse of a series whose first certified-nonzero coefficient is a
// unit mod p. The inverse of the unit part is built by the standard
// term recurrence.
inline LaurentSeries invert_unit(const LaurentSeries& x) {
    const auto& ctx = x.context();
    const int full = ctx.precision();
    long order = x.lowest();
    while (order < x.pi_precision() && x.raw(order) == 0) {
        if (x.precision_at(order) < full) {
            throw NonInvertible("invert_unit: leading coefficient not certified exactly");
        }
        ++order;
    }
    if (order == x.pi_precision()) {
        throw NonInvertible("invert_unit: series is zero at this precision");
    }
    Residue lead = x.coeff(order);
    if (!lead.is_unit()) {
        throw NonInvertible("invert_unit: leading coefficient has positive valuation");
    }
    const size_t w = static_cast<size_t>(x.pi_precision() - order);
    std::vector<BigInt> b(w);
    std::vector<int> prec(w);
    const BigInt inv0 = lead.inverse().value();
    b[0] = inv0;
    prec[0] = x.precision_at(order);
    for (size_t k = 1; k < w; ++k) {
        BigInt s(0);
        for (size_t i = 1; i <= k; ++i) {
            s += x.raw(order + static_cast<long>(i)) * b[k - i];
        }
        b[k] = ctx.reduce(-inv0 * s);
        prec[k] = std::min(prec[k - 1], x.precision_at(order + static_cast<long>(k)));
    }
    return LaurentSeries(ctx, -order, x.pi_precision() - 2 * order,
                         std::move(b), std::move(prec));
}

// a/((1+pi)^a - 1) - 1/pi for gcd(a,p) = 1; lands in the power series
// part (the 1/pi poles cancel exactly).
inline LaurentSeries cyclotomic_element(long long a, const PadicContext& ctx,
                                        long pi_precision) {
    if (a < 1 || std::gcd(a, ctx.p()) != 1) {
        throw std::invalid_argument("cyclotomic_element: a must be positive and coprime to p");
    }
    LaurentSeries den = sub(epsilon_power(a, ctx, pi_precision),
                            constant(BigInt(1), ctx, pi_precision));
    LaurentSeries inv = invert_unit(den);
    LaurentSeries pole = from_monomials({{-1, BigInt(1)}}, ctx, inv.pi_precision());
    return sub(scale(inv, BigInt(a)), pole);
}

// True when x and y agree coefficientwise at the shared certified
// precision over the window both know.
inline bool equal_within_certified(const LaurentSeries& x, const LaurentSeries& y) {
    detail::require_same_context(x, y);
    const auto& ctx = x.context();
    const long L = std::min(x.lowest(), y.lowest());
    const long M = std::min(x.pi_precision(), y.pi_precision());
    for (long e = L; e < M; ++e) {
        const int g = std::min(x.precision_at(e), y.precision_at(e));
        if (g <= 0) {
            continue;
        }
        BigInt diff = x.coeff(e).value() - y.coeff(e).value();
        if (diff % big_pow(BigInt(ctx.p()), static_cast<unsigned long long>(g)) != 0) {
            return false;
        }
    }
    return true;
}

// Rendering: terms in increasing exponent order, zero terms omitted,
// explicit O(pi^M) marker; coefficients are canonical residues.
inline std::string to_string(const LaurentSeries& x) {
    std::ostringstream os;
    bool first = true;
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        const BigInt& c = x.raw(e);
        if (c == 0) {
            continue;
        }
        if (!first) {
            os << " + ";
        }
        first = false;
        if (e == 0) {
            os << c;
        } else {
            if (c != 1) {
                os << c << "*";
            }
            os << "pi";
            if (e != 1) {
                os << "^" << e;
            }
        }
    }
    if (first) {
        os << "0";
    }
    os << " + O(pi^" << x.pi_precision() << ")";
    return os.str();
}

}  // namespace psicalc
