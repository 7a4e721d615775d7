#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <limits>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace psicalc {

using BigInt = boost::multiprecision::cpp_int;

/*
 * Exact integer primitives for p-adic congruence work: valuations,
 * factorial valuations, (generalized) binomial and multinomial
 * coefficients, and the clamped floor shared by every divisibility
 * bound. Sums that feed valuation claims are computed over exact big
 * integers, never modularly; residues mod p^N appear only inside the
 * series engine.
 */

// Integer part of numerator/denominator, clamped to 0 for negative
// numerators. Every bound formula goes through this.
inline long long clamped_floor(long long numerator, long long denominator) {
    if (denominator <= 0) {
        throw std::invalid_argument("clamped_floor: denominator must be positive");
    }
    if (numerator < 0) {
        return 0;
    }
    return numerator / denominator;
}

inline BigInt clamped_floor(const BigInt& numerator, const BigInt& denominator) {
    if (denominator <= 0) {
        throw std::invalid_argument("clamped_floor: denominator must be positive");
    }
    if (numerator < 0) {
        return BigInt(0);
    }
    return numerator / denominator;
}

// Deterministic trial division; the primes in play are desk-scale.
inline bool is_prime(long long n) {
    if (n < 2) {
        return false;
    }
    for (long long d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            return false;
        }
    }
    return true;
}

inline BigInt big_pow(BigInt base, unsigned long long exp) {
    BigInt result(1);
    while (exp != 0) {
        if (exp & 1ULL) {
            result *= base;
        }
        base *= base;
        exp >>= 1;
    }
    return result;
}

// p^a as a plain integer; throws once the result stops fitting.
inline long long ipow(long long base, long long exp) {
    if (exp < 0) {
        throw std::invalid_argument("ipow: negative exponent");
    }
    BigInt r = big_pow(BigInt(base), static_cast<unsigned long long>(exp));
    if (r > std::numeric_limits<long long>::max()) {
        throw std::overflow_error("ipow: result does not fit in long long");
    }
    return static_cast<long long>(r);
}

// p-adic order of an integer-like quantity. Three shapes:
//   finite k     -- p^k exactly divides the value,
//   at_least(t)  -- a residue that is 0 mod p^t; order not resolved further,
//   infinity     -- the exact integer 0.
// Ordered by the least order consistent with what is known; infinity
// dominates everything.
class Valuation {
  public:
    static Valuation finite(long long k) {
        if (k < 0) {
            throw std::invalid_argument("Valuation: negative order");
        }
        return Valuation(Kind::Finite, k);
    }
    static Valuation at_least(long long threshold) {
        if (threshold < 0) {
            throw std::invalid_argument("Valuation: negative threshold");
        }
        return Valuation(Kind::AtLeast, threshold);
    }
    static Valuation infinity() { return Valuation(Kind::Infinite, 0); }

    bool is_finite() const { return kind_ == Kind::Finite; }
    bool is_lower_bound() const { return kind_ == Kind::AtLeast; }
    bool is_infinite() const { return kind_ == Kind::Infinite; }

    // Exact order for finite values, the threshold for at_least.
    long long known() const {
        if (is_infinite()) {
            throw std::logic_error("Valuation: infinite order has no finite value");
        }
        return value_;
    }

    // True when the order is certified to be >= bound.
    bool meets(long long bound) const {
        return is_infinite() || value_ >= bound;
    }

    friend bool operator==(const Valuation& a, const Valuation& b) {
        return a.kind_ == b.kind_ && a.value_ == b.value_;
    }
    friend bool operator!=(const Valuation& a, const Valuation& b) { return !(a == b); }
    friend bool operator<(const Valuation& a, const Valuation& b) {
        return a.key() < b.key();
    }
    friend bool operator<=(const Valuation& a, const Valuation& b) { return !(b < a); }
    friend bool operator>(const Valuation& a, const Valuation& b) { return b < a; }
    friend bool operator>=(const Valuation& a, const Valuation& b) { return !(a < b); }

    std::string to_string() const {
        switch (kind_) {
            case Kind::Finite: return std::to_string(value_);
            case Kind::AtLeast: return ">=" + std::to_string(value_);
            default: return "inf";
        }
    }

  private:
    enum class Kind { Finite = 0, AtLeast = 1, Infinite = 2 };

    Valuation(Kind kind, long long value) : kind_(kind), value_(value) {}

    std::pair<long long, int> key() const {
        if (is_infinite()) {
            return {std::numeric_limits<long long>::max(), 2};
        }
        return {value_, static_cast<int>(kind_)};
    }

    Kind kind_;
    long long value_;
};

// ord_p(x): largest k with p^k | x; infinity for x = 0.
inline Valuation ord_int(const BigInt& x, long long p) {
    if (p < 2) {
        throw std::invalid_argument("ord_int: p must be at least 2");
    }
    if (x == 0) {
        return Valuation::infinity();
    }
    BigInt v = abs(x);
    long long k = 0;
    BigInt q, r;
    const BigInt bp(p);
    for (;;) {
        divide_qr(v, bp, q, r);
        if (r != 0) {
            break;
        }
        v = q;
        ++k;
    }
    return Valuation::finite(k);
}

inline Valuation ord_int(long long x, long long p) { return ord_int(BigInt(x), p); }

// Legendre: ord_p(n!) = sum_{i>=1} floor(n/p^i).
inline long long ord_factorial(long long n, long long p) {
    if (n < 0) {
        throw std::invalid_argument("ord_factorial: n must be non-negative");
    }
    if (p < 2) {
        throw std::invalid_argument("ord_factorial: p must be at least 2");
    }
    long long total = 0;
    for (long long q = n / p; q > 0; q /= p) {
        total += q;
    }
    return total;
}

inline BigInt factorial(long long n) {
    if (n < 0) {
        throw std::invalid_argument("factorial: n must be non-negative");
    }
    BigInt r(1);
    for (long long i = 2; i <= n; ++i) {
        r *= i;
    }
    return r;
}

// C(n,k) for n >= 0; zero outside 0 <= k <= n.
inline BigInt binomial(long long n, long long k) {
    if (n < 0) {
        throw std::invalid_argument("binomial: n must be non-negative");
    }
    if (k < 0 || k > n) {
        return BigInt(0);
    }
    k = std::min(k, n - k);
    BigInt r(1);
    for (long long i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;  // exact at every step
    }
    return r;
}

// C(m,j) = m(m-1)...(m-j+1)/j! for any integer m; an exact integer.
// Numerator product first, then one exact division by j!.
inline BigInt gen_binomial(long long m, long long j) {
    if (j < 0) {
        throw std::invalid_argument("gen_binomial: j must be non-negative");
    }
    BigInt num(1);
    for (long long t = 0; t < j; ++t) {
        num *= BigInt(m) - t;
    }
    return num / factorial(j);
}

// n!/(parts[0]! ... parts[k]!); parts must sum to n.
inline BigInt multinomial(long long n, const std::vector<long long>& parts) {
    if (n < 0) {
        throw std::invalid_argument("multinomial: n must be non-negative");
    }
    long long sum = 0;
    BigInt r(1);
    for (long long part : parts) {
        if (part < 0) {
            throw std::invalid_argument("multinomial: negative part");
        }
        sum += part;
        r *= binomial(sum, part);
    }
    if (sum != n) {
        throw std::invalid_argument("multinomial: parts do not sum to n");
    }
    return r;
}

// Working modulus p^N. Values are immutable after construction and
// freely shared across threads.
class PadicContext {
  public:
    PadicContext(long long p, int precision)
        : p_(p), precision_(precision),
          modulus_(big_pow(BigInt(p), static_cast<unsigned long long>(
                                          precision > 0 ? precision : 0))) {
        if (!is_prime(p)) {
            throw std::invalid_argument("PadicContext: p must be prime");
        }
        if (precision < 1) {
            throw std::invalid_argument("PadicContext: precision must be at least 1");
        }
    }

    long long p() const { return p_; }
    int precision() const { return precision_; }          // N
    const BigInt& modulus() const { return modulus_; }    // p^N

    BigInt reduce(const BigInt& x) const {
        BigInt r = x % modulus_;
        if (r < 0) {
            r += modulus_;
        }
        return r;
    }

    friend bool operator==(const PadicContext& a, const PadicContext& b) {
        return a.p_ == b.p_ && a.precision_ == b.precision_;
    }
    friend bool operator!=(const PadicContext& a, const PadicContext& b) {
        return !(a == b);
    }

  private:
    long long p_;
    int precision_;
    BigInt modulus_;
};

namespace detail {

// Extended Euclid; returns gcd and sets x with a*x = gcd (mod m).
inline BigInt egcd_inverse(const BigInt& a, const BigInt& m) {
    BigInt old_r = a % m, r = m;
    if (old_r < 0) {
        old_r += m;
    }
    BigInt old_s(1), s(0);
    while (r != 0) {
        BigInt q = old_r / r;
        BigInt tmp = old_r - q * r;
        old_r = r;
        r = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) {
        throw std::domain_error("inverse does not exist");
    }
    BigInt inv = old_s % m;
    if (inv < 0) {
        inv += m;
    }
    return inv;
}

}  // namespace detail

// An integer mod p^N with a valuation query. The canonical value always
// lives in [0, p^N).
class Residue {
  public:
    Residue(BigInt value, PadicContext ctx)
        : ctx_(std::move(ctx)), value_(ctx_.reduce(value)) {}

    const BigInt& value() const { return value_; }
    const PadicContext& context() const { return ctx_; }

    bool is_zero() const { return value_ == 0; }
    bool is_unit() const { return value_ % ctx_.p() != 0; }

    // Exact order when the residue is nonzero (always < N), otherwise
    // only ">= N" is knowable at this precision.
    Valuation valuation() const {
        if (value_ == 0) {
            return Valuation::at_least(ctx_.precision());
        }
        return ord_int(value_, ctx_.p());
    }

    Residue inverse() const {
        if (!is_unit()) {
            throw std::domain_error("Residue: not a unit mod p");
        }
        return Residue(detail::egcd_inverse(value_, ctx_.modulus()), ctx_);
    }

    friend Residue operator+(const Residue& a, const Residue& b) {
        a.require_same(b);
        return Residue(a.value_ + b.value_, a.ctx_);
    }
    friend Residue operator-(const Residue& a, const Residue& b) {
        a.require_same(b);
        return Residue(a.value_ - b.value_, a.ctx_);
    }
    friend Residue operator*(const Residue& a, const Residue& b) {
        a.require_same(b);
        return Residue(a.value_ * b.value_, a.ctx_);
    }
    Residue operator-() const { return Residue(-value_, ctx_); }

    friend bool operator==(const Residue& a, const Residue& b) {
        return a.ctx_ == b.ctx_ && a.value_ == b.value_;
    }
    friend bool operator!=(const Residue& a, const Residue& b) { return !(a == b); }

  private:
    void require_same(const Residue& other) const {
        if (ctx_ != other.ctx_) {
            throw std::invalid_argument("Residue: context mismatch");
        }
    }

    PadicContext ctx_;
    BigInt value_;
};

}  // namespace psicalc
