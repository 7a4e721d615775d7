#include "psicalc/laurent.hpp"

#include <catch2/catch_amalgamated.hpp>

#include <random>

using namespace psicalc;

namespace {

LaurentSeries random_poly(std::mt19937_64& rng, const PadicContext& ctx,
                          long pi_precision, long degree) {
    std::vector<std::pair<long, BigInt>> terms;
    for (long e = 0; e <= degree && e < pi_precision; ++e) {
        terms.emplace_back(e, BigInt(rng() % 1000000007ULL));
    }
    return from_monomials(terms, ctx, pi_precision);
}

LaurentSeries pi_series(const PadicContext& ctx, long m) {
    return from_monomials({{1, BigInt(1)}}, ctx, m);
}

}  // namespace

TEST_CASE("from_monomials builds canonical windows") {
    PadicContext ctx(3, 5);
    LaurentSeries one = from_monomials({{0, BigInt(1)}}, ctx, 8);
    CHECK(one.lowest() == 0);
    CHECK(one.coeff(0).value() == 1);
    CHECK(one.coeff(5).value() == 0);

    LaurentSeries pi = pi_series(ctx, 8);
    CHECK(pi.lowest() == 1);
    CHECK(pi.coeff(1).value() == 1);

    LaurentSeries inv_pi = from_monomials({{-1, BigInt(1)}}, ctx, 8);
    CHECK(inv_pi.lowest() == -1);
    CHECK(inv_pi.coeff(-1).value() == 1);
    CHECK(inv_pi.coeff(-5).value() == 0);  // exact zero below the window

    CHECK_THROWS_AS(from_monomials({{8, BigInt(1)}}, ctx, 8), std::invalid_argument);
    CHECK_THROWS_AS(one.coeff(8), std::out_of_range);
}

TEST_CASE("canonical form strips exactly-known leading zeros of the negative part") {
    PadicContext ctx(2, 4);
    LaurentSeries x(ctx, -3, 4, {BigInt(0), BigInt(0), BigInt(1), BigInt(0), BigInt(1),
                                 BigInt(0), BigInt(0)},
                    std::vector<int>(7, 4));
    CHECK(x.lowest() == -1);
    CHECK(x.coeff(-1).value() == 1);
    // interior zeros stay positional
    CHECK(x.coeff(0).value() == 0);
    CHECK(x.coeff(1).value() == 1);
    // an uncertified zero is not stripped
    std::vector<int> prec(7, 4);
    prec[0] = 2;
    LaurentSeries y(ctx, -3, 4, {BigInt(0), BigInt(0), BigInt(1), BigInt(0), BigInt(1),
                                 BigInt(0), BigInt(0)},
                    prec);
    CHECK(y.lowest() == -3);
}

TEST_CASE("add and mul examples") {
    PadicContext ctx(5, 6);
    LaurentSeries pi = pi_series(ctx, 10);
    CHECK(add(pi, negate(pi)).is_zero());

    LaurentSeries inv_pi = from_monomials({{-1, BigInt(1)}}, ctx, 10);
    LaurentSeries prod = mul(pi, inv_pi);
    CHECK(prod.coeff(0).value() == 1);
    CHECK(prod.is_zero() == false);
    for (long e = prod.lowest(); e < prod.pi_precision(); ++e) {
        CHECK(prod.coeff(e).value() == (e == 0 ? 1 : 0));
    }

    LaurentSeries p1 = from_monomials({{0, BigInt(1)}, {1, BigInt(1)}}, ctx, 10);
    LaurentSeries sq = mul(p1, p1);
    CHECK(sq.coeff(0).value() == 1);
    CHECK(sq.coeff(1).value() == 2);
    CHECK(sq.coeff(2).value() == 1);

    PadicContext other(3, 6);
    CHECK_THROWS_AS(add(pi, pi_series(other, 10)), std::invalid_argument);
}

TEST_CASE("mul tracks pi-precision through alignments") {
    PadicContext ctx(2, 8);
    LaurentSeries pi = pi_series(ctx, 12);          // window [1,12)
    LaurentSeries prod = mul(pi, pi);               // min(12+1, 12+1) = 13
    CHECK(prod.pi_precision() == 13);
    CHECK(prod.lowest() == 2);
    LaurentSeries inv_pi = from_monomials({{-1, BigInt(1)}}, ctx, 12);
    CHECK(mul(pi, inv_pi).pi_precision() == 11);    // min(12-1, 12+1)
}

TEST_CASE("ring laws hold at matched precision") {
    std::mt19937_64 rng(11);
    for (long long p : {2, 3, 5}) {
        PadicContext ctx(p, 12);
        for (int trial = 0; trial < 30; ++trial) {
            LaurentSeries x = random_poly(rng, ctx, 24, 10);
            LaurentSeries y = random_poly(rng, ctx, 24, 9);
            LaurentSeries z = random_poly(rng, ctx, 24, 8);
            REQUIRE(equal_within_certified(add(x, y), add(y, x)));
            REQUIRE(equal_within_certified(mul(x, y), mul(y, x)));
            REQUIRE(equal_within_certified(add(add(x, y), z), add(x, add(y, z))));
            REQUIRE(equal_within_certified(mul(mul(x, y), z), mul(x, mul(y, z))));
            REQUIRE(equal_within_certified(mul(x, add(y, z)),
                                           add(mul(x, y), mul(x, z))));
        }
    }
}

TEST_CASE("epsilon_power expands (1+pi)^m") {
    PadicContext ctx(3, 8);
    LaurentSeries sq = epsilon_power(2, ctx, 10);
    CHECK(sq.coeff(0).value() == 1);
    CHECK(sq.coeff(1).value() == 2);
    CHECK(sq.coeff(2).value() == 1);
    CHECK(sq.coeff(3).value() == 0);

    LaurentSeries one = epsilon_power(0, ctx, 10);
    for (long e = 0; e < 10; ++e) {
        CHECK(one.coeff(e).value() == (e == 0 ? 1 : 0));
    }

    // (1+pi)^-1 * (1+pi) = 1 up to the window
    LaurentSeries inv = epsilon_power(-1, ctx, 10);
    LaurentSeries prod = mul(inv, epsilon_power(1, ctx, 10));
    for (long e = 0; e < prod.pi_precision(); ++e) {
        CHECK(prod.coeff(e).value() == (e == 0 ? 1 : 0));
    }
}

TEST_CASE("epsilon_power inverses pair up") {
    for (long long p : {2, 5}) {
        PadicContext ctx(p, 9);
        for (long long m = -20; m <= 20; ++m) {
            LaurentSeries prod = mul(epsilon_power(m, ctx, 14), epsilon_power(-m, ctx, 14));
            for (long e = 0; e < prod.pi_precision(); ++e) {
                REQUIRE(prod.coeff(e).value() == (e == 0 ? 1 : 0));
            }
        }
    }
}

TEST_CASE("pi_to_epsilon examples") {
    PadicContext ctx(5, 6);
    auto c = pi_to_epsilon(from_monomials({{2, BigInt(1)}}, ctx, 6));
    CHECK(c[0].value() == 1);
    CHECK(c[1].value() == ctx.reduce(BigInt(-2)));
    CHECK(c[2].value() == 1);
    CHECK(c[3].value() == 0);

    auto u = pi_to_epsilon(constant(BigInt(1), ctx, 6));
    CHECK(u[0].value() == 1);
    for (size_t k = 1; k < u.size(); ++k) {
        CHECK(u[k].value() == 0);
    }

    auto v = pi_to_epsilon(pi_series(ctx, 6));
    CHECK(v[0].value() == ctx.reduce(BigInt(-1)));
    CHECK(v[1].value() == 1);
    CHECK(v[2].value() == 0);

    CHECK_THROWS_AS(pi_to_epsilon(from_monomials({{-1, BigInt(1)}}, ctx, 6)),
                    std::invalid_argument);
}

TEST_CASE("epsilon_to_pi examples and round trip") {
    PadicContext ctx(3, 7);
    std::vector<Residue> c{Residue(BigInt(0), ctx), Residue(BigInt(1), ctx)};
    LaurentSeries s = epsilon_to_pi(c, ctx, 8);
    CHECK(s.coeff(0).value() == 1);
    CHECK(s.coeff(1).value() == 1);
    CHECK(s.coeff(2).value() == 0);

    std::vector<Residue> ones(3, Residue(BigInt(1), ctx));
    LaurentSeries t = epsilon_to_pi(ones, ctx, 8);
    CHECK(t.coeff(0).value() == 3);
    CHECK(t.coeff(1).value() == 3);
    CHECK(t.coeff(2).value() == 1);
    CHECK(t.coeff(3).value() == 0);

    std::mt19937_64 rng(5);
    for (int trial = 0; trial < 40; ++trial) {
        LaurentSeries x = random_poly(rng, ctx, 12, 11);
        LaurentSeries back = epsilon_to_pi(pi_to_epsilon(x), ctx, 12);
        for (long e = 0; e < 12; ++e) {
            REQUIRE(back.coeff(e).value() == x.coeff(e).value());
        }
    }
}

TEST_CASE("frobenius on polynomials") {
    PadicContext ctx(2, 8);
    LaurentSeries fpi = frobenius(pi_series(ctx, 12));
    CHECK(fpi.coeff(1).value() == 2);
    CHECK(fpi.coeff(2).value() == 1);
    CHECK(fpi.coeff(3).value() == 0);

    LaurentSeries fone = frobenius(constant(BigInt(1), ctx, 12));
    for (long e = 0; e < fone.pi_precision(); ++e) {
        CHECK(fone.coeff(e).value() == (e == 0 ? 1 : 0));
    }

    // phi(pi^2) agrees with phi(pi)*phi(pi)
    LaurentSeries fsq = frobenius(from_monomials({{2, BigInt(1)}}, ctx, 12));
    CHECK(equal_within_certified(fsq, mul(fpi, fpi)));
    CHECK(fsq.coeff(2).value() == 4);
    CHECK(fsq.coeff(3).value() == 4);
    CHECK(fsq.coeff(4).value() == 1);
}

TEST_CASE("frobenius is a ring homomorphism") {
    std::mt19937_64 rng(17);
    for (long long p : {2, 3, 5}) {
        PadicContext ctx(p, 8);
        for (int trial = 0; trial < 15; ++trial) {
            LaurentSeries x = random_poly(rng, ctx, 16, 6);
            LaurentSeries y = random_poly(rng, ctx, 16, 5);
            REQUIRE(equal_within_certified(frobenius(add(x, y)),
                                           add(frobenius(x), frobenius(y))));
            REQUIRE(equal_within_certified(frobenius(mul(x, y)),
                                           mul(frobenius(x), frobenius(y))));
        }
    }
}

TEST_CASE("frobenius factors exactly as pi times the epsilon-power sum") {
    for (long long p : {2, 3, 5}) {
        PadicContext ctx(p, 7);
        LaurentSeries lhs = frobenius(pi_series(ctx, 20));
        LaurentSeries rhs = LaurentSeries::zero(ctx, 20);
        for (long long i = 0; i < p; ++i) {
            rhs = add(rhs, epsilon_power(i, ctx, 20));
        }
        rhs = mul(pi_series(ctx, 20), rhs);
        const long M = std::min(lhs.pi_precision(), rhs.pi_precision());
        for (long e = std::min(lhs.lowest(), rhs.lowest()); e < M; ++e) {
            REQUIRE(lhs.coeff(e).value() == rhs.coeff(e).value());
        }
    }
}

TEST_CASE("frobenius handles negative exponents") {
    PadicContext ctx(2, 6);
    LaurentSeries inv_pi = from_monomials({{-1, BigInt(1)}}, ctx, 10);
    LaurentSeries f = frobenius(inv_pi);
    // 1/phi(pi) = 1/(pi^2+2pi): lowest kept exponent is -2-(N-1)
    CHECK(f.lowest() == -2 - (6 - 1));
    CHECK(f.coeff(-2).value() == 1);
    CHECK(f.coeff(-3).value() == ctx.reduce(BigInt(-2)));
    CHECK(f.coeff(-4).value() == 4);
    // self-check: phi(1/pi) * phi(pi) = 1
    LaurentSeries prod = mul(f, frobenius(pi_series(ctx, 10)));
    for (long e = prod.lowest(); e < prod.pi_precision(); ++e) {
        REQUIRE(prod.coeff(e).value() == (e == 0 ? 1 : 0));
    }
    // and phi(x * 1/pi) = phi(x) * phi(1/pi) for a mixed series
    LaurentSeries x = from_monomials({{-2, BigInt(3)}, {0, BigInt(1)}, {3, BigInt(5)}},
                                     ctx, 10);
    REQUIRE(equal_within_certified(frobenius(mul(x, inv_pi)),
                                   mul(frobenius(x), f)));
}

TEST_CASE("invert_unit") {
    PadicContext ctx(3, 8);
    LaurentSeries u = from_monomials({{0, BigInt(1)}, {1, BigInt(1)}}, ctx, 12);
    LaurentSeries inv = invert_unit(u);
    for (long e = 0; e < inv.pi_precision(); ++e) {
        CHECK(inv.coeff(e).value() == ctx.reduce(BigInt(e % 2 == 0 ? 1 : -1)));
    }

    LaurentSeries pi = pi_series(ctx, 12);
    LaurentSeries inv_pi = invert_unit(pi);
    CHECK(inv_pi.lowest() == -1);
    CHECK(inv_pi.coeff(-1).value() == 1);

    LaurentSeries v = from_monomials({{0, BigInt(2)}, {1, BigInt(1)}}, ctx, 12);
    LaurentSeries iv = invert_unit(v);
    LaurentSeries prod = mul(v, iv);
    for (long e = 0; e < prod.pi_precision(); ++e) {
        CHECK(prod.coeff(e).value() == (e == 0 ? 1 : 0));
    }

    CHECK_THROWS_AS(invert_unit(constant(BigInt(3), ctx, 12)), NonInvertible);
    CHECK_THROWS_AS(invert_unit(LaurentSeries::zero(ctx, 12)), NonInvertible);

    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 25; ++trial) {
        LaurentSeries x = random_poly(rng, ctx, 16, 8);
        if (!x.coeff(0).is_unit()) {
            continue;
        }
        LaurentSeries q = mul(x, invert_unit(x));
        for (long e = 0; e < q.pi_precision(); ++e) {
            REQUIRE(q.coeff(e).value() == (e == 0 ? 1 : 0));
        }
    }
}

TEST_CASE("cyclotomic_element stays in the power series part") {
    PadicContext ctx3(3, 8);
    LaurentSeries c1 = cyclotomic_element(1, ctx3, 20);
    CHECK(c1.is_zero());
    CHECK(c1.lowest() >= 0);

    // 2/((1+pi)^2-1) - 1/pi = -1/(2+pi)
    LaurentSeries c2 = cyclotomic_element(2, ctx3, 20);
    CHECK(c2.lowest() >= 0);
    LaurentSeries lhs = mul(c2, from_monomials({{0, BigInt(2)}, {1, BigInt(1)}}, ctx3, 20));
    for (long e = lhs.lowest(); e < lhs.pi_precision(); ++e) {
        CHECK(lhs.coeff(e).value() == (e == 0 ? ctx3.reduce(BigInt(-1)) : 0));
    }

    PadicContext ctx5(5, 6);
    for (long long a : {1, 2, 3, 4, 6, 7}) {
        CHECK(cyclotomic_element(a, ctx5, 16).lowest() >= 0);
    }
    CHECK_THROWS_AS(cyclotomic_element(5, ctx5, 16), std::invalid_argument);
    CHECK_THROWS_AS(cyclotomic_element(0, ctx5, 16), std::invalid_argument);
}

TEST_CASE("rendering") {
    PadicContext ctx(2, 8);
    CHECK(to_string(from_monomials({{0, BigInt(2)}, {1, BigInt(1)}}, ctx, 7)) ==
          "2 + pi + O(pi^7)");
    CHECK(to_string(LaurentSeries::zero(ctx, 5)) == "0 + O(pi^5)");
    CHECK(to_string(from_monomials({{-2, BigInt(3)}, {2, BigInt(5)}}, ctx, 6)) ==
          "3*pi^-2 + 5*pi^2 + O(pi^6)");
    CHECK(to_string(from_monomials({{-1, BigInt(1)}}, ctx, 4)) == "pi^-1 + O(pi^4)");
}

TEST_CASE("fresh series carry full precision profiles") {
    PadicContext ctx(3, 9);
    LaurentSeries x = from_monomials({{-1, BigInt(2)}, {3, BigInt(4)}}, ctx, 11);
    PrecisionProfile prof = x.profile();
    CHECK(prof.full() == 9);
    for (long e = x.lowest(); e < x.pi_precision(); ++e) {
        CHECK(prof.g(e) == 9);
    }
    CHECK(prof.g(-5) == 9);   // below the window: exact zero
    CHECK(prof.g(11) == 0);   // unknown tail
}
