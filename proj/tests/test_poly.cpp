#include <doctest.h>

#include "sunit/poly.hpp"

using namespace sunit;

TEST_CASE("poly arithmetic over Q") {
    QPoly a = {1, 2, 1}; // (x+1)^2
    QPoly b = {1, 1};
    auto [q, r] = p_divmod(a, b);
    CHECK(r.empty());
    CHECK(q == QPoly{1, 1});
    CHECK(p_gcd(a, b) == QPoly{1, 1});
    CHECK(p_eval(a, mpq_class(2)) == 9);
}

TEST_CASE("resultant and discriminant") {
    // disc(x^2 - 2) = 8
    CHECK(discriminant_z({-2, 0, 1}) == 8);
    // disc(x^3 - x^2 - 3x + 1) = 148  (totally real cubic)
    CHECK(discriminant_z({1, -3, -1, 1}) == 148);
    // disc(x^3 - 3x + 1) = 81
    CHECK(discriminant_z({1, -3, 0, 1}) == 81);
    // res(x^2-2, x^2-3) = 1
    CHECK(resultant_z({-2, 0, 1}, {-3, 0, 1}) == 1);
}

TEST_CASE("factorization mod p") {
    // x^2 - 2 mod 7 = (x-3)(x-4)
    FpPoly f = fp_from_z({-2, 0, 1}, 7);
    auto roots = fp_roots(f);
    CHECK(roots == std::vector<uint64_t>{3, 4});
    auto fac = fp_factor(f);
    CHECK(fac.size() == 2);

    // x^4 + 1 mod 2 = (x+1)^4
    FpPoly g = fp_from_z({1, 0, 0, 0, 1}, 2);
    auto gf = fp_factor(g);
    REQUIRE(gf.size() == 1);
    CHECK(gf[0].second == 4);
    CHECK(gf[0].first.deg() == 1);

    // x^3 - x^2 - 3x + 1 mod 17 has exactly one root (8)
    auto r17 = fp_roots(fp_from_z({1, -3, -1, 1}, 17));
    CHECK(r17 == std::vector<uint64_t>{8});

    // large prime root finding
    FpPoly h = fp_from_z({-2, 0, 1}, 1000033);
    auto rb = fp_roots(h);
    REQUIRE(rb.size() == 2);
    CHECK(mulmod(rb[0], rb[0], 1000033) == 2);
}

TEST_CASE("hensel lift") {
    // x^2 - 2 = (x - 3)(x + 3) mod 7, lift to 7^6
    ZPoly f = {-2, 0, 1};
    FpPoly a{7, {4, 1}}, b{7, {3, 1}};
    auto lifted = hensel_lift(f, {a, b}, 7, 6);
    REQUIRE(lifted.size() == 2);
    mpz_class mod = pow_mpz(7, 6);
    // each factor is x - r with r^2 = 2 mod 7^6
    for (const auto& g : lifted) {
        REQUIRE(g.size() == 2);
        mpz_class root = (mod - g[0]) % mod;
        CHECK((root * root - 2) % mod == 0);
    }
}

TEST_CASE("irreducibility over Z") {
    CHECK(is_irreducible_z({-2, 0, 1}));          // x^2-2
    CHECK_FALSE(is_irreducible_z({-1, 0, 1}));    // x^2-1
    CHECK(is_irreducible_z({1, 0, 0, 0, 1}));     // x^4+1, reducible mod every p
    CHECK(is_irreducible_z({1, -3, -1, 1}));      // cubic field polynomial
    CHECK(is_irreducible_z({9, 0, 0, 0, 1}));     // x^4 + 9
    CHECK_FALSE(is_irreducible_z({2, 3, 1}));     // (x+1)(x+2)
    CHECK(is_irreducible_z({1, 0, -1, 0, 0, 0, 1})); // x^6 - x^2 + 1

    auto f = factor_z_monic({2, 3, 1});
    REQUIRE(f.size() == 2);
    CHECK(f[0] == ZPoly{1, 1});
    CHECK(f[1] == ZPoly{2, 1});
}

TEST_CASE("real root isolation") {
    // x^2 - 2: two real roots
    auto iv = isolate_real_roots({-2, 0, 1});
    REQUIRE(iv.size() == 2);
    CHECK(iv[0].second <= 0);
    CHECK(iv[1].first >= 0);

    // x^2 + 1: none
    CHECK(isolate_real_roots({1, 0, 1}).empty());

    // x^3 - x^2 - 3x + 1: three real roots (totally real)
    auto c = isolate_real_roots({1, -3, -1, 1});
    CHECK(c.size() == 3);

    // x^3 - 2: one real root near 1.26
    auto d = isolate_real_roots({-2, 0, 0, 1});
    REQUIRE(d.size() == 1);
    CHECK(d[0].first < mpq_class(126, 100));
    CHECK(d[0].second > mpq_class(125, 100));
}
