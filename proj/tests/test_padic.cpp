#include <doctest.h>

#include "sunit/padic.hpp"

using namespace sunit;

TEST_CASE("padic scalar arithmetic") {
    auto Q = NumberField::create({0, 1});
    auto p2 = primes_above(Q, 2)[0];
    LocalField L(p2, 40);

    PadicNumber a = L.from_rational(mpq_class(12), 20);   // 2^2 * 3
    CHECK(a.v == 2);
    CHECK(a.u == 3);
    PadicNumber b = L.from_rational(mpq_class(1, 2), 20); // 2^{-1}
    CHECK(b.v == -1);
    PadicNumber c = L.mul(a, b);
    CHECK(c.v == 1);
    CHECK(c.u == 3);
    PadicNumber d = L.add(a, L.neg(a));
    CHECK(d.is_zero());
    PadicNumber e = L.div(a, a);
    CHECK(e.v == 0);
    CHECK(e.u == 1);
}

TEST_CASE("log_2(-1) = 0 in Q_2") {
    auto Q = NumberField::create({0, 1});
    auto p2 = primes_above(Q, 2)[0];
    auto lg = padic_log(Q->from_rational(-1), p2, 30);
    REQUIRE(lg.size() == 1);
    CHECK(lg[0].is_zero());
}

TEST_CASE("ord_3(log_3(4)) = 1") {
    auto Q = NumberField::create({0, 1});
    auto p3 = primes_above(Q, 3)[0];
    auto lg = padic_log(Q->from_rational(4), p3, 30);
    REQUIRE(lg.size() == 1);
    REQUIRE_FALSE(lg[0].is_zero());
    CHECK(lg[0].v == 1); // ord_p(log_p(1+z)) = ord_p(z) with z = 3
}

TEST_CASE("padic log additivity") {
    auto Q = NumberField::create({0, 1});
    for (long pp : {2, 3, 5}) {
        auto P = primes_above(Q, pp)[0];
        LocalField L(P, 46);
        std::vector<long> units;
        for (long u = 2; (long)units.size() < 4; ++u)
            if (u % pp != 0) units.push_back(u);
        for (size_t i = 0; i + 1 < units.size(); ++i) {
            FieldElement x = Q->from_rational(units[i]);
            FieldElement y = Q->from_rational(units[i + 1]);
            auto lx = L.log(x, 30), ly = L.log(y, 30);
            auto lxy = L.log(Q->mul(x, y), 30);
            auto diff = L.elem_sub(lxy, L.elem_add(lx, ly));
            for (auto& c : diff) {
                bool small = c.is_zero() || c.v >= 28;
                CHECK(small);
            }
        }
    }
}

TEST_CASE("log of a square is twice the log") {
    auto K = NumberField::create({-2, 0, 1});
    auto p7 = primes_above(K, 7); // split
    REQUIRE(p7.size() == 2);
    LocalField L(p7[0], 40);
    FieldElement u = K->element({1, 1}); // 1 + sqrt2, unit
    auto l1 = L.log(u, 25);
    auto l2 = L.log(K->mul(u, u), 25);
    auto diff = L.elem_sub(l2, L.elem_add(l1, l1));
    for (auto& c : diff) {
        bool small = c.is_zero() || c.v >= 23;
        CHECK(small);
    }
}

TEST_CASE("completion embed: rationals and theta") {
    auto K = NumberField::create({-2, 0, 1});
    auto p2 = primes_above(K, 2)[0]; // ramified, local poly = f, n = 2
    auto v = completion_embed(K->from_rational(mpq_class(5, 3)), p2, 20);
    REQUIRE(v.size() == 2);
    CHECK_FALSE(v[0].is_zero());
    CHECK(v[1].is_zero());
    auto th = completion_embed(K->gen(), p2, 20);
    CHECK(th[0].is_zero());
    CHECK(th[1].v == 0);
    CHECK(th[1].u == 1);
}

TEST_CASE("completion embed at a split place satisfies f(image) = 0") {
    auto K = NumberField::create({-2, 0, 1});
    auto pls = primes_above(K, 7);
    LocalField L(pls[0], 40);
    auto img = L.embed(K->gen(), 30);
    REQUIRE(img.size() == 1); // split: n = 1
    PadicNumber sq = L.mul(img[0], img[0]);
    PadicNumber two = L.from_rational(2, 30);
    CHECK(L.sub(sq, two).is_zero());
}

TEST_CASE("embed is a ring homomorphism mod p^N") {
    auto K = NumberField::create({1, -3, -1, 1});
    auto p2 = primes_above(K, 2)[0]; // e = 3 totally ramified
    LocalField L(p2, 40);
    FieldElement a = K->element({1, 2, mpq_class(1, 3)});
    FieldElement b = K->element({-2, 0, 5});
    auto ea = L.embed(a, 24), eb = L.embed(b, 24);
    auto diff = L.elem_sub(L.embed(K->mul(a, b), 24), L.elem_mul(ea, eb));
    for (auto& c : diff) {
        bool small = c.is_zero() || c.v >= 22;
        CHECK(small);
    }
    auto diff2 = L.elem_sub(L.embed(K->add(a, b), 24), L.elem_add(ea, eb));
    for (auto& c : diff2) {
        bool small = c.is_zero() || c.v >= 22;
        CHECK(small);
    }
}

TEST_CASE("mu system for Q(sqrt2) above 2") {
    auto K = NumberField::create({-2, 0, 1});
    SUnitBasis B{K, K->from_rational(-1), 2, {K->element({1, 1}), K->element({0, 1})}};
    auto p2 = primes_above(K, 2)[0];
    auto form = build_linear_form(p2, B, 40);
    REQUIRE(form.mu.size() == 1);
    // kernel of the valuation vector (0, 1) is spanned by (1, 0): mu1 = 1+sqrt2
    CHECK(form.mu[0] == K->element({1, 1}));
    CHECK(form.inflation == 1);
    CHECK_FALSE(form.early_exit);
    for (size_t i = 0; i < 2; ++i) {
        mpz_class k = form.kappa_int(1, i, 10);
        CHECK(k >= 0);
    }
}

TEST_CASE("mu system regenerates tau2 on the kernel") {
    auto K = NumberField::create({-2, 0, 1});
    SUnitBasis B{K, K->from_rational(-1), 2, {K->element({1, 1}), K->element({0, 1})}};
    auto p2 = primes_above(K, 2)[0];
    auto form = build_linear_form(p2, B, 30);
    for (long k = -3; k <= 3; ++k) {
        ExponentVector ev{0, {k, 0}};
        CHECK(phi_rho(B, ev) == K->pow(form.mu[0], k));
    }
}

TEST_CASE("rank-1 case: no mus") {
    auto Q = NumberField::create({0, 1});
    SUnitBasis B{Q, Q->from_rational(-1), 2, {Q->from_rational(2)}};
    auto p2 = primes_above(Q, 2)[0];
    auto form = build_linear_form(p2, B, 30);
    CHECK(form.mu.empty());
    CHECK(form.mu0_candidates.size() == 2);
}
