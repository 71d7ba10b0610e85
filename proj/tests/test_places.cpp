#include <doctest.h>

#include <cmath>

#include "sunit/places.hpp"

using namespace sunit;

static const long P = 96;

TEST_CASE("infinite places: signatures") {
    auto K2 = NumberField::create({-2, 0, 1});
    auto pl = infinite_places(K2);
    REQUIRE(pl.size() == 2);
    CHECK(pl[0]->real);
    CHECK(pl[1]->real);

    auto Ki = NumberField::create({1, 0, 1}); // x^2 + 1
    auto pli = infinite_places(Ki);
    REQUIRE(pli.size() == 1);
    CHECK_FALSE(pli[0]->real);
    CHECK(pli[0]->delta() == 2);

    // totally real cubic
    auto K3 = NumberField::create({1, -3, -1, 1});
    CHECK(infinite_places(K3).size() == 3);

    // x^3 - 2: one real, one complex pair
    auto K32 = NumberField::create({-2, 0, 0, 1});
    auto pl32 = infinite_places(K32);
    REQUIRE(pl32.size() == 2);
    CHECK(pl32[0]->real);
    CHECK_FALSE(pl32[1]->real);
}

TEST_CASE("embeddings evaluate correctly") {
    auto K = NumberField::create({-2, 0, 1});
    auto pl = infinite_places(K);
    // 1 + sqrt2 at one embedding is 2.414..., at the other -0.414...
    FieldElement u = K->element({1, 1});
    double v0 = pl[0]->embed(u, P).re.mid_d();
    double v1 = pl[1]->embed(u, P).re.mid_d();
    double lo = std::min(v0, v1), hi = std::max(v0, v1);
    CHECK(lo == doctest::Approx(1 - 1.41421356237).epsilon(1e-9));
    CHECK(hi == doctest::Approx(1 + 1.41421356237).epsilon(1e-9));
}

TEST_CASE("primes_above: basic splitting") {
    auto K = NumberField::create({-2, 0, 1});
    // 2 ramifies: e=2, f=1
    auto p2 = primes_above(K, 2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0]->e == 2);
    CHECK(p2[0]->f == 1);
    // 7 splits (3^2 = 2 mod 7)
    auto p7 = primes_above(K, 7);
    REQUIRE(p7.size() == 2);
    CHECK(p7[0]->e == 1);
    CHECK(p7[0]->f == 1);
    // 3 is inert
    auto p3 = primes_above(K, 3);
    REQUIRE(p3.size() == 1);
    CHECK(p3[0]->f == 2);

    // cubic: 2 totally ramified in x^3 - x^2 - 3x + 1
    auto C = NumberField::create({1, -3, -1, 1});
    auto c2 = primes_above(C, 2);
    REQUIRE(c2.size() == 1);
    CHECK(c2[0]->e == 3);
    CHECK(c2[0]->f == 1);

    // x^3 - 3x + 1: 2 inert
    auto C2 = NumberField::create({1, -3, 0, 1});
    auto i2 = primes_above(C2, 2);
    REQUIRE(i2.size() == 1);
    CHECK(i2[0]->e == 1);
    CHECK(i2[0]->f == 3);
}

TEST_CASE("primes_above at an index prime with supplied basis") {
    QMat B = {{1, 0, 0, 0},
              {0, 1, 0, 0},
              {0, 0, mpq_class(1, 3), 0},
              {0, 0, 0, mpq_class(1, 3)}};
    auto K = NumberField::create({9, 0, 0, 0, 1}, B);
    auto p3 = primes_above(K, 3);
    REQUIRE(p3.size() == 1);
    CHECK(p3[0]->e == 2);
    CHECK(p3[0]->f == 2);
    CHECK(p3[0]->ord(K->from_rational(3)) == 2);
    CHECK(p3[0]->ord(p3[0]->pi) == 1);

    // without a basis the same request must fail loudly
    auto Kp = NumberField::create({9, 0, 0, 0, 1});
    CHECK_THROWS_AS(primes_above(Kp, 3), IndexDivisible);
}

TEST_CASE("ord computations") {
    auto K = NumberField::create({-2, 0, 1});
    auto p2 = primes_above(K, 2)[0];
    CHECK(p2->ord(K->from_rational(2)) == 2); // e = 2
    CHECK(p2->ord(K->one()) == 0);
    CHECK(p2->ord(K->gen()) == 1); // sqrt2 is a uniformizer
    CHECK(p2->ord(K->element({0, mpq_class(1, 2)})) == -1);
    CHECK_THROWS_AS(p2->ord(K->zero()), ZeroElement);

    // additivity on random elements
    FieldElement a = K->element({6, 2});
    FieldElement b = K->element({0, mpq_class(3, 4)});
    CHECK(p2->ord(K->mul(a, b)) == p2->ord(a) + p2->ord(b));
}

TEST_CASE("abs values") {
    auto K = NumberField::create({-2, 0, 1});
    auto p2 = primes_above(K, 2)[0];
    RInt v = abs_value(K->from_rational(2), *p2, P);
    CHECK(v.lo_d() == doctest::Approx(0.25)); // 2^{-f*ord} = 2^{-2}
    auto pl = infinite_places(K);
    FieldElement u = K->element({1, 1});
    RInt w0 = abs_value(u, *pl[0], P).max_with(abs_value(u, *pl[1], P));
    CHECK(w0.mid_d() == doctest::Approx(2.41421356237).epsilon(1e-9));
}

TEST_CASE("sum of e*f equals degree") {
    auto K = NumberField::create({1, 0, -1, 0, 0, 0, 1}); // degree 6
    for (long p : {2, 3, 5, 7, 11, 13}) {
        long acc = 0;
        for (auto& P2 : primes_above(K, p)) acc += P2->e * P2->f;
        CHECK(acc == 6);
    }
}

TEST_CASE("heights of rationals") {
    auto Q = NumberField::create({0, 1});
    RInt h32 = height(Q->from_rational(mpq_class(3, 2)), P);
    CHECK(h32.mid_d() == doctest::Approx(std::log(3)).epsilon(1e-12));
    RInt h2 = height(Q->from_rational(2), P);
    RInt h12 = height(Q->from_rational(mpq_class(1, 2)), P);
    CHECK(h2.mid_d() == doctest::Approx(h12.mid_d()).epsilon(1e-12));
    CHECK(h2.mid_d() == doctest::Approx(std::log(2)).epsilon(1e-12));
}

TEST_CASE("height of 1+sqrt2 equals half the Mahler measure log") {
    // Mahler measure of x^2 - 2x - 1 is 1 + sqrt2 (root product over |.|>1)
    auto K = NumberField::create({-2, 0, 1});
    FieldElement u = K->element({1, 1});
    RInt h = height(u, P);
    double expect = std::log(1 + 1.4142135623730951) / 2;
    CHECK(h.mid_d() == doctest::Approx(expect).epsilon(1e-10));
    // h(a) = h(1/a), h(a^3) = 3 h(a)
    RInt hinv = height(K->inv(u), P);
    CHECK(hinv.mid_d() == doctest::Approx(h.mid_d()).epsilon(1e-10));
    RInt h3 = height(K->pow(u, 3), P);
    CHECK(h3.mid_d() == doctest::Approx(3 * h.mid_d()).epsilon(1e-10));
}

TEST_CASE("product formula encloses zero") {
    auto K = NumberField::create({1, -3, -1, 1});
    uint64_t seed = 7;
    auto rnd = [&] {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        return (long)((seed >> 33) % 11) - 5;
    };
    int done = 0;
    for (int trial = 0; trial < 30 && done < 10; ++trial) {
        FieldElement a = K->element({rnd(), rnd(), rnd()});
        if (a.is_zero()) continue;
        ++done;
        RInt total = RInt::exact(0L, P);
        for (auto& [pl, v] : support(a))
            total = total + RInt::log_of(pl->p, P).mul_z(mpz_class(-v * pl->f));
        for (auto& pl : infinite_places(K)) total = total + pl->log_abs_value(a, P);
        CHECK(total.contains_zero());
        CHECK(total.width_d() < 1e-20);
    }
    CHECK(done == 10);
}

TEST_CASE("is_s_unit") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S = make_place_set(Q, {mpz_class(2)});
    CHECK(is_s_unit(Q->from_rational(-8), S));
    CHECK_FALSE(is_s_unit(Q->from_rational(mpq_class(3, 2)), S));
    CHECK(is_s_unit(Q->from_rational(mpq_class(1, 4)), S));
    CHECK_THROWS_AS(is_s_unit(Q->zero(), S), ZeroElement);

    auto K = NumberField::create({-2, 0, 1});
    PlaceSet SK = make_place_set(K, {mpz_class(2)});
    CHECK(is_s_unit(K->element({1, 1}), SK)); // unit
    CHECK(is_s_unit(K->gen(), SK));           // sqrt2
    CHECK_FALSE(is_s_unit(K->element({1, 2}), SK)); // norm -7
    // (1+sqrt2)^2 * sqrt2^{-3}
    FieldElement x = K->mul(K->pow(K->element({1, 1}), 2), K->pow(K->gen(), -3));
    CHECK(is_s_unit(x, SK));
}

TEST_CASE("h' and h'_p basics") {
    auto Q = NumberField::create({0, 1});
    auto inf = infinite_places(Q)[0];
    // h'(2) with d' = 1: max(h(2), log 2, 1) = 1
    RInt hp = height_h_prime(Q->from_rational(2), 1, *inf, P);
    CHECK(hp.mid_d() == doctest::Approx(1.0).epsilon(1e-12));
    // h'(8) = log 8
    RInt hp8 = height_h_prime(Q->from_rational(8), 1, *inf, P);
    CHECK(hp8.mid_d() == doctest::Approx(std::log(8)).epsilon(1e-12));
    // h'_p floor term: f' log p / d'
    RInt hpp = height_hp_prime(Q->one(), 1, 2, mpz_class(5), 1, *inf, P);
    CHECK(hpp.mid_d() == doctest::Approx(std::log(5)).epsilon(1e-12));
}
