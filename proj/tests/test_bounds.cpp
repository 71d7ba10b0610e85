#include <cmath>

#include <doctest.h>

#include "sunit/bounds.hpp"

using namespace sunit;

static const long P = 96;

TEST_CASE("bw_constant closed form") {
    // C(1,1) = 18 * 3! * 2^3 * 32^4 * log(4)
    RInt c = bw_constant(1, 1, P);
    double expect = 18.0 * 6 * 8 * std::pow(32.0, 4) * std::log(4.0);
    CHECK(c.mid_d() == doctest::Approx(expect).epsilon(1e-12));
    // monotone in both arguments
    for (long t = 1; t <= 5; ++t)
        for (long d = 1; d <= 5; ++d) {
            CHECK(bw_constant(t + 1, d, P).lo_d() > bw_constant(t, d, P).hi_d() * 0.999);
            CHECK(bw_constant(t, d + 1, P).lo_d() > bw_constant(t, d, P).hi_d() * 0.999);
        }
    // evaluation at higher precision nests inside the lower-precision enclosure
    RInt c23 = bw_constant(2, 3, P);
    RInt c23hp = bw_constant(2, 3, 256);
    CHECK(c23hp.lo_d() >= c23.lo_d());
    CHECK(c23hp.hi_d() <= c23.hi_d());
    CHECK(c23.width_d() / c23.mid_d() < 1e-14);
}

TEST_CASE("yu constants case selection") {
    auto Q = NumberField::create({0, 1});

    // p = 2: k2 = 197142 * 36^n
    {
        auto P2 = primes_above(Q, 2)[0];
        std::vector<FieldElement> alphas = {Q->from_rational(-1)};
        auto yc = yu_constants(P2, alphas, 1, 2, P);
        CHECK(yc.k2.mid_d() == doctest::Approx(197142.0 * 36).epsilon(1e-12));
    }
    // p = 5 = 1 mod 4: k2 = 35009 * (45/2)^n
    {
        auto P5 = primes_above(Q, 5)[0];
        std::vector<FieldElement> alphas = {Q->from_rational(2), Q->from_rational(3)};
        auto yc = yu_constants(P5, alphas, 1, 2, P);
        CHECK(yc.k2.mid_d() == doctest::Approx(35009.0 * 22.5 * 22.5).epsilon(1e-12));
    }
    // p = 3 = 3 mod 4: k2 = 30760 * 25^n
    {
        auto P3 = primes_above(Q, 3)[0];
        std::vector<FieldElement> alphas = {Q->from_rational(2)};
        auto yc = yu_constants(P3, alphas, 1, 2, P);
        CHECK(yc.k2.mid_d() == doctest::Approx(30760.0 * 25).epsilon(1e-12));
        // k5 = 2 log D with D = 2 d' here
        CHECK(yc.k5.mid_d() == doctest::Approx(2 * std::log(2.0)).epsilon(1e-12));
        // requires units at p
        CHECK_THROWS_AS(yu_constants(P3, {Q->from_rational(3)}, 1, 2, P), NotAUnitAtP);
    }
}

TEST_CASE("pdw_solve against bracketed fixed points") {
    // a = 0, h = 1, b = 10: bound 2*10*log(10) ~ 46.05; fixed point ~ 35.77
    RInt bound = pdw_solve(RInt::exact(0L, P), RInt::exact(10L, P), RInt::exact(1L, P), P);
    CHECK(bound.mid_d() == doctest::Approx(46.0517).epsilon(1e-4));
    double lo = 30, hi = 40;
    for (int i = 0; i < 80; ++i) {
        double mid = (lo + hi) / 2;
        if (mid - 10 * std::log(mid) < 0) lo = mid;
        else hi = mid;
    }
    CHECK(hi == doctest::Approx(35.7715).epsilon(1e-3));
    CHECK(bound.lo_d() >= hi - 1e-6);

    // a = 100, h = 1, b = 8: bound 2(100 + 8 log 8) ~ 233.3, root ~ 134.1
    RInt b2 = pdw_solve(RInt::exact(100L, P), RInt::exact(8L, P), RInt::exact(1L, P), P);
    CHECK(b2.mid_d() == doctest::Approx(2 * (100 + 8 * std::log(8.0))).epsilon(1e-9));
    double lo2 = 100, hi2 = 300;
    for (int i = 0; i < 80; ++i) {
        double mid = (lo2 + hi2) / 2;
        if (mid - 100 - 8 * std::log(mid) < 0) lo2 = mid;
        else hi2 = mid;
    }
    CHECK(hi2 == doctest::Approx(139.57).epsilon(1e-2));
    CHECK(b2.lo_d() >= hi2);

    // hypothesis boundary: b must exceed e^2
    RInt e2ok = RInt::exact(mpq_class(7389057, 1000000), P);
    CHECK_NOTHROW(pdw_solve(RInt::exact(0L, P), e2ok, RInt::exact(1L, P), P));
    RInt e2bad = RInt::exact(mpq_class(7389056, 1000000), P);
    CHECK_THROWS_AS(pdw_solve(RInt::exact(0L, P), e2bad, RInt::exact(1L, P), P),
                    HypothesisViolated);
}

TEST_CASE("pdw_solve dominates bracketed roots on random instances") {
    uint64_t seed = 99;
    auto rndd = [&](double lo, double hi) {
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        return lo + (double)(seed >> 11) / 9007199254740992.0 * (hi - lo);
    };
    int tested = 0;
    for (int i = 0; i < 300; ++i) {
        double a = rndd(0, 50), b = rndd(8, 1000);
        RInt bound(P);
        try {
            bound = pdw_solve(RInt::exact(mpq_class((long)(a * 1000), 1000), P),
                              RInt::exact(mpq_class((long)(b * 1000), 1000), P),
                              RInt::exact(1L, P), P);
        } catch (const HypothesisViolated&) {
            continue;
        }
        ++tested;
        double aa = (double)(long)(a * 1000) / 1000, bb = (double)(long)(b * 1000) / 1000;
        double lo = 1.001, hi = 1e9;
        for (int k = 0; k < 200; ++k) {
            double mid = std::sqrt(lo * hi);
            if (mid - aa - bb * std::log(mid) < 0) lo = mid;
            else hi = mid;
        }
        CHECK(bound.hi_d() >= hi * (1 - 1e-9));
    }
    CHECK(tested > 250);
}

TEST_CASE("c1_c3 closed form on K = Q") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S = make_place_set(Q, {mpz_class(2)});
    SUnitBasis B{Q, Q->from_rational(-1), 2, {Q->from_rational(2)}};
    auto c = c1_c3(S, B, P);
    double log2 = std::log(2.0);
    CHECK(c[0].mid_d() == doctest::Approx(1 / log2).epsilon(1e-12)); // c1 = 1/log2
    CHECK(c[1].mid_d() == doctest::Approx(log2).epsilon(1e-12));     // c2
    CHECK(c[2].mid_d() == doctest::Approx(0.9999999 * log2).epsilon(1e-9));
    // replacing rho1 = 2 by 4 halves the log-reciprocal: c1 shrinks accordingly
    SUnitBasis B2{Q, Q->from_rational(-1), 2, {Q->from_rational(4)}};
    auto c_2 = c1_c3(S, B2, P);
    CHECK(c_2[0].mid_d() == doctest::Approx(1 / std::log(4.0)).epsilon(1e-12));
}

TEST_CASE("initial bound on Q with S = {2}") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S = make_place_set(Q, {mpz_class(2)});
    SUnitBasis B{Q, Q->from_rational(-1), 2, {Q->from_rational(2)}};
    BoundConstants bc = initial_bound(S, B, P);
    CHECK(bc.B_init_int >= 4);
    CHECK(bc.K0.hi_d() > 1e6); // Baker-regime magnitude
    CHECK(bc.K0.hi_d() < 1e30);
    CHECK(bc.K1.hi_d() > 100);
    CHECK(bc.B_init.hi_d() >= bc.K0.hi_d() * 0.999);
    CHECK(bc.B_init.hi_d() >= bc.K1.hi_d() * 0.999);
    for (auto& r : bc.places) CHECK(bc.B_init.hi_d() >= r.K_value * 0.999);
}

TEST_CASE("initial bound on Q(sqrt2) with S above 2") {
    auto K = NumberField::create({-2, 0, 1});
    PlaceSet S = make_place_set(K, {mpz_class(2)});
    SUnitBasis B{K, K->from_rational(-1), 2, {K->element({1, 1}), K->element({0, 1})}};
    BoundConstants bc = initial_bound(S, B, P);
    CHECK(bc.K0.hi_d() > 1e6);
    CHECK(bc.B_init_int > 0);
    // outward rounding stability: doubled precision never grows any constant
    BoundConstants bc2 = initial_bound(S, B, 2 * P);
    CHECK(bc2.c1.hi_d() <= bc.c1.hi_d() * (1 + 1e-12));
    CHECK(bc2.K0.hi_d() <= bc.K0.hi_d() * (1 + 1e-12));
    CHECK(bc2.K1.hi_d() <= bc.K1.hi_d() * (1 + 1e-12));
    CHECK(bc2.B_init.hi_d() <= bc.B_init.hi_d() * (1 + 1e-12));
    // and the refined value never crosses below the enclosure used
    CHECK(bc2.c1.lo_d() <= bc.c1.hi_d());
}

TEST_CASE("K0 vacuous without finite places") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S;
    S.K = Q;
    S.inf = infinite_places(Q);
    SUnitBasis B{Q, Q->from_rational(-1), 2, {}};
    RInt c3 = RInt::exact(mpq_class(1, 2), P);
    auto [K0, reps] = K0_bound(S, B, c3, P);
    CHECK(K0.hi_d() == 0);
    CHECK(reps.empty());
}
