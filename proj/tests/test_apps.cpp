#include <doctest.h>

#include "sunit/apps.hpp"

using namespace sunit;

TEST_CASE("generator finder on Q") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S = make_place_set(Q, {mpz_class(2), mpz_class(3)});
    SUnitBasis B = find_generators_bruteforce(S);
    CHECK(B.w == 2);
    CHECK(B.rho0 == Q->from_rational(-1));
    REQUIRE(B.rank() == 2);
    long v2 = 0, v3 = 0;
    for (auto& g : B.rho) {
        v2 += std::labs(S.fin[0]->ord(g));
        v3 += std::labs(S.fin[1]->ord(g));
        CHECK(is_s_unit(g, S));
    }
    CHECK(v2 >= 1);
    CHECK(v3 >= 1);
}

TEST_CASE("generator finder on Q(sqrt2) above 2") {
    auto K = NumberField::create({-2, 0, 1});
    PlaceSet S = make_place_set(K, {mpz_class(2)});
    SUnitBasis B = find_generators_bruteforce(S);
    CHECK(B.w == 2);
    REQUIRE(B.rank() == 2);
    long total_val = 0;
    int units = 0;
    for (auto& g : B.rho) {
        long v = S.fin[0]->ord(g);
        total_val += std::labs(v);
        if (v == 0) {
            ++units;
            mpq_class n = K->norm(g);
            CHECK((n == 1 || n == -1));
        }
    }
    CHECK(total_val == 1); // HNF-normalized uniformizer
    CHECK(units == 1);
}

TEST_CASE("solve on Q(sqrt2) matches an independent scan below 30") {
    auto K = NumberField::create({-2, 0, 1});
    PlaceSet S = make_place_set(K, {mpz_class(2)});
    SUnitBasis B = find_generators_bruteforce(S);
    SolveResult r = solve(S, B);
    for (auto& s : r.solutions) {
        CHECK(K->add(s.tau1, s.tau2) == K->one());
        CHECK(is_s_unit(s.tau1, S));
        CHECK(is_s_unit(s.tau2, S));
    }
    long found = 0;
    for (long a0 = 0; a0 < 2; ++a0)
        for (long a1 = -30; a1 <= 30; ++a1)
            for (long a2 = -30; a2 <= 30; ++a2) {
                FieldElement tau = phi_rho(B, {a0, {a1, a2}});
                FieldElement eta = K->sub(K->one(), tau);
                if (!eta.is_zero() && is_s_unit(eta, S)) ++found;
            }
    long ordered = 0;
    for (auto& s : r.solutions) ordered += (s.tau1 == s.tau2) ? 1 : 2;
    CHECK(ordered == found);
}

TEST_CASE("fermat check hypotheses and verdicts") {
    auto K = NumberField::create({-2, 0, 1});
    PlaceSet S = make_place_set(K, {mpz_class(2)});
    SUnitBasis B = find_generators_bruteforce(S);
    SolveResult r = solve(S, B);
    FermatCheckResult fc = fermat_check(S, r.solutions);
    CHECK(fc.witness.size() == r.solutions.size());
    CHECK(fc.satisfied);

    auto Ki = NumberField::create({1, 0, 1});
    PlaceSet Si = make_place_set(Ki, {mpz_class(2)});
    CHECK_THROWS_AS(fermat_check(Si, {}), HypothesisNotMet);

    // synthetic violation at the only T-place: |ord(2^9)| = 18 > 4 ord(2) = 8
    SolutionPair fake;
    fake.tau1 = K->from_rational(mpz_class(1) << 9);
    fake.tau2 = K->from_rational(mpq_class(1));
    FermatCheckResult bad = fermat_check(S, {fake});
    CHECK_FALSE(bad.satisfied);
}

TEST_CASE("job json round trip") {
    JobSpec job;
    job.field = {1, -3, -1, 1};
    job.s_primes = {2};
    job.mode = "solve";
    job.bound = 40;
    JobSpec back = parse_job(job_to_json(job));
    CHECK(back.field == job.field);
    CHECK(back.s_primes == job.s_primes);
    CHECK(back.mode == "solve");
    CHECK(back.bound == 40);

    job.has_generators = true;
    job.w = 2;
    job.rho0 = {mpq_class(-1), 0, 0, 0};
    job.rho = {{mpq_class(0), 1, 0, 0}};
    JobSpec back2 = parse_job(job_to_json(job));
    CHECK(back2.has_generators);
    CHECK(back2.w == 2);
    CHECK(back2.rho0 == job.rho0);
    CHECK(back2.rho == job.rho);
}

TEST_CASE("prepare_job validates supplied generators") {
    JobSpec job;
    job.field = {-2, 0, 1};
    job.s_primes = {mpz_class(2)};
    job.has_generators = true;
    job.w = 2;
    job.rho0 = {mpq_class(-1), 0};
    job.rho = {{1, 1}, {0, 1}};
    PreparedJob pj = prepare_job(job);
    CHECK(pj.basis.rank() == 2);

    job.w = 4; // wrong torsion order: rejected, never repaired
    CHECK_THROWS(prepare_job(job));
    job.w = 2;
    job.rho = {{1, 1}, {1, 2}}; // non-S-unit
    CHECK_THROWS(prepare_job(job));
    job.rho = {{1, 1}}; // wrong rank
    CHECK_THROWS(prepare_job(job));
}

TEST_CASE("bound report structure") {
    auto Q = NumberField::create({0, 1});
    PlaceSet S2 = make_place_set(Q, {mpz_class(2)});
    SUnitBasis B2{Q, Q->from_rational(-1), 2, {Q->from_rational(2)}};
    BoundReport rep = bound_report(S2, B2);
    CHECK(rep.has_b2);
    CHECK(rep.b2.B_final <= rep.b1.B_final);
    CHECK(rep.savings_ratio >= 1.0);

    PlaceSet S23 = make_place_set(Q, {mpz_class(2), mpz_class(3)});
    SUnitBasis B23{Q, Q->from_rational(-1), 2, {Q->from_rational(2), Q->from_rational(3)}};
    BoundReport rep2 = bound_report(S23, B23);
    CHECK_FALSE(rep2.has_b2); // |S_fin| = 2: B2 not available
    std::string j = bound_report_to_json(rep2);
    CHECK(j.find("n/a") != std::string::npos);
}

TEST_CASE("rn rejects bad q") {
    CHECK_THROWS(ramanujan_nagell(3));
    CHECK_THROWS(ramanujan_nagell(2));
    CHECK_THROWS(ramanujan_nagell(9));
}
