#include <doctest.h>

#include "sunit/linalg.hpp"

using namespace sunit;

TEST_CASE("rational solve and inverse") {
    QMat a = {{1, 2}, {3, 5}};
    auto inv = q_inverse(a);
    REQUIRE(inv.has_value());
    QMat prod = q_mul(a, *inv);
    CHECK(prod[0][0] == 1);
    CHECK(prod[0][1] == 0);
    CHECK(prod[1][1] == 1);

    auto x = q_solve(a, {mpq_class(1), mpq_class(2)});
    REQUIRE(x.has_value());
    CHECK((*x)[0] == mpq_class(-1));
    CHECK((*x)[1] == mpq_class(1));

    CHECK(q_det(a) == -1);
    CHECK(q_rank(a) == 2);
    CHECK(q_rank({{1, 2}, {2, 4}}) == 1);
}

TEST_CASE("kernel") {
    QMat a = {{1, 2, 3}};
    auto k = q_kernel(a);
    CHECK(k.size() == 2);
    for (const auto& v : k) {
        mpq_class dot = 0;
        for (size_t i = 0; i < 3; ++i) dot += a[0][i] * v[i];
        CHECK(dot == 0);
    }
}

TEST_CASE("column HNF") {
    // columns (4,0),(1,1): hnf should have pivots, A*U = [H|0]
    ZMat a = {{4, 1}, {0, 1}};
    ZMat u;
    ZMat h = hnf_columns(a, &u);
    REQUIRE(h.size() == 2);
    REQUIRE(h[0].size() == 2);
    // verify A*U equals [H | zero-cols]
    ZMat au = z_mul(a, u);
    for (size_t i = 0; i < 2; ++i)
        for (size_t j = 0; j < 2; ++j) CHECK(au[i][j] == h[i][j]);
    // determinant of the lattice preserved: |det H| == |det A| = 4
    mpz_class det = h[0][0] * h[1][1] - h[0][1] * h[1][0];
    CHECK(abs(det) == 4);
}

TEST_CASE("integer kernel") {
    ZMat a = {{2, -3, 1}};
    ZMat k = z_kernel(a);
    REQUIRE(!k.empty());
    size_t kd = k[0].size();
    CHECK(kd == 2);
    for (size_t j = 0; j < kd; ++j) {
        mpz_class dot = 0;
        for (size_t i = 0; i < 3; ++i) dot += a[0][i] * k[i][j];
        CHECK(dot == 0);
    }
}

TEST_CASE("interval determinant and inverse") {
    long prec = 96;
    std::vector<std::vector<RInt>> m = {
        {RInt::exact(2L, prec), RInt::exact(1L, prec)},
        {RInt::exact(1L, prec), RInt::exact(1L, prec)}};
    RInt d = ri_det(m);
    CHECK(d.lo_d() <= 1.0);
    CHECK(d.hi_d() >= 1.0);
    CHECK(!d.contains_zero());

    auto inv = ri_inverse(m);
    REQUIRE(inv.has_value());
    CHECK((*inv)[0][0].lo_d() <= 1.0);
    CHECK((*inv)[0][0].hi_d() >= 1.0);
    CHECK((*inv)[0][1].hi_d() >= -1.0);

    // singular enclosure
    std::vector<std::vector<RInt>> s = {
        {RInt::exact(1L, prec), RInt::exact(2L, prec)},
        {RInt::exact(2L, prec), RInt::exact(4L, prec)}};
    CHECK(ri_det(s).contains_zero());
    CHECK(!ri_inverse(s).has_value());
}
