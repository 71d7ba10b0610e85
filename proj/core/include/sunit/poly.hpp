#ifndef SUNIT_POLY_HPP
#define SUNIT_POLY_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "sunit/arith.hpp"

namespace sunit {

// dense univariate polynomials, constant term first, no trailing zeros
using QPoly = std::vector<mpq_class>;
using ZPoly = std::vector<mpz_class>;

long p_deg(const QPoly& f); // deg(0) = -1
void p_normalize(QPoly& f);
QPoly p_add(const QPoly& a, const QPoly& b);
QPoly p_sub(const QPoly& a, const QPoly& b);
QPoly p_mul(const QPoly& a, const QPoly& b);
QPoly p_scale(const QPoly& a, const mpq_class& s);
// division with remainder; b != 0
std::pair<QPoly, QPoly> p_divmod(const QPoly& a, const QPoly& b);
QPoly p_gcd(QPoly a, QPoly b); // monic gcd
QPoly p_derivative(const QPoly& f);
mpq_class p_eval(const QPoly& f, const mpq_class& x);

ZPoly to_zpoly(const QPoly& f);          // requires integer coefficients
QPoly to_qpoly(const ZPoly& f);
mpz_class z_content(const ZPoly& f);

mpz_class resultant_z(const ZPoly& a, const ZPoly& b);
mpq_class resultant_q(const QPoly& a, const QPoly& b);
mpz_class discriminant_z(const ZPoly& f); // f monic
bool is_squarefree_q(const QPoly& f);

// ---- polynomials over F_p, p < 2^31 ----

struct FpPoly {
    uint64_t p = 0;
    std::vector<uint64_t> c; // constant first, no trailing zeros

    long deg() const { return (long)c.size() - 1; }
    void normalize();
};

FpPoly fp_from_z(const ZPoly& f, uint64_t p);
FpPoly fp_add(const FpPoly& a, const FpPoly& b);
FpPoly fp_sub(const FpPoly& a, const FpPoly& b);
FpPoly fp_mul(const FpPoly& a, const FpPoly& b);
std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b);
FpPoly fp_gcd(FpPoly a, FpPoly b); // monic
FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod);
FpPoly fp_derivative(const FpPoly& f);
bool fp_is_squarefree(const FpPoly& f);

// full factorization into monic irreducibles with multiplicities
std::vector<std::pair<FpPoly, unsigned>> fp_factor(const FpPoly& f);
// roots in F_p (for split-prime detection); f need not be squarefree
std::vector<uint64_t> fp_roots(const FpPoly& f);

// ---- Hensel lifting ----

// given monic f over Z and pairwise coprime monic factors of f mod p,
// lift to monic factors of f modulo p^k (returned coefficients in [0, p^k))
std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors,
                               uint64_t p, unsigned k);

// ---- factorization over Z (monic input) ----

std::vector<ZPoly> factor_z_monic(const ZPoly& f);
bool is_irreducible_z(const ZPoly& f);

// ---- real root machinery (exact) ----

// isolating intervals (lo, hi] for the real roots of a squarefree f, exact
// rational endpoints, sorted ascending
std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const QPoly& f);
int sturm_count(const QPoly& f, const mpq_class& a, const mpq_class& b);

} // namespace sunit

#endif
