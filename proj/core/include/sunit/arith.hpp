#ifndef SUNIT_ARITH_HPP
#define SUNIT_ARITH_HPP

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <gmpxx.h>

namespace sunit {

struct SunitError : std::runtime_error {
    explicit SunitError(const std::string& what) : std::runtime_error(what) {}
};

// ---- machine-word modular arithmetic (moduli < 2^62) ----

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m);
uint64_t powmod(uint64_t a, uint64_t e, uint64_t m);
uint64_t invmod(uint64_t a, uint64_t m); // m prime or gcd(a,m)=1
bool is_prime_u64(uint64_t n);           // deterministic Miller-Rabin
uint64_t next_prime_u64(uint64_t n);     // smallest prime > n

// ---- arbitrary precision ----

bool is_prime(const mpz_class& n);
// full factorization, trial division + Pollard rho; exponents > 0
std::map<mpz_class, unsigned> factor(const mpz_class& n);
long ord_p_int(const mpz_class& n, const mpz_class& p);   // n != 0
long ord_p_rat(const mpq_class& x, const mpz_class& p);   // x != 0

mpz_class pow_mpz(const mpz_class& b, unsigned long e);

// round q to nearest integer, ties toward +infinity
mpz_class round_mpq(const mpq_class& q);
mpz_class floor_mpq(const mpq_class& q);
mpz_class ceil_mpq(const mpq_class& q);

// centered representative of r mod m in (-m/2, m/2]
long centered_mod(long r, long m);

// x = r_i mod m_i combined; returns (r, lcm); moduli need not be coprime.
// throws SunitError if the congruences are inconsistent.
std::pair<mpz_class, mpz_class> crt_pair(const mpz_class& r1, const mpz_class& m1,
                                         const mpz_class& r2, const mpz_class& m2);

std::vector<uint64_t> primes_below(uint64_t n);

} // namespace sunit

#endif
