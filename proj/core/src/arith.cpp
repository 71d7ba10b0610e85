#include "sunit/arith.hpp"

#include <algorithm>

namespace sunit {

uint64_t mulmod(uint64_t a, uint64_t b, uint64_t m) {
    return (uint64_t)((__uint128_t)a * b % m);
}

uint64_t powmod(uint64_t a, uint64_t e, uint64_t m) {
    uint64_t r = 1 % m;
    a %= m;
    while (e) {
        if (e & 1) r = mulmod(r, a, m);
        a = mulmod(a, a, m);
        e >>= 1;
    }
    return r;
}

uint64_t invmod(uint64_t a, uint64_t m) {
    int64_t t = 0, nt = 1;
    int64_t r = (int64_t)m, nr = (int64_t)(a % m);
    while (nr != 0) {
        int64_t q = r / nr;
        std::swap(t -= q * nt, nt);
        std::swap(r -= q * nr, nr);
    }
    if (r != 1) throw SunitError("invmod: arguments not coprime");
    if (t < 0) t += (int64_t)m;
    return (uint64_t)t;
}

bool is_prime_u64(uint64_t n) {
    if (n < 2) return false;
    for (uint64_t p : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        if (n % p == 0) return n == p;
    }
    uint64_t d = n - 1;
    int s = 0;
    while ((d & 1) == 0) { d >>= 1; ++s; }
    // these witnesses decide primality for all n < 3.3 * 10^24
    for (uint64_t a : {2ull, 3ull, 5ull, 7ull, 11ull, 13ull, 17ull, 19ull, 23ull, 29ull, 31ull, 37ull}) {
        uint64_t x = powmod(a, d, n);
        if (x == 1 || x == n - 1) continue;
        bool composite = true;
        for (int i = 0; i < s - 1; ++i) {
            x = mulmod(x, x, n);
            if (x == n - 1) { composite = false; break; }
        }
        if (composite) return false;
    }
    return true;
}

uint64_t next_prime_u64(uint64_t n) {
    uint64_t c = n + 1;
    if (c <= 2) return 2;
    if ((c & 1) == 0) ++c;
    while (!is_prime_u64(c)) c += 2;
    return c;
}

bool is_prime(const mpz_class& n) {
    if (n < 2) return false;
    if (n.fits_ulong_p() && n.get_ui() <= UINT32_MAX) return is_prime_u64(n.get_ui());
    return mpz_probab_prime_p(n.get_mpz_t(), 40) > 0;
}

namespace {

mpz_class pollard_rho(const mpz_class& n) {
    if (n % 2 == 0) return 2;
    gmp_randclass rng(gmp_randinit_default);
    rng.seed(0xD1E5EED);
    while (true) {
        mpz_class x = rng.get_z_range(n - 2) + 2;
        mpz_class y = x, c = rng.get_z_range(n - 1) + 1, d = 1;
        while (d == 1) {
            x = (x * x + c) % n;
            y = (y * y + c) % n;
            y = (y * y + c) % n;
            mpz_class diff = x - y;
            if (diff == 0) break;
            d = gcd(abs(diff), n);
        }
        if (d != 1 && d != n) return d;
    }
}

void factor_rec(mpz_class n, std::map<mpz_class, unsigned>& out) {
    if (n == 1) return;
    if (is_prime(n)) { out[n]++; return; }
    mpz_class d = pollard_rho(n);
    factor_rec(d, out);
    factor_rec(n / d, out);
}

} // namespace

std::map<mpz_class, unsigned> factor(const mpz_class& n_in) {
    if (n_in == 0) throw SunitError("factor(0)");
    std::map<mpz_class, unsigned> out;
    mpz_class n = abs(n_in);
    for (uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47}) {
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { out[mpz_class((unsigned long)p)]++; n /= (unsigned long)p; }
    }
    // trial divide a little further before handing to rho
    for (uint64_t p = 53; p < 5000 && n > 1; p += 2) {
        if (!is_prime_u64(p)) continue;
        while (mpz_divisible_ui_p(n.get_mpz_t(), p)) { out[mpz_class((unsigned long)p)]++; n /= (unsigned long)p; }
    }
    if (n > 1) factor_rec(n, out);
    return out;
}

long ord_p_int(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw SunitError("ord_p_int(0)");
    mpz_class m = n;
    long v = 0;
    while (mpz_divisible_p(m.get_mpz_t(), p.get_mpz_t())) { m /= p; ++v; }
    return v;
}

long ord_p_rat(const mpq_class& x, const mpz_class& p) {
    if (x == 0) throw SunitError("ord_p_rat(0)");
    return ord_p_int(x.get_num(), p) - ord_p_int(x.get_den(), p);
}

mpz_class pow_mpz(const mpz_class& b, unsigned long e) {
    mpz_class r;
    mpz_pow_ui(r.get_mpz_t(), b.get_mpz_t(), e);
    return r;
}

mpz_class floor_mpq(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

mpz_class ceil_mpq(const mpq_class& q) {
    mpz_class r;
    mpz_cdiv_q(r.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
    return r;
}

mpz_class round_mpq(const mpq_class& q) {
    return floor_mpq(q + mpq_class(1, 2));
}

long centered_mod(long r, long m) {
    long x = r % m;
    if (x < 0) x += m;
    if (2 * x > m) x -= m;
    return x;
}

std::pair<mpz_class, mpz_class> crt_pair(const mpz_class& r1, const mpz_class& m1,
                                         const mpz_class& r2, const mpz_class& m2) {
    mpz_class g, s, t;
    mpz_gcdext(g.get_mpz_t(), s.get_mpz_t(), t.get_mpz_t(), m1.get_mpz_t(), m2.get_mpz_t());
    if ((r2 - r1) % g != 0) throw SunitError("crt_pair: inconsistent congruences");
    mpz_class l = m1 / g * m2;
    mpz_class x = r1 + m1 * ((r2 - r1) / g * s % (m2 / g));
    x %= l;
    if (x < 0) x += l;
    return {x, l};
}

std::vector<uint64_t> primes_below(uint64_t n) {
    std::vector<bool> comp(n, false);
    std::vector<uint64_t> out;
    for (uint64_t i = 2; i < n; ++i) {
        if (comp[i]) continue;
        out.push_back(i);
        for (uint64_t j = i * i; j < n; j += i) comp[j] = true;
    }
    return out;
}

} // namespace sunit
