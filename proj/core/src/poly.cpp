#include "sunit/poly.hpp"

#include <algorithm>

#include "sunit/linalg.hpp"

namespace sunit {

long p_deg(const QPoly& f) { return (long)f.size() - 1; }

void p_normalize(QPoly& f) {
    while (!f.empty() && f.back() == 0) f.pop_back();
}

QPoly p_add(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] += b[i];
    p_normalize(r);
    return r;
}

QPoly p_sub(const QPoly& a, const QPoly& b) {
    QPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] += a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] -= b[i];
    p_normalize(r);
    return r;
}

QPoly p_mul(const QPoly& a, const QPoly& b) {
    if (a.empty() || b.empty()) return {};
    QPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] += a[i] * b[j];
    }
    p_normalize(r);
    return r;
}

QPoly p_scale(const QPoly& a, const mpq_class& s) {
    if (s == 0) return {};
    QPoly r = a;
    for (auto& x : r) x *= s;
    return r;
}

std::pair<QPoly, QPoly> p_divmod(const QPoly& a, const QPoly& b) {
    if (b.empty()) throw SunitError("p_divmod by zero");
    QPoly r = a, q;
    long db = p_deg(b);
    if (p_deg(a) >= db) q.assign(a.size() - b.size() + 1, 0);
    mpq_class lead = 1 / b.back();
    while (p_deg(r) >= db) {
        mpq_class f = r.back() * lead;
        long shift = p_deg(r) - db;
        q[shift] = f;
        for (long i = 0; i <= db; ++i) r[shift + i] -= f * b[i];
        p_normalize(r);
    }
    p_normalize(q);
    return {q, r};
}

QPoly p_gcd(QPoly a, QPoly b) {
    p_normalize(a);
    p_normalize(b);
    while (!b.empty()) {
        auto [q, r] = p_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.empty()) {
        mpq_class inv = 1 / a.back();
        for (auto& x : a) x *= inv;
    }
    return a;
}

QPoly p_derivative(const QPoly& f) {
    if (f.size() <= 1) return {};
    QPoly r(f.size() - 1);
    for (size_t i = 1; i < f.size(); ++i) r[i - 1] = f[i] * (long)i;
    p_normalize(r);
    return r;
}

mpq_class p_eval(const QPoly& f, const mpq_class& x) {
    mpq_class r = 0;
    for (size_t i = f.size(); i-- > 0;) r = r * x + f[i];
    return r;
}

ZPoly to_zpoly(const QPoly& f) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        if (f[i].get_den() != 1) throw SunitError("to_zpoly: non-integer coefficient");
        r[i] = f[i].get_num();
    }
    return r;
}

QPoly to_qpoly(const ZPoly& f) {
    QPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) r[i] = f[i];
    return r;
}

mpz_class z_content(const ZPoly& f) {
    mpz_class g = 0;
    for (const auto& c : f) g = gcd(g, c);
    return g;
}

mpq_class resultant_q(const QPoly& a, const QPoly& b) {
    long m = p_deg(a), n = p_deg(b);
    if (m < 0 || n < 0) return 0;
    if (m == 0) {
        mpq_class r;
        mpz_pow_ui(r.get_num().get_mpz_t(), a[0].get_num().get_mpz_t(), n);
        mpz_pow_ui(r.get_den().get_mpz_t(), a[0].get_den().get_mpz_t(), n);
        r.canonicalize();
        return r;
    }
    if (n == 0) {
        mpq_class r;
        mpz_pow_ui(r.get_num().get_mpz_t(), b[0].get_num().get_mpz_t(), m);
        mpz_pow_ui(r.get_den().get_mpz_t(), b[0].get_den().get_mpz_t(), m);
        r.canonicalize();
        return r;
    }
    // Sylvester determinant; degrees here are small
    size_t dim = (size_t)(m + n);
    QMat s(dim, QVec(dim, 0));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) s[(size_t)i][(size_t)(i + j)] = a[(size_t)(m - j)];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) s[(size_t)(n + i)][(size_t)(i + j)] = b[(size_t)(n - j)];
    return q_det(s);
}

mpz_class resultant_z(const ZPoly& a, const ZPoly& b) {
    mpq_class r = resultant_q(to_qpoly(a), to_qpoly(b));
    if (r.get_den() != 1) throw SunitError("resultant_z: non-integer result");
    return r.get_num();
}

mpz_class discriminant_z(const ZPoly& f) {
    long n = (long)f.size() - 1;
    if (n < 1) throw SunitError("discriminant of constant");
    if (f.back() != 1) throw SunitError("discriminant_z expects monic input");
    QPoly fq = to_qpoly(f);
    mpq_class res = resultant_q(fq, p_derivative(fq));
    mpz_class r = res.get_num();
    if (res.get_den() != 1) throw SunitError("discriminant_z: non-integer resultant");
    if (((n * (n - 1) / 2) % 2) != 0) r = -r;
    return r;
}

bool is_squarefree_q(const QPoly& f) {
    return p_deg(p_gcd(f, p_derivative(f))) <= 0;
}

// ---- F_p ----

void FpPoly::normalize() {
    while (!c.empty() && c.back() == 0) c.pop_back();
}

FpPoly fp_from_z(const ZPoly& f, uint64_t p) {
    FpPoly r;
    r.p = p;
    r.c.resize(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        mpz_class m = f[i] % (long)p;
        if (m < 0) m += (long)p;
        r.c[i] = m.get_ui();
    }
    r.normalize();
    return r;
}

FpPoly fp_mul(const FpPoly& a, const FpPoly& b) {
    FpPoly r;
    r.p = a.p;
    if (a.c.empty() || b.c.empty()) return r;
    r.c.assign(a.c.size() + b.c.size() - 1, 0);
    for (size_t i = 0; i < a.c.size(); ++i) {
        if (a.c[i] == 0) continue;
        for (size_t j = 0; j < b.c.size(); ++j)
            r.c[i + j] = (r.c[i + j] + mulmod(a.c[i], b.c[j], a.p)) % a.p;
    }
    r.normalize();
    return r;
}

FpPoly fp_add(const FpPoly& a, const FpPoly& b) {
    FpPoly r;
    r.p = a.p;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = (r.c[i] + b.c[i]) % a.p;
    r.normalize();
    return r;
}

FpPoly fp_sub(const FpPoly& a, const FpPoly& b) {
    FpPoly r;
    r.p = a.p;
    r.c.assign(std::max(a.c.size(), b.c.size()), 0);
    for (size_t i = 0; i < a.c.size(); ++i) r.c[i] = a.c[i];
    for (size_t i = 0; i < b.c.size(); ++i) r.c[i] = (r.c[i] + a.p - b.c[i]) % a.p;
    r.normalize();
    return r;
}

std::pair<FpPoly, FpPoly> fp_divmod(const FpPoly& a, const FpPoly& b) {
    if (b.c.empty()) throw SunitError("fp_divmod by zero");
    FpPoly q, r = a;
    q.p = a.p;
    r.p = a.p;
    long db = b.deg();
    if (a.deg() >= db) q.c.assign(a.c.size() - b.c.size() + 1, 0);
    uint64_t lead = invmod(b.c.back(), a.p);
    while (r.deg() >= db) {
        uint64_t f = mulmod(r.c.back(), lead, a.p);
        long shift = r.deg() - db;
        q.c[(size_t)shift] = f;
        for (long i = 0; i <= db; ++i) {
            uint64_t sub = mulmod(f, b.c[(size_t)i], a.p);
            uint64_t& tgt = r.c[(size_t)(shift + i)];
            tgt = (tgt + a.p - sub) % a.p;
        }
        r.normalize();
    }
    q.normalize();
    return {q, r};
}

FpPoly fp_gcd(FpPoly a, FpPoly b) {
    while (!b.c.empty()) {
        auto [q, r] = fp_divmod(a, b);
        a = std::move(b);
        b = std::move(r);
    }
    if (!a.c.empty()) {
        uint64_t inv = invmod(a.c.back(), a.p);
        for (auto& x : a.c) x = mulmod(x, inv, a.p);
    }
    return a;
}

FpPoly fp_powmod(const FpPoly& base, const mpz_class& e, const FpPoly& mod) {
    FpPoly r;
    r.p = base.p;
    r.c = {1};
    FpPoly b = fp_divmod(base, mod).second;
    mpz_class k = e;
    while (k > 0) {
        if (mpz_odd_p(k.get_mpz_t())) r = fp_divmod(fp_mul(r, b), mod).second;
        b = fp_divmod(fp_mul(b, b), mod).second;
        k >>= 1;
    }
    return r;
}

FpPoly fp_derivative(const FpPoly& f) {
    FpPoly r;
    r.p = f.p;
    if (f.c.size() <= 1) return r;
    r.c.resize(f.c.size() - 1);
    for (size_t i = 1; i < f.c.size(); ++i) r.c[i - 1] = mulmod(f.c[i], i % f.p, f.p);
    r.normalize();
    return r;
}

bool fp_is_squarefree(const FpPoly& f) {
    return fp_gcd(f, fp_derivative(f)).deg() <= 0;
}

namespace {

FpPoly fp_monic(FpPoly f) {
    if (!f.c.empty() && f.c.back() != 1) {
        uint64_t inv = invmod(f.c.back(), f.p);
        for (auto& x : f.c) x = mulmod(x, inv, f.p);
    }
    return f;
}

FpPoly fp_x(uint64_t p) {
    FpPoly r;
    r.p = p;
    r.c = {0, 1};
    return r;
}

// equal-degree splitting of a squarefree product of degree-d irreducibles
void fp_edf(const FpPoly& f, long d, std::vector<FpPoly>& out, uint64_t& seed) {
    if (f.deg() == d) {
        out.push_back(fp_monic(f));
        return;
    }
    uint64_t p = f.p;
    while (true) {
        // deterministic pseudo-random trial element
        seed = seed * 6364136223846793005ull + 1442695040888963407ull;
        FpPoly a;
        a.p = p;
        a.c.resize((size_t)f.deg());
        uint64_t s = seed;
        for (auto& x : a.c) {
            s = s * 2862933555777941757ull + 3037000493ull;
            x = (s >> 16) % p;
        }
        a.normalize();
        if (a.deg() < 1) continue;
        FpPoly g = fp_gcd(a, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            fp_edf(g, d, out, seed);
            fp_edf(fp_divmod(f, g).first, d, out, seed);
            return;
        }
        FpPoly b;
        if (p == 2) {
            // trace map over F_2 (subtraction is addition here)
            b = fp_divmod(a, f).second;
            FpPoly t = b;
            for (long i = 1; i < d; ++i) {
                t = fp_divmod(fp_mul(t, t), f).second;
                b = fp_sub(b, t);
            }
        } else {
            mpz_class e = (pow_mpz(mpz_class((unsigned long)p), (unsigned long)d) - 1) / 2;
            b = fp_powmod(a, e, f);
            if (!b.c.empty()) b.c[0] = (b.c[0] + p - 1) % p; // b - 1
            b.normalize();
        }
        g = fp_gcd(b, f);
        if (g.deg() > 0 && g.deg() < f.deg()) {
            fp_edf(g, d, out, seed);
            fp_edf(fp_divmod(f, g).first, d, out, seed);
            return;
        }
    }
}

} // namespace

std::vector<std::pair<FpPoly, unsigned>> fp_factor(const FpPoly& f_in) {
    std::vector<std::pair<FpPoly, unsigned>> out;
    FpPoly f = fp_monic(f_in);
    uint64_t p = f.p;
    if (f.deg() <= 0) return out;

    // square-free decomposition by repeated gcd; handles p-th power parts
    std::vector<std::pair<FpPoly, unsigned>> sqfree; // (squarefree part, multiplicity)
    unsigned mult = 1;
    while (f.deg() > 0) {
        FpPoly d = fp_derivative(f);
        if (d.c.empty()) {
            // f is a p-th power: deflate x^p -> x
            FpPoly g;
            g.p = p;
            g.c.resize((size_t)(f.deg() / (long)p) + 1);
            for (size_t i = 0; i < g.c.size(); ++i) g.c[i] = f.c[i * p];
            f = g;
            mult *= (unsigned)p;
            continue;
        }
        FpPoly w = fp_gcd(f, d);
        FpPoly sf = fp_divmod(f, w).first; // product of distinct irreducibles
        unsigned e = 1;
        while (sf.deg() > 0) {
            FpPoly y = fp_gcd(sf, w);
            FpPoly factor_part = fp_divmod(sf, y).first; // factors with exact multiplicity e
            if (factor_part.deg() > 0) sqfree.push_back({factor_part, mult * e});
            sf = y;
            if (y.deg() > 0) w = fp_divmod(w, y).first;
            ++e;
        }
        f = w;
    }

    uint64_t seed = 0x5EEDF00Dull;
    for (auto& [g, e] : sqfree) {
        // distinct-degree then equal-degree splitting
        FpPoly rest = g;
        FpPoly h = fp_divmod(fp_x(p), rest).second;
        long d = 1;
        while (rest.deg() >= 2 * d) {
            h = fp_powmod(h, mpz_class((unsigned long)p), rest);
            FpPoly diff = fp_sub(h, fp_divmod(fp_x(p), rest).second);
            FpPoly gd = fp_gcd(diff, rest);
            if (gd.deg() > 0) {
                std::vector<FpPoly> irr;
                fp_edf(gd, d, irr, seed);
                for (auto& q : irr) out.push_back({q, e});
                rest = fp_divmod(rest, gd).first;
                h = fp_divmod(h, rest).second;
            }
            ++d;
        }
        if (rest.deg() > 0) out.push_back({fp_monic(rest), e});
    }
    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a.first.deg() != b.first.deg()) return a.first.deg() < b.first.deg();
        return a.first.c < b.first.c;
    });
    return out;
}

std::vector<uint64_t> fp_roots(const FpPoly& f_in) {
    FpPoly f = fp_monic(f_in);
    uint64_t p = f.p;
    std::vector<uint64_t> roots;
    if (f.deg() <= 0) return roots;
    if (p < 64) {
        for (uint64_t x = 0; x < p; ++x) {
            uint64_t v = 0;
            for (size_t i = f.c.size(); i-- > 0;) v = (mulmod(v, x, p) + f.c[i]) % p;
            if (v == 0) roots.push_back(x);
        }
        return roots;
    }
    // keep only the split part: gcd(x^p - x, f)
    FpPoly xp = fp_powmod(fp_x(p), mpz_class((unsigned long)p), f);
    FpPoly split = fp_gcd(fp_sub(xp, fp_x(p)), f);
    if (split.deg() <= 0) return roots;
    // recursive splitting with shifted Legendre criterion
    uint64_t seed = 0xabcdef12345ull;
    std::vector<FpPoly> stack = {split};
    while (!stack.empty()) {
        FpPoly g = stack.back();
        stack.pop_back();
        if (g.deg() == 1) {
            roots.push_back((p - g.c[0]) % p);
            continue;
        }
        while (true) {
            seed = seed * 6364136223846793005ull + 1442695040888963407ull;
            uint64_t a = (seed >> 11) % p;
            // h = (x + a)^((p-1)/2) - 1 mod g
            FpPoly xa = fp_x(p);
            xa.c[0] = a;
            FpPoly h = fp_powmod(xa, mpz_class((unsigned long)((p - 1) / 2)), g);
            if (!h.c.empty()) h.c[0] = (h.c[0] + p - 1) % p;
            h.normalize();
            FpPoly d = fp_gcd(h, g);
            if (d.deg() > 0 && d.deg() < g.deg()) {
                stack.push_back(d);
                stack.push_back(fp_divmod(g, d).first);
                break;
            }
        }
    }
    std::sort(roots.begin(), roots.end());
    return roots;
}

// ---- Hensel ----

namespace {

// all coefficient arithmetic mod m, coefficients normalized into [0, m)
ZPoly zp_mod(const ZPoly& f, const mpz_class& m) {
    ZPoly r(f.size());
    for (size_t i = 0; i < f.size(); ++i) {
        r[i] = f[i] % m;
        if (r[i] < 0) r[i] += m;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

ZPoly zp_mul_mod(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
    if (a.empty() || b.empty()) return {};
    ZPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j) r[i + j] = (r[i + j] + a[i] * b[j]) % m;
    }
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

ZPoly zp_sub_mod(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] - b[i]) % m;
    for (auto& x : r)
        if (x < 0) x += m;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

// divide a by monic b mod m
std::pair<ZPoly, ZPoly> zp_divmod_monic(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
    ZPoly r = a, q;
    long db = (long)b.size() - 1;
    if ((long)a.size() - 1 >= db) q.assign(a.size() - b.size() + 1, 0);
    while ((long)r.size() - 1 >= db && !r.empty()) {
        mpz_class f = r.back();
        long shift = (long)r.size() - 1 - db;
        q[(size_t)shift] = f;
        for (long i = 0; i <= db; ++i) {
            r[(size_t)(shift + i)] = (r[(size_t)(shift + i)] - f * b[(size_t)i]) % m;
            if (r[(size_t)(shift + i)] < 0) r[(size_t)(shift + i)] += m;
        }
        while (!r.empty() && r.back() == 0) r.pop_back();
    }
    return {q, r};
}

ZPoly zp_add_mod(const ZPoly& a, const ZPoly& b, const mpz_class& m) {
    ZPoly r(std::max(a.size(), b.size()), 0);
    for (size_t i = 0; i < a.size(); ++i) r[i] = a[i];
    for (size_t i = 0; i < b.size(); ++i) r[i] = (r[i] + b[i]) % m;
    while (!r.empty() && r.back() == 0) r.pop_back();
    return r;
}

} // namespace

std::vector<ZPoly> hensel_lift(const ZPoly& f, const std::vector<FpPoly>& factors,
                               uint64_t p, unsigned k) {
    if (factors.size() == 1) {
        mpz_class pk = pow_mpz(mpz_class((unsigned long)p), k);
        return {zp_mod(f, pk)};
    }
    // split the factor list in two and lift the pair, then recurse
    size_t half = factors.size() / 2;
    FpPoly gbar{p, {1}}, hbar{p, {1}};
    for (size_t i = 0; i < half; ++i) gbar = fp_mul(gbar, factors[i]);
    for (size_t i = half; i < factors.size(); ++i) hbar = fp_mul(hbar, factors[i]);

    // Bezout: s gbar + t hbar = 1 mod p via extended Euclid over F_p
    FpPoly s{p, {}}, t{p, {}};
    {
        FpPoly a = gbar, b = hbar;
        FpPoly u0{p, {1}}, v0{p, {}}, u1{p, {}}, v1{p, {1}};
        while (!b.c.empty()) {
            auto [q, r] = fp_divmod(a, b);
            FpPoly u2 = fp_sub(u0, fp_mul(q, u1));
            FpPoly v2 = fp_sub(v0, fp_mul(q, v1));
            a = std::move(b);
            b = std::move(r);
            u0 = std::move(u1); u1 = std::move(u2);
            v0 = std::move(v1); v1 = std::move(v2);
        }
        if (a.deg() != 0) throw SunitError("hensel_lift: factors not coprime");
        uint64_t inv = invmod(a.c[0], p);
        for (auto& x : u0.c) x = mulmod(x, inv, p);
        for (auto& x : v0.c) x = mulmod(x, inv, p);
        s = u0;
        t = v0;
    }

    auto to_z = [](const FpPoly& g) {
        ZPoly r(g.c.size());
        for (size_t i = 0; i < g.c.size(); ++i) r[i] = (unsigned long)g.c[i];
        return r;
    };

    ZPoly g = to_z(gbar), h = to_z(hbar), sz = to_z(s), tz = to_z(t);
    mpz_class pk = (unsigned long)p;
    mpz_class target = pow_mpz(mpz_class((unsigned long)p), k);
    while (pk < target) {
        mpz_class pk2 = pk * pk;
        if (pk2 > target) pk2 = target; // a shorter step stays a valid lift
        // e = f - g h
        ZPoly e = zp_sub_mod(zp_mod(f, pk2), zp_mul_mod(g, h, pk2), pk2);
        auto [q, r] = zp_divmod_monic(zp_mul_mod(sz, e, pk2), h, pk2);
        g = zp_add_mod(g, zp_add_mod(zp_mul_mod(tz, e, pk2), zp_mul_mod(q, g, pk2), pk2), pk2);
        h = zp_add_mod(h, r, pk2);
        // refresh Bezout: b = s g + t h - 1
        ZPoly one{mpz_class(1)};
        ZPoly b = zp_sub_mod(zp_add_mod(zp_mul_mod(sz, g, pk2), zp_mul_mod(tz, h, pk2), pk2), one, pk2);
        auto [c, d] = zp_divmod_monic(zp_mul_mod(sz, b, pk2), h, pk2);
        sz = zp_sub_mod(sz, d, pk2);
        tz = zp_sub_mod(tz, zp_add_mod(zp_mul_mod(tz, b, pk2), zp_mul_mod(c, g, pk2), pk2), pk2);
        pk = pk2;
    }
    g = zp_mod(g, target);
    h = zp_mod(h, target);

    std::vector<FpPoly> left(factors.begin(), factors.begin() + (long)half);
    std::vector<FpPoly> right(factors.begin() + (long)half, factors.end());
    std::vector<ZPoly> out = hensel_lift(g, left, p, k);
    std::vector<ZPoly> rhs = hensel_lift(h, right, p, k);
    out.insert(out.end(), rhs.begin(), rhs.end());
    return out;
}

// ---- Zassenhaus ----

std::vector<ZPoly> factor_z_monic(const ZPoly& f) {
    if (f.empty() || f.back() != 1) throw SunitError("factor_z_monic expects monic input");
    long n = (long)f.size() - 1;
    if (n <= 1) return {f};
    QPoly fq = to_qpoly(f);
    // squarefree part first
    QPoly g = p_gcd(fq, p_derivative(fq));
    if (p_deg(g) > 0) {
        // factor the squarefree part, then read multiplicities by division
        ZPoly sqf = to_zpoly(p_divmod(fq, g).first);
        std::vector<ZPoly> irr = factor_z_monic(sqf);
        std::vector<ZPoly> out;
        QPoly rest = fq;
        for (const auto& q : irr) {
            QPoly qq = to_qpoly(q);
            while (true) {
                auto [quo, rem] = p_divmod(rest, qq);
                if (!rem.empty()) break;
                out.push_back(q);
                rest = quo;
            }
        }
        return out;
    }

    // pick a prime where f stays squarefree
    mpz_class disc = resultant_z(f, to_zpoly(p_derivative(fq)));
    uint64_t p = 2;
    while (mpz_divisible_ui_p(disc.get_mpz_t(), p)) p = next_prime_u64(p);

    FpPoly fp = fp_from_z(f, p);
    auto fact = fp_factor(fp);
    if (fact.size() == 1 && fact[0].second == 1) return {f};

    std::vector<FpPoly> mods;
    mods.reserve(fact.size());
    for (auto& [q, e] : fact) {
        if (e != 1) throw SunitError("factor_z_monic: prime choice not squarefree");
        mods.push_back(q);
    }

    // Landau-Mignotte bound on factor coefficients
    mpz_class norm2 = 0;
    for (const auto& c : f) norm2 += c * c;
    mpz_class bound = 1;
    mpz_class root;
    mpz_sqrt(root.get_mpz_t(), norm2.get_mpz_t());
    bound = (root + 1) * pow_mpz(2, (unsigned long)n + 1);
    unsigned k = 1;
    mpz_class pk = (unsigned long)p;
    while (pk <= 2 * bound) { pk *= (unsigned long)p; ++k; }

    std::vector<ZPoly> lifted = hensel_lift(f, mods, p, k);
    mpz_class modulus = pow_mpz(mpz_class((unsigned long)p), k);

    auto center = [&](const ZPoly& a) {
        ZPoly r = a;
        for (auto& x : r)
            if (2 * x > modulus) x -= modulus;
        while (!r.empty() && r.back() == 0) r.pop_back();
        return r;
    };

    std::vector<ZPoly> out;
    std::vector<char> used(lifted.size(), 0);
    ZPoly rest = f;
    size_t active = lifted.size();

    // subset recombination, smallest cardinality first
    for (size_t card = 1; card <= lifted.size() && active > 0; ++card) {
        std::vector<size_t> idx;
        for (size_t i = 0; i < lifted.size(); ++i)
            if (!used[i]) idx.push_back(i);
        if (card > idx.size()) break;
        std::vector<size_t> comb(card);
        for (size_t i = 0; i < card; ++i) comb[i] = i;
        bool advanced = true;
        while (advanced) {
            // try current combination
            ZPoly prod{mpz_class(1)};
            for (size_t i = 0; i < card; ++i) prod = zp_mul_mod(prod, lifted[idx[comb[i]]], modulus);
            ZPoly cand = center(prod);
            if (!cand.empty() && cand.back() == 1) {
                auto [quo, rem] = p_divmod(to_qpoly(rest), to_qpoly(cand));
                if (rem.empty()) {
                    out.push_back(cand);
                    for (size_t i = 0; i < card; ++i) used[idx[comb[i]]] = 1;
                    rest = to_zpoly(quo);
                    active -= card;
                    // restart at the same cardinality with remaining factors
                    idx.clear();
                    for (size_t i = 0; i < lifted.size(); ++i)
                        if (!used[i]) idx.push_back(i);
                    if (card > idx.size()) { advanced = false; break; }
                    for (size_t i = 0; i < card; ++i) comb[i] = i;
                    continue;
                }
            }
            // next combination
            long pos = (long)card - 1;
            while (pos >= 0 && comb[(size_t)pos] == idx.size() - card + (size_t)pos) --pos;
            if (pos < 0) {
                advanced = false;
            } else {
                ++comb[(size_t)pos];
                for (size_t i = (size_t)pos + 1; i < card; ++i) comb[i] = comb[i - 1] + 1;
            }
        }
    }
    if ((long)rest.size() - 1 > 0) out.push_back(rest);
    std::sort(out.begin(), out.end(), [](const ZPoly& a, const ZPoly& b) {
        if (a.size() != b.size()) return a.size() < b.size();
        return a < b;
    });
    return out;
}

bool is_irreducible_z(const ZPoly& f) {
    if ((long)f.size() - 1 < 1) return false;
    auto fact = factor_z_monic(f);
    return fact.size() == 1 && fact[0] == f;
}

// ---- Sturm ----

namespace {

std::vector<QPoly> sturm_chain(const QPoly& f) {
    std::vector<QPoly> chain;
    chain.push_back(f);
    chain.push_back(p_derivative(f));
    while (p_deg(chain.back()) > 0) {
        auto [q, r] = p_divmod(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        chain.push_back(p_scale(r, -1));
    }
    return chain;
}

int sign_changes_at(const std::vector<QPoly>& chain, const mpq_class& x) {
    int changes = 0, last = 0;
    for (const auto& g : chain) {
        mpq_class v = p_eval(g, x);
        int s = sgn(v);
        if (s == 0) continue;
        if (last != 0 && s != last) ++changes;
        last = s;
    }
    return changes;
}

} // namespace

int sturm_count(const QPoly& f, const mpq_class& a, const mpq_class& b) {
    auto chain = sturm_chain(f);
    return sign_changes_at(chain, a) - sign_changes_at(chain, b);
}

std::vector<std::pair<mpq_class, mpq_class>> isolate_real_roots(const QPoly& f) {
    if (!is_squarefree_q(f)) throw SunitError("isolate_real_roots expects squarefree input");
    auto chain = sturm_chain(f);
    // Cauchy bound
    mpq_class m = 0;
    for (size_t i = 0; i + 1 < f.size(); ++i) m = std::max(m, mpq_class(abs(f[i] / f.back())));
    mpq_class bound = m + 1;

    std::vector<std::pair<mpq_class, mpq_class>> out;
    struct Seg { mpq_class a, b; int count; };
    std::vector<Seg> todo;
    int total = sign_changes_at(chain, -bound) - sign_changes_at(chain, bound);
    if (total > 0) todo.push_back({-bound, bound, total});
    while (!todo.empty()) {
        Seg s = todo.back();
        todo.pop_back();
        if (s.count == 1) {
            out.push_back({s.a, s.b});
            continue;
        }
        mpq_class mid = (s.a + s.b) / 2;
        if (p_eval(f, mid) == 0) {
            // nudge the split point off the root
            mid = (s.a + mid) / 2;
        }
        int left = sign_changes_at(chain, s.a) - sign_changes_at(chain, mid);
        int right = s.count - left;
        if (left > 0) todo.push_back({s.a, mid, left});
        if (right > 0) todo.push_back({mid, s.b, right});
    }
    std::sort(out.begin(), out.end(),
              [](const auto& x, const auto& y) { return x.first < y.first; });
    return out;
}

} // namespace sunit
