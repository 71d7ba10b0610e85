#include "sunit/places.hpp"

#include <algorithm>
#include <array>
#include <complex>
#include <map>

namespace sunit {

// ================= infinite places =================

namespace {

// mpfr-complex Newton iteration to polish a simple root
void newton_polish(const ZPoly& f, mpfr_t zr, mpfr_t zi, long prec, int steps) {
    QPoly fq = to_qpoly(f), dfq = p_derivative(fq);
    mpfr_t fr, fi, dr, di, t1, t2, t3, den, c;
    mpfr_inits2(prec, fr, fi, dr, di, t1, t2, t3, den, c, (mpfr_ptr) nullptr);
    for (int s = 0; s < steps; ++s) {
        mpfr_set_zero(fr, 1);
        mpfr_set_zero(fi, 1);
        mpfr_set_zero(dr, 1);
        mpfr_set_zero(di, 1);
        for (size_t k = fq.size(); k-- > 0;) {
            if (k + 1 < fq.size()) {
                mpfr_mul(t1, dr, zr, MPFR_RNDN);
                mpfr_mul(t2, di, zi, MPFR_RNDN);
                mpfr_mul(t3, dr, zi, MPFR_RNDN);
                mpfr_mul(den, di, zr, MPFR_RNDN);
                mpfr_sub(dr, t1, t2, MPFR_RNDN);
                mpfr_add(di, t3, den, MPFR_RNDN);
                mpfr_add(dr, dr, fr, MPFR_RNDN);
                mpfr_add(di, di, fi, MPFR_RNDN);
            }
            mpfr_mul(t1, fr, zr, MPFR_RNDN);
            mpfr_mul(t2, fi, zi, MPFR_RNDN);
            mpfr_mul(t3, fr, zi, MPFR_RNDN);
            mpfr_mul(den, fi, zr, MPFR_RNDN);
            mpfr_sub(fr, t1, t2, MPFR_RNDN);
            mpfr_add(fi, t3, den, MPFR_RNDN);
            mpfr_set_q(c, mpq_class(fq[k]).get_mpq_t(), MPFR_RNDN);
            mpfr_add(fr, fr, c, MPFR_RNDN);
        }
        mpfr_mul(t1, dr, dr, MPFR_RNDN);
        mpfr_mul(t2, di, di, MPFR_RNDN);
        mpfr_add(den, t1, t2, MPFR_RNDN);
        if (mpfr_zero_p(den)) break;
        mpfr_mul(t1, fr, dr, MPFR_RNDN);
        mpfr_mul(t2, fi, di, MPFR_RNDN);
        mpfr_add(t1, t1, t2, MPFR_RNDN);
        mpfr_div(t1, t1, den, MPFR_RNDN);
        mpfr_mul(t2, fi, dr, MPFR_RNDN);
        mpfr_mul(t3, fr, di, MPFR_RNDN);
        mpfr_sub(t2, t2, t3, MPFR_RNDN);
        mpfr_div(t2, t2, den, MPFR_RNDN);
        mpfr_sub(zr, zr, t1, MPFR_RNDN);
        mpfr_sub(zi, zi, t2, MPFR_RNDN);
    }
    mpfr_clears(fr, fi, dr, di, t1, t2, t3, den, c, (mpfr_ptr) nullptr);
}

// radius of a disk around (cx, cy) certified to contain a root:
// deg(f) * |f(z)| / |f'(z)|
mpq_class cert_radius(const ZPoly& f, const mpq_class& cx, const mpq_class& cy, long prec) {
    QPoly fq = to_qpoly(f);
    CInt z(RInt::exact(cx, prec), RInt::exact(cy, prec));
    RInt fa = eval_poly(fq, z).abs();
    RInt da = eval_poly(p_derivative(fq), z).abs();
    if (!da.is_positive()) throw PrecisionExhausted("cert_radius: derivative enclosure hits 0");
    return (fa.mul_z(mpz_class((long)f.size() - 1)) / da).hi_q();
}

struct RootDisks {
    std::vector<std::pair<mpq_class, mpq_class>> real_ivs;
    std::vector<std::array<mpq_class, 3>> complex_disks; // (cx, cy, r), Im > 0
};

RootDisks find_roots(const ZPoly& f, long prec) {
    RootDisks out;
    QPoly fq = to_qpoly(f);
    out.real_ivs = isolate_real_roots(fq);
    long d = (long)f.size() - 1;
    long r1 = (long)out.real_ivs.size();
    if ((d - r1) % 2 != 0) throw SunitError("root count parity violated");
    long r2 = (d - r1) / 2;
    if (r2 == 0) return out;

    std::vector<std::complex<double>> c(f.size());
    for (size_t i = 0; i < f.size(); ++i) c[i] = f[i].get_d();
    double radius = 1;
    for (size_t i = 0; i + 1 < f.size(); ++i)
        radius = std::max(radius, 1.0 + std::abs(c[i].real()));
    std::vector<std::complex<double>> z((size_t)d);
    for (long j = 0; j < d; ++j)
        z[(size_t)j] = std::polar(radius, 2 * 3.14159265358979 * (double)j / (double)d + 0.7);
    auto evald = [&](std::complex<double> x) {
        std::complex<double> v = 0;
        for (size_t i = f.size(); i-- > 0;) v = v * x + c[i];
        return v;
    };
    for (int it = 0; it < 1000; ++it) {
        double moved = 0;
        for (long j = 0; j < d; ++j) {
            std::complex<double> den = 1;
            for (long k = 0; k < d; ++k)
                if (k != j) den *= (z[(size_t)j] - z[(size_t)k]);
            if (den == 0.0) den = 1e-12;
            std::complex<double> corr = evald(z[(size_t)j]) / den;
            z[(size_t)j] -= corr;
            moved = std::max(moved, std::abs(corr));
        }
        if (moved < 1e-13) break;
    }

    long work = std::max(2 * prec, 160L);
    for (int attempt = 0; attempt < 10; ++attempt, work *= 2) {
        out.complex_disks.clear();
        bool ok = true;
        for (long j = 0; j < d && ok; ++j) {
            if (z[(size_t)j].imag() <= 1e-9) continue;
            mpfr_t zr, zi;
            mpfr_inits2(work, zr, zi, (mpfr_ptr) nullptr);
            mpfr_set_d(zr, z[(size_t)j].real(), MPFR_RNDN);
            mpfr_set_d(zi, z[(size_t)j].imag(), MPFR_RNDN);
            newton_polish(f, zr, zi, work, 48);
            mpq_class cx, cy;
            mpfr_get_q(cx.get_mpq_t(), zr);
            mpfr_get_q(cy.get_mpq_t(), zi);
            mpfr_clears(zr, zi, (mpfr_ptr) nullptr);
            if (cy <= 0) continue;
            try {
                out.complex_disks.push_back({cx, cy, cert_radius(f, cx, cy, work)});
            } catch (const PrecisionExhausted&) {
                ok = false;
            }
        }
        if (!ok || (long)out.complex_disks.size() != r2) continue;
        bool cert = true;
        for (size_t i = 0; i < out.complex_disks.size() && cert; ++i) {
            const auto& [xi, yi, ri] = out.complex_disks[i];
            if (yi - ri <= 0) cert = false; // must stay off the real axis
            for (size_t k = i + 1; k < out.complex_disks.size() && cert; ++k) {
                const auto& [xk, yk, rk] = out.complex_disks[k];
                mpq_class dx = xi - xk, dy = yi - yk, rr = ri + rk;
                if (dx * dx + dy * dy <= rr * rr) cert = false;
            }
        }
        if (cert) {
            std::sort(out.complex_disks.begin(), out.complex_disks.end(),
                      [](const auto& a, const auto& b) {
                          return a[0] < b[0] || (a[0] == b[0] && a[1] < b[1]);
                      });
            return out;
        }
    }
    throw PrecisionExhausted("infinite_places: cannot certify complex root disks");
}

} // namespace

void InfinitePlace::refine(long prec) const {
    if (K->degree() == 1 || cached_prec_ >= prec) return;
    QPoly fq = to_qpoly(K->poly());
    if (real) {
        mpq_class target(1);
        target /= pow_mpz(2, (unsigned long)prec);
        int lo_sign = sgn(p_eval(fq, rlo_));
        while (rhi_ - rlo_ > target) {
            mpq_class mid = (rlo_ + rhi_) / 2;
            int s = sgn(p_eval(fq, mid));
            if (s == 0) throw SunitError("real root refinement hit a rational point");
            if (s == lo_sign) rlo_ = mid;
            else rhi_ = mid;
        }
    } else {
        long work = std::max(2 * prec, 160L);
        mpfr_t zr, zi;
        mpfr_inits2(work, zr, zi, (mpfr_ptr) nullptr);
        mpfr_set_q(zr, cx_.get_mpq_t(), MPFR_RNDN);
        mpfr_set_q(zi, cy_.get_mpq_t(), MPFR_RNDN);
        newton_polish(K->poly(), zr, zi, work, 48);
        mpq_class nx, ny;
        mpfr_get_q(nx.get_mpq_t(), zr);
        mpfr_get_q(ny.get_mpq_t(), zi);
        mpfr_clears(zr, zi, (mpfr_ptr) nullptr);
        mpq_class nr = cert_radius(K->poly(), nx, ny, work);
        mpq_class dx = nx - cx_, dy = ny - cy_, slack = radius_ - nr;
        if (slack < 0 || dx * dx + dy * dy > slack * slack)
            throw PrecisionExhausted("complex root refinement left its disk");
        cx_ = nx;
        cy_ = ny;
        radius_ = nr;
    }
    cached_prec_ = prec;
}

CInt InfinitePlace::root_box(long prec) const {
    refine(prec);
    if (real) return {RInt::interval(rlo_, rhi_, prec), RInt::exact(mpq_class(0), prec)};
    return {RInt::interval(cx_ - radius_, cx_ + radius_, prec),
            RInt::interval(cy_ - radius_, cy_ + radius_, prec)};
}

CInt InfinitePlace::embed(const FieldElement& a, long prec) const {
    if (K->degree() == 1)
        return {RInt::exact(a.coords[0], prec), RInt::exact(mpq_class(0), prec)};
    CInt box = root_box(prec + 16);
    return eval_poly(QPoly(a.coords.begin(), a.coords.end()), box);
}

RInt InfinitePlace::log_abs_embed(const FieldElement& a, long prec) const {
    for (long extra = 0;; ++extra) {
        try {
            return embed(a, prec << extra).log_abs();
        } catch (const PrecisionExhausted&) {
            if (extra >= 5) throw;
        }
    }
}

RInt InfinitePlace::log_abs_value(const FieldElement& a, long prec) const {
    RInt l = log_abs_embed(a, prec);
    return real ? l : l + l;
}

std::pair<RInt, RInt> InfinitePlace::principal_log(const FieldElement& a, long prec) const {
    for (long extra = 0;; ++extra) {
        CInt v = embed(a, prec << extra);
        try {
            RInt labs = v.log_abs();
            if (real) {
                // real images have arg exactly 0 or pi
                if (v.re.is_positive()) return {labs, RInt::exact(0L, prec)};
                if (v.re.is_negative()) return {labs, RInt::pi(prec)};
                throw PrecisionExhausted("principal_log: sign undecided");
            }
            return {labs, v.arg()};
        } catch (const PrecisionExhausted&) {
            if (extra >= 5) {
                // the principal argument always lies in (-pi, pi]; fall back
                // to that enclosure when the rectangle cannot leave the cut
                RInt labs = v.log_abs();
                RInt pi = RInt::pi(prec);
                RInt full(prec);
                mpfr_neg(full.lo, pi.hi, MPFR_RNDD);
                mpfr_set(full.hi, pi.hi, MPFR_RNDU);
                return {labs, full};
            }
        }
    }
}

std::vector<InfinitePlacePtr> infinite_places(const NFPtr& K, long prec) {
    std::vector<InfinitePlacePtr> out;
    if (K->degree() == 1) {
        auto pl = std::make_shared<InfinitePlace>();
        pl->K = K;
        pl->real = true;
        pl->rlo_ = pl->rhi_ = mpq_class(-K->poly()[0]);
        out.push_back(pl);
        return out;
    }
    RootDisks disks = find_roots(K->poly(), prec);
    for (auto& iv : disks.real_ivs) {
        auto pl = std::make_shared<InfinitePlace>();
        pl->K = K;
        pl->real = true;
        pl->rlo_ = iv.first;
        pl->rhi_ = iv.second;
        out.push_back(pl);
    }
    for (auto& dk : disks.complex_disks) {
        auto pl = std::make_shared<InfinitePlace>();
        pl->K = K;
        pl->real = false;
        pl->cx_ = dk[0];
        pl->cy_ = dk[1];
        pl->radius_ = dk[2];
        out.push_back(pl);
    }
    return out;
}

// ================= finite places =================

namespace {

mpz_class z_det_bareiss(ZMat a) {
    size_t n = a.size();
    if (n == 0) return 1;
    mpz_class denom = 1;
    int sign = 1;
    for (size_t k = 0; k + 1 < n; ++k) {
        if (a[k][k] == 0) {
            size_t s = k + 1;
            while (s < n && a[s][k] == 0) ++s;
            if (s == n) return 0;
            std::swap(a[s], a[k]);
            sign = -sign;
        }
        for (size_t i = k + 1; i < n; ++i)
            for (size_t j = k + 1; j < n; ++j) {
                a[i][j] = a[i][j] * a[k][k] - a[i][k] * a[k][j];
                if (k > 0) a[i][j] /= denom;
            }
        denom = a[k][k];
    }
    return sign > 0 ? a[n - 1][n - 1] : -a[n - 1][n - 1];
}

// Res(g, a_num) with a = a_num / den, den the lcm of a's denominators
mpz_class resultant_cleared(const ZPoly& g, const QPoly& a, mpz_class& den_out) {
    mpz_class den = 1;
    for (const auto& c : a) den = den / gcd(den, c.get_den()) * c.get_den();
    ZPoly an(a.size());
    for (size_t i = 0; i < a.size(); ++i) an[i] = mpq_class(a[i] * den).get_num();
    den_out = den;
    long m = (long)g.size() - 1, n = (long)an.size() - 1;
    if (n < 0) throw ZeroElement("resultant of zero element");
    if (n == 0) return pow_mpz(an[0], (unsigned long)m);
    size_t dim = (size_t)(m + n);
    ZMat s(dim, ZVec(dim, 0));
    for (long i = 0; i < n; ++i)
        for (long j = 0; j <= m; ++j) s[(size_t)i][(size_t)(i + j)] = g[(size_t)(m - j)];
    for (long i = 0; i < m; ++i)
        for (long j = 0; j <= n; ++j) s[(size_t)(n + i)][(size_t)(i + j)] = an[(size_t)(n - j)];
    return z_det_bareiss(std::move(s));
}

using FpVec = std::vector<uint64_t>;
using FpRows = std::vector<FpVec>;

size_t fp_row_rank(FpRows rows, uint64_t p) {
    size_t rank = 0, cols = rows.empty() ? 0 : rows[0].size();
    for (size_t c = 0; c < cols && rank < rows.size(); ++c) {
        size_t piv = rank;
        while (piv < rows.size() && rows[piv][c] == 0) ++piv;
        if (piv == rows.size()) continue;
        std::swap(rows[piv], rows[rank]);
        uint64_t inv = invmod(rows[rank][c], p);
        for (size_t j = c; j < cols; ++j) rows[rank][j] = mulmod(rows[rank][j], inv, p);
        for (size_t r = 0; r < rows.size(); ++r) {
            if (r == rank || rows[r][c] == 0) continue;
            uint64_t f = rows[r][c];
            for (size_t j = c; j < cols; ++j)
                rows[r][j] = (rows[r][j] + p - mulmod(f, rows[rank][j], p)) % p;
        }
        ++rank;
    }
    return rank;
}

// kernel of the linear map given by columns-in-rows convention:
// rows = equations, unknowns = columns
FpRows fp_kernel(FpRows eqs, uint64_t p) {
    size_t rows = eqs.size(), cols = rows ? eqs[0].size() : 0;
    std::vector<long> pivot_of_col(cols, -1);
    size_t rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        while (piv < rows && eqs[piv][c] == 0) ++piv;
        if (piv == rows) continue;
        std::swap(eqs[piv], eqs[rank]);
        uint64_t inv = invmod(eqs[rank][c], p);
        for (size_t j = c; j < cols; ++j) eqs[rank][j] = mulmod(eqs[rank][j], inv, p);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank || eqs[r][c] == 0) continue;
            uint64_t f = eqs[r][c];
            for (size_t j = c; j < cols; ++j)
                eqs[r][j] = (eqs[r][j] + p - mulmod(f, eqs[rank][j], p)) % p;
        }
        pivot_of_col[c] = (long)rank;
        ++rank;
    }
    FpRows basis;
    for (size_t c = 0; c < cols; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        FpVec v(cols, 0);
        v[c] = 1;
        for (size_t j = 0; j < cols; ++j)
            if (pivot_of_col[j] >= 0) {
                uint64_t val = eqs[(size_t)pivot_of_col[j]][c];
                v[j] = val == 0 ? 0 : p - val;
            }
        basis.push_back(std::move(v));
    }
    return basis;
}

// O/pO with multiplication table in the integral basis
struct ModPAlgebra {
    uint64_t p;
    long d;
    std::vector<std::vector<FpVec>> mult;
    FpVec one;

    FpVec mul(const FpVec& x, const FpVec& y) const {
        FpVec r((size_t)d, 0);
        for (long i = 0; i < d; ++i) {
            if (x[(size_t)i] == 0) continue;
            for (long j = 0; j < d; ++j) {
                if (y[(size_t)j] == 0) continue;
                uint64_t c = mulmod(x[(size_t)i], y[(size_t)j], p);
                const FpVec& row = mult[(size_t)i][(size_t)j];
                for (long k = 0; k < d; ++k)
                    r[(size_t)k] = (r[(size_t)k] + mulmod(c, row[(size_t)k], p)) % p;
            }
        }
        return r;
    }

    FpVec pow(FpVec base, mpz_class e) const {
        FpVec r = one;
        while (e > 0) {
            if (mpz_odd_p(e.get_mpz_t())) r = mul(r, base);
            base = mul(base, base);
            e >>= 1;
        }
        return r;
    }
};

QVec to_order_coords_q(const NumberField& K, const QVec& power_coords) {
    long d = K.degree();
    QMat bt((size_t)d, QVec((size_t)d));
    const QMat& B = K.integral_basis();
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) bt[(size_t)j][(size_t)i] = B[(size_t)i][(size_t)j];
    auto x = q_solve(bt, power_coords);
    if (!x) throw SunitError("to_order_coords: solve failed");
    return *x;
}

ZVec to_order_coords(const NumberField& K, const FieldElement& a) {
    QVec x = to_order_coords_q(K, a.coords);
    ZVec r(x.size());
    for (size_t i = 0; i < x.size(); ++i) {
        if (x[i].get_den() != 1) throw SunitError("to_order_coords: element not in the order");
        r[i] = x[i].get_num();
    }
    return r;
}

FieldElement from_order_coords(const NFPtr& K, const ZVec& v) {
    QVec c((size_t)K->degree(), 0);
    const QMat& B = K->integral_basis();
    for (long i = 0; i < K->degree(); ++i) {
        if (v[(size_t)i] == 0) continue;
        for (long j = 0; j < K->degree(); ++j)
            c[(size_t)j] += mpq_class(v[(size_t)i]) * B[(size_t)i][(size_t)j];
    }
    return K->element(std::move(c));
}

FpVec reduce_vec(const ZVec& v, uint64_t p) {
    FpVec r(v.size());
    for (size_t i = 0; i < v.size(); ++i) {
        mpz_class m = v[i] % (long)p;
        if (m < 0) m += (long)p;
        r[i] = m.get_ui();
    }
    return r;
}

ModPAlgebra build_algebra(const NFPtr& K, uint64_t p) {
    long d = K->degree();
    ModPAlgebra A{p, d, {}, {}};
    A.mult.assign((size_t)d, std::vector<FpVec>((size_t)d));
    const QMat& B = K->integral_basis();
    for (long i = 0; i < d; ++i)
        for (long j = 0; j <= i; ++j) {
            FieldElement bi = K->element(QVec(B[(size_t)i]));
            FieldElement bj = K->element(QVec(B[(size_t)j]));
            FpVec row = reduce_vec(to_order_coords(*K, K->mul(bi, bj)), p);
            A.mult[(size_t)i][(size_t)j] = row;
            A.mult[(size_t)j][(size_t)i] = row;
        }
    A.one = reduce_vec(to_order_coords(*K, K->one()), p);
    return A;
}

bool hnf_contains(const ZMat& h, const ZVec& v) {
    size_t n = h.size();
    size_t cols = h.empty() ? 0 : h[0].size();
    ZVec rem = v;
    for (size_t j = 0; j < cols; ++j) {
        long pr = -1;
        for (size_t i = 0; i < n; ++i)
            if (h[i][j] != 0) { pr = (long)i; break; }
        if (pr < 0) continue;
        if (rem[(size_t)pr] % h[(size_t)pr][j] != 0) return false;
        mpz_class q = rem[(size_t)pr] / h[(size_t)pr][j];
        if (q != 0)
            for (size_t i = 0; i < n; ++i) rem[i] -= q * h[i][j];
    }
    for (const auto& x : rem)
        if (x != 0) return false;
    return true;
}

ZMat ideal_mul_hnf(const NFPtr& K, const ZMat& a, const ZMat& b) {
    size_t d = (size_t)K->degree();
    std::vector<ZVec> gens;
    for (size_t j = 0; j < a[0].size(); ++j) {
        ZVec va(d);
        for (size_t i = 0; i < d; ++i) va[i] = a[i][j];
        FieldElement ea = from_order_coords(K, va);
        for (size_t k = 0; k < b[0].size(); ++k) {
            ZVec vb(d);
            for (size_t i = 0; i < d; ++i) vb[i] = b[i][k];
            gens.push_back(to_order_coords(*K, K->mul(ea, from_order_coords(K, vb))));
        }
    }
    ZMat m(d, ZVec(gens.size()));
    for (size_t i = 0; i < d; ++i)
        for (size_t j = 0; j < gens.size(); ++j) m[i][j] = gens[j][i];
    return hnf_columns(m);
}

} // namespace

long FinitePlace::ord_by_resultant(const FieldElement& a) const {
    QPoly ap(a.coords.begin(), a.coords.end());
    p_normalize(ap);
    if (ap.empty()) throw ZeroElement("ord of zero");
    if (p_deg(ap) == 0) return e * ord_p_rat(ap[0], p); // rational fast path
    long n_guess = 64;
    long local_deg = e * f;
    for (int attempt = 0; attempt < 10; ++attempt, n_guess *= 2) {
        ZPoly g = local_poly(n_guess);
        mpz_class den;
        mpz_class res = resultant_cleared(g, ap, den);
        long vden = den == 1 ? 0 : ord_p_int(den, p);
        if (res == 0) {
            if (single_) throw ZeroElement("ord: resultant vanished for exact local poly");
            continue;
        }
        long vres = ord_p_int(res, p);
        if (!single_ && vres >= n_guess - 2) continue; // perturbation could bite
        long v = vres - local_deg * vden;
        if (v % f != 0) throw SunitError("ord: valuation not divisible by inertia degree");
        return v / f;
    }
    throw PrecisionExhausted("ord_by_resultant: escalation exhausted");
}

long FinitePlace::ord_by_ideal(const FieldElement& a) const {
    mpz_class den = 1;
    for (const auto& c : a.coords) den = den / gcd(den, c.get_den()) * c.get_den();
    FieldElement scaled = K->mul(a, K->from_rational(mpq_class(den)));
    long dshift = den == 1 ? 0 : e * ord_p_int(den, p);
    ZVec v = to_order_coords(*K, scaled);
    long bound = ord_p_rat(K->norm(scaled), p) / f;
    long v_ord = 0;
    ZMat pw = ideal_basis_;
    while (v_ord <= bound) {
        if (!hnf_contains(pw, v)) break;
        ++v_ord;
        if (v_ord > bound) break;
        pw = ideal_mul_hnf(K, pw, ideal_basis_);
    }
    return v_ord - dshift;
}

long FinitePlace::ord(const FieldElement& a) const {
    if (a.is_zero()) throw ZeroElement("ord of zero element");
    if (has_local_poly()) return ord_by_resultant(a);
    return ord_by_ideal(a);
}

ZPoly FinitePlace::local_poly(long prec) const {
    if (single_) return K->poly(); // exact at any precision
    if (!kummer_)
        throw LocalFactorizationUnsupported(
            "no local defining polynomial at an index prime with several factors");
    if (g_cache_prec_ >= prec) return g_cache_;
    FpPoly fbar = fp_from_z(K->poly(), p.get_ui());
    FpPoly rest = fp_divmod(fbar, block_).first;
    auto lifted = hensel_lift(K->poly(), {block_, rest}, p.get_ui(), (unsigned)prec);
    g_cache_ = lifted[0];
    g_cache_prec_ = prec;
    return g_cache_;
}

FpPoly FinitePlace::residue(const FieldElement& a) const {
    if (!kummer_ && !single_)
        throw LocalFactorizationUnsupported("residue map unavailable at this place");
    uint64_t pp = p.get_ui();
    FpPoly r{pp, {}};
    r.c.assign(a.coords.size(), 0);
    for (size_t i = 0; i < a.coords.size(); ++i) {
        const mpq_class& c = a.coords[i];
        mpz_class num = c.get_num() % (long)pp;
        if (num < 0) num += (long)pp;
        mpz_class den = c.get_den() % (long)pp;
        if (den == 0) throw SunitError("residue: denominator not coprime to p");
        r.c[i] = mulmod(num.get_ui(), invmod(den.get_ui(), pp), pp);
    }
    r.normalize();
    return fp_divmod(r, rbar_).second;
}

long FinitePlace::local_disc_ord() const {
    long n_guess = 96;
    for (int attempt = 0; attempt < 10; ++attempt, n_guess *= 2) {
        ZPoly g = local_poly(n_guess);
        QPoly gq = to_qpoly(g);
        mpq_class res = resultant_q(gq, p_derivative(gq));
        if (res == 0) {
            if (single_) throw SunitError("local poly not squarefree");
            continue;
        }
        long v = ord_p_rat(res, p);
        if (single_ || v < n_guess - 2) return v;
    }
    throw PrecisionExhausted("local_disc_ord");
}

std::vector<FinitePlacePtr> primes_above(const NFPtr& K, const mpz_class& p) {
    if (!is_prime(p)) throw SunitError("primes_above: p is not prime");
    if (!p.fits_ulong_p()) throw SunitError("primes_above: prime too large");
    uint64_t pp = p.get_ui();
    long d = K->degree();
    std::vector<std::shared_ptr<FinitePlace>> out;

    bool power = K->power_basis_is_basis();
    if (power && K->index_primes().count(p))
        throw IndexDivisible("p divides [O_K : Z[theta]] and no integral basis was supplied "
                             "(prime " + p.get_str() + "); supply an integral basis");

    // with a supplied basis, fall back to the algebra path whenever Dedekind
    // is not applicable to f at p
    bool kummer_applicable = true;
    if (!power) {
        // the power order may be non-maximal at p; detect via discriminant
        long v = K->disc_f() == 0 ? 0 : ord_p_int(K->disc_f(), p);
        long vk = K->disc_K() == 0 ? 0 : ord_p_int(K->disc_K(), p);
        if (v != vk) kummer_applicable = false; // index divisible by p
    }

    if (kummer_applicable) {
        auto fact = fp_factor(fp_from_z(K->poly(), pp));
        for (auto& [gbar, mult] : fact) {
            auto P = std::make_shared<FinitePlace>();
            P->K = K;
            P->p = p;
            P->f = gbar.deg();
            P->e = (long)mult;
            P->rbar_ = gbar;
            if (fact.size() == 1) {
                P->single_ = true;
            } else {
                P->kummer_ = true;
                FpPoly block = gbar;
                for (unsigned i = 1; i < mult; ++i) block = fp_mul(block, gbar);
                P->block_ = block;
            }
            out.push_back(P);
        }
        // uniformizers: p itself at an inert prime, else gbar(theta) shifted
        // by small multiples of p
        for (auto& P : out) {
            std::vector<QVec> cands;
            if (P->e == 1 && P->f == d) {
                QVec v((size_t)d, 0);
                v[0] = mpq_class(p);
                cands.push_back(v);
            }
            QVec base((size_t)d, 0);
            for (size_t i = 0; i < P->rbar_.c.size() && (long)i < d; ++i)
                base[i] = (unsigned long)P->rbar_.c[i];
            for (long c0 = 0; c0 < 4; ++c0)
                for (long c1 = 0; c1 < (d > 1 ? 3 : 1); ++c1) {
                    QVec cand = base;
                    cand[0] += mpq_class(c0) * mpq_class(p);
                    if (d > 1 && c1) cand[1] += mpq_class(c1) * mpq_class(p);
                    cands.push_back(cand);
                }
            bool found = false;
            for (auto& cand : cands) {
                FieldElement el = K->element(QVec(cand));
                if (el.is_zero()) continue;
                if (P->ord(el) == 1) {
                    P->pi = el;
                    found = true;
                    break;
                }
            }
            if (!found) throw SunitError("primes_above: no uniformizer found");
        }
    } else {
        ModPAlgebra A = build_algebra(K, pp);

        // radical = kernel of the m-fold Frobenius, p^m >= d
        long m = 1;
        {
            mpz_class pm = p;
            while (pm < d) { pm *= p; ++m; }
        }
        FpRows frob_eqs((size_t)d, FpVec((size_t)d, 0));
        for (long i = 0; i < d; ++i) {
            FpVec x((size_t)d, 0);
            x[(size_t)i] = 1;
            FpVec acc = x;
            for (long it = 0; it < m; ++it) acc = A.pow(acc, mpz_class((unsigned long)pp));
            for (long k = 0; k < d; ++k) frob_eqs[(size_t)k][(size_t)i] = acc[(size_t)k];
        }
        FpRows rad = fp_kernel(frob_eqs, pp);

        // p-maximality (Pohst-Zassenhaus): Y = { y : y I <= p I } must be p O,
        // I = p O + lift(rad)
        size_t dd = (size_t)d;
        {
            std::vector<ZVec> igens;
            for (size_t i = 0; i < dd; ++i) {
                ZVec v(dd, 0);
                v[i] = p;
                igens.push_back(v);
            }
            for (auto& rv : rad) {
                ZVec v(dd);
                for (size_t i = 0; i < dd; ++i) v[i] = (unsigned long)rv[i];
                igens.push_back(v);
            }
            ZMat imat(dd, ZVec(igens.size()));
            for (size_t i = 0; i < dd; ++i)
                for (size_t j = 0; j < igens.size(); ++j) imat[i][j] = igens[j][i];
            ZMat ihnf = hnf_columns(imat);
            size_t nb = ihnf[0].size();
            ZMat sys(dd * nb, ZVec(dd + nb * nb, 0));
            for (size_t j = 0; j < nb; ++j) {
                ZVec ij(dd);
                for (size_t i = 0; i < dd; ++i) ij[i] = ihnf[i][j];
                FieldElement ej = from_order_coords(K, ij);
                for (size_t yk = 0; yk < dd; ++yk) {
                    ZVec by(dd, 0);
                    by[yk] = 1;
                    ZVec prod = to_order_coords(*K, K->mul(from_order_coords(K, by), ej));
                    for (size_t row = 0; row < dd; ++row) sys[j * dd + row][yk] = prod[row];
                }
                for (size_t zc = 0; zc < nb; ++zc)
                    for (size_t row = 0; row < dd; ++row)
                        sys[j * dd + row][dd + j * nb + zc] = -p * ihnf[row][zc];
            }
            ZMat ker = z_kernel(sys);
            size_t kcols = ker.empty() ? 0 : ker[0].size();
            for (size_t j = 0; j < kcols; ++j)
                for (size_t i = 0; i < dd; ++i)
                    if (ker[i][j] % p != 0)
                        throw IndexDivisible("supplied integral basis is not maximal at " +
                                             p.get_str());
        }

        // etale decomposition of A / rad by splitting idempotents
        struct Item { FpVec idem; };
        std::vector<FpVec> components;
        std::vector<FpVec> work = {A.one};
        auto min_poly_mod_rad = [&](const FpVec& id, const FpVec& x) -> FpPoly {
            std::vector<FpVec> pows = {id};
            FpVec cur = id;
            for (long k = 1; k <= d + 1; ++k) {
                cur = A.mul(cur, x);
                pows.push_back(cur);
                FpRows eqs(dd, FpVec(pows.size() + rad.size(), 0));
                for (size_t i = 0; i < pows.size(); ++i)
                    for (size_t r = 0; r < dd; ++r) eqs[r][i] = pows[i][r];
                for (size_t i = 0; i < rad.size(); ++i)
                    for (size_t r = 0; r < dd; ++r) eqs[r][pows.size() + i] = rad[i][r];
                auto kb = fp_kernel(eqs, pp);
                for (auto& kv : kb) {
                    if (kv[(size_t)k] == 0) continue;
                    uint64_t inv = invmod(kv[(size_t)k], pp);
                    FpPoly mp{pp, {}};
                    mp.c.assign((size_t)k + 1, 0);
                    for (long k3 = 0; k3 <= k; ++k3) mp.c[(size_t)k3] = mulmod(kv[(size_t)k3], inv, pp);
                    mp.normalize();
                    if (mp.deg() == k) return mp;
                }
            }
            throw SunitError("min_poly_mod_rad: no relation found");
        };
        while (!work.empty()) {
            FpVec id = work.back();
            work.pop_back();
            bool split_done = false;
            // candidate generators: basis elements, then pairwise sums
            std::vector<FpVec> cands;
            for (long bi = 0; bi < d; ++bi) {
                FpVec b(dd, 0);
                b[(size_t)bi] = 1;
                cands.push_back(b);
            }
            for (long bi = 0; bi < d && d <= 12; ++bi)
                for (long bj = bi + 1; bj < d; ++bj) {
                    FpVec b(dd, 0);
                    b[(size_t)bi] = 1;
                    b[(size_t)bj] = 1;
                    cands.push_back(b);
                }
            for (auto& cand : cands) {
                FpVec x = A.mul(A.mul(id, cand), id);
                FpPoly mp = min_poly_mod_rad(id, x);
                auto ff = fp_factor(mp);
                if (ff.size() < 2) continue; // irreducible (squarefree mod rad): try next
                // split e with the first factor
                FpPoly m1 = ff[0].first;
                FpPoly m1e = m1;
                for (unsigned i3 = 1; i3 < ff[0].second; ++i3) m1e = fp_mul(m1e, m1);
                FpPoly h = fp_divmod(mp, m1e).first;
                // w = h^{-1} mod m1e
                FpPoly a1 = h, b1 = m1e;
                FpPoly u0{pp, {1}}, u1{pp, {}};
                while (!b1.c.empty()) {
                    auto [q2, r2] = fp_divmod(a1, b1);
                    FpPoly u2 = fp_sub(u0, fp_mul(q2, u1));
                    a1 = std::move(b1);
                    b1 = std::move(r2);
                    u0 = std::move(u1);
                    u1 = std::move(u2);
                }
                if (a1.deg() != 0) continue;
                uint64_t inv2 = invmod(a1.c[0], pp);
                for (auto& cc : u0.c) cc = mulmod(cc, inv2, pp);
                FpPoly wpol = fp_divmod(fp_mul(h, u0), mp).second;
                // evaluate at x relative to the identity id
                FpVec u(dd, 0);
                for (size_t k3 = wpol.c.size(); k3-- > 0;) {
                    u = A.mul(u, x);
                    if (wpol.c[k3] != 0)
                        for (size_t i3 = 0; i3 < dd; ++i3)
                            u[i3] = (u[i3] + mulmod(wpol.c[k3], id[i3], pp)) % pp;
                }
                // force an exact idempotent (radical is nilpotent)
                for (int it3 = 0; it3 < 8; ++it3) u = A.mul(u, u);
                FpVec comp(dd);
                for (size_t i3 = 0; i3 < dd; ++i3) comp[i3] = (id[i3] + pp - u[i3]) % pp;
                bool u_zero = std::all_of(u.begin(), u.end(), [](uint64_t v) { return v == 0; });
                bool c_zero = std::all_of(comp.begin(), comp.end(), [](uint64_t v) { return v == 0; });
                if (u_zero || c_zero) continue;
                work.push_back(u);
                work.push_back(comp);
                split_done = true;
                break;
            }
            if (!split_done) components.push_back(id);
        }

        // build places from primitive idempotents
        for (auto& id : components) {
            auto P = std::make_shared<FinitePlace>();
            P->K = K;
            P->p = p;
            // residue degree: dim of (id * A) mod radical
            FpRows span;
            for (long bi = 0; bi < d; ++bi) {
                FpVec b(dd, 0);
                b[(size_t)bi] = 1;
                span.push_back(A.mul(id, b));
            }
            size_t dim_with;
            {
                FpRows wr = span;
                for (auto& rv : rad) wr.push_back(rv);
                dim_with = fp_row_rank(wr, pp);
            }
            size_t dim_rad = fp_row_rank(rad, pp);
            P->f = (long)(dim_with - dim_rad);
            // maximal ideal: x with x * id in the radical span
            FpRows sys(dd, FpVec(dd + rad.size(), 0));
            for (long xi = 0; xi < d; ++xi) {
                FpVec b(dd, 0);
                b[(size_t)xi] = 1;
                FpVec prod = A.mul(b, id);
                for (size_t row = 0; row < dd; ++row) sys[row][(size_t)xi] = prod[row];
            }
            for (size_t ri = 0; ri < rad.size(); ++ri)
                for (size_t row = 0; row < dd; ++row)
                    sys[row][dd + ri] = rad[ri][row] == 0 ? 0 : pp - rad[ri][row];
            auto mk = fp_kernel(sys, pp);
            std::vector<ZVec> igen;
            for (size_t i = 0; i < dd; ++i) {
                ZVec v(dd, 0);
                v[i] = p;
                igen.push_back(v);
            }
            for (auto& kv : mk) {
                ZVec v(dd);
                bool nz = false;
                for (size_t i = 0; i < dd; ++i) {
                    v[i] = (unsigned long)kv[i];
                    nz = nz || kv[i] != 0;
                }
                if (nz) igen.push_back(v);
            }
            ZMat im2(dd, ZVec(igen.size()));
            for (size_t i = 0; i < dd; ++i)
                for (size_t j = 0; j < igen.size(); ++j) im2[i][j] = igen[j][i];
            P->ideal_basis_ = hnf_columns(im2);
            out.push_back(P);
        }
        for (auto& P : out) P->e = P->ord_by_ideal(K->from_rational(mpq_class(p)));
        if (out.size() == 1) {
            // a single prime above p: f is irreducible over Q_p
            out[0]->single_ = true;
            auto fact = fp_factor(fp_from_z(K->poly(), pp));
            out[0]->rbar_ = fact[0].first; // residue polynomial of the unique factor
        }

        // uniformizers from the ideal basis
        for (auto& P : out) {
            bool found = false;
            size_t nb = P->ideal_basis_[0].size();
            for (size_t j = 0; j < nb && !found; ++j) {
                ZVec v(dd);
                for (size_t i = 0; i < dd; ++i) v[i] = P->ideal_basis_[i][j];
                FieldElement el = from_order_coords(K, v);
                if (el.is_zero()) continue;
                if (P->ord(el) == 1) {
                    P->pi = el;
                    found = true;
                }
            }
            for (size_t j = 0; j + 1 < nb && !found; ++j)
                for (size_t k2 = j + 1; k2 < nb && !found; ++k2) {
                    ZVec v(dd);
                    for (size_t i = 0; i < dd; ++i)
                        v[i] = P->ideal_basis_[i][j] + P->ideal_basis_[i][k2];
                    FieldElement el = from_order_coords(K, v);
                    if (el.is_zero()) continue;
                    if (P->ord(el) == 1) {
                        P->pi = el;
                        found = true;
                    }
                }
            if (!found) throw SunitError("primes_above: no uniformizer found (ideal path)");
        }
    }

    long efsum = 0;
    for (auto& P : out) efsum += P->e * P->f;
    if (efsum != d) throw SunitError("primes_above: sum e*f != d");

    std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
        if (a->f != b->f) return a->f < b->f;
        if (a->e != b->e) return a->e < b->e;
        return a->pi.coords < b->pi.coords;
    });
    return {out.begin(), out.end()};
}

PlaceSet make_place_set(const NFPtr& K, const std::vector<mpz_class>& s_primes, long prec) {
    PlaceSet S;
    S.K = K;
    std::vector<mpz_class> sorted = s_primes;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (const auto& p : sorted) {
        auto places = primes_above(K, p);
        S.fin.insert(S.fin.end(), places.begin(), places.end());
    }
    S.inf = infinite_places(K, prec);
    return S;
}

long ord_p(const FieldElement& a, const FinitePlace& P) { return P.ord(a); }

RInt abs_value(const FieldElement& a, const FinitePlace& P, long prec) {
    if (a.is_zero()) throw ZeroElement("abs_value of zero");
    long v = P.ord(a);
    mpz_class pf = pow_mpz(P.p, (unsigned long)(P.f * std::abs(v)));
    return RInt::exact(v >= 0 ? mpq_class(1, pf) : mpq_class(pf), prec);
}

RInt abs_value(const FieldElement& a, const InfinitePlace& P, long prec) {
    if (a.is_zero()) throw ZeroElement("abs_value of zero");
    RInt m = P.embed(a, prec).abs();
    return P.real ? m : m * m;
}

std::vector<std::pair<FinitePlacePtr, long>> support(const FieldElement& a) {
    if (a.is_zero()) throw ZeroElement("support of zero");
    const NFPtr K = a.K;
    std::set<mpz_class> primes;
    mpq_class n = K->norm(a);
    for (auto& [p, e] : factor(n.get_num())) primes.insert(p);
    for (auto& [p, e] : factor(n.get_den())) primes.insert(p);
    QVec oc = to_order_coords_q(*K, a.coords);
    for (const auto& c : oc)
        if (c.get_den() != 1)
            for (auto& [p, e] : factor(c.get_den())) primes.insert(p);
    std::vector<std::pair<FinitePlacePtr, long>> out;
    for (const auto& p : primes)
        for (auto& P : primes_above(K, p)) {
            long v = P->ord(a);
            if (v != 0) out.push_back({P, v});
        }
    return out;
}

RInt height(const FieldElement& a, long prec) {
    if (a.is_zero()) throw ZeroElement("height of zero");
    const NFPtr K = a.K;
    RInt h = RInt::exact(0L, prec);
    // finite part: only negative valuations contribute to log^+;
    // candidate primes are the order-coordinate denominators
    std::set<mpz_class> primes;
    QVec oc = to_order_coords_q(*K, a.coords);
    for (const auto& c : oc)
        if (c.get_den() != 1)
            for (auto& [p, e] : factor(c.get_den())) primes.insert(p);
    for (const auto& p : primes) {
        RInt logp = RInt::log_of(p, prec);
        for (auto& P : primes_above(K, p)) {
            long v = P->ord(a);
            if (v < 0) h = h + logp.mul_z(mpz_class(-v * P->f));
        }
    }
    for (auto& P : infinite_places(K, prec)) {
        RInt m = P->embed(a, prec).abs();
        RInt mm = m.max_with(RInt::exact(1L, prec));
        RInt lg = mm.log();
        if (!P->real) lg = lg + lg;
        h = h + lg;
    }
    return h.mul_q(mpq_class(1, K->degree()));
}

RInt height_proj(const std::vector<FieldElement>& coords, long prec) {
    if (coords.empty()) throw SunitError("height_proj of empty tuple");
    const NFPtr K = coords[0].K;
    std::set<mpz_class> primes;
    for (const auto& a : coords) {
        if (a.is_zero()) continue;
        mpq_class n = K->norm(a);
        for (auto& [p, e] : factor(n.get_num())) primes.insert(p);
        for (auto& [p, e] : factor(n.get_den())) primes.insert(p);
        QVec oc = to_order_coords_q(*K, a.coords);
        for (const auto& c : oc)
            if (c.get_den() != 1)
                for (auto& [p, e] : factor(c.get_den())) primes.insert(p);
    }
    RInt h = RInt::exact(0L, prec);
    for (const auto& p : primes) {
        RInt logp = RInt::log_of(p, prec);
        for (auto& P : primes_above(K, p)) {
            bool first = true;
            long mn = 0;
            for (const auto& a : coords) {
                if (a.is_zero()) continue;
                long v = P->ord(a);
                if (first || v < mn) { mn = v; first = false; }
            }
            if (mn != 0) h = h + logp.mul_z(mpz_class(-mn * P->f));
        }
    }
    for (auto& P : infinite_places(K, prec)) {
        RInt best(prec);
        bool first = true;
        for (const auto& a : coords) {
            if (a.is_zero()) continue;
            RInt m = P->embed(a, prec).abs();
            best = first ? m : best.max_with(m);
            first = false;
        }
        RInt lg = best.log();
        if (!P->real) lg = lg + lg;
        h = h + lg;
    }
    return h.mul_q(mpq_class(1, K->degree()));
}

RInt height_h_prime(const FieldElement& b, long d_sub, const InfinitePlace& at, long prec) {
    if (b.is_zero()) throw ZeroElement("h' of zero");
    RInt hb = height(b, prec);
    auto [labs, larg] = at.principal_log(b, prec);
    RInt logmod = (labs.sq() + larg.sq()).sqrt();
    RInt m = hb.mul_z(mpz_class(d_sub)).max_with(logmod).max_with(RInt::exact(1L, prec));
    return m.mul_q(mpq_class(1, d_sub));
}

RInt height_hp_prime(const FieldElement& b, long d_sub, const mpz_class& D,
                     const mpz_class& p, long f_sub, const InfinitePlace& at, long prec) {
    if (b.is_zero()) throw ZeroElement("h'_p of zero");
    RInt hb = height(b, prec);
    auto [labs, larg] = at.principal_log(b, prec);
    RInt logmod = (labs.sq() + larg.sq()).sqrt();
    RInt second = logmod / RInt::pi(prec).mul_z(2 * D);
    RInt third = RInt::log_of(p, prec).mul_q(mpq_class(f_sub, d_sub));
    return hb.max_with(second).max_with(third);
}

// needs the valuation machinery, so it lives here rather than in nfield.cpp
bool is_s_unit(const FieldElement& alpha, const PlaceSet& S) {
    if (alpha.is_zero()) throw ZeroElement("is_s_unit(0)");
    const NFPtr K = alpha.K;
    std::set<mpz_class> s_rats;
    for (auto& P : S.fin) s_rats.insert(P->p);

    // norm support must lie under S_fin: divide out S-primes, cofactor +-1
    mpq_class n = K->norm(alpha);
    mpz_class num = abs(n.get_num()), den = n.get_den();
    for (const auto& p : s_rats) {
        while (num % p == 0) num /= p;
        while (den % p == 0) den /= p;
    }
    if (num != 1 || den != 1) return false;

    // denominators of the order coordinates must also be S-supported
    // (catches valuation cancellations invisible in the norm)
    QVec oc = to_order_coords_q(*K, alpha.coords);
    for (const auto& c : oc) {
        mpz_class cd = c.get_den();
        for (const auto& p : s_rats)
            while (cd % p == 0) cd /= p;
        if (cd != 1) return false;
    }

    // within S-rational primes, the S places must account for the whole norm
    // valuation, and any sibling places outside S must have ord zero
    for (const auto& p : s_rats) {
        long vnorm = n == 0 ? 0 : ord_p_rat(n, p);
        long acc = 0;
        auto all_above = primes_above(K, p);
        for (auto& P : all_above) {
            bool in_s = false;
            for (auto& Q : S.fin)
                if (Q->p == P->p && Q->e == P->e && Q->f == P->f && Q->pi == P->pi) in_s = true;
            long v = P->ord(alpha);
            if (!in_s && v != 0) return false;
            if (in_s) acc += P->f * v;
        }
        if (acc != vnorm) return false;
    }
    return true;
}

} // namespace sunit
