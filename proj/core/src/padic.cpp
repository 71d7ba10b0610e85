#include "sunit/padic.hpp"

#include <algorithm>

namespace sunit {

LocalField::LocalField(FinitePlacePtr place, long prec)
    : place_(std::move(place)), p_(place_->p), e_(place_->e), f_(place_->f), prec_(prec) {
    n_ = e_ * f_;
    g_ = place_->local_poly(prec + 4);
}

const mpz_class& LocalField::ppow(long k) const {
    auto& cache = const_cast<std::vector<mpz_class>&>(ppow_);
    while ((long)cache.size() <= k) {
        if (cache.empty()) cache.push_back(1);
        else cache.push_back(cache.back() * p_);
    }
    return cache[(size_t)k];
}

PadicNumber LocalField::normalized(mpz_class u, long v, long N) const {
    if (u == 0 || v >= N) return {0, 0, N};
    long k = 0;
    while (mpz_divisible_p(u.get_mpz_t(), p_.get_mpz_t())) {
        u /= p_;
        ++k;
    }
    v += k;
    if (v >= N) return {0, 0, N};
    u %= ppow(N - v);
    if (u < 0) u += ppow(N - v);
    if (u == 0) return {0, 0, N};
    return {u, v, N};
}

PadicNumber LocalField::from_rational(const mpq_class& x, long N) const {
    if (x == 0) return zero(N);
    long vnum = ord_p_int(x.get_num(), p_);
    long vden = ord_p_int(x.get_den(), p_);
    long v = vnum - vden;
    if (v >= N) return zero(N);
    mpz_class num = x.get_num() / ppow(vnum);
    mpz_class den = x.get_den() / ppow(vden);
    mpz_class m = ppow(N - v);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), den.get_mpz_t(), m.get_mpz_t()) == 0)
        throw SunitError("from_rational: denominator not invertible mod p^k");
    return normalized(num * inv % m, v, N);
}

PadicNumber LocalField::add(const PadicNumber& a, const PadicNumber& b) const {
    long N = std::min(a.N, b.N);
    if (a.is_zero() && b.is_zero()) return zero(N);
    if (a.is_zero()) return normalized(b.u, b.v, N);
    if (b.is_zero()) return normalized(a.u, a.v, N);
    long v = std::min(a.v, b.v);
    if (v >= N) return zero(N);
    mpz_class u = a.u * ppow(a.v - v) + b.u * ppow(b.v - v);
    return normalized(std::move(u), v, N);
}

PadicNumber LocalField::neg(const PadicNumber& a) const {
    if (a.is_zero()) return a;
    return normalized(-a.u, a.v, a.N);
}

PadicNumber LocalField::sub(const PadicNumber& a, const PadicNumber& b) const {
    return add(a, neg(b));
}

PadicNumber LocalField::mul(const PadicNumber& a, const PadicNumber& b) const {
    long av = a.is_zero() ? a.N : a.v;
    long bv = b.is_zero() ? b.N : b.v;
    long N = std::min(a.N + bv, b.N + av);
    if (a.is_zero() || b.is_zero()) return zero(N);
    return normalized(a.u * b.u, a.v + b.v, N);
}

PadicNumber LocalField::div(const PadicNumber& a, const PadicNumber& b) const {
    if (b.is_zero()) throw SunitError("padic division by zero-to-precision");
    if (a.is_zero()) return zero(a.N - b.v);
    long rel = std::min(a.N - a.v, b.N - b.v);
    long v = a.v - b.v;
    mpz_class m = ppow(rel);
    mpz_class inv;
    if (mpz_invert(inv.get_mpz_t(), b.u.get_mpz_t(), m.get_mpz_t()) == 0)
        throw SunitError("padic div: unit not invertible");
    return normalized(a.u * inv % m, v, v + rel);
}

LocalField::Elem LocalField::elem_one(long N) const {
    Elem r((size_t)n_, zero(N));
    r[0] = from_rational(1, N);
    return r;
}

LocalField::Elem LocalField::elem_add(const Elem& a, const Elem& b) const {
    Elem r((size_t)n_);
    for (long i = 0; i < n_; ++i) r[(size_t)i] = add(a[(size_t)i], b[(size_t)i]);
    return r;
}

LocalField::Elem LocalField::elem_sub(const Elem& a, const Elem& b) const {
    Elem r((size_t)n_);
    for (long i = 0; i < n_; ++i) r[(size_t)i] = sub(a[(size_t)i], b[(size_t)i]);
    return r;
}

LocalField::Elem LocalField::elem_mul(const Elem& a, const Elem& b) const {
    std::vector<PadicNumber> prod((size_t)(2 * n_ - 1), zero(4 * prec_));
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j < n_; ++j)
            prod[(size_t)(i + j)] = add(prod[(size_t)(i + j)], mul(a[(size_t)i], b[(size_t)j]));
    // reduce by the monic local polynomial
    for (long k = 2 * n_ - 2; k >= n_; --k) {
        PadicNumber top = prod[(size_t)k];
        if (top.is_zero()) continue;
        prod[(size_t)k] = zero(top.N);
        for (long i = 0; i < n_; ++i) {
            if (g_[(size_t)i] == 0) continue;
            PadicNumber c = from_rational(mpq_class(g_[(size_t)i]), top.N + 4);
            prod[(size_t)(k - n_ + i)] = sub(prod[(size_t)(k - n_ + i)], mul(top, c));
        }
    }
    return Elem(prod.begin(), prod.begin() + n_);
}

LocalField::Elem LocalField::elem_pow(Elem base, mpz_class e) const {
    if (e < 0) throw SunitError("elem_pow: negative exponent");
    Elem r = elem_one(4 * prec_);
    while (e > 0) {
        if (mpz_odd_p(e.get_mpz_t())) r = elem_mul(r, base);
        base = elem_mul(base, base);
        e >>= 1;
    }
    return r;
}

LocalField::Elem LocalField::scalar_mul(const PadicNumber& c, const Elem& a) const {
    Elem r((size_t)n_);
    for (long i = 0; i < n_; ++i) r[(size_t)i] = mul(c, a[(size_t)i]);
    return r;
}

long LocalField::elem_ord_vp(const Elem& a) const {
    // ord_p(N_loc(a)) = f * ord_p(a): Sylvester determinant of (g, a) with
    // valuation-pivoted elimination
    long dega = -1;
    for (long i = n_ - 1; i >= 0; --i)
        if (!a[(size_t)i].is_zero()) { dega = i; break; }
    if (dega < 0) throw PrecisionExhausted("elem_ord_vp: element is zero to precision");
    if (dega == 0) return a[0].v * e_;
    long dim = n_ + dega;
    std::vector<std::vector<PadicNumber>> m(
        (size_t)dim, std::vector<PadicNumber>((size_t)dim, zero(4 * prec_)));
    for (long i = 0; i < dega; ++i)
        for (long j = 0; j <= n_; ++j)
            m[(size_t)i][(size_t)(i + j)] = from_rational(mpq_class(g_[(size_t)(n_ - j)]), 2 * prec_);
    for (long i = 0; i < n_; ++i)
        for (long j = 0; j <= dega; ++j)
            m[(size_t)(dega + i)][(size_t)(i + j)] = a[(size_t)(dega - j)];
    long vdet = 0;
    for (long c = 0; c < dim; ++c) {
        long best = -1, bestv = 0;
        for (long r = c; r < dim; ++r) {
            const PadicNumber& x = m[(size_t)r][(size_t)c];
            if (x.is_zero()) continue;
            if (best < 0 || x.v < bestv) { best = r; bestv = x.v; }
        }
        if (best < 0) throw PrecisionExhausted("elem_ord_vp: singular to working precision");
        std::swap(m[(size_t)best], m[(size_t)c]);
        vdet += m[(size_t)c][(size_t)c].v;
        for (long r = c + 1; r < dim; ++r) {
            if (m[(size_t)r][(size_t)c].is_zero()) continue;
            PadicNumber factor = div(m[(size_t)r][(size_t)c], m[(size_t)c][(size_t)c]);
            for (long j = c; j < dim; ++j)
                m[(size_t)r][(size_t)j] =
                    sub(m[(size_t)r][(size_t)j], mul(factor, m[(size_t)c][(size_t)j]));
        }
    }
    if (vdet % f_ != 0) throw SunitError("elem_ord_vp: determinant ord not divisible by f");
    return (vdet / f_) * e_;
}

LocalField::Elem LocalField::embed(const FieldElement& alpha, long N) const {
    std::vector<PadicNumber> poly(std::max(alpha.coords.size(), (size_t)n_), zero(N));
    for (size_t i = 0; i < alpha.coords.size(); ++i) poly[i] = from_rational(alpha.coords[i], N);
    for (long k = (long)poly.size() - 1; k >= n_; --k) {
        PadicNumber top = poly[(size_t)k];
        if (top.is_zero()) continue;
        poly[(size_t)k] = zero(top.N);
        for (long i = 0; i < n_; ++i) {
            if (g_[(size_t)i] == 0) continue;
            PadicNumber c = from_rational(mpq_class(g_[(size_t)i]), N + 4);
            poly[(size_t)(k - n_ + i)] = sub(poly[(size_t)(k - n_ + i)], mul(top, c));
        }
    }
    return Elem(poly.begin(), poly.begin() + n_);
}

LocalField::Elem LocalField::log(const FieldElement& alpha, long N) const {
    if (place_->ord(alpha) != 0) throw NotAUnitAtP("padic_log requires ord_p(alpha) = 0");
    long pl = (long)p_.get_ui();
    long guard = 8 + 2 * e_;
    long work = N + guard;
    Elem x = embed(alpha, work);

    // kill the Teichmueller part, then p-power into the convergence disk
    mpz_class m1 = pow_mpz(p_, (unsigned long)f_) - 1;
    Elem y = elem_pow(x, m1);
    long divisor_ord = 0;
    for (int k = 0;; ++k) {
        if (k == 64) throw PrecisionExhausted("padic_log: cannot enter convergence disk");
        Elem z = elem_sub(y, elem_one(work));
        bool deep;
        try {
            long vz = elem_ord_vp(z);
            // ord_p(z) > 1/(p-1)  <=>  vz (p-1) > e, and for p = 2 we insist on
            // vz >= 2e so that squaring strictly increases the valuation
            deep = vz > 0 && vz * (pl - 1) > e_ && (pl != 2 || vz >= 2 * e_);
        } catch (const PrecisionExhausted&) {
            deep = true; // y = 1 to precision: log vanishes to precision
        }
        if (deep) break;
        y = elem_pow(y, p_);
        ++divisor_ord;
    }

    Elem z = elem_sub(elem_one(work), y); // 1 - y
    long vz;
    try {
        vz = elem_ord_vp(z);
    } catch (const PrecisionExhausted&) {
        vz = work * e_;
    }
    Elem sum((size_t)n_, zero(work));
    Elem term = elem_one(work);
    long kmax = vz > 0 ? ((work + 4) * e_ / vz + 2 * e_ + 8) : 4;
    for (long k = 1; k <= kmax; ++k) {
        term = elem_mul(term, z);
        PadicNumber kk = from_rational(mpq_class(1, mpz_class(k)), work);
        sum = elem_add(sum, scalar_mul(kk, term));
    }
    PadicNumber minv = from_rational(mpq_class(-1, m1 * ppow(divisor_ord)), work);
    Elem res((size_t)n_);
    for (long i = 0; i < n_; ++i) {
        PadicNumber c = mul(sum[(size_t)i], minv);
        if (c.N > N) c = normalized(c.u, c.v, N);
        res[(size_t)i] = c;
    }
    return res;
}

LocalField::Elem padic_log(const FieldElement& alpha, const FinitePlacePtr& place, long N) {
    LocalField L(place, N + 16);
    return L.log(alpha, N);
}

LocalField::Elem completion_embed(const FieldElement& alpha, const FinitePlacePtr& place, long N) {
    LocalField L(place, N + 16);
    return L.embed(alpha, N);
}

long PadicLinearForm::n() const { return place->e * place->f; }

mpz_class PadicLinearForm::kappa_int(size_t j, size_t i, long u) const {
    const PadicNumber& x = a[j][i];
    mpz_class pu = pow_mpz(place->p, (unsigned long)u);
    if (x.N - c17 < u) throw PrecisionExhausted("kappa_int: insufficient precision");
    if (x.is_zero()) return 0;
    long vk = x.v - c17;
    if (vk < 0) throw SunitError("kappa_int: kappa not integral");
    if (vk >= u) return 0;
    mpz_class val = x.u * pow_mpz(place->p, (unsigned long)vk) % pu;
    if (val < 0) val += pu;
    return val;
}

MuSystem build_mu_system(const FinitePlacePtr& place, const SUnitBasis& basis) {
    MuSystem ms;
    const NFPtr K = basis.K;
    long t = basis.rank();

    ZMat vals(1, ZVec((size_t)t));
    bool any_nonzero = false;
    for (long i = 0; i < t; ++i) {
        long o = place->ord(basis.rho[(size_t)i]);
        vals[0][(size_t)i] = o;
        any_nonzero = any_nonzero || o != 0;
    }
    if (!any_nonzero)
        throw SunitError("build_mu_system: no generator has nonzero valuation at the place");
    ms.kernel_basis = hnf_columns(z_kernel(vals));
    if (t > 1 && (long)ms.kernel_basis[0].size() != t - 1)
        throw SunitError("build_mu_system: kernel rank unexpected");

    if (t == 1) {
        ms.inflation = 1;
    } else {
        // d = (pivot block)^{-1} b on the kernel coordinates, so
        // |d_i| <= ||block^{-1}||_row * B
        const ZMat& H = ms.kernel_basis;
        QMat sq;
        for (long r = 0; r < t && (long)sq.size() < t - 1; ++r) {
            QMat test = sq;
            QVec row((size_t)(t - 1));
            for (long j = 0; j < t - 1; ++j) row[(size_t)j] = mpq_class(H[(size_t)r][(size_t)j]);
            test.push_back(row);
            if ((long)q_rank(test) == (long)test.size()) sq = test;
        }
        if ((long)sq.size() != t - 1) throw SunitError("build_mu_system: no pivot block");
        auto inv = q_inverse(sq);
        if (!inv) throw SunitError("build_mu_system: pivot block singular");
        mpq_class best = 0;
        for (auto& row : *inv) {
            mpq_class s = 0;
            for (auto& x : row) s += abs(x);
            best = std::max(best, s);
        }
        ms.inflation = std::max(best, mpq_class(1));
    }

    for (long j = 0; j < t - 1; ++j) {
        ExponentVector ev;
        ev.a0 = 0;
        ev.a.resize((size_t)t);
        for (long i = 0; i < t; ++i) ev.a[(size_t)i] = ms.kernel_basis[(size_t)i][(size_t)j].get_si();
        ms.mu.push_back(phi_rho(basis, ev));
    }
    for (long j = 0; j < basis.w; ++j) ms.mu0_candidates.push_back(K->pow(basis.rho0, j));
    return ms;
}

PadicLinearForm build_linear_form(const FinitePlacePtr& place, const SUnitBasis& basis,
                                  long prec) {
    PadicLinearForm form;
    form.place = place;
    form.basis = basis;
    form.prec = prec;
    long t = basis.rank();

    MuSystem ms = build_mu_system(place, basis);
    form.kernel_basis = ms.kernel_basis;
    form.mu = ms.mu;
    form.mu0_candidates = ms.mu0_candidates;
    form.inflation = ms.inflation;

    form.disc_ord = place->local_disc_ord();

    LocalField L(place, prec + 16);
    long n = L.n();
    form.a.resize((size_t)std::max(t, 1L));
    form.a[0].assign((size_t)n, PadicNumber{0, 0, prec});
    bool all_zero = true;
    long c17 = 0;
    bool first = true;
    for (long j = 1; j < t; ++j) {
        form.a[(size_t)j] = L.log(form.mu[(size_t)(j - 1)], prec);
        for (long i = 0; i < n; ++i) {
            const PadicNumber& x = form.a[(size_t)j][(size_t)i];
            if (x.is_zero()) continue;
            all_zero = false;
            if (first || x.v < c17) { c17 = x.v; first = false; }
        }
    }
    if (t > 1 && all_zero)
        throw PrecisionExhausted("build_linear_form: all a_{j,i} vanish to precision");
    if (t == 1) c17 = 0;
    form.c17 = c17;
    form.c18 = mpq_class(c17) + mpq_class(form.disc_ord, 2);

    for (long i = 0; i < n; ++i) {
        const PadicNumber& a0 = form.a[0][(size_t)i];
        if (!a0.is_zero() && a0.v < c17) form.early_exit = true;
    }
    return form;
}

} // namespace sunit
