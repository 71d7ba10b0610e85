#include "sunit/bounds.hpp"

#include <algorithm>

namespace sunit {

namespace {

// x^y = exp(y log x), x > 0
RInt pow_interval(const RInt& x, const RInt& y) {
    return (x.log() * y).exp();
}

mpz_class factorial(long n) {
    mpz_class r = 1;
    for (long i = 2; i <= n; ++i) r *= i;
    return r;
}

// |principal Log| at one embedding
RInt log_modulus(const FieldElement& b, const InfinitePlace& at, long prec) {
    auto [labs, larg] = at.principal_log(b, prec);
    return (labs.sq() + larg.sq()).sqrt();
}

// max over all embeddings of |Log sigma(b)|; a sound stand-in when no
// embedding is distinguished (the p-adic height h'_p case)
RInt log_modulus_max(const FieldElement& b, long prec) {
    RInt best(prec);
    bool first = true;
    for (auto& pl : infinite_places(b.K, prec)) {
        RInt m = log_modulus(b, *pl, prec);
        best = first ? m : best.max_with(m);
        first = false;
    }
    return best;
}

// h'_p(b) = max{ h(b), |Log b| / (2 pi D), f log p / d' } with the embedding
// maximized out
RInt hp_prime_max(const FieldElement& b, long d_sub, const mpz_class& D, const mpz_class& p,
                  long f_pl, long prec) {
    RInt hb = height(b, prec);
    RInt second = log_modulus_max(b, prec) / RInt::pi(prec).mul_z(2 * D);
    RInt third = RInt::log_of(p, prec).mul_q(mpq_class(f_pl, d_sub));
    return hb.max_with(second).max_with(third);
}

// D of the Yu theorem: d' when the right roots of unity lie in the subfield,
// else 2d'
mpz_class yu_D(const SUnitBasis& basis, const std::vector<FieldElement>& alphas,
               const mpz_class& p, long d_sub) {
    const NFPtr K = basis.K;
    long want = p == 2 ? 3 : 4; // mu_3 for p = 2, mu_4 otherwise
    if (basis.w % want == 0) {
        FieldElement zeta = K->pow(basis.rho0, basis.w / want);
        // membership of zeta in the subalgebra generated by the alphas
        auto sub = K->subfield_basis(alphas);
        QMat rows;
        for (auto& e : sub) rows.push_back(e.coords);
        size_t r0 = q_rank(rows);
        rows.push_back(zeta.coords);
        if (q_rank(rows) == r0) return d_sub;
    }
    return 2 * d_sub;
}

} // namespace

RInt bw_constant(long t, long d, long prec) {
    if (t < 1 || d < 1) throw SunitError("bw_constant: need t, d >= 1");
    mpz_class c = 18 * factorial(t + 2);
    c *= pow_mpz(mpz_class(t + 1), (unsigned long)(t + 2));
    c *= pow_mpz(mpz_class(32 * d), (unsigned long)(t + 3));
    return RInt::exact(c, prec) * RInt::log_of(mpz_class(2 * (t + 1) * d), prec);
}

YuConstants yu_constants(const FinitePlacePtr& place, const std::vector<FieldElement>& alphas,
                         long d_sub, const mpz_class& D, long prec) {
    for (const auto& a : alphas)
        if (place->ord(a) != 0) throw NotAUnitAtP("yu_constants: ord_p(alpha_j) != 0");
    long n = (long)alphas.size();
    const mpz_class& p = place->p;
    YuConstants yc;

    mpq_class base;
    mpz_class lead;
    if (p == 2) {
        lead = 197142;
        base = 36;
    } else if (p % 4 == 1) {
        lead = 35009;
        base = mpq_class(45, 2);
    } else {
        lead = 30760;
        base = 25;
    }
    mpq_class k2 = lead;
    for (long i = 0; i < n; ++i) k2 *= base;
    yc.k2 = RInt::exact(k2, prec);

    RInt logp = RInt::log_of(p, prec);
    RInt prod = RInt::exact(1L, prec);
    RInt H(prec);
    bool first = true;
    for (const auto& a : alphas) {
        RInt h = hp_prime_max(a, d_sub, D, p, place->f, prec);
        prod = prod * h;
        H = first ? h : H.max_with(h);
        first = false;
    }
    yc.H = H;

    RInt k3 = RInt::exact(pow_mpz(mpz_class(n + 1), (unsigned long)(2 * n + 4)), prec);
    k3 = k3 * pow_interval(RInt::exact(p, prec), RInt::exact(mpq_class(D * place->f, d_sub), prec));
    RInt flogp = logp.mul_z(mpz_class(place->f));
    k3 = k3 / flogp.pow_ui((unsigned long)(n + 1));
    k3 = k3 * RInt::exact(pow_mpz(D, (unsigned long)(n + 2)), prec);
    yc.k3 = k3 * prod;

    mpz_class inside = (p == 2 ? mpz_class(3) * pow_mpz(2, 10) : pow_mpz(2, 11));
    mpz_class k4num = inside * mpz_class(n + 1) * mpz_class(n + 1) * D * D;
    RInt k4arg = RInt::exact(k4num, prec) * H;
    yc.k4 = k4arg.log();

    yc.k5 = RInt::exact(D, prec).log().mul_z(2);
    return yc;
}

RInt pdw_solve(const RInt& a, const RInt& b, const RInt& h, long prec) {
    // hypotheses: a >= 0, h >= 1, b > (e^2 / h)^h
    if (!a.certainly_ge_q(0)) throw HypothesisViolated("pdw: a < 0 possible");
    if (!h.certainly_ge_q(1)) throw HypothesisViolated("pdw: h < 1 possible");
    RInt e2_over_h = RInt::exact(2L, prec).exp() / h;
    RInt thresh = pow_interval(e2_over_h, h);
    if (!b.certainly_gt(thresh)) throw HypothesisViolated("pdw: b <= (e^2/h)^h possible");
    // 2^h ( a^{1/h} + b^{1/h} log(h^h b) )^h
    RInt hinv = RInt::exact(1L, prec) / h;
    RInt a_pow(prec);
    if (a.is_positive()) {
        a_pow = pow_interval(a, hinv);
    } else if (a.hi_d() <= 0) {
        a_pow = RInt::exact(0L, prec);
    } else {
        // base touches 0: hull [0, a.hi^{1/h}]
        RInt up = pow_interval(RInt::exact(a.hi_q(), prec), hinv);
        mpfr_set_zero(a_pow.lo, 1);
        mpfr_set(a_pow.hi, up.hi, MPFR_RNDU);
    }
    RInt b_pow = pow_interval(b, hinv);
    RInt hhb = pow_interval(h, h) * b;
    RInt inner = a_pow + b_pow * hhb.log();
    return pow_interval(RInt::exact(2L, prec), h) * pow_interval(inner, h);
}

RInt pdw_bracket(const RInt& a, const RInt& b, const RInt& h, long prec) {
    // certified upper bound for the largest root of g(x) = x - a - b (log x)^h:
    // find X with g(X) > 0 and g increasing on [X, inf)
    RInt X = a.max_with(b).max_with(RInt::exact(16L, prec)) + RInt::exact(16L, prec);
    for (int it = 0; it < 500; ++it) {
        RInt lx = X.log();
        RInt gx = X - a - b * pow_interval(lx, h);
        // derivative condition: b h (log X)^{h-1} / X < 1, and X beyond the
        // maximum of (log x)^{h-1}/x
        RInt deriv = b * h * pow_interval(lx, h - RInt::exact(1L, prec)) / X;
        bool xbig = X.certainly_gt((h - RInt::exact(1L, prec)).max_with(RInt::exact(1L, prec)).exp());
        if (gx.is_positive() && deriv.certainly_lt(RInt::exact(1L, prec)) && xbig) return X;
        X = X + X;
    }
    throw PrecisionExhausted("pdw_bracket: no certified bound found");
}

std::array<RInt, 3> c1_c3(const PlaceSet& S, const SUnitBasis& basis, long prec) {
    long t = S.t();
    if (basis.rank() != t) throw SunitError("c1_c3: basis rank must equal |S| - 1");
    size_t total = S.size();
    RInt c1(prec);
    bool found = false;
    for (size_t skip = 0; skip < total; ++skip) {
        std::vector<std::vector<RInt>> M;
        for (size_t i = 0; i < total; ++i) {
            if (i == skip) continue;
            std::vector<RInt> row;
            for (long j = 0; j < t; ++j) {
                const FieldElement& rho = basis.rho[(size_t)j];
                if (i < S.fin.size()) {
                    const auto& P = S.fin[i];
                    long v = P->ord(rho);
                    row.push_back(RInt::log_of(P->p, prec).mul_z(mpz_class(-v * P->f)));
                } else {
                    row.push_back(S.inf[i - S.fin.size()]->log_abs_value(rho, prec));
                }
            }
            M.push_back(std::move(row));
        }
        auto inv = ri_inverse(M);
        if (!inv) continue; // enclosure could not certify invertibility
        RInt norm(prec);
        bool first = true;
        for (auto& row : *inv) {
            RInt s = RInt::exact(0L, prec);
            for (auto& x : row) s = s + x.abs();
            norm = first ? s : norm.max_with(s);
            first = false;
        }
        c1 = found ? c1.max_with(norm) : norm;
        found = true;
    }
    if (!found) throw AllSingular("c1: no U subset gave a certified invertible matrix");
    RInt c2 = RInt::exact(1L, prec) / c1;
    RInt c3 = c2.mul_q(mpq_class(9999999, 10000000)).mul_q(mpq_class(1, t));
    return {c1, c2, c3};
}

std::pair<RInt, std::vector<PlaceBoundReport>> K0_bound(const PlaceSet& S,
                                                        const SUnitBasis& basis,
                                                        const RInt& c3, long prec) {
    std::vector<PlaceBoundReport> reports;
    RInt K0 = RInt::exact(0L, prec);
    const NFPtr K = S.K;
    for (size_t l = 0; l < S.fin.size(); ++l) {
        const auto& P = S.fin[l];
        MuSystem ms = build_mu_system(P, basis);
        RInt logNp = RInt::log_of(P->p, prec).mul_z(mpz_class(P->f));
        RInt c5 = c3 / logNp.mul_z(mpz_class(P->e));

        // Yu per torsion candidate; the worst constants win
        RInt c8(prec), c9(prec);
        YuConstants worst;
        bool first = true;
        for (const auto& mu0 : ms.mu0_candidates) {
            std::vector<FieldElement> alphas;
            alphas.push_back(mu0);
            for (auto& m : ms.mu) alphas.push_back(m);
            long d_sub = K->subfield_degree(alphas);
            mpz_class D = yu_D(basis, alphas, P->p, d_sub);
            YuConstants yc = yu_constants(P, alphas, d_sub, D, prec);
            RInt c8c = yc.k2 * yc.k3 * yc.k4;
            // Yu's B is the inflated d_i bound; fold log(inflation) into c9
            RInt infl_log = ms.inflation <= 1
                                ? RInt::exact(0L, prec)
                                : RInt::exact(ms.inflation, prec).log();
            RInt c9c = c8c * (yc.k5 + infl_log);
            if (first || c8c.hi_d() > c8.hi_d()) {
                worst = yc;
            }
            c8 = first ? c8c : c8.max_with(c8c);
            c9 = first ? c9c : c9.max_with(c9c);
            first = false;
        }

        RInt ec5 = c5.mul_z(mpz_class(P->e));
        RInt a = c9 / ec5;
        RInt b = c8 / ec5;
        RInt one = RInt::exact(1L, prec);
        RInt K0l(prec);
        try {
            K0l = pdw_solve(a, b, one, prec);
        } catch (const HypothesisViolated&) {
            K0l = pdw_bracket(a, b, one, prec);
        }
        PlaceBoundReport rep;
        rep.finite = true;
        rep.place_index = l;
        rep.K_value = K0l.hi_d();
        rep.c5 = c5.hi_d();
        rep.c8 = c8.hi_d();
        rep.c9 = c9.hi_d();
        rep.k2 = worst.k2.hi_d();
        rep.k3 = worst.k3.hi_d();
        rep.k4 = worst.k4.hi_d();
        rep.k5 = worst.k5.hi_d();
        rep.inflation = ms.inflation.get_d();
        reports.push_back(rep);
        K0 = K0.max_with(K0l);
    }
    return {K0, reports};
}

std::pair<RInt, std::vector<PlaceBoundReport>> K1_bound(const PlaceSet& S,
                                                        const SUnitBasis& basis,
                                                        const RInt& c3, long prec) {
    std::vector<PlaceBoundReport> reports;
    RInt K1(prec);
    bool firstK = true;
    const NFPtr K = S.K;
    long t = basis.rank();

    // d' = [Q(rho_0, ..., rho_t) : Q]
    std::vector<FieldElement> gens = basis.rho;
    gens.push_back(basis.rho0);
    long d_sub = K->subfield_degree(gens);

    RInt log4 = RInt::log_of(mpz_class(4), prec);
    RInt C = bw_constant(t, d_sub, prec);
    RInt two_pi = RInt::pi(prec).mul_z(2);

    for (size_t l = 0; l < S.inf.size(); ++l) {
        const auto& P = S.inf[l];
        long delta = P->delta();
        RInt c11 = log4.mul_z(mpz_class(delta)) / c3;
        RInt c13 = c3.mul_q(mpq_class(1, delta));

        // c14 = C(t, d') * prod h'(rho_j), slot 0 = max(h'(rho0), h'(zeta))
        RInt prod = C;
        for (long j = 0; j < t; ++j)
            prod = prod * height_h_prime(basis.rho[(size_t)j], d_sub, *P, prec);
        RInt h_rho0 = height_h_prime(basis.rho0, d_sub, *P, prec);
        RInt h_zeta = (two_pi.mul_q(mpq_class(1, basis.w)))
                          .max_with(RInt::exact(1L, prec))
                          .mul_q(mpq_class(1, d_sub));
        prod = prod * h_rho0.max_with(h_zeta);
        RInt c14 = prod;

        RInt log2 = RInt::log_of(mpz_class(2), prec);
        RInt a = (log2 + c14 * RInt::exact(mpz_class((t + 1) * basis.w), prec).log()) / c13;
        RInt b = c14 / c13;
        RInt one = RInt::exact(1L, prec);
        RInt c15(prec);
        try {
            c15 = pdw_solve(a, b, one, prec);
        } catch (const HypothesisViolated&) {
            c15 = pdw_bracket(a, b, one, prec);
        }
        RInt K1l = c11.max_with(c15);

        PlaceBoundReport rep;
        rep.finite = false;
        rep.place_index = S.fin.size() + l;
        rep.K_value = K1l.hi_d();
        rep.c11 = c11.hi_d();
        rep.c13 = c13.hi_d();
        rep.c14 = c14.hi_d();
        rep.c15 = c15.hi_d();
        reports.push_back(rep);
        K1 = firstK ? K1l : K1.max_with(K1l);
        firstK = false;
    }
    return {K1, reports};
}

BoundConstants initial_bound(const PlaceSet& S, const SUnitBasis& basis, long prec) {
    BoundConstants bc;
    bc.t = basis.rank();
    bc.w = basis.w;
    auto c = c1_c3(S, basis, prec);
    bc.c1 = c[0];
    bc.c2 = c[1];
    bc.c3 = c[2];
    auto [K0, rep0] = K0_bound(S, basis, bc.c3, prec);
    auto [K1, rep1] = K1_bound(S, basis, bc.c3, prec);
    bc.K0 = K0;
    bc.K1 = K1;
    bc.places = rep0;
    bc.places.insert(bc.places.end(), rep1.begin(), rep1.end());
    std::vector<FieldElement> gens = basis.rho;
    gens.push_back(basis.rho0);
    bc.dK_prime = S.K->subfield_degree(gens);
    // Baker-Wustholz needs B > 3 and the infinite-place step needs B >= c11
    bc.B_init = K0.max_with(K1).max_with(RInt::exact(4L, prec));
    bc.B_init_int = ceil_mpq(bc.B_init.hi_q());
    return bc;
}

} // namespace sunit
