#include "sunit/apps.hpp"

#include <chrono>
#include <cmath>
#include <iostream>
#include <sstream>

#include <fstream>

#include <CLI11.hpp>
#include <json.hpp>

namespace sunit {

namespace {

using nlohmann::json;

mpq_class mpq_from_string(const std::string& s) {
    mpq_class v(s);
    v.canonicalize();
    return v;
}

FieldElement element_from_order_coords(const NFPtr& K, const std::vector<long>& c) {
    QVec v((size_t)K->degree(), 0);
    const QMat& B = K->integral_basis();
    for (long i = 0; i < K->degree(); ++i) {
        if (c[(size_t)i] == 0) continue;
        for (long j = 0; j < K->degree(); ++j)
            v[(size_t)j] += mpq_class(c[(size_t)i]) * B[(size_t)i][(size_t)j];
    }
    return K->element(std::move(v));
}

bool norm_is_s_supported(const NFPtr& K, const FieldElement& x,
                         const std::vector<mpz_class>& s_rats) {
    mpq_class n = K->norm(x);
    if (n == 0) return false;
    mpz_class num = abs(n.get_num()), den = n.get_den();
    for (const auto& p : s_rats) {
        while (num % p == 0) num /= p;
        while (den % p == 0) den /= p;
    }
    return num == 1 && den == 1;
}

size_t d_rank(std::vector<std::vector<double>> m, double eps = 1e-9) {
    size_t rows = m.size(), cols = rows ? m[0].size() : 0, rank = 0;
    for (size_t c = 0; c < cols && rank < rows; ++c) {
        size_t piv = rank;
        double best = 0;
        for (size_t r = rank; r < rows; ++r)
            if (std::fabs(m[r][c]) > best) { best = std::fabs(m[r][c]); piv = r; }
        if (best < eps) continue;
        std::swap(m[piv], m[rank]);
        for (size_t r = 0; r < rows; ++r) {
            if (r == rank) continue;
            double f = m[r][c] / m[rank][c];
            for (size_t j = c; j < cols; ++j) m[r][j] -= f * m[rank][j];
        }
        ++rank;
    }
    return rank;
}

std::vector<double> combined_vector(const PlaceSet& S, const FieldElement& x, long prec) {
    std::vector<double> v;
    for (auto& P : S.fin) v.push_back((double)P->ord(x) * 16.0);
    for (auto& pl : S.inf) v.push_back(pl->log_abs_value(x, prec).mid_d());
    return v;
}

FieldElement canonical_twist(const NFPtr& K, const FieldElement& rho0, long w,
                             const FieldElement& x) {
    FieldElement best = x;
    FieldElement cur = x;
    for (long j = 1; j < w; ++j) {
        cur = K->mul(cur, rho0);
        if (cur < best) best = cur;
    }
    return best;
}

// torsion subgroup by box search over integral coordinates
std::pair<FieldElement, long> find_torsion(const NFPtr& K, long box) {
    long d = K->degree();
    std::vector<long> c((size_t)d, -box);
    FieldElement best = K->from_rational(-1);
    long w = 2;
    std::vector<long> orders;
    for (long m = 1; m <= 4 * d + 26; ++m) {
        long phi = 0;
        for (long x = 1; x <= m; ++x)
            if (std::gcd(x, m) == 1) ++phi;
        if (d % phi == 0) orders.push_back(m);
    }
    long max_order = orders.back();
    while (true) {
        FieldElement x = element_from_order_coords(K, c);
        if (!x.is_zero()) {
            mpq_class n = K->norm(x);
            if (n == 1 || n == -1) {
                FieldElement p = x;
                for (long m = 1; m <= max_order; ++m) {
                    if (p == K->one()) {
                        if (m > w) {
                            w = m;
                            best = x;
                        }
                        break;
                    }
                    p = K->mul(p, x);
                }
            }
        }
        size_t i = 0;
        while (i < (size_t)d && c[i] == box) { c[i] = -box; ++i; }
        if (i == (size_t)d) break;
        ++c[i];
    }
    return {best, w};
}

uint64_t primitive_root_of(uint64_t q) {
    uint64_t phi = q - 1;
    auto fact = factor(mpz_class((unsigned long)phi));
    for (uint64_t g = 2; g < q; ++g) {
        bool ok = true;
        for (auto& [pf, e] : fact)
            if (powmod(g, phi / pf.get_ui(), q) == 1) { ok = false; break; }
        if (ok) return g;
    }
    throw SunitError("no primitive root");
}

// short elements of the prime ideal via LLL on a scaled Minkowski embedding,
// with an identity tail carrying the transformation
std::vector<FieldElement> short_ideal_elements(const NFPtr& K, const FinitePlacePtr& P,
                                               long prec) {
    long d = K->degree();
    QMat bt((size_t)d, QVec((size_t)d));
    const QMat& Bm = K->integral_basis();
    for (long i = 0; i < d; ++i)
        for (long j = 0; j < d; ++j) bt[(size_t)j][(size_t)i] = Bm[(size_t)i][(size_t)j];
    auto order_coords = [&](const FieldElement& x) {
        auto sol = q_solve(bt, x.coords);
        if (!sol) throw SunitError("short_ideal_elements: solve failed");
        ZVec r((size_t)d);
        for (long i = 0; i < d; ++i) {
            if ((*sol)[(size_t)i].get_den() != 1)
                throw SunitError("short_ideal_elements: generator not integral");
            r[(size_t)i] = (*sol)[(size_t)i].get_num();
        }
        return r;
    };
    std::vector<ZVec> gens;
    for (long i = 0; i < d; ++i) {
        FieldElement bi = K->element(QVec(Bm[(size_t)i]));
        gens.push_back(order_coords(K->mul(K->from_rational(mpq_class(P->p)), bi)));
        gens.push_back(order_coords(K->mul(P->pi, bi)));
    }
    ZMat m((size_t)d, ZVec(gens.size()));
    for (long i = 0; i < d; ++i)
        for (size_t j = 0; j < gens.size(); ++j) m[(size_t)i][j] = gens[j][(size_t)i];
    ZMat ib = hnf_columns(m);

    auto inf = infinite_places(K, prec);
    long rows = 0;
    for (auto& pl : inf) rows += pl->real ? 1 : 2;
    double scale = std::pow(2.0, 24);
    size_t nb = ib[0].size();
    IntegerLattice L;
    L.basis.assign((size_t)rows + nb, ZVec(nb, 0));
    for (size_t j = 0; j < nb; ++j) {
        QVec v((size_t)d, 0);
        for (long i = 0; i < d; ++i)
            for (long jj = 0; jj < d; ++jj)
                v[(size_t)jj] += mpq_class(ib[(size_t)i][j]) * Bm[(size_t)i][(size_t)jj];
        FieldElement x = K->element(QVec(v));
        long r = 0;
        for (auto& pl : inf) {
            CInt img = pl->embed(x, prec);
            double re = img.re.mid_d(), im = img.im.mid_d();
            double mul = pl->real ? 1.0 : std::sqrt(2.0);
            L.basis[(size_t)r++][j] = (long)std::llround(re * mul * scale);
            if (!pl->real) L.basis[(size_t)r++][j] = (long)std::llround(im * mul * scale);
        }
        L.basis[(size_t)(rows + (long)j)][j] = 1;
    }
    IntegerLattice R = integer_lll(L);
    std::vector<FieldElement> out;
    for (size_t j = 0; j < nb; ++j) {
        std::vector<long> oc((size_t)d, 0);
        for (size_t i = 0; i < nb && i < (size_t)d; ++i)
            oc[i] = (long)R.basis[(size_t)rows + i][j].get_si();
        FieldElement x = element_from_order_coords(K, oc);
        if (!x.is_zero()) out.push_back(x);
    }
    return out;
}

// one p-saturation round: find a product of generators that is a p-th power
// (modular characters), recover the exact root from the search pool, and
// swap it in; returns true when the lattice grew
bool saturate_once(const NFPtr& K, const PlaceSet& S, const FieldElement& rho0, long w,
                   std::vector<FieldElement>& gens, const std::vector<FieldElement>& pool,
                   long p) {
    size_t n = gens.size() + 1; // slot 0 = torsion
    mpz_class bad = K->disc_f();
    for (auto& P : S.fin) bad *= P->p;
    auto add_dens = [&](const FieldElement& x) {
        for (const auto& c : x.coords) bad *= c.get_den();
    };
    add_dens(rho0);
    for (auto& g : gens) add_dens(g);

    std::vector<std::vector<uint64_t>> rows;
    uint64_t ell = 2;
    int found = 0;
    while (found < (int)n + 20 && ell < 3000000) {
        ell = next_prime_u64(ell);
        if ((ell - 1) % (uint64_t)p != 0) continue;
        if (mpz_divisible_ui_p(bad.get_mpz_t(), ell)) continue;
        FpPoly f = fp_from_z(K->poly(), ell);
        auto roots = fp_roots(f);
        if ((long)roots.size() != K->degree()) continue;
        uint64_t r = roots[0];
        uint64_t g = primitive_root_of(ell);
        // dlog table for this ell
        std::vector<uint32_t> dl(ell, 0);
        {
            uint64_t cur = 1;
            for (uint64_t k = 0; k < ell - 1; ++k) {
                dl[cur] = (uint32_t)k;
                cur = mulmod(cur, g, ell);
            }
        }
        std::vector<uint64_t> row(n);
        bool ok = true;
        for (size_t i = 0; i < n && ok; ++i) {
            const FieldElement& x = i == 0 ? rho0 : gens[i - 1];
            uint64_t acc = 0;
            for (size_t ci = x.coords.size(); ci-- > 0;) {
                const mpq_class& c = x.coords[ci];
                mpz_class num = c.get_num() % (long)ell;
                if (num < 0) num += (long)ell;
                mpz_class den = c.get_den() % (long)ell;
                if (den == 0) { ok = false; break; }
                uint64_t cv = mulmod(num.get_ui(), invmod(den.get_ui(), ell), ell);
                acc = (mulmod(acc, r, ell) + cv) % ell;
            }
            if (!ok || acc == 0) { ok = false; break; }
            row[i] = dl[acc] % (uint64_t)p;
        }
        if (!ok) continue;
        rows.push_back(row);
        ++found;
    }

    // kernel of the character matrix mod p
    size_t m = rows.size();
    std::vector<long> pivot_of_col(n, -1);
    size_t rank = 0;
    uint64_t up = (uint64_t)p;
    for (size_t c = 0; c < n && rank < m; ++c) {
        size_t piv = rank;
        while (piv < m && rows[piv][c] % up == 0) ++piv;
        if (piv == m) continue;
        std::swap(rows[piv], rows[rank]);
        uint64_t inv = invmod(rows[rank][c] % up, up);
        for (size_t j = 0; j < n; ++j) rows[rank][j] = mulmod(rows[rank][j] % up, inv, up);
        for (size_t rr = 0; rr < m; ++rr) {
            if (rr == rank || rows[rr][c] % up == 0) continue;
            uint64_t f2 = rows[rr][c] % up;
            for (size_t j = 0; j < n; ++j)
                rows[rr][j] = (rows[rr][j] + up * up - mulmod(f2, rows[rank][j], up)) % up;
        }
        pivot_of_col[c] = (long)rank;
        ++rank;
    }
    for (size_t c = 0; c < n; ++c) {
        if (pivot_of_col[c] >= 0) continue;
        std::vector<long> v(n, 0);
        v[c] = 1;
        for (size_t j = 0; j < n; ++j)
            if (pivot_of_col[j] >= 0) {
                uint64_t val = rows[(size_t)pivot_of_col[j]][c] % up;
                v[j] = val == 0 ? 0 : (long)(up - val);
            }
        FieldElement x = K->pow(rho0, v[0]);
        for (size_t i = 1; i < n; ++i) x = K->mul(x, K->pow(gens[i - 1], v[i]));
        for (const auto& y : pool) {
            if (y.is_zero()) continue;
            FieldElement yp = K->pow(y, p);
            FieldElement ratio = K->mul(x, K->inv(yp));
            // ratio must be torsion
            FieldElement rp = ratio;
            bool is_tors = false;
            for (long mth = 1; mth <= w; ++mth) {
                if (rp == K->one()) { is_tors = true; break; }
                rp = K->mul(rp, ratio);
            }
            if (!is_tors) continue;
            long heavy = -1;
            for (size_t i = 1; i < n; ++i)
                if (v[i] % p != 0) heavy = (long)(i - 1);
            if (heavy < 0) continue;
            gens[(size_t)heavy] = y;
            return true;
        }
    }
    return false;
}

} // namespace

SUnitBasis find_generators_bruteforce(const PlaceSet& S, const GeneratorSearchOptions& opt) {
    const NFPtr K = S.K;
    long d = K->degree();
    long t = S.t();
    std::vector<mpz_class> s_rats;
    for (auto& P : S.fin) s_rats.push_back(P->p);

    for (long box = opt.coord_box;; box *= 2) {
        if (box > opt.max_box)
            throw CapTooSmall("find_generators_bruteforce: no independent set of rank " +
                              std::to_string(t) + " within the coordinate cap");
        auto [rho0, w] = find_torsion(K, std::min(box, 3L));
        {
            FieldElement p = rho0;
            for (long m = 1; m < w; ++m) {
                if (p == K->one()) throw SunitError("torsion order not exact");
                p = K->mul(p, rho0);
            }
            if (!(p == K->one())) throw SunitError("torsion order verification failed");
        }

        std::vector<FieldElement> pool;
        {
            std::vector<long> c((size_t)d, -box);
            while (true) {
                FieldElement x = element_from_order_coords(K, c);
                if (!x.is_zero() && norm_is_s_supported(K, x, s_rats) && is_s_unit(x, S))
                    pool.push_back(x);
                size_t i = 0;
                while (i < (size_t)d && c[i] == box) { c[i] = -box; ++i; }
                if (i == (size_t)d) break;
                ++c[i];
            }
        }
        for (auto& P : S.fin) {
            try {
                for (auto& x : short_ideal_elements(K, P, opt.prec))
                    if (!x.is_zero() && norm_is_s_supported(K, x, s_rats) && is_s_unit(x, S))
                        pool.push_back(x);
            } catch (const SunitError&) {
                // the box pool alone may still suffice
            }
        }
        if (pool.empty()) continue;

        std::sort(pool.begin(), pool.end(), [&](const FieldElement& a, const FieldElement& b) {
            double ha = 0, hb = 0;
            for (auto& pl : S.inf) {
                ha = std::max(ha, std::fabs(pl->log_abs_value(a, 64).mid_d()));
                hb = std::max(hb, std::fabs(pl->log_abs_value(b, 64).mid_d()));
            }
            if (ha != hb) return ha < hb;
            return a < b;
        });
        pool.erase(std::unique(pool.begin(), pool.end(),
                               [](const FieldElement& a, const FieldElement& b) { return a == b; }),
                   pool.end());

        std::vector<FieldElement> gens;
        std::vector<std::vector<double>> vecs;
        for (auto& x : pool) {
            if ((long)gens.size() == t) break;
            auto v = combined_vector(S, x, opt.prec);
            auto test = vecs;
            test.push_back(v);
            if (d_rank(test, 1e-7) == test.size()) {
                gens.push_back(x);
                vecs.push_back(v);
            }
        }
        if ((long)gens.size() < t) continue;

        if (opt.saturate)
            for (long p : {2L, 3L, 5L, 7L})
                for (int guard = 0; guard < 8; ++guard)
                    if (!saturate_once(K, S, rho0, w, gens, pool, p)) break;

        SUnitBasis B{K, rho0, w, gens};
        long s = S.s();
        if (s > 0) {
            ZMat V((size_t)s, ZVec((size_t)t));
            for (long i = 0; i < s; ++i)
                for (long j = 0; j < t; ++j)
                    V[(size_t)i][(size_t)j] = S.fin[(size_t)i]->ord(gens[(size_t)j]);
            ZMat U;
            hnf_columns(V, &U);
            std::vector<FieldElement> ng;
            for (long j = 0; j < t; ++j) {
                FieldElement x = K->one();
                for (long i = 0; i < t; ++i) {
                    long e = U[(size_t)i][(size_t)j].get_si();
                    if (e != 0) x = K->mul(x, K->pow(gens[(size_t)i], e));
                }
                ng.push_back(x);
            }
            std::stable_sort(ng.begin(), ng.end(),
                             [&](const FieldElement& a, const FieldElement& b) {
                                 long va = 0, vb = 0;
                                 for (auto& P : S.fin) {
                                     va += std::labs(P->ord(a));
                                     vb += std::labs(P->ord(b));
                                 }
                                 return va > vb;
                             });
            B.rho = ng;
        }
        for (auto& g : B.rho) g = canonical_twist(K, B.rho0, B.w, g);

        std::vector<std::vector<double>> m2;
        for (auto& g : B.rho) m2.push_back(combined_vector(S, g, opt.prec));
        if ((long)d_rank(m2, 1e-7) != t) continue; // degenerate normalization: retry bigger
        for (auto& g : B.rho)
            if (!is_s_unit(g, S)) throw SunitError("generator failed the S-unit check");
        return B;
    }
}

FermatCheckResult fermat_check(const PlaceSet& S, const std::vector<SolutionPair>& solutions) {
    const NFPtr K = S.K;
    for (auto& pl : S.inf)
        if (!pl->real) throw HypothesisNotMet("fermat_check: K is not totally real");
    for (auto& P : S.fin)
        if (P->p != 2) throw HypothesisNotMet("fermat_check: S contains a place not above 2");
    std::vector<size_t> T;
    for (size_t i = 0; i < S.fin.size(); ++i)
        if (S.fin[i]->f == 1) T.push_back(i);
    if (K->degree() % 2 == 0 && T.empty())
        throw HypothesisNotMet("fermat_check: even degree and T empty");

    FermatCheckResult res;
    res.satisfied = true;
    for (auto& sol : solutions) {
        long witness = -1;
        for (size_t ti : T) {
            const auto& P = S.fin[ti];
            long vl = P->ord(sol.tau1);
            long vm = P->ord(sol.tau2);
            long v2 = P->ord(K->from_rational(2));
            if (std::max(std::labs(vl), std::labs(vm)) <= 4 * v2) {
                witness = (long)ti;
                break;
            }
        }
        res.witness.push_back(witness);
        if (witness < 0) res.satisfied = false;
    }
    std::ostringstream os;
    os << "criterion " << (res.satisfied ? "satisfied" : "not satisfied") << " over "
       << solutions.size() << " solutions";
    res.detail = os.str();
    return res;
}

namespace {

// integral basis of Q[x]/(x^6+3), maximal at 2:
// {1, b, b^2, (1+b^3)/2, (b+b^4)/2, (b^2+b^5)/2}
QMat rn_integral_basis() {
    QMat B(6, QVec(6, 0));
    B[0][0] = 1;
    B[1][1] = 1;
    B[2][2] = 1;
    B[3][0] = mpq_class(1, 2);
    B[3][3] = mpq_class(1, 2);
    B[4][1] = mpq_class(1, 2);
    B[4][4] = mpq_class(1, 2);
    B[5][2] = mpq_class(1, 2);
    B[5][5] = mpq_class(1, 2);
    return B;
}

bool is_perfect_cube(const mpz_class& n, mpz_class& root) {
    if (n == 0) {
        root = 0;
        return true;
    }
    mpz_class a = abs(n);
    mpz_class r;
    mpz_root(r.get_mpz_t(), a.get_mpz_t(), 3);
    for (mpz_class c = r - 1; c <= r + 1; ++c) {
        if (c < 0) continue;
        if (c * c * c == a) {
            root = n < 0 ? -c : c;
            return true;
        }
    }
    return false;
}

} // namespace

RNResult ramanujan_nagell(long q, const RNOptions& opt) {
    if (q <= 2 || q == 3 || !is_prime_u64((uint64_t)q))
        throw SunitError("ramanujan_nagell: q must be an odd prime different from 3");
    RNResult res;
    res.q = q;

    auto L = NumberField::create({3, 0, 0, 0, 0, 0, 1}, rn_integral_basis());
    PlaceSet S = make_place_set(L, {mpz_class(3), mpz_class(q)}, opt.prec);
    long t = S.t();

    GeneratorSearchOptions gopt;
    gopt.coord_box = opt.coord_box;
    gopt.max_box = 8;
    gopt.prec = opt.prec;
    SUnitBasis basis;
    try {
        basis = find_generators_bruteforce(S, gopt);
    } catch (const CapTooSmall& e) {
        throw FieldTooLarge(std::string("ramanujan_nagell: ") + e.what());
    }
    if (basis.rank() != t)
        throw FieldTooLarge("ramanujan_nagell: generator search failed for the sextic field");

    BoundConstants bc = initial_bound(S, basis, opt.prec);
    ReductionState st = reduced_bound(S, basis, bc, false, opt.prec);
    res.B = st.B_final;

    mpq_class cq = 0, c3 = 0;
    for (auto& P : S.fin) {
        mpq_class s = 0;
        for (auto& r : basis.rho) s += std::labs(P->ord(r));
        if (P->p == q) {
            cq = std::max(cq, s);
        } else {
            mpq_class scaled = mpq_class(3, P->e) * s;
            c3 = std::max(c3, scaled);
        }
    }
    res.k_cap = ceil_mpq(c3 * mpq_class(res.B));
    res.n_cap = ceil_mpq(cq * mpq_class(res.B));

    double pairs = res.k_cap.get_d() * res.n_cap.get_d();
    if (pairs > opt.pair_budget) {
        res.bound_only = true;
        return res;
    }

    // enumerate k <= k_cap, 1 <= n <= n_cap; x^3 = q^n - 3^k with x >= 1.
    // cube-residue filters modulo primes r = 1 mod 3 cut nearly everything
    const std::vector<uint64_t> filters = {7, 13, 19, 31, 37, 43};
    std::vector<std::vector<uint8_t>> is_cube(filters.size());
    std::vector<std::vector<uint64_t>> qpow(filters.size()), tpow(filters.size());
    for (size_t fi = 0; fi < filters.size(); ++fi) {
        uint64_t r = filters[fi];
        is_cube[fi].assign(r, 0);
        for (uint64_t x = 0; x < r; ++x) is_cube[fi][mulmod(mulmod(x, x, r), x, r)] = 1;
        qpow[fi].assign(r - 1, 1);
        tpow[fi].assign(r - 1, 1);
        for (size_t i = 1; i < r - 1; ++i) {
            qpow[fi][i] = mulmod(qpow[fi][i - 1], (uint64_t)(q % (long)r), r);
            tpow[fi][i] = mulmod(tpow[fi][i - 1], 3, r);
        }
    }

    long kc = (long)res.k_cap.get_si();
    long nc = (long)res.n_cap.get_si();
    mpz_class qn = q;
    for (long n = 1; n <= nc; ++n) {
        mpz_class p3 = 1;
        for (long k = 0; k <= kc; ++k) {
            bool maybe = true;
            for (size_t fi = 0; fi < filters.size() && maybe; ++fi) {
                uint64_t r = filters[fi];
                uint64_t v = (qpow[fi][(size_t)(n % (long)(r - 1))] + r -
                              tpow[fi][(size_t)(k % (long)(r - 1))]) % r;
                maybe = is_cube[fi][v] != 0;
            }
            if (maybe) {
                mpz_class rhs = qn - p3;
                mpz_class x;
                if (rhs > 0 && is_perfect_cube(rhs, x) && x >= 1)
                    res.solutions.push_back({x, mpz_class(k), mpz_class(n)});
            }
            p3 *= 3;
        }
        qn *= q;
    }
    // recheck each reported tuple exactly
    for (auto& s : res.solutions) {
        mpz_class lhs = s[0] * s[0] * s[0] + pow_mpz(3, s[1].get_ui());
        if (lhs != pow_mpz(mpz_class(q), s[2].get_ui()))
            throw SunitError("ramanujan_nagell: verification failed");
    }
    return res;
}

BoundReport bound_report(const PlaceSet& S, const SUnitBasis& basis, long prec) {
    auto start = std::chrono::steady_clock::now();
    BoundReport rep;
    rep.constants = initial_bound(S, basis, prec);
    rep.b1 = reduced_bound(S, basis, rep.constants, false, prec);
    if (S.fin.size() == 1) {
        rep.has_b2 = true;
        rep.b2 = reduced_bound(S, basis, rep.constants, true, prec);
        double num = 2.0 * rep.b1.B_final.get_d() + 1;
        double den = 2.0 * rep.b2.B_final.get_d() + 1;
        rep.savings_ratio = std::pow(num / den, 2.0 * (double)basis.rank());
    }
    rep.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return rep;
}

// ---------- JSON ----------

JobSpec parse_job(const std::string& text) {
    json j = json::parse(text);
    JobSpec job;
    job.schema_version = j.value("schema_version", 1);
    for (auto& c : j.at("field")) {
        if (c.is_number_integer()) job.field.push_back(mpz_class((long)c.get<long>()));
        else job.field.push_back(mpz_class(c.get<std::string>()));
    }
    if (j.contains("integral_basis")) {
        QMat B;
        for (auto& row : j["integral_basis"]) {
            QVec r;
            for (auto& c : row)
                r.push_back(c.is_number_integer() ? mpq_class((long)c.get<long>())
                                                  : mpq_from_string(c.get<std::string>()));
            B.push_back(r);
        }
        job.integral_basis = B;
    }
    if (j.contains("s_primes"))
        for (auto& p : j["s_primes"]) {
            if (p.is_number_integer()) job.s_primes.push_back(mpz_class((long)p.get<long>()));
            else job.s_primes.push_back(mpz_class(p.get<std::string>()));
        }
    if (j.contains("generators")) {
        auto& g = j["generators"];
        job.has_generators = true;
        job.w = g.at("w").get<long>();
        for (auto& c : g.at("rho0"))
            job.rho0.push_back(c.is_number_integer() ? mpq_class((long)c.get<long>())
                                                     : mpq_from_string(c.get<std::string>()));
        for (auto& row : g.at("rho")) {
            QVec r;
            for (auto& c : row)
                r.push_back(c.is_number_integer() ? mpq_class((long)c.get<long>())
                                                  : mpq_from_string(c.get<std::string>()));
            job.rho.push_back(r);
        }
    }
    job.mode = j.value("mode", std::string("solve"));
    if (j.contains("bound")) {
        auto& b = j["bound"];
        job.bound = b.is_number_integer() ? mpz_class((long)b.get<long>())
                                          : mpz_class(b.get<std::string>());
    }
    if (j.contains("rn_q"))
        for (auto& x : j["rn_q"]) job.rn_q.push_back(x.get<long>());
    job.precision_bits = j.value("precision_bits", 96L);
    job.memory_budget_mib = j.value("memory_budget_mib", 512L);
    job.infinite_only = j.value("infinite_only", true);
    return job;
}

std::string job_to_json(const JobSpec& job) {
    json j;
    j["schema_version"] = job.schema_version;
    json f = json::array();
    for (auto& c : job.field) f.push_back(c.get_str());
    j["field"] = f;
    if (job.integral_basis) {
        json B = json::array();
        for (auto& row : *job.integral_basis) {
            json r = json::array();
            for (auto& c : row) r.push_back(c.get_str());
            B.push_back(r);
        }
        j["integral_basis"] = B;
    }
    json sp = json::array();
    for (auto& p : job.s_primes) sp.push_back(p.get_str());
    j["s_primes"] = sp;
    if (job.has_generators) {
        json g;
        g["w"] = job.w;
        json r0 = json::array();
        for (auto& c : job.rho0) r0.push_back(c.get_str());
        g["rho0"] = r0;
        json rr = json::array();
        for (auto& row : job.rho) {
            json r = json::array();
            for (auto& c : row) r.push_back(c.get_str());
            rr.push_back(r);
        }
        g["rho"] = rr;
        j["generators"] = g;
    }
    j["mode"] = job.mode;
    j["bound"] = job.bound.get_str();
    j["rn_q"] = job.rn_q;
    j["precision_bits"] = job.precision_bits;
    j["memory_budget_mib"] = job.memory_budget_mib;
    j["infinite_only"] = job.infinite_only;
    return j.dump(2);
}

PreparedJob prepare_job(const JobSpec& job) {
    PreparedJob pj;
    pj.K = NumberField::create(job.field, job.integral_basis);
    pj.S = make_place_set(pj.K, job.s_primes, job.precision_bits);
    if (job.has_generators) {
        SUnitBasis B;
        B.K = pj.K;
        B.w = job.w;
        if ((long)job.rho0.size() != pj.K->degree())
            throw SunitError("generators: rho0 has wrong coordinate count");
        B.rho0 = pj.K->element(QVec(job.rho0));
        for (auto& r : job.rho) {
            if ((long)r.size() != pj.K->degree())
                throw SunitError("generators: wrong coordinate count");
            B.rho.push_back(pj.K->element(QVec(r)));
        }
        FieldElement p = B.rho0;
        for (long m = 1; m < B.w; ++m) {
            if (p == pj.K->one())
                throw SunitError("generators: rho0 order below the claimed w");
            p = pj.K->mul(p, B.rho0);
        }
        if (!(p == pj.K->one())) throw SunitError("generators: rho0^w != 1");
        if (B.rank() != pj.S.t())
            throw SunitError("generators: rank does not match |S| - 1 = " +
                             std::to_string(pj.S.t()) + "; supply exactly t generators");
        for (auto& r : B.rho)
            if (!is_s_unit(r, pj.S)) throw SunitError("generators: element is not an S-unit");
        pj.basis = B;
    } else {
        GeneratorSearchOptions gopt;
        gopt.prec = job.precision_bits;
        pj.basis = find_generators_bruteforce(pj.S, gopt);
    }
    return pj;
}

namespace {

json exponent_to_json(const ExponentVector& e) {
    json j;
    j["a0"] = e.a0;
    j["a"] = e.a;
    return j;
}

json element_to_json(const FieldElement& x) {
    json j = json::array();
    for (auto& c : x.coords) j.push_back(c.get_str());
    return j;
}

json reduction_to_json(const ReductionState& st) {
    json j;
    j["B_init"] = st.B_init.get_str();
    j["B_final"] = st.B_final.get_str();
    j["infinite_only"] = st.infinite_only;
    json pl = json::array();
    for (auto& p : st.places) {
        json e;
        e["place_index"] = p.place_index;
        e["finite"] = p.finite;
        e["reduced"] = p.reduced.get_str();
        e["iterations"] = p.iterations;
        e["lemma_failed"] = p.lemma_failed;
        e["below_c16"] = p.below_c16;
        e[p.finite ? "u" : "log10_C"] = p.last_u_or_logC.get_str();
        pl.push_back(e);
    }
    j["places"] = pl;
    return j;
}

json constants_to_json(const BoundConstants& bc) {
    json j;
    j["t"] = bc.t;
    j["w"] = bc.w;
    j["c1"] = bc.c1.hi_d();
    j["c2"] = bc.c2.hi_d();
    j["c3"] = bc.c3.hi_d();
    j["K0"] = bc.K0.hi_d();
    j["K1"] = bc.K1.hi_d();
    j["B_init"] = bc.B_init_int.get_str();
    j["d_K_prime"] = bc.dK_prime;
    json pl = json::array();
    for (auto& r : bc.places) {
        json e;
        e["place_index"] = r.place_index;
        e["finite"] = r.finite;
        e["K_value"] = r.K_value;
        if (r.finite) {
            e["c5"] = r.c5;
            e["c8"] = r.c8;
            e["c9"] = r.c9;
            e["k2"] = r.k2;
            e["k3"] = r.k3;
            e["k4"] = r.k4;
            e["k5"] = r.k5;
            e["inflation"] = r.inflation;
        } else {
            e["c11"] = r.c11;
            e["c13"] = r.c13;
            e["c14"] = r.c14;
            e["c15"] = r.c15;
        }
        pl.push_back(e);
    }
    j["places"] = pl;
    return j;
}

} // namespace

std::string solutions_to_json(const std::vector<SolutionPair>& sols) {
    json arr = json::array();
    for (auto& s : sols) {
        json e;
        e["tau1"] = element_to_json(s.tau1);
        e["tau2"] = element_to_json(s.tau2);
        e["a1"] = exponent_to_json(s.a1);
        e["a2"] = exponent_to_json(s.a2);
        arr.push_back(e);
    }
    return arr.dump(2);
}

std::string solve_result_to_json(const SolveResult& r, const JobSpec& job) {
    json j;
    j["schema_version"] = 1;
    j["solutions"] = json::parse(solutions_to_json(r.solutions));
    j["solution_count"] = r.solutions.size();
    j["bound_report"]["constants"] = constants_to_json(r.bounds);
    j["bound_report"]["reduction"] = reduction_to_json(r.reduction);
    j["bound_report"]["used_infinite_only"] = r.used_infinite_only;
    j["provenance"]["tool"] = "sunit";
    j["provenance"]["version"] = "0.1.0";
    j["provenance"]["precision_bits"] = job.precision_bits;
    j["provenance"]["memory_budget_mib"] = job.memory_budget_mib;
    return j.dump(2);
}

std::string bound_report_to_json(const BoundReport& r) {
    json j;
    j["schema_version"] = 1;
    j["constants"] = constants_to_json(r.constants);
    j["B1"] = reduction_to_json(r.b1);
    if (r.has_b2) {
        j["B2"] = reduction_to_json(r.b2);
        j["R_K"] = r.savings_ratio;
    } else {
        j["B2"] = "n/a";
    }
    j["seconds"] = r.seconds;
    return j.dump(2);
}


// ---------- CLI ----------

namespace {

ZPoly parse_int_list(const std::string& s) {
    ZPoly out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(mpz_class(tok));
    }
    return out;
}

std::vector<mpz_class> parse_prime_list(const std::string& s) {
    std::vector<mpz_class> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (!tok.empty()) out.push_back(mpz_class(tok));
    }
    return out;
}

void write_output(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text << "\n";
        return;
    }
    std::ofstream os(path);
    os << text << "\n";
}

} // namespace

int cli_main(int argc, char** argv) {
    CLI::App app{"S-unit equation solver over number fields"};
    app.require_subcommand(1);

    std::string job_path, field_str, sprimes_str, out_path;
    std::string bound_str = "0";
    std::string rnq_str;
    bool no_infinite_only = false;
    long precision = 96;
    long budget_mib = 512;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--job", job_path, "job file (JSON)");
        sub->add_option("--field", field_str,
                        "defining polynomial coefficients, constant term first");
        sub->add_option("--s-primes", sprimes_str, "rational primes under S_fin");
        sub->add_option("--out", out_path, "result file (JSON); stdout when omitted");
        sub->add_option("--precision-bits", precision, "working precision");
        sub->add_option("--memory-budget-mib", budget_mib, "sieve memory budget");
        sub->add_flag("--no-infinite-only", no_infinite_only,
                      "disable the single-finite-place shortcut");
    };

    auto* solve_cmd = app.add_subcommand("solve", "complete solution set");
    add_common(solve_cmd);
    auto* bound_cmd = app.add_subcommand("bound", "bound report only (B1, B2, R)");
    add_common(bound_cmd);
    auto* sieve_cmd = app.add_subcommand("sieve-below-bound", "all solutions up to --bound");
    add_common(sieve_cmd);
    sieve_cmd->add_option("--bound", bound_str, "exponent bound B")->required();
    auto* fermat_cmd = app.add_subcommand("fermat-check", "asymptotic Fermat criterion");
    add_common(fermat_cmd);
    auto* rn_cmd = app.add_subcommand("ramanujan-nagell", "x^3 + 3^k = q^n driver");
    rn_cmd->add_option("--q", rnq_str, "comma-separated odd primes q")->required();
    rn_cmd->add_option("--out", out_path, "result file (JSON)");
    rn_cmd->add_option("--precision-bits", precision, "working precision");
    auto* gens_cmd = app.add_subcommand("generators", "brute-force S-unit basis");
    add_common(gens_cmd);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        JobSpec job;
        bool have_job = false;
        if (!job_path.empty()) {
            std::ifstream is(job_path);
            if (!is) {
                std::cerr << "cannot open job file: " << job_path << "\n";
                return 2;
            }
            std::stringstream buf;
            buf << is.rdbuf();
            job = parse_job(buf.str());
            have_job = true;
        } else if (!field_str.empty()) {
            job.field = parse_int_list(field_str);
            job.s_primes = parse_prime_list(sprimes_str);
            have_job = true;
        }
        job.precision_bits = precision;
        job.memory_budget_mib = budget_mib;
        if (no_infinite_only) job.infinite_only = false;

        if (rn_cmd->parsed()) {
            json arr = json::array();
            bool all_ok = true;
            for (auto& tok : parse_prime_list(rnq_str)) {
                RNOptions ropt;
                ropt.prec = precision;
                RNResult r = ramanujan_nagell(tok.get_si(), ropt);
                json e;
                e["q"] = r.q;
                e["B"] = r.B.get_str();
                e["k_cap"] = r.k_cap.get_str();
                e["n_cap"] = r.n_cap.get_str();
                e["bound_only"] = r.bound_only;
                json sols = json::array();
                for (auto& s : r.solutions) {
                    json t;
                    t["x"] = s[0].get_str();
                    t["k"] = s[1].get_str();
                    t["n"] = s[2].get_str();
                    sols.push_back(t);
                }
                e["solutions"] = sols;
                arr.push_back(e);
                std::cout << "q=" << r.q << "  B=" << r.B << "  k<=" << r.k_cap
                          << "  n<=" << r.n_cap << "  solutions=" << r.solutions.size()
                          << (r.bound_only ? "  [bound-only]" : "") << "\n";
                if (r.bound_only) all_ok = false;
            }
            write_output(out_path, arr.dump(2));
            return all_ok ? 0 : 1;
        }

        if (!have_job) {
            std::cerr << "either --job or --field/--s-primes is required\n";
            return 2;
        }

        PreparedJob pj = prepare_job(job);

        if (gens_cmd->parsed()) {
            JobSpec out = job;
            out.has_generators = true;
            out.w = pj.basis.w;
            out.rho0 = pj.basis.rho0.coords;
            out.rho.clear();
            for (auto& r : pj.basis.rho) out.rho.push_back(r.coords);
            write_output(out_path, job_to_json(out));
            std::cout << "found " << pj.basis.rank() << " generators, torsion order "
                      << pj.basis.w << "\n";
            return 0;
        }
        if (bound_cmd->parsed()) {
            BoundReport rep = bound_report(pj.S, pj.basis, job.precision_bits);
            write_output(out_path, bound_report_to_json(rep));
            std::cout << "B_init=" << rep.constants.B_init_int << " B1=" << rep.b1.B_final;
            if (rep.has_b2) std::cout << " B2=" << rep.b2.B_final << " R=" << rep.savings_ratio;
            std::cout << "\n";
            return 0;
        }
        if (sieve_cmd->parsed()) {
            mpz_class B(bound_str);
            SieveOptions sopt;
            sopt.memory_budget_bytes = (size_t)job.memory_budget_mib << 20;
            auto sols = sieve_below_bound(pj.S, pj.basis, B, sopt);
            write_output(out_path, solutions_to_json(sols));
            std::cout << sols.size() << " solutions below B=" << B << "\n";
            return 0;
        }
        if (fermat_cmd->parsed()) {
            SolveOptions opt;
            opt.prec = job.precision_bits;
            opt.infinite_only_when_possible = job.infinite_only;
            opt.memory_budget_bytes = (size_t)job.memory_budget_mib << 20;
            SolveResult r = solve(pj.S, pj.basis, opt);
            FermatCheckResult fc = fermat_check(pj.S, r.solutions);
            json j;
            j["satisfied"] = fc.satisfied;
            j["detail"] = fc.detail;
            j["solutions"] = r.solutions.size();
            write_output(out_path, j.dump(2));
            std::cout << fc.detail << "\n";
            return fc.satisfied ? 0 : 1;
        }
        // solve
        SolveOptions opt;
        opt.prec = job.precision_bits;
        opt.infinite_only_when_possible = job.infinite_only;
        opt.memory_budget_bytes = (size_t)job.memory_budget_mib << 20;
        SolveResult r = solve(pj.S, pj.basis, opt);
        write_output(out_path, solve_result_to_json(r, job));
        std::cout << r.solutions.size() << " unordered solutions; B_init="
                  << r.bounds.B_init_int << " B_final=" << r.reduction.B_final
                  << (r.used_infinite_only ? " (infinite-place bound)" : "") << "\n";
        return 0;
    } catch (const NotIrreducible& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const NotMonic& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const BasisNotIntegral& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const IndexDivisible& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const CapTooSmall& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return 2;
    } catch (const HypothesisNotMet& e) {
        std::cerr << "hypothesis failure: " << e.what() << "\n";
        return 1;
    } catch (const FieldTooLarge& e) {
        std::cerr << "budget failure: " << e.what() << "\n";
        return 1;
    } catch (const SunitError& e) {
        std::cerr << "failure: " << e.what() << "\n";
        return 1;
    }
}


} // namespace sunit
