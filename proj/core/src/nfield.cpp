#include "sunit/nfield.hpp"

#include <algorithm>

namespace sunit {

bool FieldElement::is_zero() const {
    for (const auto& c : coords)
        if (c != 0) return false;
    return true;
}

bool FieldElement::is_rational() const {
    for (size_t i = 1; i < coords.size(); ++i)
        if (coords[i] != 0) return false;
    return true;
}

mpq_class FieldElement::rational_value() const {
    if (!is_rational()) throw SunitError("rational_value of non-rational element");
    return coords.empty() ? mpq_class(0) : coords[0];
}

bool FieldElement::operator==(const FieldElement& o) const { return coords == o.coords; }

bool FieldElement::operator<(const FieldElement& o) const {
    return std::lexicographical_compare(coords.begin(), coords.end(), o.coords.begin(),
                                        o.coords.end());
}

namespace {

// Dedekind criterion; true iff p does not divide [O_K : Z[theta]]
bool dedekind_ok(const ZPoly& f, uint64_t p) {
    FpPoly fbar = fp_from_z(f, p);
    auto fact = fp_factor(fbar);
    FpPoly g{p, {1}};
    for (auto& [q, e] : fact) g = fp_mul(g, q);
    FpPoly h = fp_divmod(fbar, g).first;
    auto lift = [&](const FpPoly& a) {
        ZPoly r(a.c.size());
        for (size_t i = 0; i < a.c.size(); ++i) r[i] = (unsigned long)a.c[i];
        return r;
    };
    ZPoly gz = lift(g), hz = lift(h);
    QPoly diff = p_sub(p_mul(to_qpoly(gz), to_qpoly(hz)), to_qpoly(f));
    ZPoly t(diff.size());
    for (size_t i = 0; i < diff.size(); ++i) {
        mpq_class c = diff[i] / mpq_class((unsigned long)p);
        if (c.get_den() != 1) throw SunitError("dedekind: T not integral");
        t[i] = c.get_num();
    }
    FpPoly tbar = fp_from_z(t, p);
    return fp_gcd(fp_gcd(tbar, g), h).deg() <= 0;
}

} // namespace

NFPtr NumberField::create(const ZPoly& f, const std::optional<QMat>& integral_basis) {
    if (f.empty() || (long)f.size() - 1 < 1)
        throw NotMonic("defining polynomial must have degree >= 1");
    if (f.back() != 1) throw NotMonic("defining polynomial must be monic");
    QPoly fq = to_qpoly(f);
    if (!is_squarefree_q(fq)) throw NotIrreducible("defining polynomial is not squarefree");
    if ((long)f.size() - 1 > 1 && !is_irreducible_z(f))
        throw NotIrreducible("defining polynomial factors over Q");

    auto K = std::shared_ptr<NumberField>(new NumberField());
    K->f_ = f;
    K->d_ = (long)f.size() - 1;
    K->disc_f_ = K->d_ == 1 ? mpz_class(1) : discriminant_z(f);

    long d = K->d_;
    // reduction table: theta^k for k = d .. 2d-2 in power-basis coordinates
    if (d > 1) {
        K->reduction_.resize((size_t)(d - 1));
        ZVec first(f.begin(), f.end() - 1);
        for (auto& c : first) c = -c;
        K->reduction_[0] = first;
        for (long k = 1; k < d - 1; ++k) {
            ZVec nxt((size_t)d, 0);
            const ZVec& prev = K->reduction_[(size_t)(k - 1)];
            for (long i = 0; i < d - 1; ++i) nxt[(size_t)(i + 1)] = prev[(size_t)i];
            mpz_class top = prev[(size_t)(d - 1)];
            if (top != 0)
                for (long i = 0; i < d; ++i) nxt[(size_t)i] += top * K->reduction_[0][(size_t)i];
            K->reduction_[(size_t)k] = nxt;
        }
    }

    // trace(theta^k) by Newton's identities
    K->power_traces_.assign((size_t)std::max(2 * d - 1, 1L), 0);
    K->power_traces_[0] = d;
    for (long k = 1; k <= 2 * d - 2; ++k) {
        mpz_class s = 0;
        long imax = std::min(k <= d ? k - 1 : d, d);
        for (long i = 1; i <= imax; ++i)
            s += f[(size_t)(d - i)] * K->power_traces_[(size_t)(k - i)];
        if (k <= d) s += mpz_class(k) * f[(size_t)(d - k)];
        K->power_traces_[(size_t)k] = -s;
    }

    if (integral_basis) {
        const QMat& B = *integral_basis;
        if ((long)B.size() != d) throw BasisNotIntegral("integral basis must have d_K elements");
        for (const auto& row : B)
            if ((long)row.size() != d)
                throw BasisNotIntegral("integral basis rows must have d_K coordinates");
        auto inv = q_inverse(B);
        if (!inv) throw BasisNotIntegral("integral basis is singular");
        K->basis_ = B;
        K->basis_inv_ = *inv;
        K->power_basis_ = false;

        // solve sum_i x_i B_i = v for x
        QMat bt((size_t)d, QVec((size_t)d));
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) bt[(size_t)j][(size_t)i] = B[(size_t)i][(size_t)j];
        auto in_order = [&](const QVec& v) {
            auto x = q_solve(bt, v);
            if (!x) return false;
            for (const auto& c : *x)
                if (c.get_den() != 1) return false;
            return true;
        };
        // closure under multiplication with integer structure constants,
        // and 1, theta must lie in the order
        for (long i = 0; i < d; ++i)
            for (long j = i; j < d; ++j) {
                FieldElement bi{K, B[(size_t)i]}, bj{K, B[(size_t)j]};
                if (!in_order(K->mul(bi, bj).coords))
                    throw BasisNotIntegral("integral basis is not closed under multiplication");
            }
        if (!in_order(K->one().coords) || !in_order(K->gen().coords))
            throw BasisNotIntegral("1 or theta not in the supplied order");

        QMat tr((size_t)d, QVec((size_t)d));
        for (long i = 0; i < d; ++i)
            for (long j = 0; j < d; ++j) {
                FieldElement bi{K, B[(size_t)i]}, bj{K, B[(size_t)j]};
                tr[(size_t)i][(size_t)j] = K->trace(K->mul(bi, bj));
            }
        mpq_class det = q_det(tr);
        if (det.get_den() != 1) throw BasisNotIntegral("trace form determinant not integral");
        K->disc_K_ = det.get_num();
        mpq_class idx2(K->disc_f_, K->disc_K_);
        idx2.canonicalize();
        if (idx2.get_den() != 1 || idx2 <= 0)
            throw BasisNotIntegral("basis discriminant does not divide disc(f)");
    } else {
        K->basis_ = q_identity((size_t)d);
        K->basis_inv_ = K->basis_;
        K->power_basis_ = true;
        K->disc_K_ = K->disc_f_;
        if (d > 1) {
            for (const auto& [p, e] : factor(K->disc_f_)) {
                if (e < 2) continue;
                if (!p.fits_ulong_p()) continue;
                if (!dedekind_ok(f, p.get_ui())) K->index_primes_.insert(p);
            }
        }
    }
    return K;
}

FieldElement NumberField::element(QVec coords) const {
    if ((long)coords.size() != d_) throw SunitError("element: wrong coordinate count");
    for (auto& c : coords) c.canonicalize();
    return {shared_from_this(), std::move(coords)};
}

FieldElement NumberField::from_rational(const mpq_class& a) const {
    QVec c((size_t)d_, 0);
    c[0] = a;
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::zero() const { return from_rational(0); }
FieldElement NumberField::one() const { return from_rational(1); }

FieldElement NumberField::gen() const {
    QVec c((size_t)d_, 0);
    if (d_ > 1) c[1] = 1;
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::add(const FieldElement& a, const FieldElement& b) const {
    QVec c((size_t)d_);
    for (long i = 0; i < d_; ++i) c[(size_t)i] = a.coords[(size_t)i] + b.coords[(size_t)i];
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::sub(const FieldElement& a, const FieldElement& b) const {
    QVec c((size_t)d_);
    for (long i = 0; i < d_; ++i) c[(size_t)i] = a.coords[(size_t)i] - b.coords[(size_t)i];
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::neg(const FieldElement& a) const {
    QVec c((size_t)d_);
    for (long i = 0; i < d_; ++i) c[(size_t)i] = -a.coords[(size_t)i];
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::mul(const FieldElement& a, const FieldElement& b) const {
    std::vector<mpq_class> prod((size_t)(2 * d_ - 1), 0);
    for (long i = 0; i < d_; ++i) {
        if (a.coords[(size_t)i] == 0) continue;
        for (long j = 0; j < d_; ++j) {
            if (b.coords[(size_t)j] == 0) continue;
            prod[(size_t)(i + j)] += a.coords[(size_t)i] * b.coords[(size_t)j];
        }
    }
    QVec c(prod.begin(), prod.begin() + d_);
    for (long k = d_; k <= 2 * d_ - 2; ++k) {
        if (prod[(size_t)k] == 0) continue;
        const ZVec& red = reduction_[(size_t)(k - d_)];
        for (long i = 0; i < d_; ++i) c[(size_t)i] += prod[(size_t)k] * red[(size_t)i];
    }
    for (auto& x : c) x.canonicalize();
    return {shared_from_this(), std::move(c)};
}

FieldElement NumberField::inv(const FieldElement& a) const {
    if (a.is_zero()) throw DivisionByZero("inverse of zero");
    QPoly r0 = to_qpoly(f_), r1(a.coords);
    p_normalize(r1);
    QPoly t0, t1 = {1};
    while (!r1.empty()) {
        auto [q, r2] = p_divmod(r0, r1);
        QPoly t2 = p_sub(t0, p_mul(q, t1));
        r0 = std::move(r1);
        r1 = std::move(r2);
        t0 = std::move(t1);
        t1 = std::move(t2);
    }
    if (p_deg(r0) != 0) throw SunitError("inv: gcd with defining polynomial nontrivial");
    QPoly res = p_scale(t0, 1 / r0[0]);
    res.resize((size_t)d_, 0);
    return {shared_from_this(), QVec(res.begin(), res.end())};
}

FieldElement NumberField::pow(const FieldElement& a, long e) const {
    FieldElement base = e < 0 ? inv(a) : a;
    unsigned long k = (unsigned long)(e < 0 ? -e : e);
    FieldElement r = one();
    while (k) {
        if (k & 1) r = mul(r, base);
        base = mul(base, base);
        k >>= 1;
    }
    return r;
}

mpq_class NumberField::norm(const FieldElement& a) const {
    if (d_ == 1) return a.coords[0];
    QPoly ap(a.coords);
    p_normalize(ap);
    if (ap.empty()) return 0;
    return resultant_q(to_qpoly(f_), ap); // f monic
}

mpq_class NumberField::trace(const FieldElement& a) const {
    mpq_class t = 0;
    for (long i = 0; i < d_; ++i) t += a.coords[(size_t)i] * power_traces_[(size_t)i];
    return t;
}

long NumberField::element_degree(const FieldElement& a) const {
    QMat rows;
    FieldElement cur = one();
    rows.push_back(cur.coords);
    for (long k = 1; k <= d_; ++k) {
        cur = mul(cur, a);
        rows.push_back(cur.coords);
        if ((long)q_rank(rows) < (long)rows.size()) return k;
    }
    return d_;
}

QPoly NumberField::min_poly(const FieldElement& a) const {
    long k = element_degree(a);
    // solve sum_{i<k} c_i a^i = -a^k
    QMat sys((size_t)d_, QVec((size_t)k));
    FieldElement cur = one();
    for (long i = 0; i < k; ++i) {
        for (long r = 0; r < d_; ++r) sys[(size_t)r][(size_t)i] = cur.coords[(size_t)r];
        cur = mul(cur, a);
    }
    QVec rhs((size_t)d_);
    for (long r = 0; r < d_; ++r) rhs[(size_t)r] = -cur.coords[(size_t)r];
    auto c = q_solve(sys, rhs);
    if (!c) throw SunitError("min_poly: dependence solve failed");
    QPoly f((size_t)k + 1);
    for (long i = 0; i < k; ++i) f[(size_t)i] = (*c)[(size_t)i];
    f[(size_t)k] = 1;
    return f;
}

std::vector<FieldElement> NumberField::subfield_basis(const std::vector<FieldElement>& gens) const {
    QMat rows;
    rows.push_back(one().coords);
    bool grew = true;
    while (grew) {
        grew = false;
        size_t n = rows.size();
        for (size_t i = 0; i < n; ++i) {
            for (const auto& g : gens) {
                FieldElement prod = mul({shared_from_this(), rows[i]}, g);
                QMat test = rows;
                test.push_back(prod.coords);
                if ((long)q_rank(test) > (long)rows.size()) {
                    rows.push_back(prod.coords);
                    grew = true;
                }
            }
        }
    }
    std::vector<FieldElement> out;
    out.reserve(rows.size());
    for (auto& r : rows) out.push_back({shared_from_this(), r});
    return out;
}

long NumberField::subfield_degree(const std::vector<FieldElement>& gens) const {
    return (long)subfield_basis(gens).size();
}

FieldElement phi_rho(const SUnitBasis& basis, const ExponentVector& a) {
    if ((long)a.a.size() != basis.rank()) throw SunitError("phi_rho: rank mismatch");
    const NumberField& K = *basis.K;
    long a0 = ((a.a0 % basis.w) + basis.w) % basis.w;
    FieldElement r = K.pow(basis.rho0, a0);
    for (size_t i = 0; i < basis.rho.size(); ++i)
        if (a.a[i] != 0) r = K.mul(r, K.pow(basis.rho[i], a.a[i]));
    return r;
}

} // namespace sunit
