#ifndef SUNIT_PADIC_HPP
#define SUNIT_PADIC_HPP

#include "sunit/places.hpp"

namespace sunit {

struct NotAUnitAtP : SunitError { using SunitError::SunitError; };

// element of Q_p known to absolute precision N: value = u * p^v + O(p^N),
// with p not dividing u; u == 0 encodes "zero to precision N"
struct PadicNumber {
    mpz_class u;
    long v = 0;
    long N = 0;

    bool is_zero() const { return u == 0; }
    // exact valuation when determined, otherwise nullopt ("\geq N")
    std::optional<long> ord() const {
        if (u == 0) return std::nullopt;
        return v;
    }
};

// arithmetic context for one completion K_p = Q_p(theta), theta a root of the
// local defining polynomial g (degree n = e*f)
class LocalField {
  public:
    LocalField(FinitePlacePtr place, long prec);

    const mpz_class& p() const { return p_; }
    long n() const { return n_; }
    long prec() const { return prec_; }
    const FinitePlacePtr& place() const { return place_; }

    PadicNumber from_rational(const mpq_class& x, long N) const;
    PadicNumber zero(long N) const { return {0, 0, N}; }

    PadicNumber add(const PadicNumber& a, const PadicNumber& b) const;
    PadicNumber sub(const PadicNumber& a, const PadicNumber& b) const;
    PadicNumber mul(const PadicNumber& a, const PadicNumber& b) const;
    PadicNumber div(const PadicNumber& a, const PadicNumber& b) const;
    PadicNumber neg(const PadicNumber& a) const;

    using Elem = std::vector<PadicNumber>; // length n, power-basis coords

    Elem elem_one(long N) const;
    Elem elem_add(const Elem& a, const Elem& b) const;
    Elem elem_sub(const Elem& a, const Elem& b) const;
    Elem elem_mul(const Elem& a, const Elem& b) const;
    Elem elem_pow(Elem base, mpz_class e) const;
    Elem scalar_mul(const PadicNumber& c, const Elem& a) const;

    // valuation ord_p(x) * e (the integral ord_phat); throws
    // PrecisionExhausted when the precision cannot decide it
    long elem_ord_vp(const Elem& a) const;

    // image of alpha in K_p to absolute precision N (coordinates in Q_p)
    Elem embed(const FieldElement& alpha, long N) const;

    // Iwasawa p-adic logarithm of a unit at the place
    Elem log(const FieldElement& alpha, long N) const;

  private:
    FinitePlacePtr place_;
    mpz_class p_;
    long n_, e_, f_;
    long prec_;
    ZPoly g_;
    std::vector<mpz_class> ppow_; // p^k cache

    const mpz_class& ppow(long k) const;
    PadicNumber normalized(mpz_class u, long v, long N) const;
};

// exact part of the finite-place setup: mu_i = rho^{kernel basis vector} with
// ord_p(mu_i) = 0, mu0 running over the torsion powers, and the bound
// inflation |d_i| <= inflation * B
struct MuSystem {
    ZMat kernel_basis;
    std::vector<FieldElement> mu;
    std::vector<FieldElement> mu0_candidates;
    mpq_class inflation = 1;
};

MuSystem build_mu_system(const FinitePlacePtr& place, const SUnitBasis& basis);

// the mu-system and p-adic data backing the finite-place reduction
struct PadicLinearForm {
    FinitePlacePtr place;
    SUnitBasis basis;
    std::vector<FieldElement> mu0_candidates; // torsion powers rho0^j
    std::vector<FieldElement> mu;             // t-1 elements, ord_p(mu_i) = 0
    // integer expression of the kernel basis: columns of H span
    // { v : sum v_i ord_p(rho_i) = 0 }
    ZMat kernel_basis;
    // |d_i| <= inflation * B for exponent vectors bounded by B
    mpq_class inflation;
    // a[j][i] = i-th power-basis coordinate of log_p mu_j (j >= 1);
    // a0 is the matrix for the mu0 candidates (identically zero: log of torsion)
    std::vector<std::vector<PadicNumber>> a;
    long c17 = 0;
    mpq_class c18;
    long disc_ord = 0; // D_p(theta)
    long prec = 0;
    // direct-bound flag: some ord_p(a_{0,i}) < c17 (cannot occur with torsion
    // mu0, kept for the general contract)
    bool early_exit = false;

    long t() const { return (long)mu.size() + 1; }
    long n() const;
    // kappa_{j,i} = a_{j,i} / lambda reduced mod p^u, in [0, p^u)
    mpz_class kappa_int(size_t j, size_t i, long u) const;
};

// coordinates of log_p(alpha) (precondition: ord_p(alpha) = 0)
LocalField::Elem padic_log(const FieldElement& alpha, const FinitePlacePtr& place, long N);

// coordinates of alpha's image in K_p
LocalField::Elem completion_embed(const FieldElement& alpha, const FinitePlacePtr& place, long N);

PadicLinearForm build_linear_form(const FinitePlacePtr& place, const SUnitBasis& basis,
                                  long prec);

} // namespace sunit

#endif
