#ifndef SUNIT_PLACES_HPP
#define SUNIT_PLACES_HPP

#include <memory>

#include "sunit/interval.hpp"
#include "sunit/nfield.hpp"

namespace sunit {

struct IndexDivisible : SunitError { using SunitError::SunitError; };
struct LocalFactorizationUnsupported : SunitError { using SunitError::SunitError; };

// finite place: prime ideal over p with ramification e and inertia f
class FinitePlace {
  public:
    NFPtr K;
    mpz_class p;
    long e = 1, f = 1;
    FieldElement pi; // uniformizer: ord_p(pi) = 1

    mpz_class ideal_norm() const { return pow_mpz(p, (unsigned long)f); }

    // exact valuation of a nonzero element
    long ord(const FieldElement& a) const;

    // local defining polynomial of K_p over Q_p, coefficients mod p^prec.
    // Monic of degree e*f; irreducible over Q_p. Throws
    // LocalFactorizationUnsupported when unavailable (index case, several primes).
    ZPoly local_poly(long prec) const;
    bool has_local_poly() const { return kummer_ || single_; }

    // residue image of a p-integral element with p-coprime denominators as a
    // polynomial over F_p modulo the degree-f residue polynomial
    FpPoly residue(const FieldElement& a) const;
    const FpPoly& residue_poly() const { return rbar_; }

    // exact ord_p of disc(local_poly); the D_p(theta) of the reduction step
    long local_disc_ord() const;

  private:
    friend std::vector<std::shared_ptr<const FinitePlace>> primes_above(const NFPtr&,
                                                                        const mpz_class&);
    // Kummer-Dedekind data
    bool kummer_ = false;
    bool single_ = false; // single prime above p: local poly is f itself
    FpPoly block_;        // gbar^e block mod p (Hensel input)
    FpPoly rbar_;         // irreducible gbar, residue polynomial (degree f)
    mutable ZPoly g_cache_;
    mutable long g_cache_prec_ = 0;
    // index-prime data: HNF Z-basis of the ideal in integral-basis coordinates
    ZMat ideal_basis_;

    long ord_by_ideal(const FieldElement& a) const;
    long ord_by_resultant(const FieldElement& a) const;
};

// infinite place: embedding into C tracked by a certified root enclosure of f
class InfinitePlace {
  public:
    NFPtr K;
    bool real = false;
    long delta() const { return real ? 1 : 2; }

    // certified embedding of alpha at working precision
    CInt embed(const FieldElement& a, long prec) const;
    // log |sigma(alpha)|  (no delta factor)
    RInt log_abs_embed(const FieldElement& a, long prec) const;
    // log |alpha|_p = delta * log|sigma(alpha)|
    RInt log_abs_value(const FieldElement& a, long prec) const;
    // principal Log sigma(alpha): (log|.|, arg)
    std::pair<RInt, RInt> principal_log(const FieldElement& a, long prec) const;

    // root enclosure refinement; identification is stable across refinements
    CInt root_box(long prec) const;

  private:
    friend std::vector<std::shared_ptr<const InfinitePlace>> infinite_places(const NFPtr&, long);
    // real root: exact isolating interval, shrunk on demand
    mutable mpq_class rlo_, rhi_;
    // complex root: high-precision center + certified radius
    mutable mpq_class cx_, cy_, radius_;
    mutable long cached_prec_ = 0;
    void refine(long prec) const;
};

using FinitePlacePtr = std::shared_ptr<const FinitePlace>;
using InfinitePlacePtr = std::shared_ptr<const InfinitePlace>;

// all archimedean places: r1 real then r2 complex (positive imaginary part)
std::vector<InfinitePlacePtr> infinite_places(const NFPtr& K, long prec = 96);

// prime ideals above p; Kummer-Dedekind when p does not divide the index,
// order/p-algebra decomposition when it does and an integral basis is present
std::vector<FinitePlacePtr> primes_above(const NFPtr& K, const mpz_class& p);

// ordered place set: finite places first (per the job), then all infinite ones
struct PlaceSet {
    NFPtr K;
    std::vector<FinitePlacePtr> fin;
    std::vector<InfinitePlacePtr> inf;

    long s() const { return (long)fin.size(); }
    long t() const { return (long)(fin.size() + inf.size()) - 1; }
    size_t size() const { return fin.size() + inf.size(); }
};

PlaceSet make_place_set(const NFPtr& K, const std::vector<mpz_class>& s_primes, long prec = 96);

long ord_p(const FieldElement& a, const FinitePlace& P);
RInt abs_value(const FieldElement& a, const FinitePlace& P, long prec);
RInt abs_value(const FieldElement& a, const InfinitePlace& P, long prec);

// finite places where alpha has nonzero valuation, with the valuations
std::vector<std::pair<FinitePlacePtr, long>> support(const FieldElement& a);

// standard logarithmic Weil height of alpha (projective (1 : alpha))
RInt height(const FieldElement& a, long prec);
RInt height_proj(const std::vector<FieldElement>& coords, long prec);

// modified height h' = (1/d') max{ d' h(b), |Log b|, 1 } at the given embedding
RInt height_h_prime(const FieldElement& b, long d_sub, const InfinitePlace& at, long prec);

// p-adic modified height h'_p = max{ h(b), |Log b| / (2 pi D), f' log p / d' }
RInt height_hp_prime(const FieldElement& b, long d_sub, const mpz_class& D,
                     const mpz_class& p, long f_sub, const InfinitePlace& at, long prec);

} // namespace sunit

#endif
