#ifndef SUNIT_NFIELD_HPP
#define SUNIT_NFIELD_HPP

#include <memory>
#include <optional>
#include <set>
#include <vector>

#include "sunit/linalg.hpp"
#include "sunit/poly.hpp"

namespace sunit {

struct NotMonic : SunitError { using SunitError::SunitError; };
struct NotIrreducible : SunitError { using SunitError::SunitError; };
struct BasisNotIntegral : SunitError { using SunitError::SunitError; };
struct DivisionByZero : SunitError { using SunitError::SunitError; };
struct ZeroElement : SunitError { using SunitError::SunitError; };

class NumberField;
using NFPtr = std::shared_ptr<const NumberField>;

// element of K = Q[x]/(f) in power-basis coordinates, always exact
struct FieldElement {
    NFPtr K;
    QVec coords; // length d_K

    bool is_zero() const;
    bool is_rational() const;
    mpq_class rational_value() const; // requires is_rational()
    bool operator==(const FieldElement&) const;
    bool operator<(const FieldElement&) const; // lexicographic, for canonical ordering
};

class NumberField : public std::enable_shared_from_this<NumberField> {
  public:
    // f monic irreducible integer polynomial, constant term first.
    // integral_basis: optional d x d rational matrix, rows = basis elements in
    // power-basis coordinates; defaults to the power basis.
    static NFPtr create(const ZPoly& f, const std::optional<QMat>& integral_basis = std::nullopt);

    long degree() const { return d_; }
    const ZPoly& poly() const { return f_; }
    const mpz_class& disc_f() const { return disc_f_; }
    const mpz_class& disc_K() const { return disc_K_; } // disc of the accepted basis
    const QMat& integral_basis() const { return basis_; }
    const QMat& integral_basis_inv() const { return basis_inv_; }
    bool power_basis_is_basis() const { return power_basis_; }
    // primes p where the power-basis order is known non-maximal (Dedekind fails)
    const std::set<mpz_class>& index_primes() const { return index_primes_; }

    FieldElement element(QVec coords) const;
    FieldElement from_rational(const mpq_class& a) const;
    FieldElement zero() const;
    FieldElement one() const;
    FieldElement gen() const; // theta

    FieldElement add(const FieldElement& a, const FieldElement& b) const;
    FieldElement sub(const FieldElement& a, const FieldElement& b) const;
    FieldElement neg(const FieldElement& a) const;
    FieldElement mul(const FieldElement& a, const FieldElement& b) const;
    FieldElement inv(const FieldElement& a) const;
    FieldElement pow(const FieldElement& a, long e) const;
    mpq_class norm(const FieldElement& a) const;
    mpq_class trace(const FieldElement& a) const;
    // minimal polynomial degree of Q(a) -- linear algebra on power products
    long element_degree(const FieldElement& a) const;
    // monic minimal polynomial of a over Q
    QPoly min_poly(const FieldElement& a) const;
    // dimension of the subalgebra Q(a_1, ..., a_n); equals the degree of the
    // subfield the elements generate
    long subfield_degree(const std::vector<FieldElement>& gens) const;
    // Q-basis of that subalgebra, as elements of K
    std::vector<FieldElement> subfield_basis(const std::vector<FieldElement>& gens) const;

  private:
    NumberField() = default;

    ZPoly f_;
    long d_ = 0;
    mpz_class disc_f_, disc_K_;
    QMat basis_, basis_inv_;
    bool power_basis_ = true;
    std::set<mpz_class> index_primes_;
    // theta^k for k in [d, 2d-2] expressed in the power basis
    std::vector<ZVec> reduction_;
    ZVec power_traces_; // trace(theta^k), k in [0, 2d-2]
};

// exponent vector (a0 mod w; a in Z^t)
struct ExponentVector {
    long a0 = 0;
    std::vector<long> a;

    bool operator==(const ExponentVector&) const = default;
};

struct PlaceSet; // from places.hpp

// torsion generator rho0 of order w plus free generators rho_1..rho_t
struct SUnitBasis {
    NFPtr K;
    FieldElement rho0;
    long w = 0;
    std::vector<FieldElement> rho;

    long rank() const { return (long)rho.size(); }
};

FieldElement phi_rho(const SUnitBasis& basis, const ExponentVector& a);

// ord_p(alpha) = 0 for every finite prime outside S; checked through the norm
// factorization and the valuations at the finite places of S
bool is_s_unit(const FieldElement& alpha, const PlaceSet& S);

} // namespace sunit

#endif
