#ifndef SUNIT_REDUCE_HPP
#define SUNIT_REDUCE_HPP

#include "sunit/bounds.hpp"

namespace sunit {

struct RankDeficient : SunitError { using SunitError::SunitError; };
struct Unsupported : SunitError { using SunitError::SunitError; };
struct ModeUnavailable : SunitError { using SunitError::SunitError; };

// integer lattice, columns are basis vectors
struct IntegerLattice {
    ZMat basis; // n x m, m columns
    size_t dim() const { return basis.empty() ? 0 : basis[0].size(); }
    size_t amb() const { return basis.size(); }
};

// exact integer LLL (de Weger's all-integer variant), delta = 3/4 by default;
// returns a reduced basis of the same lattice
IntegerLattice integer_lll(const IntegerLattice& L, const mpq_class& delta = mpq_class(3, 4));

// certified lower bound on ell(L, y)^2: squared length of the shortest nonzero
// vector when y is in L, else squared distance from y to L
mpq_class minimal_vector_lb2(const IntegerLattice& L, const ZVec& y);

struct PlaceReduction {
    size_t place_index = 0;
    bool finite = false;
    mpz_class reduced; // bound under "this place is extremal"
    long iterations = 0;
    bool lemma_failed = false; // no reduction could be certified
    bool below_c16 = false;
    mpz_class last_u_or_logC; // u (finite) or log10 C (infinite) actually used
};

struct ReductionState {
    mpz_class B_init;
    mpz_class B_final;
    std::vector<PlaceReduction> places;
    bool infinite_only = false;
};

// one finite-place pass: largest B' <= B_current certified under the
// assumption that the extremal place is this one
mpz_class reduce_finite(const FinitePlacePtr& place, const SUnitBasis& basis,
                        const RInt& c5, const mpz_class& B_current,
                        PlaceReduction& diag, long prec);

mpz_class reduce_infinite(const InfinitePlacePtr& place, const SUnitBasis& basis,
                          const RInt& c13, const mpz_class& B_current,
                          PlaceReduction& diag, long prec);

// full reduction: per-place bounds merged by max and iterated to a fixed point.
// mode: false = all places (B1), true = infinite places only (B2, requires
// exactly one finite place in S)
ReductionState reduced_bound(const PlaceSet& S, const SUnitBasis& basis,
                             const BoundConstants& bc, bool infinite_only, long prec = 96);

} // namespace sunit

#endif
