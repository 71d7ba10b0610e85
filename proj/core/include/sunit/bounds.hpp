#ifndef SUNIT_BOUNDS_HPP
#define SUNIT_BOUNDS_HPP

#include "sunit/padic.hpp"

namespace sunit {

struct HypothesisViolated : SunitError { using SunitError::SunitError; };
struct AllSingular : SunitError { using SunitError::SunitError; };

// C(t, d') = 18 (t+2)! (t+1)^{t+2} (32 d')^{t+3} log(2 (t+1) d')
RInt bw_constant(long t, long d, long prec);

struct YuConstants {
    RInt k2, k3, k4, k5, H;
};

// constants of the p-adic linear forms theorem for the alpha list (all units
// at the place); d_sub = [Q(alphas) : Q], D per the three-case rule
YuConstants yu_constants(const FinitePlacePtr& place, const std::vector<FieldElement>& alphas,
                         long d_sub, const mpz_class& D, long prec);

// upper bound for the largest solution of x = a + b (log x)^h;
// requires a >= 0, h >= 1, b > (e^2/h)^h (certified), else HypothesisViolated
RInt pdw_solve(const RInt& a, const RInt& b, const RInt& h, long prec);

// certified upper bound on the largest fixed point by doubling/bracketing;
// used as the fallback when the closed form's hypothesis fails
RInt pdw_bracket(const RInt& a, const RInt& b, const RInt& h, long prec);

struct PlaceBoundReport {
    bool finite = false;
    size_t place_index = 0; // position in PlaceSet (fin first, then inf)
    double K_value = 0;     // K0(l) or K1(l), upper endpoint
    // finite-place data
    double c5 = 0, c8 = 0, c9 = 0;
    double k2 = 0, k3 = 0, k4 = 0, k5 = 0;
    double inflation = 1;
    // infinite-place data
    double c11 = 0, c13 = 0, c14 = 0, c15 = 0;
};

struct BoundConstants {
    long t = 0, w = 0;
    RInt c1, c2, c3;
    RInt K0, K1, B_init;
    mpz_class B_init_int; // ceil of the upper endpoint, >= 4
    std::vector<PlaceBoundReport> places;
    long dK_prime = 0; // [Q(rho_0..rho_t) : Q]
};

// c1 = max_U || M_U^{-1} ||_row over certified-invertible U, c2 = 1/c1,
// c3 = 0.9999999 c2 / (r+s)
std::array<RInt, 3> c1_c3(const PlaceSet& S, const SUnitBasis& basis, long prec);

// K0 and its per-place values (0 when S has no finite places)
std::pair<RInt, std::vector<PlaceBoundReport>> K0_bound(const PlaceSet& S,
                                                        const SUnitBasis& basis,
                                                        const RInt& c3, long prec);

std::pair<RInt, std::vector<PlaceBoundReport>> K1_bound(const PlaceSet& S,
                                                        const SUnitBasis& basis,
                                                        const RInt& c3, long prec);

BoundConstants initial_bound(const PlaceSet& S, const SUnitBasis& basis, long prec = 96);

} // namespace sunit

#endif
