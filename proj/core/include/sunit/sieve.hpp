#ifndef SUNIT_SIEVE_HPP
#define SUNIT_SIEVE_HPP

#include "sunit/reduce.hpp"

namespace sunit {

struct SearchExhausted : SunitError { using SunitError::SunitError; };
struct MemoryBudgetExceeded : SunitError { using SunitError::SunitError; };
struct DegenerateTau : SunitError { using SunitError::SunitError; };

// a completely split rational prime avoiding S, with residue data for the
// generators and discrete logarithm tables in F_q^*
struct SievePrime {
    uint64_t q = 0;
    std::vector<uint64_t> roots;            // ordered roots of f mod q (the primes q_j)
    uint64_t g = 0;                         // primitive root mod q
    std::vector<uint32_t> dlog;             // dlog[x] for x in [0, q), dlog[0] unused
    std::vector<uint64_t> expt;             // g^k mod q, k in [0, q-1)
    // gen_dlog[i][j]: dlog of rho_i mod q_j; slot 0 is the torsion generator
    std::vector<std::vector<uint64_t>> gen_dlog;

    uint64_t m() const { return q - 1; }
};

// classes of A_{K,S,q-1} surviving the complement condition, stored over the
// dense index a0 + w*(a1 + m*(a2 + ...))
struct ResidueClassSet {
    uint64_t m = 0;
    long w = 0, t = 0;
    size_t total = 0;
    std::vector<uint8_t> alive;                          // membership flags
    std::vector<std::pair<__uint128_t, uint32_t>> by_key; // rfv key -> class index
    size_t alive_count = 0;
};

// residue field vector of an exponent class (componentwise in F_q^*)
std::vector<uint64_t> rfv(const SievePrime& sp, long w, const std::vector<uint64_t>& cls);

std::vector<SievePrime> find_split_primes(const PlaceSet& S, const SUnitBasis& basis,
                                          const mpz_class& B, size_t memory_budget_bytes);

ResidueClassSet build_E(const SievePrime& sp, const SUnitBasis& basis,
                        size_t memory_budget_bytes);

// fixed-point pruning by complement existence and cross-prime complement
// compatibility; removals batched per pass
void run_sieve(const std::vector<SievePrime>& Q, std::vector<ResidueClassSet>& Y);

struct SolutionPair {
    FieldElement tau1, tau2;
    ExponentVector a1, a2;
};

std::vector<SolutionPair> lift_and_enumerate(const std::vector<SievePrime>& Q,
                                             const std::vector<ResidueClassSet>& Y,
                                             const SUnitBasis& basis, const mpz_class& B,
                                             size_t memory_budget_bytes);

struct SieveOptions {
    size_t memory_budget_bytes = 512ull << 20;
};

std::vector<SolutionPair> sieve_below_bound(const PlaceSet& S, const SUnitBasis& basis,
                                            const mpz_class& B,
                                            const SieveOptions& opt = SieveOptions{});

// the orbit {tau, 1-tau, 1/tau, 1-1/tau, 1/(1-tau), 1-1/(1-tau)}
std::vector<FieldElement> solution_cycle(const FieldElement& tau);

struct SolveOptions {
    bool infinite_only_when_possible = true;
    long prec = 96;
    size_t memory_budget_bytes = 512ull << 20;
};

struct SolveResult {
    std::vector<SolutionPair> solutions;
    BoundConstants bounds;
    ReductionState reduction;
    bool used_infinite_only = false;
};

SolveResult solve(const PlaceSet& S, const SUnitBasis& basis,
                  const SolveOptions& opt = SolveOptions{});

} // namespace sunit

#endif
