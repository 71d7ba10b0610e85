#ifndef SUNIT_APPS_HPP
#define SUNIT_APPS_HPP

#include <iosfwd>
#include <string>

#include "sunit/sieve.hpp"

namespace sunit {

struct CapTooSmall : SunitError { using SunitError::SunitError; };
struct HypothesisNotMet : SunitError { using SunitError::SunitError; };
struct FieldTooLarge : SunitError { using SunitError::SunitError; };

// ---- generator search ----

struct GeneratorSearchOptions {
    long coord_box = 6;      // |coords| bound in integral-basis coordinates
    long max_box = 24;       // escalation limit
    bool saturate = true;    // p-saturation for p in {2,3,5,7}
    long prec = 96;
};

// brute-force S-unit basis finder. Reliable window: d_K <= 3 or rank t <= 2;
// outside it the search may fail with CapTooSmall. The returned basis is
// normalized (valuation part in HNF, unit part log-reduced) and verified:
// torsion order exact, S-unit property exact, rank t.
SUnitBasis find_generators_bruteforce(const PlaceSet& S, const GeneratorSearchOptions& opt = {});

// ---- application drivers ----

struct FermatCheckResult {
    bool satisfied = false;
    // per solution: index of a witnessing place in T (or -1)
    std::vector<long> witness;
    std::string detail;
};

// Freitas-Siksek criterion over the solution list; K totally real, S = places
// above 2, T = subset with residue degree 1
FermatCheckResult fermat_check(const PlaceSet& S, const std::vector<SolutionPair>& solutions);

struct RNResult {
    long q = 0;
    std::vector<std::array<mpz_class, 3>> solutions; // (x, k, n)
    mpz_class k_cap, n_cap;                          // c3*B and cq*B
    mpz_class B;                                     // reduced S-unit bound used
    bool bound_only = false;                         // enumeration left to caller
};

struct RNOptions {
    long prec = 96;
    long coord_box = 4;
    size_t memory_budget_bytes = 512ull << 20;
    // enumeration ceiling on k_cap * n_cap pairs before bailing to bound-only
    double pair_budget = 5e9;
};

// x^3 + 3^k = q^n over the splitting field of x^3 + 3
RNResult ramanujan_nagell(long q, const RNOptions& opt = {});

struct BoundReport {
    BoundConstants constants;
    ReductionState b1;
    bool has_b2 = false;
    ReductionState b2;
    // R(K) = ((2 B1 + 1)/(2 B2 + 1))^{2t}
    double savings_ratio = 0;
    double seconds = 0;
};

BoundReport bound_report(const PlaceSet& S, const SUnitBasis& basis, long prec = 96);

// ---- job files and results (versioned JSON) ----

struct JobSpec {
    int schema_version = 1;
    ZPoly field; // constant term first
    std::optional<QMat> integral_basis;
    std::vector<mpz_class> s_primes;
    // optional explicit generators
    bool has_generators = false;
    QVec rho0;
    long w = 0;
    std::vector<QVec> rho;
    std::string mode = "solve"; // solve | bound | sieve-below-bound | fermat-check |
                                // ramanujan-nagell | generators
    mpz_class bound = 0;        // for sieve-below-bound
    std::vector<long> rn_q;     // for ramanujan-nagell
    long precision_bits = 96;
    long memory_budget_mib = 512;
    bool infinite_only = true;
};

JobSpec parse_job(const std::string& json_text);
std::string job_to_json(const JobSpec& job);

// assembles field + places + generators from a job (finding generators when
// they are not supplied); validates supplied generators and never repairs them
struct PreparedJob {
    NFPtr K;
    PlaceSet S;
    SUnitBasis basis;
};
PreparedJob prepare_job(const JobSpec& job);

std::string solutions_to_json(const std::vector<SolutionPair>& sols);
std::string solve_result_to_json(const SolveResult& r, const JobSpec& job);
std::string bound_report_to_json(const BoundReport& r);

int cli_main(int argc, char** argv);

} // namespace sunit

#endif
