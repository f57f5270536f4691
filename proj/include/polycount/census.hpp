#ifndef POLYCOUNT_CENSUS_HPP
#define POLYCOUNT_CENSUS_HPP

#include <gmpxx.h>

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "polycount/decompose.hpp"
#include "polycount/poly.hpp"

namespace polycount {

// ---------------------------------------------------------------------------
// counting formulas
// ---------------------------------------------------------------------------

/// Smallest prime divisor of n (n itself when n is prime).
int smallest_prime_divisor(int n);
/// Second smallest nontrivial (proper, > 1) divisor; 1 when absent.
int second_divisor(int n);

/// Shared inputs of the counting formulas: the two smallest nontrivial
/// divisors l and l2 (l2 = 1 when absent), s = floor(d / l^2), and the
/// exponent gap c = (l + d/l) - (l2 + d/l2).
struct CensusFormulaInputs {
    uint64_t q = 0;
    uint32_t p = 0, e = 0;
    int d = 0, l = 0, l2 = 0, s = 0, c = 0;
};
CensusFormulaInputs census_inputs(const Field& F, int d);

/// The main count approximation: 0 for prime d, q^{2l}(1 - q^{-1}) for
/// d = l^2, and 2 q^{l + d/l}(1 - q^{-1}) otherwise.
mpz_class alpha(uint64_t q, int d);

/// Relative-error terms of the main estimate (exact rationals).
mpq_class beta(uint64_t q, int d);
mpq_class beta_star(uint64_t q, int d);

/// l + d/l for composite d; empty for prime d (the set is empty there).
std::optional<int> dim_decomposables(int d);

/// q^{d/p + 1}(1 - q^{-1}) when p | d, else 0.
mpz_class frobenius_count(uint64_t q, uint32_t p, int d);

struct BluherStats {
    uint64_t q = 0, r = 0;
    uint32_t d_exp = 0, c = 0;
    uint64_t z = 0;
    int gamma = 0;
    uint64_t c0 = 0, c1 = 0, c2 = 0, c_zplus1 = 0;
};

/// Root-count statistics of t^{r+1} - u t + u over F_q^x, from the closed
/// formulas; c0 and c2 derived from the closure identities.
BluherStats bluher_counts(uint32_t p, uint32_t e, uint32_t d_exp);

/// Brute-force count of nonzero roots of t^{r+1} - u t + u (u != 0).
int count_T(const Field& F, uint32_t d_exp, Fe u);
/// Brute-force count of nonzero roots of s^{r+1} - v s - w (w != 0).
int count_S(const Field& F, uint32_t d_exp, Fe v, Fe w);

/// #S(0, w) from the two-case formula (w != 0).
int s_zero_count(const Field& F, uint32_t d_exp, Fe w);

struct GcdStructure {
    uint64_t b = 0;
    int lambda = 0, mu = 0;
    int delta = 0, epsilon = 0, alpha_v = 0, beta_v = 0;  // 2-adic valuations
    uint32_t c = 0;
    uint64_t z = 0;
};

/// b = gcd(q-1, r+1) together with the 2-adic data that determines it;
/// asserts gcd(r-1, q-1) = z-1.
GcdStructure gcd_structure(uint32_t p, uint32_t e, uint32_t d_exp);

struct IntersectionValue {
    enum class Kind { Exact, BoundOnly } kind = Kind::Exact;
    mpz_class exact;                    // valid when kind == Exact
    std::optional<mpq_class> lower, upper;  // valid bounds when present
    std::string basis;                  // which result supplied the value
};

/// t = #(D_{d,l} /\ D_{d,m}) for m > l >= 2, d = l m; exact when p does not
/// divide d, exact 0 (non-Frobenius) when p | l with gcd(l, m) = 1, and
/// bound-only otherwise. Never a fabricated exact value.
IntersectionValue intersection_count_exact(uint64_t q, uint32_t p, uint32_t e, int l, int m);

/// Lower bound on #D^+_{d,l} (non-Frobenius compositions with left degree
/// l = a p^{d_exp}), selecting among the three displayed cases by
/// r = m and mu = gcd(r-1, m).
mpq_class lower_bound_wild(uint32_t p, uint32_t e, uint32_t d_exp, uint64_t a, int m);

// ---------------------------------------------------------------------------
// exact enumeration
// ---------------------------------------------------------------------------

struct CensusOptions {
    uint64_t max_compositions = 1ull << 28;
    uint64_t max_bytes = 1ull << 31;
    int workers = 1;
    bool histogram = true;
    bool intersection = true;
    bool verify = false;
    /// Quotient by the right-shift action when p does not divide d
    /// (enumerating second-normalized right components only); counts are
    /// identical, work drops by a factor of q.
    bool allow_second_normalized = true;
};

struct SplitCount {
    int left_degree = 0;
    uint64_t pairs_enumerated = 0;
    uint64_t distinct_enumerated = 0;  // within the enumerated domain
    mpz_class monic_original;          // #(D_{d,e} /\ P^0)
    mpz_class count;                   // #D_{d,e}
    /// (#decompositions per composition, #compositions) in the enumerated
    /// domain, i.e. the fiber-size statistic of the composition map.
    std::vector<std::pair<uint64_t, uint64_t>> multiplicity_histogram;
};

struct BoundCheck {
    std::string name;
    std::string detail;
    bool pass = false;
};

struct CensusReport {
    std::string field_designator;
    uint64_t q = 0;
    uint32_t p = 0, e = 0;
    int d = 0;
    bool second_normalized = false;
    uint64_t compositions = 0;

    mpz_class monic_original;  // #(D_d /\ P^0)
    mpz_class total;           // #D_d
    std::vector<SplitCount> splits;

    mpz_class frobenius_enumerated;  // #D_d^phi (0 when p does not divide d)
    mpz_class frobenius_formula;

    bool has_intersection = false;
    int intersection_l = 0;
    mpz_class intersection_full;     // #(D_{d,l} /\ D_{d,d/l})
    mpz_class intersection_nonfrob;  // ... /\ D_d^+

    mpz_class alpha_value;
    mpq_class beta_value, beta_star_value;
    std::optional<int> dim;
    std::string leaf;

    std::vector<BoundCheck> checks;
    bool all_checks_pass = true;

    int workers = 1;
    double seconds = 0.0;
};

/// Exact census of decomposable polynomials of degree d over F:
/// enumerates all monic original normal compositions per degree split,
/// deduplicates canonical encodings, and scales by q(q-1).
CensusReport enumerate_decomposables(const Field& F, int d, const CensusOptions& opts = {});

/// Evaluates every applicable inequality against the enumerated truth and
/// appends the verdicts; a failing bound is a report verdict, not an error.
void verify_bounds(const Field& F, CensusReport& report);

/// Exact #(D_{d,l} /\ D_{d,d/l} /\ D_d^+) /\ P^0 by brute enumeration
/// (count of monic original members).
mpz_class enumerate_intersection(const Field& F, int d, int l, const CensusOptions& opts = {});

/// Leaf of the case-distinction tree for (q, d), e.g. "I.B" or "II.B.ii.b.beta".
std::string classify_leaf(uint32_t p, int d);

// report serialization (report.cpp)
std::string report_json(const CensusReport& r, bool include_timing = false);
std::string report_csv_row(const CensusReport& r);
std::string report_human(const CensusReport& r);
std::string decimal_ratio(const mpz_class& num, const mpz_class& den, int places = 4);

}  // namespace polycount

#endif
