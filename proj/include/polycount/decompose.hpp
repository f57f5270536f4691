#ifndef POLYCOUNT_DECOMPOSE_HPP
#define POLYCOUNT_DECOMPOSE_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "polycount/poly.hpp"

namespace polycount {

/// Thrown when an operation would exceed its configured work budget.
/// Carries the budget arithmetic in the message; no partial answer is given.
class budget_error : public std::runtime_error {
  public:
    explicit budget_error(const std::string& what) : std::runtime_error(what) {}
};

/// A pair (g, h) with h monic and original and g o h equal to the source
/// polynomial; both components of degree >= 2. Checked at construction.
struct NormalDecomposition {
    Poly g, h;
    NormalDecomposition(Poly g_, Poly h_, const Poly& source);
    bool operator==(const NormalDecomposition& o) const { return g == o.g && h == o.h; }
};

/// Parameters of the wild setting: r = p^d_exp is the full power of p in
/// the left degree l = a r, kappa the index of the second block of g,
/// i0 the crossover index (kappa m - d)/(r - 1) + m as an exact rational.
struct WildParams {
    uint32_t d_exp = 0;
    uint64_t r = 1;
    uint64_t a = 1;
    int l = 0, m = 0, kappa = 0;
    long i0_num = 0, i0_den = 1;  // i0 = i0_num / i0_den, den > 0
    uint32_t c = 1;
    uint64_t z = 1;
    int sigma = 1;

    bool i0_integral() const { return i0_num % i0_den == 0; }
    long i0_floor() const;
};

WildParams wild_params(const Field& F, int l, int m, int kappa);

/// The uniqueness condition on g_kappa for the linearized solve:
/// vacuous unless i0 is an integer with 1 <= i0 < m, in which case
/// (-kappa g_kappa / a)^((q-1)/(p^c-1)) != 1 is required.
bool condition_pc(const Field& F, const WildParams& wp, Fe g_kappa);

/// Failure (the algorithm's explicit verdict) is nullopt; otherwise a
/// (possibly empty) set of verified normal decompositions.
using WildOutcome = std::optional<std::vector<NormalDecomposition>>;

/// The unique normal (g, h) with deg g = left_degree, if one exists.
/// Requires f monic original, left_degree a proper divisor of deg f not
/// divisible by the characteristic.
std::optional<NormalDecomposition> tame_decompose(const Poly& f, int left_degree);

/// Coefficient-comparison decomposition for p | left_degree. Returns
/// Failure or a verified set of at most sigma(f) <= r+1 decompositions
/// with deg g = left_degree. Not complete on all inputs.
WildOutcome wild_decompose(const Poly& f, int left_degree,
                           std::vector<std::string>* trace = nullptr,
                           int* sigma_out = nullptr);

/// Exhaustive enumeration of right components; exact and complete.
/// Requires q^{deg f / left_degree - 1} <= budget, else budget_error.
std::vector<NormalDecomposition> brute_decompose(const Poly& f, int left_degree,
                                                 uint64_t budget);

struct SplitResult {
    std::vector<NormalDecomposition> decompositions;
    bool unknown = false;  // wild failed and brute exceeded the budget
};

/// Every degree split e (1 < e < d, e | d) mapped to the complete set of
/// normal decompositions with deg g = e; tame splits via tame_decompose,
/// wild splits via wild_decompose with brute_decompose as the completeness
/// fallback on Failure (marked unknown when the budget forbids it).
std::map<int, SplitResult> decompose_all(const Poly& f, uint64_t budget = 1ull << 28);

void sort_decompositions(std::vector<NormalDecomposition>& decs);

}  // namespace polycount

#endif
