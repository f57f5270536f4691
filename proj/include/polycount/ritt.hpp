#ifndef POLYCOUNT_RITT_HPP
#define POLYCOUNT_RITT_HPP

#include <optional>
#include <string>

#include "polycount/decompose.hpp"
#include "polycount/poly.hpp"

namespace polycount {

/// Dickson polynomial T_n(x, z) of the first kind with the second argument
/// specialized to a field constant, via T_0 = 2, T_1 = x,
/// T_n = x T_{n-1} - z T_{n-2}.
Poly dickson(const Field& F, int n, Fe z);

/// A distinct-degree collision g o h = g* o h* = f with all four components
/// monic original, deg g = deg h* = m, deg h = deg g* = l, m > l >= 2.
struct CollisionTuple {
    Poly f, g, h, g_star, h_star;
    int l, m;
};

/// First Case data: f = (x - shift^{kl} w^l(shift^l)) o x^{kl} w^l(x^l)
/// o (x + shift) with m = s l + k the division with remainder.
/// The additive constant is named "shift" to keep it apart from the wild
/// cofactor called a elsewhere.
struct FirstCaseParams {
    Poly w;
    Fe shift;
    int k = 0, s = 0;
};

/// Second Case data: f = (x - T_n(shift, z)) o T_n(x, z) o (x + shift).
struct SecondCaseParams {
    Fe z;
    Fe shift;
};

CollisionTuple first_case_build(const Field& F, int l, int m, const FirstCaseParams& params);

/// Recovers (w, shift) from f and l; requires p not dividing deg f.
/// A typed recovery failure (nullopt) distinguishes "not decomposable both
/// ways" from "Second Case only"; the reason lands in *why when given.
std::optional<FirstCaseParams> first_case_recover(const Poly& f, int l,
                                                  std::string* why = nullptr);

CollisionTuple second_case_build(const Field& F, int l, int m, const SecondCaseParams& params);

std::optional<SecondCaseParams> second_case_recover(const Poly& f, std::string* why = nullptr);

/// The unique monic u with w = x^r u^p (r = deg w mod p) when
/// k w + l x w' = 0 and p does not divide l; nullopt otherwise.
std::optional<Poly> degenerate_witness_test(const Poly& w, int k, int l);

/// The collision x^{p^j} o h = frobenius_poly(h, j) o x^{p^j}.
struct FrobeniusCollision {
    Poly f;
    NormalDecomposition left, right;
    bool degenerate;  // the two decompositions coincide (h = x^{p^j})
};
FrobeniusCollision frobenius_collision(const Poly& h, int j);

enum class RittCase { FirstOnly, SecondOnly, Both, Neither };
std::string to_string(RittCase c);

/// Runs both recoverers on tuple.f; Both can only occur for l = 2.
RittCase mutual_exclusion_check(int l, const CollisionTuple& tuple);

}  // namespace polycount

#endif
