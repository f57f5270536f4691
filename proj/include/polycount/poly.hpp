#ifndef POLYCOUNT_POLY_HPP
#define POLYCOUNT_POLY_HPP

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "polycount/field.hpp"

namespace polycount {

/// Dense univariate polynomial over a fixed Field, coefficient of x^i at
/// index i, trimmed so the leading coefficient is nonzero unless the
/// polynomial is zero. Immutable value semantics; the owning Field must
/// outlive the polynomial.
class Poly {
  public:
    /// Degree reported for the zero polynomial. Never a valid composite
    /// degree; algorithms must treat it explicitly.
    static constexpr int kZeroDegree = -1;

    explicit Poly(const Field& F) : f_(&F) {}
    Poly(const Field& F, std::vector<Fe> coeffs) : f_(&F), c_(std::move(coeffs)) { trim(); }

    static Poly zero(const Field& F) { return Poly(F); }
    static Poly constant(const Field& F, Fe c) { return Poly(F, {c}); }
    static Poly x(const Field& F) { return monomial(F, 1); }
    static Poly monomial(const Field& F, int k, Fe c);
    static Poly monomial(const Field& F, int k);
    /// Coefficients given as integers, ascending powers.
    static Poly from_ints(const Field& F, std::initializer_list<int64_t> coeffs);

    const Field& field() const { return *f_; }
    int degree() const { return (int)c_.size() - 1; }
    bool is_zero() const { return c_.empty(); }
    bool is_monic() const { return !c_.empty() && c_.back() == f_->one(); }
    bool is_original() const { return c_.empty() || c_.front() == f_->zero(); }
    Fe coeff(int i) const {
        return (i < 0 || i >= (int)c_.size()) ? f_->zero() : c_[(size_t)i];
    }
    Fe leading() const;
    const std::vector<Fe>& coeffs() const { return c_; }

    Fe eval(Fe x) const;

    Poly operator+(const Poly& o) const;
    Poly operator-(const Poly& o) const;
    Poly operator-() const;
    Poly operator*(const Poly& o) const;
    Poly scaled(Fe c) const;
    Poly shifted_up(int k) const;  // multiply by x^k
    bool operator==(const Poly& o) const;

    /// Quotient and remainder; divisor must be nonzero.
    std::pair<Poly, Poly> divmod(const Poly& divisor) const;

    Poly pow(uint32_t n) const;

  private:
    void trim() {
        while (!c_.empty() && c_.back() == f_->zero()) c_.pop_back();
    }
    void check_same_field(const Poly& o) const;

    const Field* f_;
    std::vector<Fe> c_;
};

/// An invertible linear polynomial v = a x + b with a != 0; the functional
/// inverse (x - b)/a satisfies inverse() o v = x.
struct LinearUnit {
    const Field* field;
    Fe a, b;
    LinearUnit(const Field& F, Fe a_, Fe b_) : field(&F), a(a_), b(b_) {
        if (a == F.zero()) throw std::invalid_argument("linear unit needs a != 0");
    }
    Poly poly() const { return Poly(*field, {b, a}); }
    LinearUnit inverse() const {
        Fe ai = field->inv(a);
        return LinearUnit(*field, ai, field->neg(field->mul(ai, b)));
    }
    Fe apply(Fe x) const { return field->add(field->mul(a, x), b); }
};

/// g(h). Degrees multiply when both are nonconstant.
Poly compose(const Poly& g, const Poly& h);

/// Formal derivative in characteristic p.
Poly derivative(const Poly& f);

/// Normalizes (g, h) to (g*, h*) with h* monic and original and
/// g* o h* = g o h, via a = lc(h)^-1, b = -a h(0).
std::pair<Poly, Poly> normalize_decomposition(const Poly& g, const Poly& h);

/// (f o (x - f_{d-1}/d), shift); the result has zero coefficient at x^{d-1}.
/// Requires p not dividing deg f.
std::pair<Poly, Fe> second_normalize(const Poly& f);

/// Remainders (t_0, ..., t_k) of iterated division by h, each of degree
/// < deg h, with f = sum t_i h^i. If every t_i is constant, f = g o h for
/// g = sum t_i x^i.
std::vector<Poly> taylor_in_base(const Poly& f, const Poly& h);

/// Unique g with g^p = f; requires derivative(f) == 0.
Poly poly_pth_root(const Poly& f);

/// True iff derivative(f) == 0, i.e. f lies in F[x^p].
bool is_frobenius_composition(const Poly& f);

/// Applies the j-th Frobenius power to every coefficient, fixing x.
Poly frobenius_poly(const Poly& h, int64_t j);

/// Packs the free coefficients c_1..c_{d-1} of a monic original polynomial
/// into a little-endian base-q integer serialized as bytes of fixed width.
std::vector<uint8_t> encode_canonical(const Poly& f);
Poly decode_canonical(const Field& F, int d, const std::vector<uint8_t>& bytes);
size_t encoded_width(const Field& F, int d);

std::string to_string(const Poly& f);
Poly parse_poly(const Field& F, std::string_view text);

inline std::vector<Fe> roots(const Poly& f) {
    return roots_in_field(f.field(), f.coeffs());
}

}  // namespace polycount

#endif
