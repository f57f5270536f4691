#ifndef POLYCOUNT_FIELD_HPP
#define POLYCOUNT_FIELD_HPP

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace polycount {

/// An element of a finite field, stored as a packed index in [0, q).
/// The index encodes the coordinate vector w.r.t. the power basis of the
/// field modulus, least significant coordinate first (index = sum c_i p^i).
/// All arithmetic goes through the owning Field.
struct Fe {
    uint32_t v = 0;
    friend bool operator==(Fe a, Fe b) = default;
    friend auto operator<=>(Fe a, Fe b) = default;
};

/// GF(p^e) with an explicit monic irreducible modulus over Z/p.
///
/// The modulus is stored constant-term-first, length e+1, leading
/// coefficient 1. Elements are immutable values; a Field is immutable
/// after construction and safe to share across threads.
///
/// Arithmetic is exact for q up to 2^20. For small q a multiplication
/// table is precomputed; beyond the table limit coordinate arithmetic
/// is used.
class Field {
  public:
    explicit Field(uint32_t p);
    Field(uint32_t p, uint32_t e);
    Field(uint32_t p, uint32_t e, std::vector<uint32_t> modulus);

    /// Parses "p", "p^e", or "p^e/c0,c1,...,1" (modulus constant-term-first).
    static Field parse(std::string_view designator);

    uint32_t p() const { return p_; }
    uint32_t e() const { return e_; }
    uint64_t q() const { return q_; }
    const std::vector<uint32_t>& modulus() const { return mod_; }
    std::string designator() const;

    Fe zero() const { return Fe{0}; }
    Fe one() const { return Fe{1}; }
    bool is_zero(Fe x) const { return x.v == 0; }

    /// The image of the integer n in the prime subfield.
    Fe from_int(int64_t n) const;
    Fe from_coords(std::span<const uint32_t> coords) const;
    std::vector<uint32_t> coords(Fe x) const;
    /// Element with the given packed index in [0, q).
    Fe element(uint64_t index) const;
    uint64_t index(Fe x) const { return x.v; }

    Fe add(Fe a, Fe b) const;
    Fe sub(Fe a, Fe b) const;
    Fe neg(Fe a) const;
    Fe mul(Fe a, Fe b) const;
    Fe inv(Fe a) const;
    Fe pow(Fe a, int64_t n) const;

    /// x^(p^j); j is reduced modulo the automorphism order e, so
    /// frobenius(x, e) == x and negative j means the inverse automorphism.
    Fe frobenius(Fe x, int64_t j) const;

    /// Unique y with y^r = x, for r a power of p (r = p^k).
    Fe pth_power_root(Fe x, uint64_t r) const;

    /// True iff x is a k-th power in the multiplicative group (x != 0, k >= 1).
    bool power_residue_test(Fe x, uint64_t k) const;

    bool operator==(const Field& o) const {
        return p_ == o.p_ && e_ == o.e_ && mod_ == o.mod_;
    }

    /// Raw q x q multiplication/addition tables (index a*q+b), or nullptr
    /// when q is above the table limit. Used by census hot loops.
    const uint16_t* mul_table() const { return mul_.empty() ? nullptr : mul_.data(); }
    const uint16_t* add_table() const { return add_.empty() ? nullptr : add_.data(); }

  private:
    void init();
    Fe mul_generic(Fe a, Fe b) const;

    uint32_t p_ = 0, e_ = 0;
    uint64_t q_ = 0;
    std::vector<uint32_t> mod_;
    std::vector<uint16_t> mul_, add_;
};

Fe parse_element(const Field& F, std::string_view text);
std::string format_element(const Field& F, Fe x);

/// All roots in F of the polynomial with the given coefficients
/// (ascending powers), by exhaustive evaluation. Degree must be >= 1.
std::vector<Fe> roots_in_field(const Field& F, std::span<const Fe> coeffs);

/// Monic irreducibility test over Z/p; poly is constant-term-first.
bool is_irreducible_mod_p(uint32_t p, const std::vector<uint32_t>& poly);

/// The lexicographically smallest monic irreducible of degree e over Z/p,
/// coefficients compared constant-term-first.
std::vector<uint32_t> default_modulus(uint32_t p, uint32_t e);

}  // namespace polycount

#endif
