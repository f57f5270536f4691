#include "polycount/field.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <numeric>
#include <stdexcept>

namespace polycount {

namespace {

constexpr uint64_t kMaxQ = 1ull << 20;
constexpr uint64_t kTableLimit = 1024;  // build q x q tables up to this q

bool is_prime(uint32_t n) {
    if (n < 2) return false;
    for (uint32_t d = 2; (uint64_t)d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

uint64_t ipow(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

// --- polynomial arithmetic over Z/p for modulus handling -------------------

using ModPoly = std::vector<uint32_t>;  // constant-term-first, may have zero lead

void trim(ModPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

ModPoly mulmod(const ModPoly& a, const ModPoly& b, const ModPoly& f, uint32_t p) {
    if (a.empty() || b.empty()) return {};
    ModPoly r(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            r[i + j] = (r[i + j] + (uint64_t)a[i] * b[j]) % p;
    }
    // reduce by monic f
    size_t e = f.size() - 1;
    for (size_t i = r.size(); i-- > e;) {
        uint32_t c = r[i];
        if (c == 0) continue;
        r[i] = 0;
        for (size_t j = 0; j < e; ++j)
            r[i - e + j] = (r[i - e + j] + (uint64_t)c * (p - f[j] % p)) % p;
    }
    r.resize(e);
    trim(r);
    return r;
}

ModPoly pow_p_mod(ModPoly base, uint32_t p, const ModPoly& f) {
    // base^p mod f via square-and-multiply
    ModPoly result{1};
    uint32_t n = p;
    while (n) {
        if (n & 1) result = mulmod(result, base, f, p);
        base = mulmod(base, base, f, p);
        n >>= 1;
    }
    return result;
}

ModPoly gcd_mod(ModPoly a, ModPoly b, uint32_t p) {
    trim(a);
    trim(b);
    while (!b.empty()) {
        // a mod b
        uint32_t lead_inv = 1;
        {  // inverse of b's leading coefficient mod p
            uint32_t l = b.back(), t = 1, n = p - 2;
            uint32_t base = l;
            while (n) {
                if (n & 1) t = (uint64_t)t * base % p;
                base = (uint64_t)base * base % p;
                n >>= 1;
            }
            lead_inv = t;
        }
        while (a.size() >= b.size() && !a.empty()) {
            uint32_t c = (uint64_t)a.back() * lead_inv % p;
            size_t off = a.size() - b.size();
            for (size_t i = 0; i < b.size(); ++i)
                a[off + i] = (a[off + i] + (uint64_t)c * (p - b[i] % p)) % p;
            trim(a);
        }
        std::swap(a, b);
    }
    return a;
}

}  // namespace

bool is_irreducible_mod_p(uint32_t p, const std::vector<uint32_t>& poly) {
    if (poly.size() < 2 || poly.back() != 1)
        throw std::invalid_argument("modulus must be monic of degree >= 1");
    uint32_t e = (uint32_t)poly.size() - 1;
    if (e == 1) return true;
    // x^(p^e) == x mod f, and gcd(x^(p^(e/r)) - x, f) == 1 for prime r | e
    ModPoly x{0, 1};
    std::vector<ModPoly> frob_powers;  // frob_powers[k] = x^(p^k) mod f
    frob_powers.push_back(x);
    ModPoly t = x;
    for (uint32_t k = 1; k <= e; ++k) {
        t = pow_p_mod(t, p, poly);
        frob_powers.push_back(t);
    }
    ModPoly top = frob_powers[e];
    if (top != x) return false;
    uint32_t m = e;
    for (uint32_t r = 2; r <= m; ++r) {
        if (m % r) continue;
        while (m % r == 0) m /= r;
        ModPoly diff = frob_powers[e / r];
        // diff - x
        if (diff.size() < 2) diff.resize(2, 0);
        diff[1] = (diff[1] + p - 1) % p;
        trim(diff);
        ModPoly g = gcd_mod(diff, poly, p);
        if (!(g.size() == 1)) return false;
    }
    return true;
}

std::vector<uint32_t> default_modulus(uint32_t p, uint32_t e) {
    if (e == 1) return {0, 1};
    uint64_t count = ipow(p, e);
    for (uint64_t v = 0; v < count; ++v) {
        // c0 is the most significant digit of v, so the scan order is
        // lexicographic on (c0, c1, ..., c_{e-1})
        std::vector<uint32_t> lex(e + 1, 0);
        lex[e] = 1;
        uint64_t t = v;
        for (uint32_t i = 0; i < e; ++i) {
            lex[e - 1 - i] = (uint32_t)(t % p);
            t /= p;
        }
        if (lex[0] == 0) continue;  // divisible by x
        if (is_irreducible_mod_p(p, lex)) return lex;
    }
    throw std::logic_error("no irreducible polynomial found");  // unreachable
}

Field::Field(uint32_t p) : Field(p, 1) {}

Field::Field(uint32_t p, uint32_t e) : Field(p, e, default_modulus(p, e)) {}

Field::Field(uint32_t p, uint32_t e, std::vector<uint32_t> modulus)
    : p_(p), e_(e), mod_(std::move(modulus)) {
    if (!is_prime(p_)) throw std::invalid_argument("field characteristic must be prime");
    if (e_ < 1) throw std::invalid_argument("extension degree must be >= 1");
    uint64_t q = 1;
    for (uint32_t i = 0; i < e_; ++i) {
        q *= p_;
        if (q > kMaxQ) throw std::invalid_argument("field size exceeds 2^20");
    }
    q_ = q;
    if (mod_.size() != e_ + 1 || mod_.back() != 1)
        throw std::invalid_argument("modulus must be monic of degree e");
    for (uint32_t c : mod_)
        if (c >= p_) throw std::invalid_argument("modulus coefficient out of range");
    if (!is_irreducible_mod_p(p_, mod_))
        throw std::invalid_argument("modulus is reducible");
    init();
}

void Field::init() {
    if (q_ > kTableLimit) return;
    uint32_t q = (uint32_t)q_;
    add_.resize((size_t)q * q);
    mul_.resize((size_t)q * q);
    for (uint32_t a = 0; a < q; ++a) {
        for (uint32_t b = 0; b < q; ++b) {
            // addition: coordinate-wise
            uint32_t x = a, y = b, s = 0, scale = 1;
            for (uint32_t i = 0; i < e_; ++i) {
                s += (x % p_ + y % p_) % p_ * scale;
                x /= p_;
                y /= p_;
                scale *= p_;
            }
            add_[(size_t)a * q + b] = (uint16_t)s;
        }
    }
    for (uint32_t a = 0; a < q; ++a)
        for (uint32_t b = a; b < q; ++b) {
            uint16_t m = (uint16_t)mul_generic(Fe{a}, Fe{b}).v;
            mul_[(size_t)a * q + b] = m;
            mul_[(size_t)b * q + a] = m;
        }
}

Fe Field::from_int(int64_t n) const {
    int64_t r = n % (int64_t)p_;
    if (r < 0) r += p_;
    return Fe{(uint32_t)r};
}

Fe Field::from_coords(std::span<const uint32_t> coords) const {
    if (coords.size() > e_) throw std::invalid_argument("too many coordinates");
    uint64_t v = 0;
    for (size_t i = coords.size(); i-- > 0;) {
        if (coords[i] >= p_) throw std::invalid_argument("coordinate out of range");
        v = v * p_ + coords[i];
    }
    return Fe{(uint32_t)v};
}

std::vector<uint32_t> Field::coords(Fe x) const {
    std::vector<uint32_t> c(e_);
    uint32_t v = x.v;
    for (uint32_t i = 0; i < e_; ++i) {
        c[i] = v % p_;
        v /= p_;
    }
    return c;
}

Fe Field::element(uint64_t index) const {
    if (index >= q_) throw std::invalid_argument("element index out of range");
    return Fe{(uint32_t)index};
}

Fe Field::add(Fe a, Fe b) const {
    if (!add_.empty()) return Fe{add_[(size_t)a.v * q_ + b.v]};
    uint32_t x = a.v, y = b.v, s = 0, scale = 1;
    for (uint32_t i = 0; i < e_; ++i) {
        s += (x % p_ + y % p_) % p_ * scale;
        x /= p_;
        y /= p_;
        scale *= p_;
    }
    return Fe{s};
}

Fe Field::neg(Fe a) const {
    uint32_t x = a.v, s = 0, scale = 1;
    for (uint32_t i = 0; i < e_; ++i) {
        uint32_t c = x % p_;
        s += (c ? p_ - c : 0) * scale;
        x /= p_;
        scale *= p_;
    }
    return Fe{s};
}

Fe Field::sub(Fe a, Fe b) const { return add(a, neg(b)); }

Fe Field::mul_generic(Fe a, Fe b) const {
    if (e_ == 1) return Fe{(uint32_t)((uint64_t)a.v * b.v % p_)};
    std::array<uint64_t, 64> acc{};
    std::array<uint32_t, 32> ca{}, cb{};
    uint32_t x = a.v, y = b.v;
    for (uint32_t i = 0; i < e_; ++i) {
        ca[i] = x % p_;
        cb[i] = y % p_;
        x /= p_;
        y /= p_;
    }
    for (uint32_t i = 0; i < e_; ++i) {
        if (!ca[i]) continue;
        for (uint32_t j = 0; j < e_; ++j)
            acc[i + j] += (uint64_t)ca[i] * cb[j];
    }
    for (uint32_t i = 2 * e_ - 1; i >= e_; --i) {
        uint64_t c = acc[i] % p_;
        if (c == 0) continue;
        for (uint32_t j = 0; j < e_; ++j)
            acc[i - e_ + j] += c * (p_ - mod_[j]);
    }
    uint32_t v = 0, scale = 1;
    for (uint32_t i = 0; i < e_; ++i) {
        v += (uint32_t)(acc[i] % p_) * scale;
        scale *= p_;
    }
    return Fe{v};
}

Fe Field::mul(Fe a, Fe b) const {
    if (!mul_.empty()) return Fe{mul_[(size_t)a.v * q_ + b.v]};
    return mul_generic(a, b);
}

Fe Field::pow(Fe a, int64_t n) const {
    if (n < 0) {
        a = inv(a);
        n = -n;
    }
    Fe r = one(), base = a;
    uint64_t m = (uint64_t)n;
    while (m) {
        if (m & 1) r = mul(r, base);
        base = mul(base, base);
        m >>= 1;
    }
    return r;
}

Fe Field::inv(Fe a) const {
    if (a.v == 0) throw std::domain_error("inverse of zero");
    return pow(a, (int64_t)(q_ - 2));
}

Fe Field::frobenius(Fe x, int64_t j) const {
    int64_t k = j % (int64_t)e_;
    if (k < 0) k += e_;
    return pow(x, (int64_t)ipow(p_, (uint32_t)k));
}

Fe Field::pth_power_root(Fe x, uint64_t r) const {
    uint32_t k = 0;
    uint64_t t = r;
    while (t > 1) {
        if (t % p_) throw std::invalid_argument("root exponent is not a power of p");
        t /= p_;
        ++k;
    }
    return frobenius(x, -(int64_t)k);
}

bool Field::power_residue_test(Fe x, uint64_t k) const {
    if (x.v == 0) throw std::invalid_argument("power residue test on zero");
    if (k < 1) throw std::invalid_argument("power residue exponent must be >= 1");
    uint64_t g = std::gcd(q_ - 1, k);
    return pow(x, (int64_t)((q_ - 1) / g)) == one();
}

std::string Field::designator() const {
    std::string s = std::to_string(p_);
    if (e_ > 1) s += "^" + std::to_string(e_);
    if (e_ > 1 && mod_ != default_modulus(p_, e_)) {
        s += "/";
        for (size_t i = 0; i < mod_.size(); ++i) {
            if (i) s += ",";
            s += std::to_string(mod_[i]);
        }
    }
    return s;
}

Field Field::parse(std::string_view d) {
    auto fail = [&] { throw std::invalid_argument("bad field designator: " + std::string(d)); };
    size_t caret = d.find('^');
    size_t slash = d.find('/');
    auto to_u32 = [&](std::string_view s) {
        uint32_t v = 0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size()) fail();
        return v;
    };
    uint32_t p, e = 1;
    if (caret == std::string_view::npos) {
        p = to_u32(d.substr(0, slash == std::string_view::npos ? d.size() : slash));
        // a bare prime power q is read as p^e
        if (p >= 4) {
            uint32_t base = 0;
            for (uint32_t f = 2; f * f <= p; ++f)
                if (p % f == 0) {
                    base = f;
                    break;
                }
            if (base) {
                uint32_t n = p, k = 0;
                while (n % base == 0) {
                    n /= base;
                    ++k;
                }
                if (n != 1) fail();
                p = base;
                e = k;
            }
        }
    } else {
        p = to_u32(d.substr(0, caret));
        size_t end = slash == std::string_view::npos ? d.size() : slash;
        if (end <= caret + 1) fail();
        e = to_u32(d.substr(caret + 1, end - caret - 1));
    }
    if (slash == std::string_view::npos) return e == 1 ? Field(p) : Field(p, e);
    std::vector<uint32_t> mod;
    std::string_view rest = d.substr(slash + 1);
    while (!rest.empty()) {
        size_t comma = rest.find(',');
        mod.push_back(to_u32(rest.substr(0, comma)));
        if (comma == std::string_view::npos) break;
        rest = rest.substr(comma + 1);
    }
    return Field(p, e, std::move(mod));
}

Fe parse_element(const Field& F, std::string_view text) {
    auto fail = [&] { throw std::invalid_argument("bad element literal: " + std::string(text)); };
    while (!text.empty() && text.front() == ' ') text.remove_prefix(1);
    while (!text.empty() && text.back() == ' ') text.remove_suffix(1);
    if (text.empty()) fail();
    if (text.front() == '[') {
        if (text.back() != ']') fail();
        std::string_view body = text.substr(1, text.size() - 2);
        std::vector<uint32_t> coords;
        while (!body.empty()) {
            size_t comma = body.find(',');
            std::string_view tok = body.substr(0, comma);
            int64_t v = 0;
            bool negv = false;
            size_t i = 0;
            if (i < tok.size() && (tok[i] == '-' || tok[i] == '+')) negv = tok[i++] == '-';
            if (i == tok.size()) fail();
            for (; i < tok.size(); ++i) {
                if (tok[i] < '0' || tok[i] > '9') fail();
                v = v * 10 + (tok[i] - '0');
            }
            v %= F.p();
            if (negv && v) v = F.p() - v;
            coords.push_back((uint32_t)v);
            if (comma == std::string_view::npos) break;
            body = body.substr(comma + 1);
        }
        return F.from_coords(coords);
    }
    int64_t v = 0;
    bool neg = false;
    size_t i = 0;
    if (text[i] == '-' || text[i] == '+') neg = text[i++] == '-';
    if (i == text.size()) fail();
    for (; i < text.size(); ++i) {
        if (text[i] < '0' || text[i] > '9') fail();
        v = v * 10 + (text[i] - '0');
        if (v > (int64_t)1 << 40) fail();
    }
    return F.from_int(neg ? -v : v);
}

std::string format_element(const Field& F, Fe x) {
    if (F.e() == 1) return std::to_string(x.v);
    std::string s = "[";
    auto c = F.coords(x);
    for (size_t i = 0; i < c.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(c[i]);
    }
    return s + "]";
}

std::vector<Fe> roots_in_field(const Field& F, std::span<const Fe> coeffs) {
    size_t deg = coeffs.size();
    while (deg > 0 && coeffs[deg - 1] == F.zero()) --deg;
    if (deg == 0) throw std::invalid_argument("roots of the zero polynomial");
    if (deg == 1) throw std::invalid_argument("roots of a constant polynomial");
    std::vector<Fe> out;
    for (uint64_t i = 0; i < F.q(); ++i) {
        Fe x = F.element(i);
        Fe acc = F.zero();
        for (size_t k = deg; k-- > 0;) acc = F.add(F.mul(acc, x), coeffs[k]);
        if (acc == F.zero()) out.push_back(x);
    }
    return out;
}

}  // namespace polycount
