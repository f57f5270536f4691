#include "polycount/poly.hpp"

#include <algorithm>
#include <stdexcept>

namespace polycount {

Poly Poly::monomial(const Field& F, int k, Fe c) {
    if (k < 0) throw std::invalid_argument("negative monomial degree");
    if (c == F.zero()) return Poly(F);
    std::vector<Fe> v((size_t)k + 1, F.zero());
    v.back() = c;
    return Poly(F, std::move(v));
}

Poly Poly::monomial(const Field& F, int k) { return monomial(F, k, F.one()); }

Poly Poly::from_ints(const Field& F, std::initializer_list<int64_t> coeffs) {
    std::vector<Fe> v;
    v.reserve(coeffs.size());
    for (int64_t c : coeffs) v.push_back(F.from_int(c));
    return Poly(F, std::move(v));
}

Fe Poly::leading() const {
    if (c_.empty()) throw std::domain_error("leading coefficient of zero polynomial");
    return c_.back();
}

void Poly::check_same_field(const Poly& o) const {
    if (!(*f_ == *o.f_)) throw std::invalid_argument("mixed fields");
}

Fe Poly::eval(Fe x) const {
    Fe acc = f_->zero();
    for (size_t i = c_.size(); i-- > 0;) acc = f_->add(f_->mul(acc, x), c_[i]);
    return acc;
}

Poly Poly::operator+(const Poly& o) const {
    check_same_field(o);
    std::vector<Fe> v(std::max(c_.size(), o.c_.size()), f_->zero());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = c_[i];
    for (size_t i = 0; i < o.c_.size(); ++i) v[i] = f_->add(v[i], o.c_[i]);
    return Poly(*f_, std::move(v));
}

Poly Poly::operator-() const {
    std::vector<Fe> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = f_->neg(c_[i]);
    return Poly(*f_, std::move(v));
}

Poly Poly::operator-(const Poly& o) const { return *this + (-o); }

Poly Poly::operator*(const Poly& o) const {
    check_same_field(o);
    if (c_.empty() || o.c_.empty()) return Poly(*f_);
    std::vector<Fe> v(c_.size() + o.c_.size() - 1, f_->zero());
    for (size_t i = 0; i < c_.size(); ++i) {
        if (c_[i] == f_->zero()) continue;
        for (size_t j = 0; j < o.c_.size(); ++j)
            v[i + j] = f_->add(v[i + j], f_->mul(c_[i], o.c_[j]));
    }
    return Poly(*f_, std::move(v));
}

Poly Poly::scaled(Fe c) const {
    std::vector<Fe> v(c_.size());
    for (size_t i = 0; i < c_.size(); ++i) v[i] = f_->mul(c_[i], c);
    return Poly(*f_, std::move(v));
}

Poly Poly::shifted_up(int k) const {
    if (c_.empty()) return *this;
    std::vector<Fe> v((size_t)k, f_->zero());
    v.insert(v.end(), c_.begin(), c_.end());
    return Poly(*f_, std::move(v));
}

bool Poly::operator==(const Poly& o) const { return *f_ == *o.f_ && c_ == o.c_; }

std::pair<Poly, Poly> Poly::divmod(const Poly& divisor) const {
    check_same_field(divisor);
    if (divisor.is_zero()) throw std::domain_error("division by zero polynomial");
    if (degree() < divisor.degree()) return {Poly(*f_), *this};
    Fe lead_inv = f_->inv(divisor.leading());
    std::vector<Fe> rem = c_;
    size_t dn = divisor.c_.size();
    std::vector<Fe> quot(c_.size() - dn + 1, f_->zero());
    for (size_t off = quot.size(); off-- > 0;) {
        Fe c = f_->mul(rem[off + dn - 1], lead_inv);
        quot[off] = c;
        if (c == f_->zero()) continue;
        for (size_t j = 0; j < dn; ++j)
            rem[off + j] = f_->sub(rem[off + j], f_->mul(c, divisor.c_[j]));
    }
    return {Poly(*f_, std::move(quot)), Poly(*f_, std::move(rem))};
}

Poly Poly::pow(uint32_t n) const {
    Poly r = Poly::constant(*f_, f_->one());
    Poly base = *this;
    while (n) {
        if (n & 1) r = r * base;
        base = base * base;
        n >>= 1;
    }
    return r;
}

Poly compose(const Poly& g, const Poly& h) {
    if (!(g.field() == h.field())) throw std::invalid_argument("mixed fields");
    const Field& F = g.field();
    Poly acc(F);
    for (int i = g.degree(); i >= 0; --i) {
        acc = acc * h;
        acc = acc + Poly::constant(F, g.coeff(i));
    }
    return acc;
}

Poly derivative(const Poly& f) {
    const Field& F = f.field();
    if (f.degree() < 1) return Poly(F);
    std::vector<Fe> v((size_t)f.degree());
    for (int i = 1; i <= f.degree(); ++i)
        v[(size_t)i - 1] = F.mul(F.from_int(i), f.coeff(i));
    return Poly(F, std::move(v));
}

std::pair<Poly, Poly> normalize_decomposition(const Poly& g, const Poly& h) {
    const Field& F = g.field();
    if (h.degree() < 1) throw std::invalid_argument("right component must be nonconstant");
    Fe a = F.inv(h.leading());
    Fe b = F.neg(F.mul(a, h.eval(F.zero())));
    // g* = g o v^{-1}, h* = v o h for v = a x + b
    LinearUnit v(F, a, b);
    Poly g_star = compose(g, v.inverse().poly());
    Poly h_star = h.scaled(a) + Poly::constant(F, b);
    return {g_star, h_star};
}

std::pair<Poly, Fe> second_normalize(const Poly& f) {
    const Field& F = f.field();
    int d = f.degree();
    if (d < 1) throw std::invalid_argument("second normalization of a constant");
    Fe dinv = F.from_int(d);
    if (dinv == F.zero()) throw std::domain_error("characteristic divides the degree");
    Fe shift = F.mul(f.coeff(d - 1), F.inv(dinv));
    Poly inner = Poly(F, {F.neg(shift), F.one()});
    return {compose(f, inner), shift};
}

std::vector<Poly> taylor_in_base(const Poly& f, const Poly& h) {
    if (h.degree() < 1) throw std::invalid_argument("taylor base must be nonconstant");
    std::vector<Poly> ts;
    Poly cur = f;
    while (!cur.is_zero()) {
        auto [q, r] = cur.divmod(h);
        ts.push_back(r);
        cur = q;
    }
    return ts;
}

Poly poly_pth_root(const Poly& f) {
    const Field& F = f.field();
    if (!derivative(f).is_zero() || f.is_zero())
        throw std::domain_error("p-th root requires a nonzero polynomial with zero derivative");
    uint32_t p = F.p();
    std::vector<Fe> v((size_t)(f.degree() / (int)p) + 1, F.zero());
    for (int i = 0; i * (int)p <= f.degree(); ++i)
        v[(size_t)i] = F.pth_power_root(f.coeff(i * (int)p), p);
    return Poly(F, std::move(v));
}

bool is_frobenius_composition(const Poly& f) { return derivative(f).is_zero(); }

Poly frobenius_poly(const Poly& h, int64_t j) {
    const Field& F = h.field();
    std::vector<Fe> v(h.coeffs());
    for (Fe& c : v) c = F.frobenius(c, j);
    return Poly(F, std::move(v));
}

namespace {

// little-endian byte string arithmetic for the canonical packing
void bytes_mul_add(std::vector<uint8_t>& b, uint64_t mul, uint64_t add) {
    uint64_t carry = add;
    for (uint8_t& byte : b) {
        uint64_t v = (uint64_t)byte * mul + carry;
        byte = (uint8_t)(v & 0xff);
        carry = v >> 8;
    }
    while (carry) {
        b.push_back((uint8_t)(carry & 0xff));
        carry >>= 8;
    }
}

uint64_t bytes_divmod(std::vector<uint8_t>& b, uint64_t div) {
    uint64_t rem = 0;
    for (size_t i = b.size(); i-- > 0;) {
        uint64_t v = (rem << 8) | b[i];
        b[i] = (uint8_t)(v / div);
        rem = v % div;
    }
    while (!b.empty() && b.back() == 0) b.pop_back();
    return rem;
}

}  // namespace

size_t encoded_width(const Field& F, int d) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    std::vector<uint8_t> max_val;
    for (int i = 1; i < d; ++i) bytes_mul_add(max_val, F.q(), F.q() - 1);
    return max_val.size();
}

std::vector<uint8_t> encode_canonical(const Poly& f) {
    const Field& F = f.field();
    if (!f.is_monic() || !f.is_original() || f.degree() < 1)
        throw std::invalid_argument("canonical encoding requires a monic original polynomial");
    int d = f.degree();
    std::vector<uint8_t> out;
    for (int i = d - 1; i >= 1; --i) bytes_mul_add(out, F.q(), F.index(f.coeff(i)));
    out.resize(encoded_width(F, d), 0);
    return out;
}

Poly decode_canonical(const Field& F, int d, const std::vector<uint8_t>& bytes) {
    if (d < 1) throw std::invalid_argument("degree must be >= 1");
    if (bytes.size() != encoded_width(F, d))
        throw std::invalid_argument("encoded byte string has the wrong width");
    std::vector<uint8_t> work = bytes;
    std::vector<Fe> v((size_t)d + 1, F.zero());
    v.back() = F.one();
    for (int i = 1; i < d; ++i) v[(size_t)i] = F.element(bytes_divmod(work, F.q()));
    if (!work.empty()) throw std::invalid_argument("encoded value out of range");
    return Poly(F, std::move(v));
}

std::string to_string(const Poly& f) {
    const Field& F = f.field();
    if (f.is_zero()) return "0";
    std::string s;
    for (int i = f.degree(); i >= 0; --i) {
        Fe c = f.coeff(i);
        if (c == F.zero()) continue;
        if (!s.empty()) s += "+";
        if (i == 0) {
            s += format_element(F, c);
            continue;
        }
        if (!(c == F.one())) s += format_element(F, c) + "*";
        s += (i == 1) ? "x" : "x^" + std::to_string(i);
    }
    return s;
}

Poly parse_poly(const Field& F, std::string_view text) {
    auto fail = [&](const char* why) {
        throw std::invalid_argument(std::string("bad polynomial '") + std::string(text) +
                                    "': " + why);
    };
    Poly acc(F);
    size_t i = 0;
    auto skip_ws = [&] {
        while (i < text.size() && (text[i] == ' ' || text[i] == '\t')) ++i;
    };
    skip_ws();
    if (i >= text.size()) fail("empty");
    bool first = true;
    while (i < text.size()) {
        skip_ws();
        bool neg = false;
        if (text[i] == '+' || text[i] == '-') {
            neg = text[i] == '-';
            ++i;
            skip_ws();
        } else if (!first) {
            fail("expected '+' or '-' between terms");
        }
        if (i >= text.size()) fail("dangling sign");
        first = false;
        // coefficient
        Fe c = F.one();
        bool saw_coeff = false;
        if (text[i] == '[') {
            size_t close = text.find(']', i);
            if (close == std::string_view::npos) fail("unclosed '['");
            c = parse_element(F, text.substr(i, close - i + 1));
            i = close + 1;
            saw_coeff = true;
        } else if (text[i] >= '0' && text[i] <= '9') {
            size_t start = i;
            while (i < text.size() && text[i] >= '0' && text[i] <= '9') ++i;
            c = parse_element(F, text.substr(start, i - start));
            saw_coeff = true;
        }
        skip_ws();
        if (saw_coeff && i < text.size() && text[i] == '*') {
            ++i;
            skip_ws();
        }
        // variable part
        int k = 0;
        if (i < text.size() && (text[i] == 'x' || text[i] == 'X')) {
            ++i;
            k = 1;
            skip_ws();
            if (i < text.size() && text[i] == '^') {
                ++i;
                skip_ws();
                if (i >= text.size() || text[i] < '0' || text[i] > '9') fail("bad exponent");
                k = 0;
                while (i < text.size() && text[i] >= '0' && text[i] <= '9') {
                    k = k * 10 + (text[i] - '0');
                    if (k > 1'000'000) fail("exponent too large");
                    ++i;
                }
            }
        } else if (!saw_coeff) {
            fail("expected a term");
        }
        if (neg) c = F.neg(c);
        acc = acc + Poly::monomial(F, k, c);
        skip_ws();
    }
    return acc;
}

}  // namespace polycount
