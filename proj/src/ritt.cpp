#include "polycount/ritt.hpp"

#include <numeric>
#include <stdexcept>

namespace polycount {

namespace {

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

Poly x_plus(const Field& F, Fe c) { return Poly(F, {c, F.one()}); }

void set_why(std::string* why, const std::string& s) {
    if (why) *why = s;
}

// monic l-th root of a monic polynomial of degree s*l, solved top-down;
// nullopt when no exact root exists. Requires p not dividing l.
std::optional<Poly> monic_lth_root(const Poly& v, int l) {
    const Field& F = v.field();
    if (v.degree() % l != 0) return std::nullopt;
    int s = v.degree() / l;
    std::vector<Fe> wc((size_t)s + 1, F.zero());
    wc.back() = F.one();
    Fe l_inv = F.inv(F.from_int(l));
    for (int i = 1; i <= s; ++i) {
        Poly wknown(F, wc);
        Poly power = wknown.pow((uint32_t)l);
        Fe resid = F.sub(v.coeff(s * l - i), power.coeff(s * l - i));
        wc[(size_t)(s - i)] = F.mul(resid, l_inv);
    }
    Poly w(F, wc);
    if (!(w.pow((uint32_t)l) == v)) return std::nullopt;
    return w;
}

}  // namespace

Poly dickson(const Field& F, int n, Fe z) {
    require(n >= 0, "dickson index must be >= 0");
    Poly two = Poly::constant(F, F.from_int(2));
    if (n == 0) return two;
    Poly prev = two;
    Poly cur = Poly::x(F);
    for (int i = 2; i <= n; ++i) {
        Poly next = Poly::x(F) * cur - prev.scaled(z);
        prev = std::move(cur);
        cur = std::move(next);
    }
    return cur;
}

CollisionTuple first_case_build(const Field& F, int l, int m, const FirstCaseParams& params) {
    require(m > l && l >= 2, "need m > l >= 2");
    require(std::gcd(l, m) == 1, "need gcd(l, m) = 1");
    int k = m % l;
    int s = m / l;
    require(k == params.k && s == params.s, "k, s must match the division m = s l + k");
    require(params.w.is_monic() && params.w.degree() == s, "w must be monic of degree s");
    if ((int)F.p() != 0 && l % (int)F.p() == 0)
        throw std::domain_error("first case requires p not dividing l");
    const Poly& w = params.w;
    Poly lhs = w.scaled(F.from_int(k)) + (Poly::x(F) * derivative(w)).scaled(F.from_int(l));
    if (lhs.is_zero())
        throw std::domain_error("degenerate witness: k w + l x w' = 0");
    Fe a = params.shift;
    Fe a_l = F.pow(a, l);
    Fe w_at_al = w.eval(a_l);
    Fe A = F.mul(F.pow(a, (int64_t)k * l), F.pow(w_at_al, l));  // a^{kl} w^l(a^l)
    Poly w_of_xl = compose(w, Poly::monomial(F, l));

    CollisionTuple t{Poly(F), Poly(F), Poly(F), Poly(F), Poly(F), l, m};
    Poly mid_f = Poly::monomial(F, k * l) * w_of_xl.pow((uint32_t)l);
    t.f = compose(mid_f, x_plus(F, a)) - Poly::constant(F, A);
    Poly mid_g = Poly::monomial(F, k) * w.pow((uint32_t)l);
    t.g = compose(mid_g, x_plus(F, a_l)) - Poly::constant(F, A);
    t.h = compose(Poly::monomial(F, l), x_plus(F, a)) - Poly::constant(F, a_l);
    Fe b = F.mul(F.pow(a, k), w_at_al);  // a^k w(a^l)
    t.g_star = compose(Poly::monomial(F, l), x_plus(F, b)) - Poly::constant(F, A);
    Poly mid_hs = Poly::monomial(F, k) * w_of_xl;
    t.h_star = compose(mid_hs, x_plus(F, a)) - Poly::constant(F, b);

    if (!(compose(t.g, t.h) == t.f) || !(compose(t.g_star, t.h_star) == t.f))
        throw std::domain_error("first case build failed verification");
    return t;
}

std::optional<FirstCaseParams> first_case_recover(const Poly& f, int l, std::string* why) {
    const Field& F = f.field();
    int d = f.degree();
    require(d >= 4 && l >= 2, "degree too small");
    require(d % l == 0, "l must divide deg f");
    int m = d / l;
    require(m > l, "need deg f / l > l");
    require(std::gcd(l, m) == 1, "need gcd(l, m) = 1");
    require(d % (int)F.p() != 0, "recovery requires p not dividing deg f");
    require(f.is_monic() && f.is_original(), "f must be monic and original");

    auto dec_lh = tame_decompose(f, m);  // (g, h) with deg h = l
    auto dec_ml = tame_decompose(f, l);  // (g*, h*) with deg h* = m
    if (!dec_lh || !dec_ml) {
        set_why(why, "not decomposable at both degree splits");
        return std::nullopt;
    }
    const Poly& g = dec_lh->g;
    const Poly& h = dec_lh->h;
    Fe shift = F.mul(h.coeff(l - 1), F.inv(F.from_int(l)));
    Fe shift_l = F.pow(shift, l);
    Poly shifted = compose(g, Poly(F, {F.neg(shift_l), F.one()}));
    Poly W = shifted - Poly::constant(F, shifted.eval(F.zero()));
    int k = m % l;
    int s = m / l;
    // W must be x^k times a perfect l-th power
    for (int i = 0; i < k; ++i)
        if (!(W.coeff(i) == F.zero())) {
            set_why(why, "shifted left component is not divisible by x^k");
            return std::nullopt;
        }
    std::vector<Fe> vc(W.coeffs().begin() + k, W.coeffs().end());
    Poly V(F, std::move(vc));
    if (V.degree() != s * l || !V.is_monic()) {
        set_why(why, "cofactor has the wrong degree");
        return std::nullopt;
    }
    auto w = monic_lth_root(V, l);
    if (!w) {
        set_why(why, "cofactor is not a perfect l-th power");
        return std::nullopt;
    }
    FirstCaseParams params{*w, shift, k, s};
    CollisionTuple rebuilt = first_case_build(F, l, m, params);
    if (!(rebuilt.f == f)) {
        set_why(why, "rebuild mismatch");
        return std::nullopt;
    }
    return params;
}

CollisionTuple second_case_build(const Field& F, int l, int m, const SecondCaseParams& params) {
    require(m > l && l >= 2, "need m > l >= 2");
    require(std::gcd(l, m) == 1, "need gcd(l, m) = 1");
    int n = l * m;
    if (n % (int)F.p() == 0)
        throw std::domain_error("second case requires p not dividing l m");
    require(!(params.z == F.zero()), "z must be nonzero");
    Fe z = params.z, a = params.shift;
    Fe Tl_a = dickson(F, l, z).eval(a);
    Fe Tm_a = dickson(F, m, z).eval(a);
    Fe Tn_a = dickson(F, n, z).eval(a);

    CollisionTuple t{Poly(F), Poly(F), Poly(F), Poly(F), Poly(F), l, m};
    t.f = compose(dickson(F, n, z), x_plus(F, a)) - Poly::constant(F, Tn_a);
    t.g = compose(dickson(F, m, F.pow(z, l)), x_plus(F, Tl_a)) - Poly::constant(F, Tn_a);
    t.h = compose(dickson(F, l, z), x_plus(F, a)) - Poly::constant(F, Tl_a);
    t.g_star = compose(dickson(F, l, F.pow(z, m)), x_plus(F, Tm_a)) - Poly::constant(F, Tn_a);
    t.h_star = compose(dickson(F, m, z), x_plus(F, a)) - Poly::constant(F, Tm_a);

    if (!(compose(t.g, t.h) == t.f) || !(compose(t.g_star, t.h_star) == t.f))
        throw std::domain_error("second case build failed verification");
    return t;
}

std::optional<SecondCaseParams> second_case_recover(const Poly& f, std::string* why) {
    const Field& F = f.field();
    int n = f.degree();
    require(n >= 2, "degree too small");
    require(n % (int)F.p() != 0, "recovery requires p not dividing deg f");
    require(f.is_monic() && f.is_original(), "f must be monic and original");
    Fe n_inv = F.inv(F.from_int(n));
    Fe a = F.mul(f.coeff(n - 1), n_inv);
    // f_{n-2} = n(n-1)/2 a^2 - n z
    int64_t binom = (int64_t)n * (n - 1) / 2;
    Fe z = F.mul(F.sub(F.mul(F.from_int(binom), F.mul(a, a)), f.coeff(n - 2)), n_inv);
    if (z == F.zero()) {
        set_why(why, "computed z = 0, not a Dickson form");
        return std::nullopt;
    }
    Fe Tn_a = dickson(F, n, z).eval(a);
    Poly rebuilt = compose(dickson(F, n, z), x_plus(F, a)) - Poly::constant(F, Tn_a);
    if (!(rebuilt == f)) {
        set_why(why, "rebuild mismatch");
        return std::nullopt;
    }
    return SecondCaseParams{z, a};
}

std::optional<Poly> degenerate_witness_test(const Poly& w, int k, int l) {
    const Field& F = w.field();
    require(w.is_monic(), "w must be monic");
    require(k >= 1 && k < l, "need 1 <= k < l");
    require(std::gcd(l, l * (w.degree()) + k) == 1, "need gcd(l, m) = 1");
    Poly lhs = w.scaled(F.from_int(k)) + (Poly::x(F) * derivative(w)).scaled(F.from_int(l));
    if (!lhs.is_zero()) return std::nullopt;
    if (l % (int)F.p() == 0) return std::nullopt;
    int s = w.degree();
    int r = s % (int)F.p();
    for (int i = 0; i < r; ++i)
        if (!(w.coeff(i) == F.zero()))
            throw std::logic_error("degenerate witness does not factor as x^r u^p");
    std::vector<Fe> vc(w.coeffs().begin() + r, w.coeffs().end());
    Poly v(F, std::move(vc));
    Poly u = poly_pth_root(v);
    return u;
}

FrobeniusCollision frobenius_collision(const Poly& h, int j) {
    const Field& F = h.field();
    require(j >= 1, "need j >= 1");
    require(h.is_monic() && h.is_original() && h.degree() >= 2,
            "h must be monic original of degree >= 2");
    int64_t pj = 1;
    for (int i = 0; i < j; ++i) pj *= F.p();
    Poly xp = Poly::monomial(F, (int)pj);
    Poly f = compose(xp, h);
    NormalDecomposition left(xp, h, f);
    NormalDecomposition right(frobenius_poly(h, j), xp, f);
    bool degenerate = left == right;
    return FrobeniusCollision{f, left, right, degenerate};
}

std::string to_string(RittCase c) {
    switch (c) {
        case RittCase::FirstOnly: return "FirstOnly";
        case RittCase::SecondOnly: return "SecondOnly";
        case RittCase::Both: return "Both";
        case RittCase::Neither: return "Neither";
    }
    return "?";
}

RittCase mutual_exclusion_check(int l, const CollisionTuple& tuple) {
    bool first = first_case_recover(tuple.f, l).has_value();
    bool second = second_case_recover(tuple.f).has_value();
    if (first && second) {
        if (l != 2)
            throw std::domain_error("first and second case recovered together with l >= 3");
        return RittCase::Both;
    }
    if (first) return RittCase::FirstOnly;
    if (second) return RittCase::SecondOnly;
    return RittCase::Neither;
}

}  // namespace polycount
