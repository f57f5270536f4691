#include "polycount/decompose.hpp"

#include <algorithm>
#include <numeric>

namespace polycount {

namespace {

uint64_t ipow64(uint64_t b, uint32_t e) {
    uint64_t r = 1;
    while (e--) r *= b;
    return r;
}

void require(bool cond, const char* what) {
    if (!cond) throw std::invalid_argument(what);
}

}  // namespace

NormalDecomposition::NormalDecomposition(Poly g_, Poly h_, const Poly& source)
    : g(std::move(g_)), h(std::move(h_)) {
    if (!h.is_monic() || !h.is_original())
        throw std::invalid_argument("right component must be monic and original");
    if (g.degree() < 2 || h.degree() < 2)
        throw std::invalid_argument("both components must have degree >= 2");
    if (!(compose(g, h) == source))
        throw std::invalid_argument("components do not compose to the source polynomial");
}

void sort_decompositions(std::vector<NormalDecomposition>& decs) {
    std::sort(decs.begin(), decs.end(),
              [](const NormalDecomposition& a, const NormalDecomposition& b) {
                  if (!(a.h == b.h)) return encode_canonical(a.h) < encode_canonical(b.h);
                  return a.g.coeffs() < b.g.coeffs();
              });
}

long WildParams::i0_floor() const {
    long q = i0_num / i0_den;
    if (i0_num % i0_den != 0 && i0_num < 0) --q;
    return q;
}

WildParams wild_params(const Field& F, int l, int m, int kappa) {
    WildParams wp;
    wp.l = l;
    wp.m = m;
    wp.kappa = kappa;
    uint64_t r = 1;
    uint32_t d_exp = 0;
    int rest = l;
    while (rest % (int)F.p() == 0) {
        rest /= (int)F.p();
        r *= F.p();
        ++d_exp;
    }
    wp.r = r;
    wp.d_exp = d_exp;
    wp.a = (uint64_t)rest;
    int d = l * m;
    wp.i0_num = (long)kappa * m - d + (long)m * ((long)r - 1);
    wp.i0_den = (long)r - 1;
    wp.c = (uint32_t)std::gcd<uint64_t>(d_exp, F.e());
    wp.z = ipow64(F.p(), wp.c);
    return wp;
}

bool condition_pc(const Field& F, const WildParams& wp, Fe g_kappa) {
    if (!wp.i0_integral()) return true;
    long i0 = wp.i0_num / wp.i0_den;
    if (i0 < 1 || i0 >= wp.m) return true;
    if (g_kappa == F.zero()) return false;
    Fe base = F.neg(F.mul(F.mul(F.from_int(wp.kappa), g_kappa), F.inv(F.from_int((int64_t)wp.a))));
    uint64_t exp = (F.q() - 1) / (wp.z - 1);
    return !(F.pow(base, (int64_t)exp) == F.one());
}

std::optional<NormalDecomposition> tame_decompose(const Poly& f, int left_degree) {
    const Field& F = f.field();
    int d = f.degree();
    int m = left_degree;
    require(f.is_monic() && f.is_original(), "f must be monic and original");
    require(m >= 2 && m < d, "left degree must satisfy 2 <= m < deg f");
    require(d % m == 0, "left degree must divide deg f");
    require(m % (int)F.p() != 0, "tame decomposition requires p not dividing the left degree");
    int mb = d / m;  // deg h
    // The top coefficients of f depend only on h^m: solve h_{mb-1}, ..., h_1
    // top-down; each step is linear with unit m times a known quantity.
    std::vector<Fe> hc((size_t)mb + 1, F.zero());
    hc.back() = F.one();
    Fe m_inv = F.inv(F.from_int(m));
    for (int i = 1; i <= mb - 1; ++i) {
        Poly hknown(F, hc);
        Poly power = hknown.pow((uint32_t)m);
        Fe resid = F.sub(f.coeff(d - i), power.coeff(d - i));
        hc[(size_t)(mb - i)] = F.mul(resid, m_inv);
    }
    Poly h(F, hc);
    auto ts = taylor_in_base(f, h);
    std::vector<Fe> gc(ts.size(), F.zero());
    for (size_t i = 0; i < ts.size(); ++i) {
        if (ts[i].degree() > 0) return std::nullopt;
        gc[i] = ts[i].coeff(0);
    }
    Poly g(F, gc);
    if (g.degree() != m) return std::nullopt;
    if (!(compose(g, h) == f)) return std::nullopt;
    return NormalDecomposition(g, h, f);
}

namespace {

struct WildState {
    const Field& F;
    const Poly& f;
    int d, l, m;
    WildParams wp;
    std::vector<std::string>* trace;

    void log(const std::string& s) {
        if (trace) trace->push_back(s);
    }

    // h with the not-yet-determined coefficients set to zero
    std::vector<Fe> hc;
    Fe g_kappa;
    bool g_kappa_known = false;

    WildState(const Field& F_, const Poly& f_, int l_, std::vector<std::string>* tr)
        : F(F_), f(f_), d(f_.degree()), l(l_), m(f_.degree() / l_), trace(tr) {
        hc.assign((size_t)m + 1, F.zero());
        hc.back() = F.one();
    }

    // f_j minus the known part of coeff(h^l + g_kappa h^kappa, j)
    Fe residual(int j) const {
        Poly h(F, hc);
        Poly p = h.pow((uint32_t)l);
        if (g_kappa_known && !(g_kappa == F.zero()))
            p = p + h.pow((uint32_t)wp.kappa).scaled(g_kappa);
        return F.sub(f.coeff(j), p.coeff(j));
    }

    // linear comparison at x^{(kappa-1)m+i}: kappa g_kappa h_i = residual
    bool solve_linear(int i) {
        Fe denom = F.mul(F.from_int(wp.kappa), g_kappa);
        if (denom == F.zero()) return false;
        hc[(size_t)i] = F.mul(residual((wp.kappa - 1) * m + i), F.inv(denom));
        return true;
    }

    // r-th power comparison at x^{d - r(m-i)}: a h_i^r = residual
    void solve_power(int i) {
        Fe y = F.mul(residual(d - (int)wp.r * (m - i)), F.inv(F.from_int((int64_t)wp.a)));
        hc[(size_t)i] = F.pth_power_root(y, wp.r);
    }

    // additive-polynomial comparison at x^{(kappa-1)m+i}:
    // a s^r + kappa g_kappa s = residual, solved by exhaustive scan;
    // false when the solution is not unique.
    bool solve_additive(int i) {
        Fe rhs = residual((wp.kappa - 1) * m + i);
        Fe a_el = F.from_int((int64_t)wp.a);
        Fe kg = F.mul(F.from_int(wp.kappa), g_kappa);
        std::vector<Fe> sols;
        for (uint64_t v = 0; v < F.q(); ++v) {
            Fe s = F.element(v);
            Fe lhs = F.add(F.mul(a_el, F.pow(s, (int64_t)wp.r)), F.mul(kg, s));
            if (lhs == rhs) sols.push_back(s);
        }
        if (sols.size() != 1) return false;
        hc[(size_t)i] = sols[0];
        return true;
    }
};

std::vector<NormalDecomposition> taylor_and_verify(const Poly& f, const Poly& h, int l) {
    const Field& F = f.field();
    std::vector<NormalDecomposition> out;
    auto ts = taylor_in_base(f, h);
    std::vector<Fe> gc(ts.size(), F.zero());
    for (const Poly& t : ts)
        if (t.degree() > 0) return out;
    for (size_t i = 0; i < ts.size(); ++i) gc[i] = ts[i].coeff(0);
    Poly g(F, gc);
    if (g.degree() != l) return out;
    if (!(compose(g, h) == f)) return out;
    out.emplace_back(g, h, f);
    return out;
}

}  // namespace

WildOutcome wild_decompose(const Poly& f, int left_degree, std::vector<std::string>* trace,
                           int* sigma_out) {
    const Field& F = f.field();
    int d = f.degree();
    int l = left_degree;
    require(f.is_monic() && f.is_original(), "f must be monic and original");
    require(l >= 2 && d > l && d % l == 0, "left degree must be a proper divisor of deg f");
    require(l % (int)F.p() == 0, "wild decomposition requires p dividing the left degree");
    int m = d / l;
    if (sigma_out) *sigma_out = 1;

    WildState st(F, f, l, trace);
    st.wp = wild_params(F, l, m, 0);
    uint64_t r = st.wp.r;

    // step 1: largest j with f_j != 0 and p not dividing j
    int j = -1;
    for (int i = d; i >= 1; --i) {
        if (i % (int)F.p() == 0) continue;
        if (!(f.coeff(i) == F.zero())) {
            j = i;
            break;
        }
    }
    if (j < 0) {
        st.log("step 1: f' = 0, recursing on f^(1/p) with l/p");
        Poly fstar = poly_pth_root(f);
        int lstar = l / (int)F.p();
        std::vector<NormalDecomposition> inner;
        if (lstar == 1) {
            // the only degree-1 normal left component is x itself
            std::vector<NormalDecomposition> out;
            Poly xp = Poly::monomial(F, (int)F.p());
            out.emplace_back(xp, fstar, f);
            st.log("step 1: peeled x^p, returning (x^p, f^(1/p))");
            return out;
        }
        if (lstar % (int)F.p() != 0) {
            auto td = tame_decompose(fstar, lstar);
            if (!td) return std::vector<NormalDecomposition>{};
            inner.push_back(*td);
        } else {
            auto rec = wild_decompose(fstar, lstar, trace, nullptr);
            if (!rec) return std::nullopt;
            inner = std::move(*rec);
        }
        std::vector<NormalDecomposition> out;
        for (const auto& dec : inner) {
            Poly g = compose(Poly::monomial(F, (int)F.p()), dec.g);
            out.emplace_back(g, dec.h, f);
        }
        sort_decompositions(out);
        return out;
    }
    st.log("step 1: j = " + std::to_string(j));

    // step 2
    int kappa;
    if (m % (int)F.p() != 0) {
        if (j % m != 0) {
            st.log("step 2: p does not divide m and m does not divide j -> failure");
            return std::nullopt;
        }
        kappa = j / m;
    } else {
        if ((j + 1) % m != 0) {
            st.log("step 2: p | m and m does not divide j+1 -> failure");
            return std::nullopt;
        }
        kappa = (j + 1) / m;
    }
    if (kappa % (int)F.p() == 0) {
        st.log("step 2: p | kappa -> failure");
        return std::nullopt;
    }
    st.wp = wild_params(F, l, m, kappa);
    st.log("step 2: kappa = " + std::to_string(kappa) + ", i0 = " + std::to_string(st.wp.i0_num) +
           "/" + std::to_string(st.wp.i0_den));

    long km = (long)kappa * m;
    std::vector<std::vector<Fe>> h_candidates;

    if (km >= d - (long)r + 2) {
        st.log("step 3: kappa m >= d - r + 2");
        st.g_kappa = f.coeff((int)km);
        st.g_kappa_known = true;
        if (st.g_kappa == F.zero()) {
            st.log("step 3: f_{kappa m} = 0, coefficient comparison impossible -> failure");
            return std::nullopt;
        }
        for (int i = m - 1; i >= 1; --i)
            if (!st.solve_linear(i)) return std::nullopt;
        h_candidates.push_back(st.hc);
    } else if (km == d - (long)r + 1) {
        st.log("step 4: kappa m = d - r + 1");
        st.g_kappa = f.coeff((int)km);
        st.g_kappa_known = true;
        if (st.g_kappa == F.zero()) {
            st.log("step 4: f_{kappa m} = 0 -> failure");
            return std::nullopt;
        }
        if (!st.solve_additive(m - 1)) {
            st.log("step 4b: additive solve has no unique solution -> failure");
            return std::nullopt;
        }
        for (int i = m - 2; i >= 1; --i)
            if (!st.solve_linear(i)) return std::nullopt;
        h_candidates.push_back(st.hc);
    } else if (km == d - (long)r) {
        st.log("step 5: kappa m = d - r");
        // nonzero roots s of a s^{r+1} - f_{kappa m} s - f_{kappa m - 1}
        Fe a_el = F.from_int((int64_t)st.wp.a);
        std::vector<Fe> S;
        for (uint64_t v = 1; v < F.q(); ++v) {
            Fe s = F.element(v);
            Fe val = F.sub(F.mul(a_el, F.pow(s, (int64_t)r + 1)),
                           F.add(F.mul(f.coeff((int)km), s), f.coeff((int)km - 1)));
            if (val == F.zero()) S.push_back(s);
        }
        if (sigma_out) *sigma_out = (int)S.size();
        {
            std::string desc = "step 5a: S = {";
            for (size_t t = 0; t < S.size(); ++t)
                desc += (t ? "," : "") + format_element(F, S[t]);
            st.log(desc + "}");
        }
        if (S.empty()) return std::vector<NormalDecomposition>{};
        for (Fe s : S) {
            WildState cand = st;
            cand.hc[(size_t)(m - 1)] = s;
            cand.g_kappa = F.sub(f.coeff((int)km), F.mul(a_el, F.pow(s, (int64_t)r)));
            cand.g_kappa_known = true;
            bool ok = true;
            for (int i = m - 2; i >= 1 && ok; --i) ok = cand.solve_linear(i);
            if (ok) h_candidates.push_back(cand.hc);
        }
    } else {
        st.log("step 6: kappa m < d - r");
        st.solve_power(m - 1);  // g_kappa h^kappa cannot reach degree d - r here
        if ((uint64_t)m % r == 0) {
            // r | m: kappa g_kappa h_{m-1} = f_{kappa m - 1}
            Fe hm1 = st.hc[(size_t)(m - 1)];
            if (hm1 == F.zero()) {
                st.log("step 6b: h_{m-1} = 0, cannot determine g_kappa -> failure");
                return std::nullopt;
            }
            st.g_kappa = F.mul(f.coeff((int)km - 1), F.inv(F.mul(F.from_int(kappa), hm1)));
        } else {
            st.g_kappa = f.coeff((int)km);
        }
        st.g_kappa_known = true;
        if (st.g_kappa == F.zero()) {
            st.log("step 6b: g_kappa = 0 -> failure");
            return std::nullopt;
        }
        long i0f = st.wp.i0_floor();
        bool i0_int = st.wp.i0_integral();
        for (int i = m - 2; i >= 1 && (long)i > i0f; --i) st.solve_power(i);
        if (i0_int && i0f >= 1) {
            if (!st.solve_additive((int)i0f)) {
                st.log("step 6d: additive solve has no unique solution -> failure");
                return std::nullopt;
            }
        }
        for (int i = (int)std::min<long>(i0_int ? i0f - 1 : i0f, m - 2); i >= 1; --i)
            if (!st.solve_linear(i)) return std::nullopt;
        h_candidates.push_back(st.hc);
    }

    // steps 7 and 8: Taylor coefficients, then keep exactly the verified pairs
    std::vector<NormalDecomposition> out;
    for (const auto& hc : h_candidates) {
        Poly h(F, hc);
        auto decs = taylor_and_verify(f, h, l);
        for (auto& dec : decs) out.push_back(std::move(dec));
    }
    sort_decompositions(out);
    st.log("step 8: " + std::to_string(out.size()) + " verified decomposition(s)");
    return out;
}

std::vector<NormalDecomposition> brute_decompose(const Poly& f, int left_degree,
                                                 uint64_t budget) {
    const Field& F = f.field();
    int d = f.degree();
    require(f.is_monic() && f.is_original(), "f must be monic and original");
    require(left_degree >= 2 && left_degree < d && d % left_degree == 0,
            "left degree must be a proper divisor of deg f");
    int mb = d / left_degree;  // deg h
    uint32_t free_coeffs = (uint32_t)(mb - 1);
    double cost = 1;
    for (uint32_t i = 0; i < free_coeffs; ++i) cost *= (double)F.q();
    if (cost > (double)budget)
        throw budget_error("brute_decompose needs q^" + std::to_string(free_coeffs) + " = " +
                           std::to_string(cost) + " candidates > budget " +
                           std::to_string(budget));
    uint64_t count = ipow64(F.q(), free_coeffs);
    std::vector<NormalDecomposition> out;
    std::vector<Fe> hc((size_t)mb + 1, F.zero());
    hc.back() = F.one();
    for (uint64_t v = 0; v < count; ++v) {
        uint64_t t = v;
        for (int i = 1; i < mb; ++i) {
            hc[(size_t)i] = F.element(t % F.q());
            t /= F.q();
        }
        Poly h(F, hc);
        auto decs = taylor_and_verify(f, h, left_degree);
        for (auto& dec : decs) out.push_back(std::move(dec));
    }
    sort_decompositions(out);
    return out;
}

std::map<int, SplitResult> decompose_all(const Poly& f, uint64_t budget) {
    const Field& F = f.field();
    require(f.is_monic() && f.is_original(), "f must be monic and original");
    int d = f.degree();
    std::map<int, SplitResult> out;
    for (int e = 2; e < d; ++e) {
        if (d % e != 0) continue;
        SplitResult res;
        if (e % (int)F.p() != 0) {
            auto dec = tame_decompose(f, e);
            if (dec) res.decompositions.push_back(*dec);
        } else {
            auto wild = wild_decompose(f, e);
            if (wild) {
                res.decompositions = std::move(*wild);
            } else {
                try {
                    res.decompositions = brute_decompose(f, e, budget);
                } catch (const budget_error&) {
                    res.unknown = true;
                }
            }
        }
        out.emplace(e, std::move(res));
    }
    return out;
}

}  // namespace polycount
