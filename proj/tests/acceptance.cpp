// End-to-end acceptance suite. Each test case covers one release criterion
// and prints a single PASS/FAIL line; the assertions carry the details.

#include <doctest.h>

#include <cstdio>
#include <map>
#include <numeric>
#include <random>
#include <set>

#include "polycount/census.hpp"
#include "polycount/decompose.hpp"
#include "polycount/ritt.hpp"

using namespace polycount;

namespace {

struct Criterion {
    int number;
    std::string title;
    bool ok = true;
    ~Criterion() {
        std::printf("[criterion %d] %s: %s\n", number, ok ? "PASS" : "FAIL", title.c_str());
        std::fflush(stdout);
    }
    void note(bool good) { ok = ok && good; }
};

std::vector<Poly> all_monic_original(const Field& F, int d) {
    std::vector<Poly> out;
    uint64_t count = 1;
    for (int i = 1; i < d; ++i) count *= F.q();
    for (uint64_t v = 0; v < count; ++v) {
        std::vector<Fe> c((size_t)d + 1, F.zero());
        c.back() = F.one();
        uint64_t t = v;
        for (int i = 1; i < d; ++i) {
            c[(size_t)i] = F.element(t % F.q());
            t /= F.q();
        }
        out.emplace_back(F, std::move(c));
    }
    return out;
}

bool contains(const std::vector<NormalDecomposition>& decs, const NormalDecomposition& d) {
    for (const auto& x : decs)
        if (x == d) return true;
    return false;
}

// criterion-8 reports, reused by criterion 9
std::map<std::pair<uint64_t, int>, CensusReport>& grid_reports() {
    static std::map<std::pair<uint64_t, int>, CensusReport> cache;
    return cache;
}

const std::vector<uint64_t> kGridFields = {2, 3, 4, 5, 7, 8, 9};
const std::vector<int> kGridDegrees = {4, 6, 8, 9, 10, 12, 14, 15, 16};

}  // namespace

TEST_CASE("criterion 1: census ground truth") {
    Criterion cr{1, "census reproduces the reference table exactly"};
    struct Row {
        uint64_t q;
        int d;
        long expect;
    };
    const Row rows[] = {{2, 4, 6},        {2, 8, 36},      {2, 12, 236},  {2, 16, 762},
                        {2, 20, 3264},    {2, 24, 14264},  {3, 9, 414},   {4, 4, 132},
                        {8, 4, 2408},     {9, 9, 450792},  {4, 12, 100848},
                        {8, 12, 30382016}, {2, 36, 821600}};
    for (const Row& row : rows) {
        Field F = Field::parse(std::to_string(row.q));
        auto rep = enumerate_decomposables(F, row.d, {});
        CAPTURE(row.q);
        CAPTURE(row.d);
        CHECK(rep.total == row.expect);
        CHECK(rep.seconds < 60.0);
        cr.note(rep.total == row.expect);
    }
}

TEST_CASE("criterion 2: exact tame formula cases") {
    Criterion cr{2, "#D_{l^2} = alpha and #D_{l^3} = alpha(1 - q^{-(l-1)^2}/2) for p != l"};
    for (auto [q, d, expect] : {std::tuple<uint64_t, int, long>{3, 4, 54},
                                {5, 4, 500},
                                {2, 9, 32},
                                {3, 8, 810},
                                {5, 8, 22500}}) {
        Field F = Field::parse(std::to_string(q));
        auto rep = enumerate_decomposables(F, d, {});
        CAPTURE(q);
        CAPTURE(d);
        CHECK(rep.total == expect);
        cr.note(rep.total == expect);
        int l = smallest_prime_divisor(d);
        if (d == l * l) {
            CHECK(rep.total == rep.alpha_value);
            cr.note(rep.total == rep.alpha_value);
        } else {  // d = l^3
            mpz_class qpow;
            mpz_ui_pow_ui(qpow.get_mpz_t(), (unsigned long)q,
                          (unsigned long)((l - 1) * (l - 1)));
            mpq_class want =
                mpq_class(rep.alpha_value) * (1 - mpq_class(1, 2) / mpq_class(qpow));
            CHECK(mpq_class(rep.total) == want);
            cr.note(mpq_class(rep.total) == want);
        }
    }
}

TEST_CASE("criterion 3: degree-9 collision inventory over GF(3)") {
    Criterion cr{3, "exactly 4 two-way non-Frobenius collisions plus 8 Frobenius collisions"};
    Field F(3);
    // group all degree-(3,3) compositions by their composition
    std::map<std::vector<uint8_t>, std::vector<NormalDecomposition>> fibers;
    for (const Poly& g : all_monic_original(F, 3))
        for (const Poly& h : all_monic_original(F, 3)) {
            Poly f = compose(g, h);
            fibers[encode_canonical(f)].emplace_back(g, h, f);
        }
    auto dec = [&](const char* gs, const char* hs, const char* fs) {
        return NormalDecomposition(parse_poly(F, gs), parse_poly(F, hs), parse_poly(F, fs));
    };
    std::map<std::vector<uint8_t>, std::vector<NormalDecomposition>> expected_wild;
    auto add_pair = [&](const char* fs, const char* g1, const char* h1, const char* g2,
                        const char* h2) {
        auto key = encode_canonical(parse_poly(F, fs));
        expected_wild[key] = {dec(g1, h1, fs), dec(g2, h2, fs)};
    };
    add_pair("x^9-x", "x^3+x", "x^3-x", "x^3-x", "x^3+x");
    add_pair("x^9+x^5-x^4+x^3+x^2", "x^3+x^2", "x^3-x^2-x", "x^3-x^2+x", "x^3+x^2");
    add_pair("x^9+x^5+x^4+x^3-x^2", "x^3+x^2+x", "x^3-x^2", "x^3-x^2", "x^3+x^2-x");
    add_pair("x^9+x^5+x", "x^3+x^2+x", "x^3-x^2+x", "x^3-x^2+x", "x^3+x^2+x");

    int wild_collisions = 0, frobenius_collisions = 0;
    for (auto& [key, decs] : fibers) {
        Poly f = decode_canonical(F, 9, key);
        if (decs.size() == 1) continue;
        CHECK(decs.size() == 2);  // every collision here is two-way
        cr.note(decs.size() == 2);
        if (is_frobenius_composition(f)) {
            ++frobenius_collisions;
            // the two decompositions are (x^3, h) and (h, x^3)
            Poly x3 = parse_poly(F, "x^3");
            bool shape = (decs[0].g == x3 && decs[1].h == x3 && decs[0].h == decs[1].g) ||
                         (decs[1].g == x3 && decs[0].h == x3 && decs[1].h == decs[0].g);
            CHECK(shape);
            cr.note(shape);
        } else {
            ++wild_collisions;
            auto it = expected_wild.find(key);
            REQUIRE(it != expected_wild.end());
            bool match = (decs.size() == 2) && contains(decs, it->second[0]) &&
                         contains(decs, it->second[1]);
            CHECK(match);
            cr.note(match);
        }
    }
    CHECK(wild_collisions == 4);
    CHECK(frobenius_collisions == 8);
    cr.note(wild_collisions == 4 && frobenius_collisions == 8);
    // x^9 itself has the single decomposition (x^3, x^3)
    CHECK(fibers.at(encode_canonical(Poly::monomial(F, 9))).size() == 1);
}

TEST_CASE("criterion 4: wild algorithm contract, exhaustive") {
    Criterion cr{4, "wild output contains all pairs satisfying the uniqueness condition"};
    struct Cfg {
        const char* field;
        int d, l;
    };
    for (Cfg cfg : {Cfg{"2", 4, 2}, Cfg{"2", 8, 2}, Cfg{"3", 9, 3}, Cfg{"4", 4, 2}}) {
        Field F = Field::parse(cfg.field);
        CAPTURE(cfg.field);
        CAPTURE(cfg.d);
        int l = cfg.l, m = cfg.d / cfg.l;
        uint64_t r = 1;
        for (int t = l; t % (int)F.p() == 0; t /= (int)F.p()) r *= F.p();
        // all g in the contract shape: g = x^l + sum_{i<=kappa} g_i x^i,
        // g_kappa != 0, p not dividing kappa
        for (int kappa = 1; kappa < l; ++kappa) {
            if (kappa % (int)F.p() == 0) continue;
            WildParams wp = wild_params(F, l, m, kappa);
            uint64_t lower_count = 1;
            for (int i = 1; i < kappa; ++i) lower_count *= F.q();
            for (uint64_t gk = 1; gk < F.q(); ++gk) {
                if (!condition_pc(F, wp, F.element(gk))) continue;
                for (uint64_t rest = 0; rest < lower_count; ++rest) {
                    std::vector<Fe> gc((size_t)l + 1, F.zero());
                    gc.back() = F.one();
                    gc[(size_t)kappa] = F.element(gk);
                    uint64_t t = rest;
                    for (int i = 1; i < kappa; ++i) {
                        gc[(size_t)i] = F.element(t % F.q());
                        t /= F.q();
                    }
                    Poly g(F, gc);
                    for (const Poly& h : all_monic_original(F, m)) {
                        if (h.coeff(m - 1) == F.zero()) continue;
                        Poly f = compose(g, h);
                        auto out = wild_decompose(f, l);
                        bool has_value = out.has_value();
                        CHECK(has_value);
                        cr.note(has_value);
                        if (!has_value) continue;
                        bool found = contains(*out, NormalDecomposition(g, h, f));
                        CHECK(found);
                        cr.note(found);
                        CHECK(out->size() <= r + 1);
                        auto brute = brute_decompose(f, l, 1u << 22);
                        for (const auto& dd : *out) {
                            bool sound = contains(brute, dd);
                            CHECK(sound);
                            cr.note(sound);
                        }
                    }
                }
            }
        }
    }
}

TEST_CASE("criterion 5: Bluher statistics for all prime powers up to 343") {
    Criterion cr{5, "formula matches brute tallies for q <= 343, d_exp <= 3"};
    for (uint32_t p : {2u, 3u, 5u, 7u, 11u, 13u, 17u, 19u, 23u, 29u, 31u, 37u, 41u, 43u,
                       47u, 53u, 59u, 61u, 67u, 71u, 73u, 79u, 83u, 89u, 97u, 101u, 103u,
                       107u, 109u, 113u, 127u, 131u, 137u, 139u, 149u, 151u, 157u, 163u,
                       167u, 173u, 179u, 181u, 191u, 193u, 197u, 199u, 211u, 223u, 227u,
                       229u, 233u, 239u, 241u, 251u, 257u, 263u, 269u, 271u, 277u, 281u,
                       283u, 293u, 307u, 311u, 313u, 317u, 331u, 337u}) {
        uint64_t q = p;
        for (uint32_t e = 1; q <= 343; ++e, q *= p) {
            Field F(p, e);
            for (uint32_t dexp = 1; dexp <= 3; ++dexp) {
                auto st = bluher_counts(p, e, dexp);
                // closure identities
                bool closure = st.c0 + st.c1 + st.c2 + st.c_zplus1 == st.q - 1 &&
                               2 + st.c1 + 2 * st.c2 + (st.z + 1) * st.c_zplus1 == st.q;
                CHECK(closure);
                cr.note(closure);
                uint64_t b0 = 0, b1 = 0, b2 = 0, bz = 0;
                bool in_I = true;
                for (uint64_t u = 1; u < st.q; ++u) {
                    int nn = count_T(F, dexp, F.element(u));
                    if (nn == 0) ++b0;
                    else if (nn == 1) ++b1;
                    else if (nn == 2) ++b2;
                    else if (nn == (int)st.z + 1) ++bz;
                    else in_I = false;
                }
                bool match = in_I && b0 == st.c0 && b1 == st.c1 && b2 == st.c2 &&
                             bz == st.c_zplus1;
                CAPTURE(p);
                CAPTURE(e);
                CAPTURE(dexp);
                CHECK(match);
                cr.note(match);
                if (p == 5 && e == 3 && dexp == 1) {
                    bool worked = st.c0 == 52 && st.c1 == 25 && st.c2 == 46 && st.c_zplus1 == 1;
                    CHECK(worked);
                    cr.note(worked);
                }
                // #S(0, w) formula against brute force
                for (uint64_t w = 1; w < st.q; ++w) {
                    if (s_zero_count(F, dexp, F.element(w)) !=
                        count_S(F, dexp, F.zero(), F.element(w))) {
                        CHECK(false);
                        cr.note(false);
                    }
                }
            }
        }
    }
}

TEST_CASE("criterion 6: Ritt build/recover round trips") {
    Criterion cr{6, "500 first-case and 500 second-case round trips; exclusivity by l"};
    std::mt19937_64 rng(0xacce97);
    int first_done = 0, second_done = 0;
    std::vector<Field> fields;
    fields.emplace_back(5);
    fields.emplace_back(7);
    fields.emplace_back(3, 2);
    auto rand_el = [&](const Field& F) { return F.element(rng() % F.q()); };
    auto rand_monic = [&](const Field& F, int s) {
        std::vector<Fe> c((size_t)s + 1, F.zero());
        c.back() = F.one();
        for (int i = 0; i < s; ++i) c[(size_t)i] = rand_el(F);
        return Poly(F, std::move(c));
    };
    const std::pair<int, int> lm_pool[] = {{2, 3}, {2, 5}, {3, 4}, {3, 5}, {2, 7},
                                           {4, 5}, {2, 9}, {3, 8}, {4, 7}, {5, 6}};
    while (first_done < 500 || second_done < 500) {
        const Field& F = fields[rng() % fields.size()];
        auto [l, m] = lm_pool[rng() % std::size(lm_pool)];
        if (std::gcd(l, m) != 1) continue;
        if (first_done < 500 && m % (int)F.p() != 0 && l % (int)F.p() != 0) {
            int k = m % l, s = m / l;
            Poly w = rand_monic(F, s);
            Poly crit =
                w.scaled(F.from_int(k)) + (Poly::x(F) * derivative(w)).scaled(F.from_int(l));
            if (!crit.is_zero()) {
                FirstCaseParams params{w, rand_el(F), k, s};
                auto t = first_case_build(F, l, m, params);
                auto rec = first_case_recover(t.f, l);
                bool ok = rec && rec->w == params.w && rec->shift == params.shift;
                CHECK(ok);
                cr.note(ok);
                if ((l * m) % (int)F.p() != 0) {
                    RittCase cls = mutual_exclusion_check(l, t);
                    bool cls_ok =
                        cls == RittCase::FirstOnly || (cls == RittCase::Both && l == 2);
                    CHECK(cls_ok);
                    cr.note(cls_ok);
                }
                ++first_done;
            }
        }
        if (second_done < 500 && (l * m) % (int)F.p() != 0) {
            Fe z = rand_el(F);
            if (z == F.zero()) z = F.one();
            SecondCaseParams sp{z, rand_el(F)};
            auto t = second_case_build(F, l, m, sp);
            auto rec = second_case_recover(t.f);
            bool ok = rec && rec->z == sp.z && rec->shift == sp.shift;
            CHECK(ok);
            cr.note(ok);
            RittCase cls = mutual_exclusion_check(l, t);
            bool cls_ok = (l == 2 && cls == RittCase::Both) ||
                          (l >= 3 && cls == RittCase::SecondOnly);
            CHECK(cls_ok);
            cr.note(cls_ok);
            ++second_done;
        }
    }
}

TEST_CASE("criterion 7: Dickson identity suite") {
    Criterion cr{7, "composition, scaling, char-p collapse, fixed value for lm <= 24, q <= 9"};
    std::mt19937_64 rng(0xd1c2);
    for (const char* desc : {"2", "3", "4", "5", "7", "8", "9"}) {
        Field F = Field::parse(desc);
        CAPTURE(desc);
        std::vector<std::pair<int, int>> pairs;
        for (int l = 2; l * l <= 24; ++l)
            for (int m = l; l * m <= 24; ++m) pairs.emplace_back(l, m);
        for (uint64_t zi = 0; zi < F.q(); ++zi) {
            Fe z = F.element(zi);
            for (auto [l, m] : pairs) {
                Poly lhs = compose(dickson(F, m, F.pow(z, l)), dickson(F, l, z));
                Poly rhs = compose(dickson(F, l, F.pow(z, m)), dickson(F, m, z));
                Poly both = dickson(F, l * m, z);
                bool ok = lhs == both && rhs == both;
                CHECK(ok);
                cr.note(ok);
            }
            if (!(z == F.zero())) {
                for (int n = 1; n <= 24; ++n) {
                    bool fixed = dickson(F, n, F.mul(z, z)).eval(F.mul(F.from_int(2), z)) ==
                                 F.mul(F.from_int(2), F.pow(z, n));
                    CHECK(fixed);
                    cr.note(fixed);
                }
            }
            // char-p collapse T_{p^j} = x^{p^j} and vanishing derivative
            for (int pj = (int)F.p(); pj <= 24; pj *= (int)F.p()) {
                bool collapse = dickson(F, pj, z) == Poly::monomial(F, pj);
                CHECK(collapse);
                cr.note(collapse);
            }
            for (int n = (int)F.p(); n <= 24; n += (int)F.p()) {
                bool flat = derivative(dickson(F, n, z)).is_zero();
                CHECK(flat);
                cr.note(flat);
            }
        }
        // scaling on random t, z
        for (int t = 0; t < 50; ++t) {
            Fe tt = F.element(rng() % F.q()), z = F.element(rng() % F.q());
            if (tt == F.zero()) continue;
            for (int n : {2, 3, 5, 6, 11, 24}) {
                Poly lhs = dickson(F, n, z).scaled(F.pow(tt, n));
                Poly rhs =
                    compose(dickson(F, n, F.mul(F.mul(tt, tt), z)), Poly(F, {F.zero(), tt}));
                bool ok = lhs == rhs;
                CHECK(ok);
                cr.note(ok);
            }
        }
    }
}

TEST_CASE("criterion 8: bound verification over the full grid") {
    Criterion cr{8, "every applicable inequality holds for composite d <= 16, q in {2..9}"};
    int defective_row_failures = 0, other_failures = 0;
    for (uint64_t q : kGridFields) {
        Field F = Field::parse(std::to_string(q));
        for (int d : kGridDegrees) {
            CAPTURE(q);
            CAPTURE(d);
            CensusOptions opts;
            opts.verify = true;
            auto rep = enumerate_decomposables(F, d, opts);
            CHECK(rep.all_checks_pass);
            cr.note(rep.all_checks_pass);
            if (!rep.all_checks_pass)
                for (const auto& c : rep.checks)
                    if (!c.pass) {
                        MESSAGE("failed bound ", c.name, " at q=", q, " d=", d);
                        if (c.name == "leaf_lower" && rep.leaf == "II.B.i.b" && rep.p == 2)
                            ++defective_row_failures;
                        else
                            ++other_failures;
                    }
            grid_reports().emplace(std::make_pair(q, d), std::move(rep));
        }
    }
    if (defective_row_failures > 0) {
        MESSAGE("analysis: the failing check is the tabulated lower bound at leaf II.B.i.b, "
                "1 - (1/q - q^{-p})/2, for p = 2. The enumerated truth at those cells is "
                "#D/alpha = 1 - 1/(2q) exactly (verified against an independent per-polynomial "
                "oracle), which is strictly smaller: the tabulated entry counts the full tame "
                "split where its non-Frobenius part is required and then adds the Frobenius "
                "class once more. The reassembled bound 1 - (1/q + q^{1-p} - q^{-p})/2 "
                "('leaf_lower_corrected') passes at every cell.");
    }
    CHECK(other_failures == 0);
    cr.note(other_failures == 0);
    // the worked chain at (3, 9)
    auto& r39 = grid_reports().at({3, 9});
    bool chain_seen = false;
    for (const auto& c : r39.checks)
        if (c.name == "degree9_chain") {
            chain_seen = true;
            CHECK(c.pass);
            cr.note(c.pass);
        }
    CHECK(chain_seen);
    cr.note(chain_seen);
}

TEST_CASE("criterion 9: intersection formulas and bounds") {
    Criterion cr{9, "exact intersections match enumeration; wild regimes within bounds"};
    // named tame cells, cross-checked through the standalone enumerator
    for (auto [q, d] : {std::pair<uint64_t, int>{5, 6}, {5, 8}, {7, 6}, {3, 8}}) {
        Field F = Field::parse(std::to_string(q));
        int l = smallest_prime_divisor(d);
        mpz_class t1 = enumerate_intersection(F, d, l, {});
        auto iv = intersection_count_exact(q, F.p(), F.e(), l, d / l);
        REQUIRE(iv.kind == IntersectionValue::Kind::Exact);
        mpz_class scaled = t1 * (long)q * (long)(q - 1);
        CAPTURE(q);
        CAPTURE(d);
        CHECK(scaled == iv.exact);
        cr.note(scaled == iv.exact);
    }
    // every grid cell: the census-side intersection checks all passed
    REQUIRE(!grid_reports().empty());
    int exact_cells = 0, bound_cells = 0;
    for (const auto& [key, rep] : grid_reports()) {
        for (const auto& c : rep.checks) {
            if (c.name == "intersection_exact") {
                ++exact_cells;
                CHECK(c.pass);
                cr.note(c.pass);
            }
            if (c.name == "intersection_bounds") {
                ++bound_cells;
                CHECK(c.pass);
                cr.note(c.pass);
            }
        }
    }
    CHECK(exact_cells > 10);
    CHECK(bound_cells > 5);
    // the refined bound t1 <= 2 q^4 at (2,12) and (4,12)
    for (uint64_t q : {2ull, 4ull}) {
        const auto& rep = grid_reports().at({q, 12});
        mpz_class t1 = rep.intersection_nonfrob / (mpz_class((unsigned long)q) * (long)(q - 1));
        mpz_class limit;
        mpz_ui_pow_ui(limit.get_mpz_t(), (unsigned long)q, 4);
        CHECK(t1 <= 2 * limit);
        cr.note(t1 <= 2 * limit);
    }
}
