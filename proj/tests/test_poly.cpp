#include <doctest.h>

#include <stdexcept>

#include <random>
#include <set>

#include "polycount/poly.hpp"

using namespace polycount;

namespace {

std::mt19937_64 rng(0x5eed);

Poly rand_poly(const Field& F, int max_deg) {
    int d = (int)(rng() % (uint64_t)(max_deg + 1));
    std::vector<Fe> c((size_t)d + 1);
    for (auto& x : c) x = F.element(rng() % F.q());
    return Poly(F, std::move(c));
}

Poly rand_monic_original(const Field& F, int d) {
    std::vector<Fe> c((size_t)d + 1, F.zero());
    c.back() = F.one();
    for (int i = 1; i < d; ++i) c[(size_t)i] = F.element(rng() % F.q());
    return Poly(F, std::move(c));
}

}  // namespace

TEST_CASE("composition on the degree-9 collision polynomials") {
    Field F(3);
    Poly g1 = parse_poly(F, "x^3+x");
    Poly h1 = parse_poly(F, "x^3-x");
    CHECK(compose(g1, h1) == parse_poly(F, "x^9-x"));
    Poly g2 = parse_poly(F, "x^3+x^2");
    Poly h2 = parse_poly(F, "x^3-x^2-x");
    CHECK(compose(g2, h2) == parse_poly(F, "x^9+x^5-x^4+x^3+x^2"));
    CHECK(compose(parse_poly(F, "x^2+x"), parse_poly(F, "x^2")) == parse_poly(F, "x^4+x^2"));
}

TEST_CASE("composition degree and associativity") {
    for (const char* desc : {"3", "4", "5"}) {
        Field F = Field::parse(desc);
        for (int t = 0; t < 40; ++t) {
            Poly f = rand_poly(F, 4), g = rand_poly(F, 3), h = rand_poly(F, 3);
            CHECK(compose(compose(f, g), h) == compose(f, compose(g, h)));
        }
    }
}

TEST_CASE("chain rule (g o h)' = (g' o h) h'") {
    for (const char* desc : {"2", "3", "9", "5"}) {
        Field F = Field::parse(desc);
        for (int t = 0; t < 60; ++t) {
            Poly g = rand_poly(F, 5), h = rand_poly(F, 4);
            CHECK(derivative(compose(g, h)) == compose(derivative(g), h) * derivative(h));
        }
    }
}

TEST_CASE("derivative in characteristic p") {
    Field F(3);
    CHECK(derivative(parse_poly(F, "x^9-x")) == parse_poly(F, "-1"));
    CHECK(derivative(parse_poly(F, "x^3")).is_zero());
    CHECK(derivative(parse_poly(F, "x^3+x^2")) == parse_poly(F, "2*x"));
}

TEST_CASE("normalize_decomposition") {
    Field F(5);
    SUBCASE("already normal stays put") {
        Poly g = parse_poly(F, "x^2+3*x");
        Poly h = parse_poly(F, "x^2+x");
        auto [gs, hs] = normalize_decomposition(g, h);
        CHECK(gs == g);
        CHECK(hs == h);
    }
    SUBCASE("general case preserves the composition") {
        Poly g = parse_poly(F, "x^2");
        Poly h = parse_poly(F, "2*x^2+1");
        auto [gs, hs] = normalize_decomposition(g, h);
        CHECK(hs.is_monic());
        CHECK(hs.is_original());
        CHECK(compose(gs, hs) == compose(g, h));
    }
    SUBCASE("idempotent and composition-preserving on random input") {
        for (int t = 0; t < 100; ++t) {
            Poly g = rand_poly(F, 4), h = rand_poly(F, 4);
            if (h.degree() < 1) continue;
            auto [gs, hs] = normalize_decomposition(g, h);
            CHECK(hs.is_monic());
            CHECK(hs.is_original());
            CHECK(compose(gs, hs) == compose(g, h));
            auto [gs2, hs2] = normalize_decomposition(gs, hs);
            CHECK(gs2 == gs);
            CHECK(hs2 == hs);
        }
    }
}

TEST_CASE("second_normalize") {
    Field F(5);
    SUBCASE("vanishing subleading coefficient is a fixed point") {
        Poly f = parse_poly(F, "x^4+x^2+x");
        auto [g, shift] = second_normalize(f);
        CHECK(g == f);
        CHECK(shift == F.zero());
    }
    SUBCASE("worked example") {
        Poly f = parse_poly(F, "x^4+2*x^3");
        auto [g, shift] = second_normalize(f);
        CHECK(shift == F.from_int(3));  // 2 * 4^{-1} = 2 * 4 = 8 = 3
        CHECK(g.coeff(3) == F.zero());
        Poly back = compose(g, parse_poly(F, "x+3"));
        CHECK(back == f);
    }
    SUBCASE("p | d is rejected") {
        Field F3(3);
        CHECK_THROWS_AS(second_normalize(rand_monic_original(F3, 9)), std::domain_error);
    }
}

TEST_CASE("taylor_in_base") {
    Field F5(5);
    SUBCASE("reconstructs constructed input") {
        Poly h = parse_poly(F5, "x^2+x");
        Poly f = h * h + h.scaled(F5.from_int(2));
        auto ts = taylor_in_base(f, h);
        REQUIRE(ts.size() == 3);
        CHECK(ts[0].is_zero());
        CHECK(ts[1] == parse_poly(F5, "2"));
        CHECK(ts[2] == parse_poly(F5, "1"));
    }
    SUBCASE("collision example yields constant coefficients") {
        Field F3(3);
        Poly f = parse_poly(F3, "x^9+x^5+x");
        Poly h = parse_poly(F3, "x^3-x^2+x");
        auto ts = taylor_in_base(f, h);
        std::vector<Fe> g;
        for (auto& t : ts) {
            REQUIRE(t.degree() <= 0);
            g.push_back(t.coeff(0));
        }
        CHECK(Poly(F3, g) == parse_poly(F3, "x^3+x^2+x"));
    }
    SUBCASE("non-constant remainder signals no left component") {
        Poly f = parse_poly(F5, "x^3+1");
        auto ts = taylor_in_base(f, parse_poly(F5, "x^2"));
        bool all_const = true;
        for (auto& t : ts) all_const = all_const && t.degree() <= 0;
        CHECK(!all_const);
    }
    SUBCASE("sum t_i h^i reconstructs f on random input") {
        for (int t = 0; t < 80; ++t) {
            Poly f = rand_poly(F5, 9);
            Poly h = rand_poly(F5, 4);
            if (h.degree() < 1) continue;
            auto ts = taylor_in_base(f, h);
            Poly acc(F5);
            for (size_t i = ts.size(); i-- > 0;) acc = acc * h + ts[i];
            CHECK(acc == f);
        }
    }
}

TEST_CASE("poly_pth_root") {
    Field F3(3);
    CHECK(poly_pth_root(parse_poly(F3, "x^9")) == parse_poly(F3, "x^3"));
    Poly g = parse_poly(F3, "x^2+x+1");
    Poly cube = g * g * g;
    CHECK(poly_pth_root(cube) == g);
    CHECK(cube == parse_poly(F3, "x^6+x^3+1"));
    Field F2(2);
    CHECK_THROWS_AS(poly_pth_root(parse_poly(F2, "x^2+x")), std::domain_error);
}

TEST_CASE("is_frobenius_composition") {
    Field F(3);
    CHECK(!is_frobenius_composition(parse_poly(F, "x^9-x")));
    CHECK(is_frobenius_composition(parse_poly(F, "x^9")));
    Field F2(2);
    Poly any = parse_poly(F2, "x^3+x");
    CHECK(is_frobenius_composition(any * any));
}

TEST_CASE("frobenius_poly") {
    Field F3(3);
    Poly h = parse_poly(F3, "x^3+2*x^2+x");
    CHECK(frobenius_poly(h, 1) == h);  // prime field fixed
    Field F4(2, 2);
    Fe alpha = F4.element(2);
    Poly g(F4, {F4.one(), alpha});  // alpha x + 1
    Poly expect(F4, {F4.one(), F4.add(alpha, F4.one())});
    CHECK(frobenius_poly(g, 1) == expect);
    // defining identity x^{p^j} o h = frobenius_poly(h, j) o x^{p^j}
    for (const char* desc : {"4", "9", "8"}) {
        Field F = Field::parse(desc);
        Poly xp = Poly::monomial(F, (int)F.p());
        for (int t = 0; t < 100; ++t) {
            Poly h = rand_poly(F, 4);
            CHECK(compose(xp, h) == compose(frobenius_poly(h, 1), xp));
        }
    }
}

TEST_CASE("canonical encoding") {
    SUBCASE("stated packing") {
        Field F(3);
        Poly f = parse_poly(F, "x^3+2*x");
        auto bytes = encode_canonical(f);  // digits (2, 0) -> integer 2
        REQUIRE(bytes.size() == encoded_width(F, 3));
        CHECK(bytes[0] == 2);
        for (size_t i = 1; i < bytes.size(); ++i) CHECK(bytes[i] == 0);
        CHECK(decode_canonical(F, 3, bytes) == f);
    }
    SUBCASE("x^d encodes to all zeros") {
        Field F(5);
        auto bytes = encode_canonical(Poly::monomial(F, 6));
        for (uint8_t b : bytes) CHECK(b == 0);
    }
    SUBCASE("random round trips") {
        for (const char* desc : {"2", "5", "9"}) {
            Field F = Field::parse(desc);
            for (int t = 0; t < 1000; ++t) {
                Poly f = rand_monic_original(F, 7);
                CHECK(decode_canonical(F, 7, encode_canonical(f)) == f);
            }
        }
    }
    SUBCASE("bijection on all monic originals for small q, d") {
        for (const char* desc : {"2", "3", "4"}) {
            Field F = Field::parse(desc);
            for (int d = 1; d <= 4; ++d) {
                std::set<std::vector<uint8_t>> seen;
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
                    Poly f(F, c);
                    auto enc = encode_canonical(f);
                    CHECK(enc.size() == encoded_width(F, d));
                    CHECK(seen.insert(enc).second);
                    CHECK(decode_canonical(F, d, enc) == f);
                }
            }
        }
    }
    SUBCASE("degree one has an empty encoding") {
        Field F(7);
        CHECK(encoded_width(F, 1) == 0);
        CHECK(encode_canonical(Poly::x(F)).empty());
        CHECK(decode_canonical(F, 1, {}) == Poly::x(F));
    }
    SUBCASE("non-monic or non-original rejected") {
        Field F(5);
        CHECK_THROWS_AS(encode_canonical(parse_poly(F, "x^2+1")), std::invalid_argument);
        CHECK_THROWS_AS(encode_canonical(parse_poly(F, "2*x^2+x")), std::invalid_argument);
    }
}

TEST_CASE("parser and printer are inverse on canonical forms") {
    for (const char* desc : {"3", "7", "9"}) {
        Field F = Field::parse(desc);
        for (int t = 0; t < 200; ++t) {
            Poly f = rand_poly(F, 6);
            CHECK(parse_poly(F, to_string(f)) == f);
        }
    }
    Field F7(7);
    CHECK(to_string(parse_poly(F7, "x^3 - 3*x")) == "x^3+4*x");
    CHECK(to_string(Poly(F7)) == "0");
    CHECK(parse_poly(F7, "0").is_zero());
    CHECK_THROWS_AS(parse_poly(F7, "x^^2"), std::invalid_argument);
    CHECK_THROWS_AS(parse_poly(F7, ""), std::invalid_argument);
    Field F9(3, 2);
    Poly g = parse_poly(F9, "[1,2]*x^2+[0,1]*x+2");
    CHECK(parse_poly(F9, to_string(g)) == g);
}

TEST_CASE("linear units invert functionally") {
    for (const char* desc : {"5", "9", "2^3"}) {
        Field F = Field::parse(desc);
        for (uint64_t a = 1; a < F.q(); ++a)
            for (uint64_t b = 0; b < F.q(); ++b) {
                LinearUnit v(F, F.element(a), F.element(b));
                CHECK(compose(v.inverse().poly(), v.poly()) == Poly::x(F));
                CHECK(compose(v.poly(), v.inverse().poly()) == Poly::x(F));
                CHECK(v.inverse().apply(v.apply(F.element(b))) == F.element(b));
            }
    }
    Field F(5);
    CHECK_THROWS_AS(LinearUnit(F, F.zero(), F.one()), std::invalid_argument);
}

TEST_CASE("zero polynomial degree sentinel") {
    Field F(3);
    CHECK(Poly(F).degree() == Poly::kZeroDegree);
    CHECK(Poly::kZeroDegree < 0);
    CHECK((Poly(F) * parse_poly(F, "x^2")).degree() == Poly::kZeroDegree);
}

TEST_CASE("mixed fields are rejected") {
    Field F3(3), F5(5);
    CHECK_THROWS_AS(parse_poly(F3, "x^2") * parse_poly(F5, "x"), std::invalid_argument);
    CHECK_THROWS_AS(compose(parse_poly(F3, "x^2"), parse_poly(F5, "x^2")),
                    std::invalid_argument);
}
