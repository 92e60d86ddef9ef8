#include "domtile/numerics.hpp"

#include <doctest.h>

#include <numeric>
#include <random>

using namespace domtile;

namespace {

// Independent oracle: sieve of representable values up to a bound.
std::vector<bool> representable_upto(const std::vector<Coord>& h, Coord bound)
{
    std::vector<bool> ok(static_cast<std::size_t>(bound + 1), false);
    ok[0] = true;
    for (Coord r = 1; r <= bound; ++r) {
        for (Coord x : h) {
            if (x <= r && ok[static_cast<std::size_t>(r - x)]) {
                ok[static_cast<std::size_t>(r)] = true;
                break;
            }
        }
    }
    return ok;
}

Coord brute_threshold(const std::vector<Coord>& h)
{
    Coord bound = 1;
    for (Coord x : h) {
        bound *= x;
    }
    bound += *std::max_element(h.begin(), h.end());
    auto ok = representable_upto(h, bound);
    Coord last_bad = -1;
    for (Coord r = 0; r <= bound; ++r) {
        if (!ok[static_cast<std::size_t>(r)]) {
            last_bad = r;
        }
    }
    return last_bad + 1;
}

// Lexicographically greatest representation by exhaustive descent.
bool brute_lex(const std::vector<Coord>& h, std::size_t j, Coord r, std::vector<Coord>& out)
{
    if (j == h.size()) {
        return r == 0;
    }
    for (Coord a = r / h[j]; a >= 0; --a) {
        out[j] = a;
        if (brute_lex(h, j + 1, r - a * h[j], out)) {
            return true;
        }
    }
    return false;
}

} // namespace

TEST_CASE("parse_rational reads decimals, fractions and exponents exactly")
{
    CHECK(parse_rational("0.4") == Rational(2, 5));
    CHECK(parse_rational("0.45") == Rational(9, 20));
    CHECK(parse_rational("0.05") == Rational(1, 20));
    CHECK(parse_rational("2/5") == Rational(2, 5));
    CHECK(parse_rational("010/20") == Rational(1, 2));
    CHECK(parse_rational("1e-2") == Rational(1, 100));
    CHECK(parse_rational("-3") == Rational(-3));
    CHECK(parse_rational(" 1.25E1 ") == Rational(25, 2));
    CHECK_THROWS_AS(parse_rational(""), NumericsError);
    CHECK_THROWS_AS(parse_rational("1/0"), NumericsError);
    CHECK_THROWS_AS(parse_rational("0x10"), NumericsError);
    CHECK_THROWS_AS(parse_rational("1.2.3"), NumericsError);
    CHECK(to_string(Rational(2, 5)) == "2/5");
    CHECK(to_string(Rational(3)) == "3");
}

TEST_CASE("axis_threshold worked values")
{
    std::vector<Coord> a{2, 3}, b{3, 5}, c{1, 4};
    CHECK(axis_threshold(a) == 2);
    CHECK(axis_threshold(b) == 8);
    CHECK(axis_threshold(c) == 0);
    std::vector<Coord> g{4, 6};
    CHECK_THROWS_AS(axis_threshold(g), GcdNotOne);
}

TEST_CASE("axis_threshold matches a brute-force sieve on random height sets")
{
    std::mt19937_64 rng(7);
    int checked = 0;
    while (checked < 300) {
        std::size_t k = 1 + rng() % 4;
        std::vector<Coord> h;
        for (std::size_t i = 0; i < k; ++i) {
            h.push_back(1 + static_cast<Coord>(rng() % 30));
        }
        Coord g = 0;
        for (Coord x : h) {
            g = std::gcd(g, x);
        }
        if (g != 1) {
            continue;
        }
        ++checked;
        Coord R = axis_threshold(h);
        CHECK(R == brute_threshold(h));
        CoinSystem cs(h);
        if (R > 0) {
            CHECK_FALSE(cs.representable(R - 1));
        }
    }
}

TEST_CASE("represent returns the lexicographically greatest vector")
{
    std::vector<Coord> h{3, 2};
    CHECK(represent(7, h) == std::vector<Coord>{1, 2});
    CHECK(represent(0, h) == std::vector<Coord>{0, 0});
    CHECK_THROWS_AS(represent(1, h), NotRepresentable);

    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 200; ++trial) {
        std::size_t k = 2 + rng() % 3;
        std::vector<Coord> hs;
        for (std::size_t i = 0; i < k; ++i) {
            hs.push_back(1 + static_cast<Coord>(rng() % 12));
        }
        CoinSystem cs(hs);
        for (Coord r = 0; r < 60; ++r) {
            std::vector<Coord> want(k);
            bool exists = brute_lex(hs, 0, r, want);
            CHECK(cs.representable(r) == exists);
            if (exists) {
                auto got = cs.represent(r);
                CHECK(got == want);
                Coord dot = 0;
                for (std::size_t j = 0; j < k; ++j) {
                    dot += got[j] * hs[j];
                }
                CHECK(dot == r);
            } else {
                CHECK_THROWS_AS(cs.represent(r), NotRepresentable);
            }
        }
    }
}

TEST_CASE("represent handles large values without enumerating")
{
    std::vector<Coord> h{3, 5};
    auto a = represent(1'000'000'007, h);
    CHECK(a[0] * 3 + a[1] * 5 == 1'000'000'007);
    CHECK(a[1] < 3); // maximizing a_1 leaves fewer than 3 fives
}

TEST_CASE("validate_family derives W, R and the filling length")
{
    std::vector<Point> s{Point{3, 2}, Point{2, 3}};
    RectFamily f = validate_family(s, 2);
    CHECK(f.large_shape == Point{6, 6});
    CHECK(f.threshold == 2);
    CHECK(f.fill_length == 26);
    CHECK(f.axis_thresholds == std::vector<Coord>{2, 2});

    std::vector<Point> s1{Point{2}, Point{3}};
    RectFamily g = validate_family(s1, 1);
    CHECK(g.large_shape == Point{6});
    CHECK(g.threshold == 2);
    CHECK(g.fill_length == 14);
}

TEST_CASE("validate_family errors")
{
    std::vector<Point> shared{Point{2, 2}, Point{4, 2}};
    try {
        validate_family(shared, 2);
        FAIL("expected SharedAxisDivisor");
    } catch (const SharedAxisDivisor& e) {
        CHECK(e.axis == 0);
        CHECK(e.divisor == 2);
        CHECK(std::string(e.what()).find("axis 1") != std::string::npos);
    }
    std::vector<Point> one{Point{2, 3}};
    CHECK_THROWS_AS(validate_family(one, 2), FewerThanTwoShapes);
    std::vector<Point> zero{Point{2, 0}, Point{3, 1}};
    CHECK_THROWS_AS(validate_family(zero, 2), NonPositiveEntry);
    std::vector<Point> second_axis{Point{2, 2}, Point{3, 4}};
    try {
        validate_family(second_axis, 2);
        FAIL("expected SharedAxisDivisor");
    } catch (const SharedAxisDivisor& e) {
        CHECK(e.axis == 1);
        CHECK(e.divisor == 2);
    }
}

TEST_CASE("threshold tightness on validated families")
{
    std::vector<std::vector<Point>> families = {
        {Point{3, 2}, Point{2, 3}}, {Point{2, 5}, Point{3, 3}, Point{7, 2}}, {Point{4, 1}, Point{5, 2}}};
    for (const auto& s : families) {
        RectFamily f = validate_family(s, 2);
        for (int a = 0; a < 2; ++a) {
            const CoinSystem& cs = f.axis_coins[static_cast<std::size_t>(a)];
            Coord R = f.axis_thresholds[static_cast<std::size_t>(a)];
            for (Coord r = R; r <= R + f.large_shape[a]; ++r) {
                CHECK(cs.representable(r));
            }
            if (R > 0) {
                CHECK_FALSE(cs.representable(R - 1));
            }
            CHECK(R <= f.threshold);
        }
    }
}
