#pragma once

#include "domtile/geometry.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

using Rational = boost::multiprecision::cpp_rational;

/// Parses "0.4", "2/5", "3" or "1e-2" into an exact rational.
Rational parse_rational(const std::string& text);
std::string to_string(const Rational& q);
double to_double(const Rational& q);

class NumericsError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class FewerThanTwoShapes : public NumericsError {
public:
    explicit FewerThanTwoShapes(std::size_t k);
};

class NonPositiveEntry : public NumericsError {
public:
    NonPositiveEntry(std::size_t shape_index, int axis);
    std::size_t shape_index;
    int axis; // 0-based
};

class SharedAxisDivisor : public NumericsError {
public:
    SharedAxisDivisor(int axis, Coord divisor);
    int axis; // 0-based; messages print it 1-based
    Coord divisor;
};

class GcdNotOne : public NumericsError {
public:
    explicit GcdNotOne(Coord g);
    Coord gcd;
};

class NotRepresentable : public NumericsError {
public:
    explicit NotRepresentable(Coord r);
    Coord value;
};

/// Nonnegative integer combinations of a fixed list of positive heights.
///
/// For every suffix heights[j..] we keep, per residue modulo the suffix minimum,
/// the least representable value in that class (a shortest-path table over
/// residues). Membership and lexicographically greatest representations are
/// then O(1) and O(k * min height) respectively.
class CoinSystem {
public:
    CoinSystem() = default;
    explicit CoinSystem(std::vector<Coord> heights);

    const std::vector<Coord>& heights() const noexcept { return heights_; }
    Coord gcd() const noexcept { return gcd_; }

    bool representable(Coord r) const noexcept { return representable_from(0, r); }

    /// Least R such that every r >= R is representable. Requires gcd 1.
    Coord threshold() const;

    /// Lexicographically greatest (a_1, a_2, ...) with sum a_j h_j = r.
    std::vector<Coord> represent(Coord r) const;

private:
    bool representable_from(std::size_t j, Coord r) const noexcept;

    struct Residues {
        Coord modulus = 1;
        std::vector<Coord> least; // kUnreachable when the class is empty
        Coord max_least = 0;
    };

    std::vector<Coord> heights_;
    std::vector<Residues> suffix_;
    Coord gcd_ = 0;
};

Coord axis_threshold(std::span<const Coord> heights);
std::vector<Coord> represent(Coord r, std::span<const Coord> heights);

/// A validated list of tile shapes with per-axis coprime sides.
struct RectFamily {
    int dim = 0;
    std::vector<Point> shapes;
    Point large_shape;                  // W_i = prod_j w^j_i
    Coord threshold = 0;                // R, maximum over axes
    std::vector<Coord> axis_thresholds; // per-axis diagnostics
    Coord fill_length = 0;              // R + 2 * sum_i W_i
    std::vector<CoinSystem> axis_coins;

    std::size_t size() const noexcept { return shapes.size(); }
    std::vector<Coord> heights(int axis) const;
};

RectFamily validate_family(std::span<const Point> shapes, int dim);

} // namespace domtile
