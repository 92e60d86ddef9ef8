#include "domtile/numerics.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <numeric>
#include <queue>

namespace domtile {

namespace {

constexpr Coord kUnreachable = std::numeric_limits<Coord>::max();

Coord checked_mul(Coord a, Coord b)
{
    Coord out = 0;
    if (__builtin_mul_overflow(a, b, &out)) {
        throw NumericsError("large shape overflows 64-bit coordinates");
    }
    return out;
}

} // namespace

namespace {

// cpp_int reads a leading 0 as octal and 0x as hex; accept decimal only.
boost::multiprecision::cpp_int decimal_int(std::string s, const std::string& raw)
{
    bool negative = false;
    if (!s.empty() && (s[0] == '-' || s[0] == '+')) {
        negative = s[0] == '-';
        s.erase(0, 1);
    }
    if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)) != 0; })) {
        throw NumericsError("malformed rational '" + raw + "'");
    }
    std::size_t nz = s.find_first_not_of('0');
    boost::multiprecision::cpp_int v(nz == std::string::npos ? std::string("0") : s.substr(nz));
    return negative ? boost::multiprecision::cpp_int(-v) : v;
}

} // namespace

Rational parse_rational(const std::string& raw)
{
    std::string text;
    for (char c : raw) {
        if (!std::isspace(static_cast<unsigned char>(c))) {
            text.push_back(c);
        }
    }
    if (text.empty()) {
        throw NumericsError("empty rational");
    }
    try {
        if (auto slash = text.find('/'); slash != std::string::npos) {
            auto den = decimal_int(text.substr(slash + 1), raw);
            if (den == 0) {
                throw NumericsError("zero denominator in '" + raw + "'");
            }
            return Rational(decimal_int(text.substr(0, slash), raw), den);
        }
        Coord exponent = 0;
        if (auto e = text.find_first_of("eE"); e != std::string::npos) {
            exponent = std::stoll(text.substr(e + 1));
            text = text.substr(0, e);
        }
        bool negative = false;
        if (!text.empty() && (text[0] == '-' || text[0] == '+')) {
            negative = text[0] == '-';
            text = text.substr(1);
        }
        std::string digits;
        Coord frac_digits = 0;
        bool seen_point = false;
        for (char c : text) {
            if (c == '.') {
                if (seen_point) {
                    throw NumericsError("malformed rational '" + raw + "'");
                }
                seen_point = true;
            } else if (std::isdigit(static_cast<unsigned char>(c))) {
                digits.push_back(c);
                frac_digits += seen_point ? 1 : 0;
            } else {
                throw NumericsError("malformed rational '" + raw + "'");
            }
        }
        if (digits.empty()) {
            throw NumericsError("malformed rational '" + raw + "'");
        }
        boost::multiprecision::cpp_int num = decimal_int(digits, raw);
        boost::multiprecision::cpp_int den = 1;
        Coord scale = exponent - frac_digits;
        for (Coord i = 0; i < std::abs(scale); ++i) {
            (scale > 0 ? num : den) *= 10;
        }
        Rational q(num, den);
        return negative ? Rational(-q) : q;
    } catch (const NumericsError&) {
        throw;
    } catch (const std::exception&) {
        throw NumericsError("malformed rational '" + raw + "'");
    }
}

std::string to_string(const Rational& q)
{
    auto n = boost::multiprecision::numerator(q);
    auto d = boost::multiprecision::denominator(q);
    if (d == 1) {
        return n.str();
    }
    return n.str() + "/" + d.str();
}

double to_double(const Rational& q)
{
    return q.convert_to<double>();
}

FewerThanTwoShapes::FewerThanTwoShapes(std::size_t k)
    : NumericsError("a family needs at least two shapes, got " + std::to_string(k))
{}

NonPositiveEntry::NonPositiveEntry(std::size_t shape_index_, int axis_)
    : NumericsError("shape " + std::to_string(shape_index_ + 1) + " has a non-positive side on axis " +
                    std::to_string(axis_ + 1)),
      shape_index(shape_index_), axis(axis_)
{}

SharedAxisDivisor::SharedAxisDivisor(int axis_, Coord divisor_)
    : NumericsError("sides on axis " + std::to_string(axis_ + 1) + " share the divisor " + std::to_string(divisor_)),
      axis(axis_), divisor(divisor_)
{}

GcdNotOne::GcdNotOne(Coord g) : NumericsError("heights have gcd " + std::to_string(g) + ", expected 1"), gcd(g) {}

NotRepresentable::NotRepresentable(Coord r)
    : NumericsError(std::to_string(r) + " is not a nonnegative combination of the heights"), value(r)
{}

CoinSystem::CoinSystem(std::vector<Coord> heights) : heights_(std::move(heights))
{
    for (Coord h : heights_) {
        if (h < 1) {
            throw NumericsError("heights must be positive");
        }
        gcd_ = std::gcd(gcd_, h);
    }

    suffix_.resize(heights_.size());
    for (std::size_t j = 0; j < heights_.size(); ++j) {
        Residues& res = suffix_[j];
        res.modulus = *std::min_element(heights_.begin() + static_cast<std::ptrdiff_t>(j), heights_.end());
        res.least.assign(static_cast<std::size_t>(res.modulus), kUnreachable);
        res.least[0] = 0;

        using Item = std::pair<Coord, Coord>; // (value, residue)
        std::priority_queue<Item, std::vector<Item>, std::greater<>> queue;
        queue.emplace(0, 0);
        while (!queue.empty()) {
            auto [value, r] = queue.top();
            queue.pop();
            if (value != res.least[static_cast<std::size_t>(r)]) {
                continue;
            }
            for (std::size_t i = j; i < heights_.size(); ++i) {
                Coord next = value + heights_[i];
                Coord nr = next % res.modulus;
                if (next < res.least[static_cast<std::size_t>(nr)]) {
                    res.least[static_cast<std::size_t>(nr)] = next;
                    queue.emplace(next, nr);
                }
            }
        }
        for (Coord v : res.least) {
            if (v != kUnreachable) {
                res.max_least = std::max(res.max_least, v);
            }
        }
    }
}

bool CoinSystem::representable_from(std::size_t j, Coord r) const noexcept
{
    if (r < 0) {
        return false;
    }
    if (j >= heights_.size()) {
        return r == 0;
    }
    const Residues& res = suffix_[j];
    return res.least[static_cast<std::size_t>(r % res.modulus)] <= r;
}

Coord CoinSystem::threshold() const
{
    if (heights_.empty()) {
        throw NumericsError("threshold of an empty height set");
    }
    if (gcd_ != 1) {
        throw GcdNotOne(gcd_);
    }
    const Residues& res = suffix_[0];
    // The largest non-representable value is max_least - modulus.
    return std::max<Coord>(0, res.max_least - res.modulus + 1);
}

std::vector<Coord> CoinSystem::represent(Coord r) const
{
    if (!representable(r)) {
        throw NotRepresentable(r);
    }
    std::vector<Coord> a(heights_.size(), 0);
    Coord rest = r;
    for (std::size_t j = 0; j < heights_.size(); ++j) {
        const Coord h = heights_[j];
        if (j + 1 == heights_.size()) {
            a[j] = rest / h;
            rest -= a[j] * h;
            break;
        }
        // Beyond max_least + modulus * h every reachable residue class of the
        // tail has been visited, so the scan can stop there.
        const Residues& tail = suffix_[j + 1];
        Coord count = rest / h;
        bool found = false;
        for (Coord c = count; c >= 0; --c) {
            Coord left = rest - c * h;
            if (representable_from(j + 1, left)) {
                a[j] = c;
                rest = left;
                found = true;
                break;
            }
            if (left > tail.max_least + tail.modulus * h) {
                break;
            }
        }
        if (!found) {
            throw NotRepresentable(r);
        }
    }
    if (rest != 0) {
        throw NotRepresentable(r);
    }
    return a;
}

Coord axis_threshold(std::span<const Coord> heights)
{
    return CoinSystem(std::vector<Coord>(heights.begin(), heights.end())).threshold();
}

std::vector<Coord> represent(Coord r, std::span<const Coord> heights)
{
    return CoinSystem(std::vector<Coord>(heights.begin(), heights.end())).represent(r);
}

std::vector<Coord> RectFamily::heights(int axis) const
{
    std::vector<Coord> out;
    out.reserve(shapes.size());
    for (const Point& w : shapes) {
        out.push_back(w[axis]);
    }
    return out;
}

RectFamily validate_family(std::span<const Point> shapes, int dim)
{
    if (dim < 1 || dim > kMaxDim) {
        throw NumericsError("dimension must be in 1.." + std::to_string(kMaxDim));
    }
    if (shapes.size() < 2) {
        throw FewerThanTwoShapes(shapes.size());
    }
    for (std::size_t j = 0; j < shapes.size(); ++j) {
        if (shapes[j].dim() != dim) {
            throw NumericsError("shape " + std::to_string(j + 1) + " has dimension " +
                                std::to_string(shapes[j].dim()) + ", expected " + std::to_string(dim));
        }
        for (int i = 0; i < dim; ++i) {
            if (shapes[j][i] < 1) {
                throw NonPositiveEntry(j, i);
            }
        }
    }

    RectFamily f;
    f.dim = dim;
    f.shapes.assign(shapes.begin(), shapes.end());
    f.large_shape = Point(dim, 1);
    for (int i = 0; i < dim; ++i) {
        Coord g = 0;
        for (const Point& w : shapes) {
            g = std::gcd(g, w[i]);
            f.large_shape[i] = checked_mul(f.large_shape[i], w[i]);
        }
        if (g != 1) {
            throw SharedAxisDivisor(i, g);
        }
    }

    Coord sum_large = 0;
    for (int i = 0; i < dim; ++i) {
        f.axis_coins.emplace_back(f.heights(i));
        f.axis_thresholds.push_back(f.axis_coins.back().threshold());
        f.threshold = std::max(f.threshold, f.axis_thresholds.back());
        sum_large += f.large_shape[i];
    }
    f.fill_length = f.threshold + 2 * sum_large;
    return f;
}

} // namespace domtile
