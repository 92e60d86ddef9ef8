#include "domtile/brickfill.hpp"
#include "domtile/verify.hpp"

#include <doctest.h>

#include <random>

using namespace domtile;

namespace {

RectFamily family(std::vector<Point> s, int d) { return validate_family(s, d); }
RectFamily fig_family() { return family({Point{3, 2}, Point{2, 3}}, 2); }
RectFamily line_family() { return family({Point{2}, Point{3}}, 1); }

Coord rnd(std::mt19937_64& rng, Coord lo, Coord hi)
{
    return std::uniform_int_distribution<Coord>(lo, hi)(rng);
}

// Cell-by-cell comparison with a periodic wall.
bool matches_wall(const SymbolicWord& w, const BrickWall& wall, const Box& on)
{
    bool ok = true;
    on.for_each_cell([&](const Point& p) {
        if (w.contains(p)) {
            ok = ok && w.at(p) == wall.at(p);
        }
    });
    return ok;
}

FileHeader header_of(const Alphabet& a, const Box& window)
{
    FileHeader h;
    h.dim = a.dim();
    h.shapes = a.small_shapes();
    h.large = a.large_shapes();
    h.window = window;
    return h;
}

} // namespace

TEST_CASE("brick wall symbols")
{
    RectFamily f = fig_family();
    BrickWall z = brick_wall(f, Point{0, 0});
    CHECK(z.at(Point{7, 3}) == Symbol{TileId::large(1), Point{1, 3}});
    CHECK(z.at(Point{-1, -1}) == Symbol{TileId::large(1), Point{5, 5}});
    BrickWall s = brick_wall(f, Point{2, 0});
    CHECK(s.at(Point{2, 0}) == Symbol{TileId::large(1), Point{0, 0}});
    CHECK(s.tile_anchor(Point{1, 7}) == Point{-4, 6});
    CHECK(brick_wall(f, Point{8, -6}) == s);
    CHECK(s.tiles_meeting(Box(Point{0, 0}, Point{6, 6})).size() == 2);
}

TEST_CASE("complete_partial_tiles")
{
    BrickWall z = brick_wall(line_family(), Point{0});
    CHECK(complete_partial_tiles(Box(Point{0}, Point{10}), z, Completion::Outward) == Box(Point{0}, Point{12}));
    CHECK(complete_partial_tiles(Box(Point{0}, Point{12}), z, Completion::Inward) == Box(Point{0}, Point{12}));
    CHECK(complete_partial_tiles(Box(Point{1}, Point{13}), z, Completion::Inward) == Box(Point{6}, Point{6}));
    CHECK_THROWS_AS(complete_partial_tiles(Box(Point{1}, Point{4}), z, Completion::Inward), InwardEmpty);

    std::mt19937_64 rng(3);
    BrickWall w2 = brick_wall(fig_family(), Point{1, 4});
    for (int i = 0; i < 200; ++i) {
        Box b(Point{rnd(rng, -20, 20), rnd(rng, -20, 20)}, Point{rnd(rng, 1, 30), rnd(rng, 1, 30)});
        Box out = complete_partial_tiles(b, w2, Completion::Outward);
        CHECK(out.contains(b));
        CHECK(w2.aligned(out));
        for (int a = 0; a < 2; ++a) {
            CHECK(b.anchor[a] - out.anchor[a] < 6);
            CHECK(out.hi()[a] - b.hi()[a] < 6);
        }
    }
}

TEST_CASE("decompose_collar")
{
    auto pieces = decompose_collar(Box(Point{0}, Point{12}), Box(Point{-15}, Point{42}), 2);
    REQUIRE(pieces.size() == 2);
    CHECK(pieces[0].box == Box(Point{-15}, Point{15}));
    CHECK_FALSE(pieces[0].high);
    CHECK(pieces[1].box == Box(Point{12}, Point{15}));
    CHECK(pieces[1].high);

    CHECK(decompose_collar(Box(Point{0, 0}, Point{6, 6}), Box(Point{0, 0}, Point{6, 6}), 5).empty());
    CHECK_THROWS_AS(decompose_collar(Box(Point{0}, Point{6}), Box(Point{-2}, Point{10}), 2), GapTooNarrow);

    // partition property in d = 2 and 3
    std::mt19937_64 rng(11);
    for (int d : {2, 3}) {
        for (int i = 0; i < 40; ++i) {
            Point lo(d), shape(d), glo(d), ghi(d);
            for (int a = 0; a < d; ++a) {
                lo[a] = rnd(rng, -5, 5);
                shape[a] = rnd(rng, 1, 6);
                glo[a] = rnd(rng, 0, 1) ? 0 : rnd(rng, 4, 7);
                ghi[a] = rnd(rng, 0, 1) ? 0 : rnd(rng, 4, 7);
            }
            Box inner(lo, shape);
            Box outer(lo - glo, shape + glo + ghi);
            auto ps = decompose_collar(inner, outer, 3);
            CHECK(ps.size() <= static_cast<std::size_t>(2 * d));
            std::vector<int> hits(static_cast<std::size_t>(outer.volume()), 0);
            for (const auto& p : ps) {
                CHECK(outer.contains(p.box));
                p.box.for_each_cell([&](const Point& c) { ++hits[outer.index_of(c)]; });
                // free extent along the piece axis is the gap
                CHECK(p.box.shape[p.axis] == (p.high ? ghi[p.axis] : glo[p.axis]));
            }
            outer.for_each_cell([&](const Point& c) { CHECK(hits[outer.index_of(c)] == (inner.contains(c) ? 0 : 1)); });
        }
    }
}

TEST_CASE("strip_tile")
{
    Tiling t = strip_tile(Box(Point{0}, Point{15}), line_family(), 0);
    REQUIRE(t.placements.size() == 7);
    for (int i = 0; i < 6; ++i) {
        CHECK(t.placements[static_cast<std::size_t>(i)].tile == TileId::small(1));
    }
    CHECK(t.placements[6].tile == TileId::small(2));
    CHECK(t.placements[6].anchor == Point{12});

    RectFamily f = fig_family();
    Tiling u = strip_tile(Box(Point{0, 0}, Point{6, 12}), f, 0);
    CHECK(u.placements.size() == 12);
    for (const auto& p : u.placements) {
        CHECK(p.tile == TileId::small(1));
    }
    CHECK(strip_tile(Box(Point{0, 0}, Point{0, 12}), f, 0).placements.empty());
    CHECK_THROWS_AS(strip_tile(Box(Point{0, 0}, Point{6, 7}), f, 0), NonMultipleExtent);
    CHECK_THROWS_AS(strip_tile(Box(Point{0}, Point{1}), line_family(), 0), NotRepresentable);

    // exact cover for every representable length along either axis
    Alphabet a = build_alphabet(f, false);
    for (int axis = 0; axis < 2; ++axis) {
        for (Coord len = 0; len <= 30; ++len) {
            if (!f.axis_coins[static_cast<std::size_t>(axis)].representable(len)) {
                continue;
            }
            Point shape{6, 6};
            shape[axis] = len;
            Box b(Point{3, -2}, shape);
            Tiling s = strip_tile(b, f, axis);
            CHECK(s.cell_count(a) == b.volume());
            if (!b.empty()) {
                Decoded dec = decode(encode(s, a), a);
                CHECK(dec.partials.empty());
                CHECK(encode(s, a).bounds() == b);
            }
        }
    }
}

TEST_CASE("filling width")
{
    CHECK(fig_family().fill_length == 26);
    CHECK(line_family().fill_length == 14);
    TileSchedule s(1, {Point{2}, Point{3}, Point{6}}, {2, 3});
    CHECK(s.collar_width(1) == 14);
    CHECK(s.collar_width(2) == 2 + 2 * 36);
}

TEST_CASE("uniform_fill in one dimension")
{
    RectFamily f = line_family();
    Alphabet a = build_alphabet(f);
    BrickWall inner = brick_wall(f, Point{1});
    BrickWall outer = brick_wall(f, Point{4});
    Box box(Point{0}, Point{12});
    FilledWord w = uniform_fill(inner, box, outer, f);
    CHECK(w.fill_region() == Box(Point{-14}, Point{40}));
    Box view(Point{-30}, Point{72});
    SymbolicWord m = w.materialize(view, a);
    CHECK(validate_word(m, a).empty());
    CHECK(matches_wall(m, inner, box));
    for (const Box& out : {Box(Point{-30}, Point{16}), Box(Point{26}, Point{16})}) {
        CHECK(matches_wall(m, outer, out));
    }
    for (const auto& p : w.collar_tiling().placements) {
        CHECK(p.tile.is_small());
    }
}

TEST_CASE("random uniform fills pass the independent verifier")
{
    std::mt19937_64 rng(21);
    std::vector<RectFamily> families{fig_family(), line_family(), family({Point{2, 1}, Point{1, 2}}, 2),
                                     family({Point{2, 3, 1}, Point{3, 1, 2}}, 3)};
    for (const RectFamily& f : families) {
        Alphabet a = build_alphabet(f);
        const int d = f.dim;
        for (int trial = 0; trial < 12; ++trial) {
            Point ti(d), to(d), lo(d), shape(d);
            for (int k = 0; k < d; ++k) {
                ti[k] = rnd(rng, -20, 20);
                to[k] = rnd(rng, -20, 20);
                lo[k] = rnd(rng, -10, 10);
                shape[k] = rnd(rng, 1, 2 * f.large_shape[k]);
            }
            BrickWall zi = brick_wall(f, ti);
            BrickWall zo = brick_wall(f, to);
            Box box(lo, shape);
            FilledWord w = uniform_fill(zi, box, zo, f);
            Box view = expand(w.fill_region(), 3);
            SymbolicWord m = w.materialize(view, a);
            CHECK(validate_word(m, a).empty());
            VerifyReport r = verify_word(word_file(header_of(a, view), m));
            CHECK(r.ok());
            CHECK(matches_wall(m, zi, box));
            view.for_each_cell([&](const Point& p) {
                if (!w.fill_region().contains(p)) {
                    CHECK(m.at(p) == zo.at(p));
                }
            });
            CHECK(w.used_collar_width() <= f.fill_length);
            // symbol_at agrees with materialize
            for (int s = 0; s < 10; ++s) {
                Point p(d);
                for (int k = 0; k < d; ++k) {
                    p[k] = rnd(rng, view.anchor[k], view.hi()[k] - 1);
                }
                CHECK(w.symbol_at(p, a) == m.at(p));
            }
        }
    }
}

TEST_CASE("glue")
{
    RectFamily f = fig_family();
    Alphabet a = build_alphabet(f);
    BrickWall z = brick_wall(f, Point{2, 5});
    Box dom(Point{-4, 1}, Point{18, 24});
    SymbolicWord y(dom);
    dom.for_each_cell([&](const Point& p) { y.set(p, z.at(p)); });
    CHECK(infer_collar_wall(y, a) == z);

    BrickWall outer = brick_wall(f, Point{0, 3});
    FilledWord g = glue(y, outer, f, a);
    Box view = expand(g.fill_region(), 2);
    SymbolicWord m = g.materialize(view, a);
    CHECK(validate_word(m, a).empty());
    CHECK(m.restricted(dom) == y);
    CHECK(verify_word(word_file(header_of(a, view), m)).ok());

    // gluing a wall into itself changes nothing
    FilledWord same = glue(y, z, f, a);
    Box v2 = expand(same.fill_region(), 2);
    CHECK(matches_wall(same.materialize(v2, a), z, v2));

    // a domain whose collar is not a wall restriction
    Patch bad{Box(Point{0, 0}, Point{12, 12}), strip_tile(Box(Point{0, 0}, Point{12, 12}), f, 0).placements};
    CHECK_THROWS_AS(infer_collar_wall(bad, a), NoMatchingTranslate);
    CHECK_THROWS_AS(glue(bad, outer, f, a), NoMatchingTranslate);
}

TEST_CASE("genfil keeps the collar inside the first level")
{
    TileSchedule s(1, {Point{2}, Point{3}, Point{6}}, {2, 3});
    CHECK(s.large_shape(2) == Point{36});
    Alphabet a = s.alphabet();
    for (Coord t2 : {0, 7, 30}) {
        for (Coord t1 : {0, 5}) {
            BrickWall z2 = s.wall(2, Point{t2});
            BrickWall z1 = s.wall(1, Point{t1});
            Box box(Point{3}, Point{40});
            FilledWord g = genfil(z2, box, z1, s);
            CHECK(g.collar_width() == s.collar_width(2));
            for (const auto& p : g.collar_tiling().placements) {
                CHECK((p.tile == TileId::small(1) || p.tile == TileId::small(2)));
            }
            Box view = expand(g.fill_region(), 6);
            SymbolicWord m = g.materialize(view, a);
            CHECK(validate_word(m, a).empty());
            CHECK(matches_wall(m, z2, box));
        }
    }
    // level 1 is the ordinary uniform fill
    BrickWall z1 = s.wall(1, Point{2});
    BrickWall z1b = s.wall(1, Point{5});
    Box box(Point{0}, Point{9});
    FilledWord g = genfil(z1, box, z1b, s);
    FilledWord u = uniform_fill(z1, box, z1b, s.base());
    Box view = expand(u.fill_region(), 6);
    CHECK(g.materialize(view, a) == u.materialize(view, a));
}

TEST_CASE("genfil in two dimensions")
{
    TileSchedule s(2, {Point{2, 1}, Point{1, 2}, Point{3, 3}}, {2, 3});
    Alphabet a = s.alphabet();
    BrickWall z2 = s.wall(2, Point{1, 2});
    BrickWall z1 = s.wall(1, Point{0, 1});
    Box box(Point{0, 0}, Point{10, 7});
    FilledWord g = genfil(z2, box, z1, s);
    for (const auto& p : g.collar_tiling().placements) {
        CHECK(p.tile.index() <= 2);
        CHECK(p.tile.is_small());
    }
    Box view = expand(g.fill_region(), 2);
    SymbolicWord m = g.materialize(view, a);
    CHECK(validate_word(m, a).empty());
    CHECK(verify_word(word_file(header_of(a, view), m)).ok());
}
