#include "domtile/commands.hpp"
#include "domtile/render.hpp"
#include "domtile/verify.hpp"

#include <doctest.h>

#include <filesystem>
#include <random>
#include <sstream>

using namespace domtile;
namespace fs = std::filesystem;

namespace {

FileHeader fig_header(const Box& window, std::uint64_t seed = 7)
{
    FileHeader h;
    h.dim = 2;
    h.shapes = {Point{3, 2}, Point{2, 3}};
    h.large = {Point{6, 6}};
    h.window = window;
    h.seed = seed;
    return h;
}

// A wall restriction with a few bricks subdivided into small tiles.
TilingFile sample_tiling()
{
    TilingFile f{fig_header(Box(Point{0, 0}, Point{24, 18})), Tiling{2, {}}};
    for (Coord x = 0; x < 24; x += 6) {
        for (Coord y = 0; y < 18; y += 6) {
            if ((x + y) % 12 == 0) {
                f.tiling.placements.push_back(Placement{TileId::large(1), Point{x, y}});
            } else {
                for (Coord a = 0; a < 6; a += 3) {
                    for (Coord b = 0; b < 6; b += 2) {
                        f.tiling.placements.push_back(Placement{TileId::small(1), Point{x + a, y + b}});
                    }
                }
            }
        }
    }
    f.tiling.canonicalize();
    return f;
}

struct TempDir {
    fs::path path;
    TempDir()
    {
        static int counter = 0;
        path = fs::temp_directory_path() / ("domtile_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("points")
{
    CHECK(format_point(Point{3, -2}) == "3,-2");
    CHECK(parse_point("3,-2") == Point{3, -2});
    CHECK(parse_point("5", 1) == Point{5});
    CHECK_THROWS(parse_point("3,2", 1));
    CHECK_THROWS(parse_point("3,,2"));
    CHECK_THROWS(parse_point("a"));
}

TEST_CASE("tiling text round trip")
{
    TilingFile f = sample_tiling();
    std::string text = serialize_tiling(f);
    CHECK(text.rfind("domtile-tiling 1\n", 0) == 0);
    TilingFile back = parse_tiling(text);
    CHECK(back == f);
    CHECK(serialize_tiling(back) == text);
    CHECK(detect_kind(text) == FileKind::Tiling);
    CHECK(load_tiling(text) == f);
}

TEST_CASE("tiling JSON round trip")
{
    TilingFile f = sample_tiling();
    nlohmann::json j = to_json(f);
    CHECK(j["format"] == "domtile-tiling");
    CHECK(tiling_from_json(j) == f);
    std::string s = j.dump();
    CHECK(looks_like_json(s));
    CHECK(detect_kind(s) == FileKind::Tiling);
    CHECK(load_tiling(s) == f);
}

TEST_CASE("word round trips")
{
    TilingFile f = sample_tiling();
    Alphabet a = f.header.alphabet();
    SymbolicWord w = encode(f.tiling, a);
    WordFile wf = word_file(f.header, w);
    CHECK(wf.entries.size() == 24 * 18);
    CHECK(to_word(wf) == w);
    std::string text = serialize_word(wf);
    CHECK(detect_kind(text) == FileKind::Word);
    CHECK(parse_word(text) == wf);
    CHECK(word_from_json(to_json(wf)) == wf);
    CHECK(load_word(to_json(wf).dump()) == wf);
}

TEST_CASE("parse errors carry a line number")
{
    std::string text = serialize_tiling(sample_tiling());
    try {
        parse_tiling("domtile-tiling 1\ndim 2\nshapes 3,2 2,3\nlarge 6,6\nwindow 0,0 6,6\nseed 1\ntile 0,0\n");
        FAIL("accepted a bad line");
    } catch (const ParseError& e) {
        CHECK(e.line == 7);
    }
    CHECK_THROWS_AS(parse_tiling("domtile-tiling 2\ndim 2\n"), VersionMismatch);
    CHECK_THROWS_AS(parse_tiling("domtile-word 1\ndim 2\n"), ParseError);
    CHECK_THROWS_AS(parse_tiling(""), ParseError);
    CHECK_THROWS_AS(tiling_from_json(nlohmann::json{{"format", "domtile-tiling"}, {"version", 9}}), VersionMismatch);
    CHECK_THROWS_AS(load_tiling("{ not json"), ParseError);
}

TEST_CASE("verifier accepts good files and counts defects")
{
    TilingFile f = sample_tiling();
    VerifyReport ok = verify_tiling(f);
    CHECK(ok.ok());

    TilingFile overlap = f;
    overlap.tiling.placements.push_back(Placement{TileId::small(2), Point{1, 1}});
    VerifyReport r = verify_tiling(overlap);
    CHECK(r.overlaps == 1);
    CHECK_FALSE(r.ok());

    TilingFile unknown = f;
    unknown.tiling.placements.push_back(Placement{TileId::small(3), Point{100, 100}});
    CHECK(verify_tiling(unknown).unknown_tiles == 1);

    TilingFile outside = f;
    outside.tiling.placements.push_back(Placement{TileId::small(1), Point{23, 0}});
    CHECK(verify_tiling(outside).outside_window == 1);

    Alphabet a = f.header.alphabet();
    WordFile w = word_file(f.header, encode(f.tiling, a));
    CHECK(verify_word(w).ok());
    CHECK(verify_word(w, false).ok());
    WordFile broken = w;
    broken.entries[0].tile = TileId::small(2);
    CHECK_FALSE(verify_word(broken).ok());
    WordFile offsets = w;
    offsets.entries[0].offset = Point{7, 0};
    CHECK(verify_word(offsets).bad_offsets == 1);

    // a window cutting bricks: partials allowed unless asked otherwise
    SymbolicWord cut = encode(f.tiling, a).restricted(Box(Point{1, 1}, Point{10, 10}));
    WordFile cf = word_file(fig_header(Box(Point{1, 1}, Point{10, 10})), cut);
    CHECK(verify_word(cf).ok());
    CHECK(verify_word(cf).partial_tiles > 0);
    CHECK_FALSE(verify_word(cf, false).ok());
}

TEST_CASE("verifier agrees with the local rule on random words")
{
    TilingFile f = sample_tiling();
    Alphabet a = f.header.alphabet();
    auto symbols = a.symbols();
    std::mt19937_64 rng(17);
    for (int trial = 0; trial < 300; ++trial) {
        SymbolicWord w = encode(f.tiling, a).restricted(Box(Point{0, 0}, Point{8, 8}));
        int flips = static_cast<int>(rng() % 3);
        for (int k = 0; k < flips; ++k) {
            w.set(Point{static_cast<Coord>(rng() % 8), static_cast<Coord>(rng() % 8)}, symbols[rng() % symbols.size()]);
        }
        VerifyReport r = verify_word(word_file(fig_header(Box(Point{0, 0}, Point{8, 8})), w));
        CHECK(r.ok() == validate_word(w, a).empty());
    }
}

TEST_CASE("config round trip")
{
    RunConfig c;
    c.dim = 1;
    c.shapes = {Point{2}, Point{3}, Point{5}};
    c.cutoffs = {2, 3};
    c.targets = {Rational(3, 10), Rational(9, 20), Rational(1, 4)};
    c.mode = PlanMode::Strict;
    c.stages = 2;
    c.sides = {256, 4096};
    c.deltas = {Rational(1, 2), Rational(1, 4)};
    c.window = Box(Point{-5}, Point{1000});
    c.seed = 12345678901234ULL;
    c.check_blocks = true;
    c.out_dir = "out/x";
    c.format = "json";
    CHECK(parse_config(serialize_config(c)) == c);
    c.fill = FillConfig{Point{1}, Point{4}, Box(Point{0}, Point{9})};
    CHECK(parse_config(serialize_config(c)) == c);

    CHECK_THROWS_AS(parse_config("[family]\ndim = 2\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[family]\ndim = 2\nshapes = 3,2 2,3\n[targets]\np = 0.4 0.6\n[window]\nshape = 10\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[family]\ndim = 9\nshapes = 3\n"), ConfigError);
}

TEST_CASE("schedule recovered from a header")
{
    FileHeader h;
    h.dim = 1;
    h.shapes = {Point{2}, Point{3}, Point{5}};
    h.large = {Point{6}, Point{30}};
    TileSchedule s = schedule_from_header(h);
    CHECK(s.cutoffs() == std::vector<int>{2, 3});
    CHECK(header_for(s, Box(Point{0}, Point{10}), 3).large == h.large);
}

TEST_CASE("renderers")
{
    TilingFile f = sample_tiling();
    std::string svg = render_svg(f);
    CHECK(svg.find("<svg") == 0);
    CHECK(svg.find(tile_color(TileId::large(1))) != std::string::npos);
    CHECK(render_density_svg(f, 4).find("density map") != std::string::npos);
    CHECK_THROWS(render_ascii(f));

    FileHeader h;
    h.dim = 1;
    h.shapes = {Point{2}, Point{3}};
    h.large = {Point{6}};
    h.window = Box(Point{0}, Point{12});
    TilingFile line{h, Tiling{1, {Placement{TileId::small(1), Point{0}}, Placement{TileId::small(2), Point{2}},
                                  Placement{TileId::large(1), Point{6}}}}};
    CHECK(render_ascii(line) == "11222.AAAAAA\n");
}

TEST_CASE("commands")
{
    TempDir tmp;
    const fs::path cfg = tmp.path / "run.ini";
    write_file_atomic(cfg, "[family]\ndim = 2\nshapes = 3,2 2,3\n"
                           "[targets]\np = 0.4 0.6\n"
                           "[plan]\nmode = relaxed\nstages = 2\nsides = 64 256\n"
                           "[window]\nshape = 600,600\n"
                           "[run]\nseed = 3\ncheck_blocks = true\n"
                           "[output]\ndir = " + (tmp.path / "out").string() + "\nformat = text\n");
    CommandOptions o;
    o.config_path = cfg.string();

    std::ostringstream plan_out;
    CHECK(cmd_plan(o, plan_out) == 0);
    CHECK(plan_out.str().find("256") != std::string::npos);

    std::ostringstream build_out;
    CHECK(cmd_build(o, build_out) == 0);
    const fs::path tiling = tmp.path / "out" / "tiling.txt";
    const fs::path raw = tmp.path / "out" / "raw_tiling.txt";
    REQUIRE(fs::exists(tiling));
    REQUIRE(fs::exists(raw));
    CHECK(fs::exists(tmp.path / "out" / "report.json"));

    CommandOptions v;
    v.input = tiling.string();
    std::ostringstream verify_out;
    CHECK(cmd_verify(v, verify_out) == 0);
    CHECK(verify_out.str() == "tiling: ok\n");

    // the redistributed file matches the in-memory pipeline
    PipelineResult r = run_pipeline(make_pipeline_input(load_config(o)));
    TilingFile written = load_tiling(read_file(tiling));
    CHECK(written.tiling == r.tiling);

    // redistributing the raw file again reproduces the build output
    CommandOptions rd = o;
    rd.input = raw.string();
    std::ostringstream rd_out;
    CHECK(cmd_redistribute(rd, rd_out) == 0);
    CHECK(load_tiling(read_file(tmp.path / "out" / "redistributed.txt")).tiling == written.tiling);

    // stats on the raw tiling: only large bricks and the measured small share
    CommandOptions st;
    st.input = raw.string();
    st.format = "json";
    std::ostringstream st_out;
    CHECK(cmd_stats(st, st_out) == 0);
    nlohmann::json j = nlohmann::json::parse(st_out.str());
    CHECK(j["seed"] == 3);

    CommandOptions rn;
    rn.input = tiling.string();
    rn.out_dir = (tmp.path / "render").string();
    std::ostringstream rn_out;
    CHECK(cmd_render(rn, rn_out) == 0);
    CHECK(fs::exists(tmp.path / "render" / "tiling.svg"));

    // a corrupted file fails verification with status 1
    TilingFile bad = written;
    bad.tiling.placements.push_back(bad.tiling.placements.front());
    write_file_atomic(tmp.path / "bad.txt", serialize_tiling(bad));
    CommandOptions vb;
    vb.input = (tmp.path / "bad.txt").string();
    std::ostringstream vb_out;
    CHECK(cmd_verify(vb, vb_out) == 1);
}

TEST_CASE("stats of a pure wall")
{
    TempDir tmp;
    FileHeader h = fig_header(Box(Point{0, 0}, Point{36, 36}));
    TilingFile f{h, Tiling{2, {}}};
    for (Coord x = 0; x < 36; x += 6) {
        for (Coord y = 0; y < 36; y += 6) {
            f.tiling.placements.push_back(Placement{TileId::large(1), Point{x, y}});
        }
    }
    write_file_atomic(tmp.path / "wall.txt", serialize_tiling(f));
    CommandOptions o;
    o.input = (tmp.path / "wall.txt").string();
    o.format = "json";
    std::ostringstream out;
    CHECK(cmd_stats(o, out) == 0);
    nlohmann::json j = nlohmann::json::parse(out.str());
    CHECK(j["tiles"]["P1"]["covered_fraction"] == 1.0);
    CHECK(j["tiles"]["1"]["cells"] == 0);
    FrequencyReport r = measure(f.tiling, h.alphabet(), h.window);
    CHECK(r.covered_fraction(TileId::large(1)) == 1.0);
    CHECK(r.uncovered_fraction() == 0.0);
}
