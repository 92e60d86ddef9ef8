#include "domtile/commands.hpp"

#include "domtile/random.hpp"
#include "domtile/render.hpp"
#include "domtile/verify.hpp"

#include <spdlog/spdlog.h>

#include <filesystem>
#include <iomanip>
#include <sstream>

namespace domtile {

namespace fs = std::filesystem;

namespace {

std::string extension(const std::string& format) { return format == "json" ? ".json" : ".txt"; }

void check_format(const std::string& f)
{
    if (f != "text" && f != "json" && f != "svg") {
        throw ConfigError("unknown format '" + f + "' (text, json or svg)");
    }
}

fs::path out_dir(const RunConfig& c)
{
    fs::path d(c.out_dir);
    fs::create_directories(d);
    return d;
}

std::string tiling_text(const TilingFile& f, const std::string& format)
{
    return format == "json" ? to_json(f).dump(1) + "\n" : serialize_tiling(f);
}

std::string word_text(const WordFile& f, const std::string& format)
{
    return format == "json" ? to_json(f).dump(1) + "\n" : serialize_word(f);
}

std::string fixed(double v, int digits = 6)
{
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
}

void print_report(std::ostream& out, const FrequencyReport& r, const TargetDistribution* targets)
{
    out << "window cells    " << r.window_cells << '\n'
        << "covered cells   " << r.covered_cells << '\n'
        << "uncovered       " << fixed(r.uncovered_fraction()) << '\n';
    for (const auto& [t, n] : r.cells) {
        out << "tile " << std::setw(4) << t.str() << "  cells " << std::setw(12) << n << "  of window " << fixed(r.window_fraction(t))
            << "  of covered " << fixed(r.covered_fraction(t));
        if (targets && t.is_small() && static_cast<std::size_t>(t.index()) <= targets->size()) {
            out << "  target " << fixed(to_double(targets->p(static_cast<std::size_t>(t.index()))));
        }
        out << '\n';
    }
    if (targets) {
        out << "max |freq - p|  " << fixed(r.max_abs_delta(*targets)) << '\n';
    }
}

TargetDistribution targets_for(const CommandOptions& o)
{
    if (!o.targets.empty()) {
        return TargetDistribution::parse(o.targets);
    }
    if (!o.config_path.empty()) {
        RunConfig c = load_config(o);
        return make_targets(c);
    }
    throw ConfigError("targets needed: pass --targets or --config");
}

} // namespace

RunConfig load_config(const CommandOptions& o)
{
    if (o.config_path.empty()) {
        throw ConfigError("--config is required for this command");
    }
    RunConfig c = parse_config(read_file(o.config_path));
    if (o.seed) {
        c.seed = *o.seed;
    }
    if (o.mode) {
        c.mode = *o.mode;
    }
    if (o.window) {
        if (static_cast<int>(o.window->size()) != c.dim) {
            throw ConfigError("--window needs " + std::to_string(c.dim) + " extents");
        }
        c.window = Box(Point(c.dim, 0), Point(std::span<const Coord>(*o.window)));
    }
    if (o.out_dir) {
        c.out_dir = *o.out_dir;
    }
    if (o.format) {
        c.format = *o.format;
    }
    if (!o.targets.empty()) {
        c.targets.clear();
        for (const auto& s : o.targets) {
            c.targets.push_back(parse_rational(s));
        }
    }
    check_format(c.format);
    return c;
}

TileSchedule schedule_from_header(const FileHeader& h)
{
    if (h.large.empty()) {
        return TileSchedule(validate_family(h.shapes, h.dim));
    }
    std::vector<int> cutoffs;
    Point prod(h.dim, 1);
    std::size_t level = 0;
    for (std::size_t j = 0; j < h.shapes.size() && level < h.large.size(); ++j) {
        for (int a = 0; a < h.dim; ++a) {
            prod[a] *= h.shapes[j][a];
        }
        if (prod == h.large[level]) {
            cutoffs.push_back(static_cast<int>(j + 1));
            ++level;
        }
    }
    if (level != h.large.size()) {
        throw ParseError(0, "large shapes are not prefix products of the tile shapes");
    }
    if (cutoffs.size() == 1 && cutoffs[0] == static_cast<int>(h.shapes.size())) {
        return TileSchedule(validate_family(h.shapes, h.dim));
    }
    return TileSchedule(h.dim, h.shapes, cutoffs);
}

FileHeader header_for(const TileSchedule& s, const Box& window, std::uint64_t seed)
{
    FileHeader h;
    h.dim = s.dim();
    const auto n = static_cast<std::size_t>(s.cutoff(s.levels()));
    h.shapes.assign(s.shapes().begin(), s.shapes().begin() + static_cast<std::ptrdiff_t>(n));
    for (int k = 1; k <= s.levels(); ++k) {
        h.large.push_back(s.large_shape(k));
    }
    h.window = window;
    h.seed = seed;
    return h;
}

nlohmann::json report_json(const FrequencyReport& r, const TargetDistribution* targets)
{
    nlohmann::json j;
    j["window_cells"] = r.window_cells;
    j["covered_cells"] = r.covered_cells;
    j["uncovered_fraction"] = r.uncovered_fraction();
    nlohmann::json tiles = nlohmann::json::object();
    for (const auto& [t, n] : r.cells) {
        tiles[t.str()] = {{"cells", n}, {"window_fraction", r.window_fraction(t)}, {"covered_fraction", r.covered_fraction(t)}};
    }
    j["tiles"] = tiles;
    j["small_fraction"] = r.small_fraction();
    if (targets) {
        j["deltas"] = r.deltas(*targets);
        j["max_abs_delta"] = r.max_abs_delta(*targets);
    }
    return j;
}

nlohmann::json plan_json(const StagePlan& plan, const TileSchedule& schedule)
{
    nlohmann::json j;
    j["mode"] = to_string(plan.mode);
    j["dim"] = plan.dim;
    j["countable"] = plan.countable;
    j["base_collar"] = plan.base_collar;
    nlohmann::json stages = nlohmann::json::array();
    for (const StageParams& s : plan.stages) {
        stages.push_back({{"side", s.side},
                          {"epsilon", to_string(s.epsilon)},
                          {"delta", to_string(s.delta)},
                          {"gap", s.gap},
                          {"collar", s.collar},
                          {"tail_mass", to_string(s.tail_mass)}});
    }
    j["stages"] = stages;
    j["predicted_uncovered_bound"] = to_double(predicted_uncovered_bound(plan, schedule));
    j["inequality_error_bound"] = to_double(inequality_error_bound(plan));
    return j;
}

int cmd_plan(const CommandOptions& o, std::ostream& out)
{
    RunConfig c = load_config(o);
    TileSchedule s = make_schedule(c);
    TargetDistribution t = make_targets(c);
    StagePlan plan = plan_stages(s, t, c.stages, c.mode, make_overrides(c));
    if (c.format == "json") {
        out << plan_json(plan, s).dump(1) << '\n';
        return 0;
    }
    out << "mode " << to_string(plan.mode) << (plan.countable ? " (countable)" : "") << ", collar " << plan.base_collar << '\n';
    for (int i = 1; i <= plan.count(); ++i) {
        const StageParams& p = plan.stage(i);
        out << "stage " << i << ": n = " << p.side << ", eps = " << to_string(p.epsilon) << ", gap = " << p.gap
            << ", collar = " << p.collar;
        if (plan.countable) {
            out << ", tail mass = " << to_string(p.tail_mass);
        }
        out << '\n';
    }
    out << "predicted uncovered bound " << fixed(to_double(predicted_uncovered_bound(plan, s))) << '\n';
    return 0;
}

int cmd_build(const CommandOptions& o, std::ostream& out)
{
    RunConfig c = load_config(o);
    PipelineInput in = make_pipeline_input(c);
    spdlog::info("building {} stage(s) on window {}, seed {}", in.plan.count(), in.window.str(), in.seed);
    PipelineResult r = run_pipeline(in);
    for (const StageSummary& s : r.stages) {
        spdlog::info("stage {}: {} towers ({} tail), error fraction {:.4f}, {} good occurrences", s.stage, s.towers, s.tail_towers,
                     s.error_fraction, s.good_occurrences);
    }

    FileHeader h = header_for(in.schedule, in.window, in.seed);
    fs::path dir = out_dir(c);
    const std::string data_format = c.format == "json" ? "json" : "text";
    TilingFile raw{h, r.raw.tiling};
    TilingFile fin{h, r.tiling};
    write_file_atomic(dir / ("raw_tiling" + extension(data_format)), tiling_text(raw, data_format));
    write_file_atomic(dir / ("tiling" + extension(data_format)), tiling_text(fin, data_format));
    if (c.format == "svg" && h.dim == 2) {
        write_file_atomic(dir / "tiling.svg", render_svg(fin));
    }

    nlohmann::json rep;
    rep["seed"] = in.seed;
    rep["plan"] = plan_json(in.plan, in.schedule);
    nlohmann::json stages = nlohmann::json::array();
    for (const StageSummary& s : r.stages) {
        nlohmann::json js = {{"stage", s.stage},
                             {"towers", s.towers},
                             {"tail_towers", s.tail_towers},
                             {"error_cells", s.error_cells},
                             {"error_fraction", s.error_fraction},
                             {"good_occurrences", s.good_occurrences},
                             {"tail_target", s.tail_target},
                             {"tail_realized", s.tail_realized}};
        if (s.checked) {
            js["blocks_valid"] = s.blocks_valid;
            js["induct_holds"] = s.induct_holds;
            js["nesting_holds"] = s.nesting_holds;
        }
        stages.push_back(js);
    }
    rep["stages"] = stages;
    rep["before_redistribution"] = report_json(r.raw.report);
    rep["before_redistribution"]["partial_cells"] = r.raw.partial_cells;
    rep["msrs"] = {{"min_target", r.msrs.min_target},
                   {"max_small_fraction", r.msrs.max_small_fraction},
                   {"small_below_target", r.msrs.small_below_target},
                   {"large_fraction", r.msrs.large_fraction},
                   {"large_bound", r.msrs.large_bound},
                   {"large_above_bound", r.msrs.large_above_bound}};
    rep["after_redistribution"] = report_json(r.report, &in.targets);
    rep["tail_mass"] = to_string(in.targets.tail_mass());
    write_file_atomic(dir / "report.json", rep.dump(1) + "\n");

    out << "wrote " << (dir / ("tiling" + extension(data_format))).string() << '\n';
    print_report(out, r.report, &in.targets);
    out << "small tiles before redistribution: max " << fixed(r.msrs.max_small_fraction) << " of covered (min target "
        << fixed(r.msrs.min_target) << ")\n";
    return 0;
}

int cmd_fill(const CommandOptions& o, std::ostream& out)
{
    RunConfig c = load_config(o);
    if (!c.fill) {
        throw ConfigError("cmd fill needs a [fill] section");
    }
    TileSchedule s = make_schedule(c);
    const RectFamily& f = s.base();
    BrickWall inner = brick_wall(f, c.fill->inner_translate);
    BrickWall outer = brick_wall(f, c.fill->outer_translate);
    FilledWord w = uniform_fill(inner, c.fill->box, outer, f);
    Alphabet alphabet = build_alphabet(f);
    Coord margin = 0;
    for (int a = 0; a < f.dim; ++a) {
        margin = std::max(margin, f.large_shape[a]);
    }
    Box window = expand(c.fill->box, f.fill_length + margin);
    SymbolicWord word = w.materialize(window, alphabet);

    FileHeader h;
    h.dim = f.dim;
    h.shapes = f.shapes;
    h.large = {f.large_shape};
    h.window = window;
    h.seed = c.seed;
    fs::path dir = out_dir(c);
    const std::string data_format = c.format == "json" ? "json" : "text";
    fs::path path = dir / ("fill_word" + extension(data_format));
    write_file_atomic(path, word_text(word_file(h, word), data_format));
    if (c.format == "svg" && h.dim == 2) {
        TilingFile t{h, decode(word, alphabet).tiling};
        write_file_atomic(dir / "fill_word.svg", render_svg(t));
    }
    out << "wrote " << path.string() << " (" << word.size() << " cells, collar " << f.fill_length << ", hole "
        << w.outer_hole().str() << ")\n";
    return 0;
}

int cmd_redistribute(const CommandOptions& o, std::ostream& out)
{
    TilingFile f = load_tiling(read_file(o.input));
    TargetDistribution t = targets_for(o);
    TileSchedule s = schedule_from_header(f.header);
    Alphabet alphabet = f.header.alphabet();
    FrequencyReport rep = measure(f.tiling, alphabet, f.header.window);
    std::uint64_t seed = o.seed.value_or(f.header.seed);
    TilingFile res{f.header, redistribute(f.tiling, t, rep, s, derive_seed(seed, kRedistributeStream))};
    res.header.seed = seed;
    std::string format = o.format.value_or(looks_like_json(read_file(o.input)) ? "json" : "text");
    check_format(format);
    fs::path dir = o.out_dir ? *o.out_dir : !o.config_path.empty() ? load_config(o).out_dir : ".";
    fs::create_directories(dir);
    const std::string data_format = format == "json" ? "json" : "text";
    fs::path path = dir / ("redistributed" + extension(data_format));
    write_file_atomic(path, tiling_text(res, data_format));
    out << "wrote " << path.string() << '\n';
    print_report(out, measure(res.tiling, alphabet, res.header.window), &t);
    return 0;
}

int cmd_verify(const CommandOptions& o, std::ostream& out)
{
    const std::string content = read_file(o.input);
    VerifyReport r;
    if (detect_kind(content) == FileKind::Tiling) {
        r = verify_tiling(load_tiling(content));
        out << "tiling: ";
    } else {
        r = verify_word(load_word(content));
        out << "word: " << r.complete_tiles << " complete tile(s), " << r.partial_tiles << " cut by the boundary; ";
    }
    if (r.ok()) {
        out << "ok\n";
        return 0;
    }
    out << r.violations() << " violation(s): " << r.overlaps << " overlap(s), " << r.unknown_tiles << " unknown tile(s), "
        << r.bad_offsets << " bad offset(s), " << r.neighbor_violations << " neighbor violation(s), " << r.outside_window
        << " outside the window\n";
    for (const std::string& m : r.messages) {
        out << "  " << m << '\n';
    }
    return 1;
}

int cmd_stats(const CommandOptions& o, std::ostream& out)
{
    TilingFile f = load_tiling(read_file(o.input));
    FrequencyReport r = measure(f.tiling, f.header.alphabet(), f.header.window);
    std::optional<TargetDistribution> t;
    if (!o.targets.empty() || !o.config_path.empty()) {
        t = targets_for(o);
    }
    if (o.format.value_or("text") == "json") {
        nlohmann::json j = report_json(r, t ? &*t : nullptr);
        j["seed"] = f.header.seed;
        out << j.dump(1) << '\n';
    } else {
        out << "seed " << f.header.seed << '\n';
        print_report(out, r, t ? &*t : nullptr);
    }
    return 0;
}

int cmd_render(const CommandOptions& o, std::ostream& out)
{
    TilingFile f = load_tiling(read_file(o.input));
    fs::path dir(o.out_dir.value_or("."));
    fs::create_directories(dir);
    std::string stem = fs::path(o.input).stem().string();
    if (f.header.dim == 1) {
        fs::path path = dir / (stem + ".ascii.txt");
        write_file_atomic(path, render_ascii(f));
        out << "wrote " << path.string() << '\n';
        return 0;
    }
    fs::path path = dir / (stem + ".svg");
    write_file_atomic(path, render_svg(f));
    out << "wrote " << path.string()
        << (static_cast<std::size_t>(f.header.window.volume()) > kSvgCellCap ? " (density map)" : "") << '\n';
    return 0;
}

} // namespace domtile
