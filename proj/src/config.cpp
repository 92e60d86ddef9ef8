#include "domtile/config.hpp"

#include "domtile/io.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <sstream>

namespace domtile {

namespace {

namespace pt = boost::property_tree;

std::vector<std::string> words(const std::string& s)
{
    std::istringstream in(s);
    std::vector<std::string> out;
    std::string w;
    while (in >> w) {
        out.push_back(w);
    }
    return out;
}

template <class T, class F>
std::string join(const std::vector<T>& v, F&& fmt)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) {
        s += (i ? " " : "") + fmt(v[i]);
    }
    return s;
}

Coord to_coord(const std::string& s, const std::string& key)
{
    try {
        std::size_t used = 0;
        long long v = std::stoll(s, &used);
        if (used != s.size()) {
            throw std::invalid_argument(s);
        }
        return v;
    } catch (const std::exception&) {
        throw ConfigError("bad integer '" + s + "' for " + key);
    }
}

Point to_point(const std::string& s, int dim, const std::string& key)
{
    try {
        return parse_point(s, dim);
    } catch (const std::exception& e) {
        throw ConfigError("bad vector '" + s + "' for " + key + ": " + e.what());
    }
}

Rational to_rational(const std::string& s, const std::string& key)
{
    try {
        return parse_rational(s);
    } catch (const std::exception& e) {
        throw ConfigError("bad number '" + s + "' for " + key);
    }
}

std::string get(const pt::ptree& t, const std::string& key, const std::string& fallback = "")
{
    return t.get<std::string>(key, fallback);
}

std::string require(const pt::ptree& t, const std::string& key)
{
    auto v = t.get_optional<std::string>(key);
    if (!v) {
        throw ConfigError("missing config key " + key);
    }
    return *v;
}

bool to_bool(const std::string& s, const std::string& key)
{
    if (s == "true" || s == "1" || s == "yes") {
        return true;
    }
    if (s == "false" || s == "0" || s == "no" || s.empty()) {
        return false;
    }
    throw ConfigError("bad boolean '" + s + "' for " + key);
}

} // namespace

RunConfig parse_config(const std::string& text)
{
    pt::ptree t;
    try {
        std::istringstream in(text);
        pt::read_ini(in, t);
    } catch (const pt::ini_parser_error& e) {
        throw ConfigError(std::string("config: ") + e.what());
    }
    RunConfig c;
    c.dim = static_cast<int>(to_coord(require(t, "family.dim"), "family.dim"));
    if (c.dim < 1 || c.dim > kMaxDim) {
        throw ConfigError("family.dim must be between 1 and " + std::to_string(kMaxDim));
    }
    for (const auto& s : words(require(t, "family.shapes"))) {
        c.shapes.push_back(to_point(s, c.dim, "family.shapes"));
    }
    for (const auto& s : words(get(t, "family.cutoffs"))) {
        c.cutoffs.push_back(static_cast<int>(to_coord(s, "family.cutoffs")));
    }
    for (const auto& s : words(require(t, "targets.p"))) {
        c.targets.push_back(to_rational(s, "targets.p"));
    }
    c.tail_mass = to_rational(get(t, "targets.tail", "0"), "targets.tail");

    try {
        c.mode = parse_plan_mode(get(t, "plan.mode", "relaxed"));
    } catch (const std::exception& e) {
        throw ConfigError(e.what());
    }
    c.stages = static_cast<int>(to_coord(get(t, "plan.stages", "1"), "plan.stages"));
    for (const auto& s : words(get(t, "plan.sides"))) {
        c.sides.push_back(to_coord(s, "plan.sides"));
    }
    for (const auto& s : words(get(t, "plan.epsilons"))) {
        c.epsilons.push_back(to_rational(s, "plan.epsilons"));
    }
    for (const auto& s : words(get(t, "plan.deltas"))) {
        c.deltas.push_back(to_rational(s, "plan.deltas"));
    }
    for (const auto& s : words(get(t, "plan.gaps"))) {
        c.gaps.push_back(to_coord(s, "plan.gaps"));
    }

    Point shape = to_point(require(t, "window.shape"), c.dim, "window.shape");
    Point anchor = t.get_optional<std::string>("window.anchor") ? to_point(get(t, "window.anchor"), c.dim, "window.anchor")
                                                                 : Point(c.dim, 0);
    try {
        c.window = Box(anchor, shape);
    } catch (const std::exception& e) {
        throw ConfigError(std::string("window: ") + e.what());
    }

    const std::string seed = get(t, "run.seed", "0");
    try {
        std::size_t used = 0;
        c.seed = std::stoull(seed, &used);
        if (used != seed.size() || seed.find('-') != std::string::npos) {
            throw std::invalid_argument(seed);
        }
    } catch (const std::exception&) {
        throw ConfigError("bad seed '" + seed + "'");
    }
    c.check_blocks = to_bool(get(t, "run.check_blocks", "false"), "run.check_blocks");
    c.out_dir = get(t, "output.dir", ".");
    c.format = get(t, "output.format", "text");

    if (t.get_child_optional("fill")) {
        FillConfig f;
        f.inner_translate = to_point(get(t, "fill.inner", "0"), 0, "fill.inner");
        f.outer_translate = to_point(get(t, "fill.outer", "0"), 0, "fill.outer");
        Point ba = to_point(require(t, "fill.box_anchor"), c.dim, "fill.box_anchor");
        Point bs = to_point(require(t, "fill.box_shape"), c.dim, "fill.box_shape");
        if (f.inner_translate.dim() != c.dim || f.outer_translate.dim() != c.dim) {
            throw ConfigError("fill translates must have dimension " + std::to_string(c.dim));
        }
        f.box = Box(ba, bs);
        c.fill = f;
    }
    return c;
}

std::string serialize_config(const RunConfig& c)
{
    auto rat = [](const Rational& q) { return to_string(q); };
    auto num = [](Coord v) { return std::to_string(v); };
    std::ostringstream out;
    out << "[family]\n"
        << "dim = " << c.dim << '\n'
        << "shapes = " << join(c.shapes, format_point) << '\n'
        << "cutoffs = " << join(c.cutoffs, [](int v) { return std::to_string(v); }) << '\n'
        << "\n[targets]\n"
        << "p = " << join(c.targets, rat) << '\n'
        << "tail = " << to_string(c.tail_mass) << '\n'
        << "\n[plan]\n"
        << "mode = " << to_string(c.mode) << '\n'
        << "stages = " << c.stages << '\n'
        << "sides = " << join(c.sides, num) << '\n'
        << "epsilons = " << join(c.epsilons, rat) << '\n'
        << "deltas = " << join(c.deltas, rat) << '\n'
        << "gaps = " << join(c.gaps, num) << '\n'
        << "\n[window]\n"
        << "anchor = " << format_point(c.window.anchor) << '\n'
        << "shape = " << format_point(c.window.shape) << '\n'
        << "\n[run]\n"
        << "seed = " << c.seed << '\n'
        << "check_blocks = " << (c.check_blocks ? "true" : "false") << '\n'
        << "\n[output]\n"
        << "dir = " << c.out_dir << '\n'
        << "format = " << c.format << '\n';
    if (c.fill) {
        out << "\n[fill]\n"
            << "inner = " << format_point(c.fill->inner_translate) << '\n'
            << "outer = " << format_point(c.fill->outer_translate) << '\n'
            << "box_anchor = " << format_point(c.fill->box.anchor) << '\n'
            << "box_shape = " << format_point(c.fill->box.shape) << '\n';
    }
    return out.str();
}

TileSchedule make_schedule(const RunConfig& c)
{
    if (c.cutoffs.empty()) {
        return TileSchedule(validate_family(c.shapes, c.dim));
    }
    return TileSchedule(c.dim, c.shapes, c.cutoffs);
}

TargetDistribution make_targets(const RunConfig& c) { return TargetDistribution(c.targets, c.tail_mass); }

PlanOverrides make_overrides(const RunConfig& c)
{
    PlanOverrides o;
    o.sides = c.sides;
    o.epsilons = c.epsilons;
    o.deltas = c.deltas;
    o.gaps = c.gaps;
    return o;
}

PipelineInput make_pipeline_input(const RunConfig& c)
{
    PipelineInput in;
    in.schedule = make_schedule(c);
    in.targets = make_targets(c);
    in.plan = plan_stages(in.schedule, in.targets, c.stages, c.mode, make_overrides(c));
    in.window = c.window;
    in.seed = c.seed;
    in.check_blocks = c.check_blocks;
    return in;
}

} // namespace domtile
