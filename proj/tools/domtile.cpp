#include "domtile/commands.hpp"
#include "domtile/verify.hpp"

#include <CLI11.hpp>
#include <spdlog/spdlog.h>

#include <cstdlib>
#include <iostream>
#include <sstream>

using namespace domtile;

namespace {

std::vector<Coord> parse_window(const std::string& s)
{
    std::vector<Coord> out;
    std::stringstream in(s);
    std::string part;
    while (std::getline(in, part, ',')) {
        out.push_back(std::stoll(part));
    }
    return out;
}

void set_log_level()
{
    const char* env = std::getenv("DOMTILE_LOG");
    spdlog::set_level(env ? spdlog::level::from_str(env) : spdlog::level::warn);
    spdlog::set_pattern("[%l] %v");
}

} // namespace

int main(int argc, char** argv)
{
    set_log_level();
    CLI::App app{"Domino tilings with prescribed tile frequencies"};
    app.require_subcommand(1);

    CommandOptions opt;
    std::string seed, mode, window, out, format;
    auto common = [&](CLI::App* sub, bool needs_input) {
        sub->add_option("--config", opt.config_path, "run configuration (INI)");
        sub->add_option("--seed", seed, "64-bit seed, overrides the config");
        sub->add_option("--mode", mode, "strict or relaxed")->check(CLI::IsMember({"strict", "relaxed"}));
        sub->add_option("--window", window, "window extents X,Y[,Z...]");
        sub->add_option("--out", out, "output directory");
        sub->add_option("--format", format, "text, json or svg")->check(CLI::IsMember({"text", "json", "svg"}));
        if (needs_input) {
            sub->add_option("file", opt.input, "tiling or word file")->required();
        }
    };
    struct Sub {
        CLI::App* app;
        int (*fn)(const CommandOptions&, std::ostream&);
    };
    std::vector<Sub> subs = {
        {app.add_subcommand("plan", "compute and check stage parameters"), cmd_plan},
        {app.add_subcommand("build", "run the tower construction and redistribution"), cmd_build},
        {app.add_subcommand("fill", "write a uniformly filled word between two walls"), cmd_fill},
        {app.add_subcommand("redistribute", "relabel large dominoes to reach the targets"), cmd_redistribute},
        {app.add_subcommand("verify", "check a tiling or word file independently"), cmd_verify},
        {app.add_subcommand("stats", "tile frequencies of a tiling file"), cmd_stats},
        {app.add_subcommand("render", "draw a tiling (SVG for d=2, text for d=1)"), cmd_render},
    };
    for (const Sub& s : subs) {
        bool needs_input = s.fn == cmd_redistribute || s.fn == cmd_verify || s.fn == cmd_stats || s.fn == cmd_render;
        common(s.app, needs_input);
        if (s.fn == cmd_redistribute || s.fn == cmd_stats) {
            s.app->add_option("--targets", opt.targets, "target frequencies p_1 ... p_k");
        }
    }

    CLI11_PARSE(app, argc, argv);

    try {
        if (!seed.empty()) {
            opt.seed = std::stoull(seed);
        }
        if (!mode.empty()) {
            opt.mode = parse_plan_mode(mode);
        }
        if (!window.empty()) {
            opt.window = parse_window(window);
        }
        if (!out.empty()) {
            opt.out_dir = out;
        }
        if (!format.empty()) {
            opt.format = format;
        }
        for (const Sub& s : subs) {
            if (s.app->parsed()) {
                return s.fn(opt, std::cout);
            }
        }
    } catch (const Infeasible& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 3;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 2;
}
