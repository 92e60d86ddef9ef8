#pragma once

#include "domtile/brickfill.hpp"
#include "domtile/geometry.hpp"
#include "domtile/numerics.hpp"
#include "domtile/tower.hpp"

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Parameters of the uniform-filling demo (cmd_fill).
struct FillConfig {
    Point inner_translate;
    Point outer_translate;
    Box box;
    friend bool operator==(const FillConfig&, const FillConfig&) = default;
};

struct RunConfig {
    int dim = 2;
    std::vector<Point> shapes;
    std::vector<int> cutoffs; // empty: a single level holding every shape

    std::vector<Rational> targets;
    Rational tail_mass = 0;

    PlanMode mode = PlanMode::Relaxed;
    int stages = 1;
    std::vector<Coord> sides;
    std::vector<Rational> epsilons;
    std::vector<Rational> deltas;
    std::vector<Coord> gaps;

    Box window;
    std::uint64_t seed = 0;
    bool check_blocks = false;

    std::string out_dir = ".";
    std::string format = "text";

    std::optional<FillConfig> fill;

    friend bool operator==(const RunConfig&, const RunConfig&) = default;
};

/// INI text: sections family, targets, plan, window, run, output, fill.
RunConfig parse_config(const std::string& text);
std::string serialize_config(const RunConfig& c);

TileSchedule make_schedule(const RunConfig& c);
TargetDistribution make_targets(const RunConfig& c);
PlanOverrides make_overrides(const RunConfig& c);
PipelineInput make_pipeline_input(const RunConfig& c);

} // namespace domtile
