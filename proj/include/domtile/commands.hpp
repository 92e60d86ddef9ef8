#pragma once

#include "domtile/config.hpp"
#include "domtile/io.hpp"
#include "domtile/tower.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace domtile {

/// Command-line values; set fields override the config file.
struct CommandOptions {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<PlanMode> mode;
    std::optional<std::vector<Coord>> window;
    std::optional<std::string> out_dir;
    std::optional<std::string> format;
    std::string input;
    std::vector<std::string> targets;
};

RunConfig load_config(const CommandOptions& o);

/// Recovers the level cutoffs from the large shapes in a file header.
TileSchedule schedule_from_header(const FileHeader& h);
FileHeader header_for(const TileSchedule& s, const Box& window, std::uint64_t seed);

nlohmann::json report_json(const FrequencyReport& r, const TargetDistribution* targets = nullptr);
nlohmann::json plan_json(const StagePlan& plan, const TileSchedule& schedule);

// Each returns the process exit status and writes human-readable output to `out`.
int cmd_plan(const CommandOptions& o, std::ostream& out);
int cmd_build(const CommandOptions& o, std::ostream& out);
int cmd_fill(const CommandOptions& o, std::ostream& out);
int cmd_redistribute(const CommandOptions& o, std::ostream& out);
int cmd_verify(const CommandOptions& o, std::ostream& out);
int cmd_stats(const CommandOptions& o, std::ostream& out);
int cmd_render(const CommandOptions& o, std::ostream& out);

} // namespace domtile
