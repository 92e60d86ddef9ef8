#pragma once

#include "domtile/brickfill.hpp"
#include "domtile/geometry.hpp"
#include "domtile/numerics.hpp"
#include "domtile/sft.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace domtile {

class PlanError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

class NonpositiveTarget : public PlanError {
public:
    NonpositiveTarget(std::size_t index, const Rational& value);
    std::size_t index; // 1-based tile number
};

class TargetSumNotOne : public PlanError {
public:
    explicit TargetSumNotOne(const Rational& sum);
    Rational sum;
};

/// Raised with the identifier of the first violated constraint:
/// epsilon, ncond, 2ncond, tailcontrol, cntgetall, cntcollar, cntmsr, size.
class Infeasible : public PlanError {
public:
    Infeasible(std::string constraint, const std::string& detail);
    std::string constraint;
};

class WindowTooSmall : public PlanError {
public:
    WindowTooSmall(const Box& window, Coord side);
};

class TargetsInfeasible : public PlanError {
public:
    TargetsInfeasible(TileId tile, double measured, double target);
    TileId tile;
};

/// Target frequencies p_1..p_k, all positive, summing to one together with
/// the recorded tail mass (the mass of tiles beyond a truncation).
class TargetDistribution {
public:
    TargetDistribution() = default;
    explicit TargetDistribution(std::vector<Rational> p, Rational tail_mass = 0);
    static TargetDistribution parse(const std::vector<std::string>& p, const std::string& tail_mass = "0");

    std::size_t size() const noexcept { return p_.size(); }
    const std::vector<Rational>& probabilities() const noexcept { return p_; }
    /// 1-based.
    const Rational& p(std::size_t j) const { return p_.at(j - 1); }
    const Rational& tail_mass() const noexcept { return tail_; }
    /// sum_{j = from}^{to} p_j over 1-based indices, clipped to the list.
    Rational sum(std::size_t from, std::size_t to) const;
    /// sum_{j > n} p_j plus the tail mass.
    Rational mass_beyond(std::size_t n) const;
    /// min_{j <= n} p_j.
    Rational min_prefix(std::size_t n) const;

private:
    std::vector<Rational> p_;
    Rational tail_ = 0;
};

enum class PlanMode { Strict, Relaxed };

std::string to_string(PlanMode m);
PlanMode parse_plan_mode(const std::string& s);

struct StageParams {
    Coord side = 0;      // n_i
    Rational epsilon;    // error budget for the stage's sampling
    Rational delta;      // bound replacing 1/4^i (relaxed) or 1/4^i itself (strict)
    Coord gap = 0;       // lattice gap between towers
    Coord collar = 0;    // widest filling collar used by the stage's towers
    Rational tail_mass;  // countable runs: cell mass assigned to tail towers
};

struct StagePlan {
    PlanMode mode = PlanMode::Strict;
    int dim = 0;
    bool countable = false;
    Coord base_collar = 0; // l = l_1, the collar of main towers
    std::vector<StageParams> stages;

    int count() const noexcept { return static_cast<int>(stages.size()); }
    /// 1-based.
    const StageParams& stage(int i) const { return stages.at(static_cast<std::size_t>(i - 1)); }
};

/// Optional user-supplied values. Empty vectors mean "choose".
struct PlanOverrides {
    std::vector<Coord> sides;
    std::vector<Rational> epsilons;
    std::vector<Rational> deltas;
    std::vector<Coord> gaps;
    std::optional<std::vector<Rational>> tail_masses;
    Coord side_cap = Coord(1) << 40;
};

/// Finite runs use a one-level schedule and any stage count; countable runs
/// use exactly one stage per level.
StagePlan plan_stages(const TileSchedule& schedule, const TargetDistribution& targets, int count, PlanMode mode,
                      const PlanOverrides& overrides = {});
StagePlan plan_stages(const RectFamily& f, const TargetDistribution& targets, int count, PlanMode mode,
                      const PlanOverrides& overrides = {});

/// eps_K plus the fraction of a top tower outside the whole wall tiles of its
/// (collar+1)-interior: 1 - prod_i (n_K - 2(collar+1) - 2(P_i - 1)) / n_K.
Rational predicted_uncovered_bound(const StagePlan& plan, const TileSchedule& schedule);
/// eps_K + 2d(l + 2 + n_{K-1}) / n_K.
Rational inequality_error_bound(const StagePlan& plan);

/// Cells of whole wall tiles (wall anchored at the tower corner) inside the
/// tower's (collar+1)-interior.
Coord usable_cells(int dim, Coord side, Coord collar, const Point& period);

struct StageTowers {
    int stage = 0;
    Coord side = 0;
    Coord gap = 0;
    Box window;
    Point offset;
    std::vector<Point> anchors;      // lexicographic
    std::vector<std::uint8_t> tail;  // per anchor; countable runs only
    Coord error_cells = 0;           // |B_i|

    std::size_t size() const noexcept { return anchors.size(); }
    Box tower(std::size_t i) const { return Box(anchors[i], Point(window.dim(), side)); }
    bool is_tail(std::size_t i) const { return !tail.empty() && tail[i] != 0; }
    std::size_t tail_count() const;
    double error_fraction() const;
    /// Window cells in no tower. Materializes cells; small windows only.
    Region error_region() const;
};

/// Towers on (side + gap) Z^d + window.lo + offset that fit inside the window.
StageTowers towers_on_lattice(const Box& window, Coord side, Coord gap, const Point& offset, int stage);
/// Same with a seeded uniform offset in [0, side + gap)^d.
StageTowers sample_towers(const StagePlan& plan, const Box& window, int stage, std::uint64_t seed);
/// Marks `count` towers, chosen uniformly by a seeded shuffle, as tail towers.
void assign_tails(StageTowers& towers, std::size_t count, std::uint64_t seed);

enum class BlockKind { Main, Tail };

/// One stage tower's part of phi_i, in placement form. Placements may stick
/// out of the domain (the (collar+1)-interior of the tower).
struct TowerBlock {
    Box tower;
    Box domain;
    BlockKind kind = BlockKind::Main;
    int level = 1; // large domino level of the ambient wall
    BrickWall ambient;
    std::vector<Placement> placements;
    std::vector<Point> good; // tower anchors of preserved lower-stage blocks
    std::vector<Box> holes;  // hole boxes O of the glued occurrences

    Patch patch() const { return Patch{domain, placements}; }
};

/// phi_i as a list of disjoint tower blocks, sorted by tower anchor.
struct ConstructionState {
    int stage = 0;
    std::vector<TowerBlock> blocks;

    std::size_t good_occurrences() const;
    const TowerBlock* block_at(const Point& tower_anchor) const;
    /// phi_i on the cells of `window` it defines.
    SymbolicWord word(const Alphabet& alphabet, const Box& window) const;
};

ConstructionState build_stage(const ConstructionState& prev, const StageTowers& towers, const TileSchedule& schedule,
                              const StagePlan& plan);

/// Cell-by-cell: the inner 2-collar of the block domain (the inner 1-collars
/// of both the (l+1)- and the (l+2)-interior) carries the ambient wall.
bool satisfies_induct(const TowerBlock& block, const Alphabet& alphabet);
std::vector<Violation> validate_block(const TowerBlock& block, const Alphabet& alphabet);
/// Every preserved lower-stage block is copied unchanged on its domain.
bool preserves_occurrences(const TowerBlock& block, const ConstructionState& prev, const Alphabet& alphabet);

struct FrequencyReport {
    Coord window_cells = 0;
    Coord covered_cells = 0;
    std::map<TileId, Coord> cells;

    Coord uncovered_cells() const noexcept { return window_cells - covered_cells; }
    Coord small_cells() const;
    Coord large_cells() const;
    Coord cells_of(TileId t) const;
    /// Fractions of the window; they sum to one together with uncovered_fraction().
    double window_fraction(TileId t) const;
    double uncovered_fraction() const;
    /// Fractions of covered cells.
    double covered_fraction(TileId t) const;
    double small_fraction() const;
    /// covered_fraction(j) - p_j for j = 1..targets.size().
    std::vector<double> deltas(const TargetDistribution& targets) const;
    double max_abs_delta(const TargetDistribution& targets) const;
};

/// Counts tile cells inside the window.
FrequencyReport measure(const Tiling& t, const Alphabet& alphabet, const Box& window);

struct MsrsCheck {
    double min_target = 0;         // min p_j (countable: over j <= n_1)
    double max_small_fraction = 0; // largest covered fraction of a single small tile
    bool small_below_target = false;
    double large_fraction = 0;
    double large_bound = 0;        // 1 - sum_i 2d l_i / n_i
    bool large_above_bound = false;
};

MsrsCheck check_msrs(const FrequencyReport& report, const TargetDistribution& targets, const StagePlan& plan,
                     const TileSchedule& schedule);

struct Finalized {
    Tiling tiling;
    FrequencyReport report;
    Coord partial_cells = 0; // domain cells under cut tiles; counted as uncovered
};

/// Complete placements inside the top-stage block domains.
Finalized finalize(const ConstructionState& state, const Box& window, const Alphabet& alphabet);

/// Splits `total` proportionally to `weights` by largest remainder; ties in
/// the remainder are broken by a seeded random priority. All-zero weights
/// fall back to `fallback`.
std::vector<Coord> largest_remainder(Coord total, const std::vector<Rational>& weights,
                                     const std::vector<Rational>& fallback, std::uint64_t seed);

/// labels[level - 1][j - 1]: how many large placements of that level become tile j.
using LabelCounts = std::vector<std::vector<Coord>>;

LabelCounts plan_labels(const FrequencyReport& report, const TargetDistribution& targets, const TileSchedule& schedule,
                        std::uint64_t seed);

/// Relabels and subdivides every large placement into small tiles.
Tiling redistribute(const Tiling& t, const TargetDistribution& targets, const FrequencyReport& report,
                    const TileSchedule& schedule, std::uint64_t seed);

struct StageSummary {
    int stage = 0;
    std::size_t towers = 0;
    std::size_t tail_towers = 0;
    Coord error_cells = 0;
    double error_fraction = 0;
    std::size_t good_occurrences = 0;
    double tail_target = 0;
    double tail_realized = 0;
    bool checked = false;
    bool blocks_valid = true;
    bool induct_holds = true;
    bool nesting_holds = true;
};

struct PipelineInput {
    TileSchedule schedule;
    TargetDistribution targets;
    StagePlan plan;
    Box window;
    std::uint64_t seed = 0;
    /// Validate every block word, the collar condition and nesting after each stage.
    bool check_blocks = false;
};

struct PipelineResult {
    std::vector<StageSummary> stages;
    ConstructionState state;
    Finalized raw;    // before redistribution
    MsrsCheck msrs;
    Tiling tiling;    // after redistribution
    FrequencyReport report;
    Rational predicted_bound;
};

/// Stages, finalize, redistribute. Countable plans split towers into main
/// and tail towers from stage 2 on.
PipelineResult run_pipeline(const PipelineInput& in);

/// Seed stream identifiers.
inline constexpr std::uint64_t kTailStream = 1000;
inline constexpr std::uint64_t kRedistributeStream = 0xDEDE;

} // namespace domtile
