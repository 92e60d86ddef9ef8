#include "domtile/tower.hpp"

#include "domtile/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <unordered_map>

namespace domtile {

namespace {

Rational pow_rational(const Rational& base, int e)
{
    Rational r = 1;
    for (int i = 0; i < e; ++i) {
        r *= base;
    }
    return r;
}

Rational quarter_power(int i) { return pow_rational(Rational(1, 4), i); }

// floor(q) + 1: the least integer strictly above q.
Coord least_above(const Rational& q)
{
    using boost::multiprecision::cpp_int;
    cpp_int n = numerator(q);
    cpp_int d = denominator(q);
    cpp_int f = n / d;
    if (n < 0 && f * d != n) {
        f -= 1;
    }
    f += 1;
    if (f > cpp_int(std::numeric_limits<Coord>::max())) {
        return std::numeric_limits<Coord>::max();
    }
    return static_cast<Coord>(f);
}

Coord floor_of(const Rational& q) { return least_above(q) - 1; }

std::string qstr(const Rational& q) { return to_string(q); }

} // namespace

NonpositiveTarget::NonpositiveTarget(std::size_t index_, const Rational& value)
    : PlanError("target p_" + std::to_string(index_) + " = " + to_string(value) + " is not positive"), index(index_)
{
}

TargetSumNotOne::TargetSumNotOne(const Rational& s)
    : PlanError("targets sum to " + to_string(s) + ", not 1"), sum(s)
{
}

Infeasible::Infeasible(std::string constraint_, const std::string& detail)
    : PlanError("infeasible (" + constraint_ + "): " + detail), constraint(std::move(constraint_))
{
}

WindowTooSmall::WindowTooSmall(const Box& window, Coord side)
    : PlanError("window " + window.str() + " cannot hold a tower of side " + std::to_string(side))
{
}

TargetsInfeasible::TargetsInfeasible(TileId tile_, double measured, double target)
    : PlanError("tile " + tile_.str() + " already covers " + std::to_string(measured) + " of the covered cells, above its target " +
                std::to_string(target)),
      tile(tile_)
{
}

TargetDistribution::TargetDistribution(std::vector<Rational> p, Rational tail_mass) : p_(std::move(p)), tail_(std::move(tail_mass))
{
    if (p_.empty()) {
        throw PlanError("empty target list");
    }
    for (std::size_t j = 0; j < p_.size(); ++j) {
        if (p_[j] <= 0) {
            throw NonpositiveTarget(j + 1, p_[j]);
        }
    }
    if (tail_ < 0) {
        throw PlanError("negative tail mass " + to_string(tail_));
    }
    Rational s = tail_;
    for (const Rational& q : p_) {
        s += q;
    }
    if (s != 1) {
        throw TargetSumNotOne(s);
    }
}

TargetDistribution TargetDistribution::parse(const std::vector<std::string>& p, const std::string& tail_mass)
{
    std::vector<Rational> q;
    q.reserve(p.size());
    for (const std::string& s : p) {
        q.push_back(parse_rational(s));
    }
    return TargetDistribution(std::move(q), parse_rational(tail_mass));
}

Rational TargetDistribution::sum(std::size_t from, std::size_t to) const
{
    Rational s = 0;
    for (std::size_t j = std::max<std::size_t>(from, 1); j <= to && j <= p_.size(); ++j) {
        s += p_[j - 1];
    }
    return s;
}

Rational TargetDistribution::mass_beyond(std::size_t n) const { return sum(n + 1, p_.size()) + tail_; }

Rational TargetDistribution::min_prefix(std::size_t n) const
{
    n = std::min(n, p_.size());
    Rational m = p_.front();
    for (std::size_t j = 1; j < n; ++j) {
        m = std::min(m, p_[j]);
    }
    return m;
}

std::string to_string(PlanMode m) { return m == PlanMode::Strict ? "strict" : "relaxed"; }

PlanMode parse_plan_mode(const std::string& s)
{
    if (s == "strict") {
        return PlanMode::Strict;
    }
    if (s == "relaxed") {
        return PlanMode::Relaxed;
    }
    throw PlanError("unknown plan mode '" + s + "'");
}

// ---------------------------------------------------------------- planning

namespace {

template <class T>
void check_override_size(const std::vector<T>& v, int count, const char* what)
{
    if (!v.empty() && static_cast<int>(v.size()) != count) {
        throw PlanError(std::string(what) + ": expected " + std::to_string(count) + " values, got " + std::to_string(v.size()));
    }
}

void check_tail_conditions(const TileSchedule& schedule, const TargetDistribution& targets, const std::vector<Rational>& bound)
{
    const int K = schedule.levels();
    for (int k = 1; k <= K; ++k) {
        Rational beyond = targets.mass_beyond(static_cast<std::size_t>(schedule.cutoff(k)));
        if (!(beyond < bound[static_cast<std::size_t>(k - 1)])) {
            throw Infeasible("tailcontrol", "mass beyond n_" + std::to_string(k) + " is " + qstr(beyond) + ", not below " +
                                                qstr(bound[static_cast<std::size_t>(k - 1)]));
        }
    }
    for (int k = 1; k < K; ++k) {
        auto nk = static_cast<std::size_t>(schedule.cutoff(k));
        auto nk1 = static_cast<std::size_t>(schedule.cutoff(k + 1));
        Rational block = targets.sum(nk, nk1);
        Rational beyond = targets.mass_beyond(nk1);
        if (!(block > beyond)) {
            throw Infeasible("cntgetall", "sum of p_j for n_" + std::to_string(k) + " <= j <= n_" + std::to_string(k + 1) + " is " +
                                              qstr(block) + ", not above " + qstr(beyond));
        }
    }
}

} // namespace

StagePlan plan_stages(const TileSchedule& schedule, const TargetDistribution& targets, int count, PlanMode mode,
                      const PlanOverrides& o)
{
    if (count < 1) {
        throw PlanError("stage count must be positive");
    }
    const bool countable = schedule.levels() > 1;
    if (countable && count != schedule.levels()) {
        throw PlanError("a countable schedule with " + std::to_string(schedule.levels()) + " levels needs exactly that many stages");
    }
    if (targets.size() != schedule.shapes().size()) {
        throw PlanError("got " + std::to_string(targets.size()) + " targets for " + std::to_string(schedule.shapes().size()) +
                        " tiles");
    }
    check_override_size(o.sides, count, "sides");
    check_override_size(o.epsilons, count, "epsilons");
    check_override_size(o.deltas, count, "deltas");
    check_override_size(o.gaps, count, "gaps");
    if (o.tail_masses) {
        check_override_size(*o.tail_masses, count, "tail masses");
    }

    const int d = schedule.dim();
    StagePlan plan;
    plan.mode = mode;
    plan.dim = d;
    plan.countable = countable;
    plan.base_collar = schedule.collar_width(1);

    std::vector<Rational> delta(static_cast<std::size_t>(count));
    for (int i = 1; i <= count; ++i) {
        auto idx = static_cast<std::size_t>(i - 1);
        if (mode == PlanMode::Relaxed && !o.deltas.empty()) {
            delta[idx] = o.deltas[idx];
            if (delta[idx] <= 0) {
                throw Infeasible("epsilon", "delta_" + std::to_string(i) + " must be positive");
            }
        } else {
            delta[idx] = quarter_power(i);
        }
    }

    if (countable) {
        std::vector<Rational> bound(static_cast<std::size_t>(count));
        for (int k = 1; k <= count; ++k) {
            bound[static_cast<std::size_t>(k - 1)] =
                mode == PlanMode::Strict ? pow_rational(Rational(1, 8), k) : delta[static_cast<std::size_t>(k - 1)];
        }
        check_tail_conditions(schedule, targets, bound);
    }

    const Rational min_p = countable ? targets.min_prefix(static_cast<std::size_t>(schedule.cutoff(1))) : targets.min_prefix(targets.size());
    const char* collar_id = countable ? "cntcollar" : "ncond";
    const char* mass_id = countable ? "cntmsr" : "2ncond";

    Coord prev_side = 0;
    Rational mass_used = 0; // sum_{j<i} 2d l_j / n_j
    for (int i = 1; i <= count; ++i) {
        auto idx = static_cast<std::size_t>(i - 1);
        StageParams s;
        s.delta = delta[idx];
        s.gap = o.gaps.empty() ? 0 : o.gaps[idx];
        if (s.gap < 0) {
            throw PlanError("negative gap at stage " + std::to_string(i));
        }
        s.collar = countable ? schedule.collar_width(i) : plan.base_collar;

        if (mode == PlanMode::Strict) {
            s.epsilon = o.epsilons.empty() ? quarter_power(i) / 2 : o.epsilons[idx];
            if (!(s.epsilon > 0 && s.epsilon < quarter_power(i))) {
                throw Infeasible("epsilon", "eps_" + std::to_string(i) + " = " + qstr(s.epsilon) + " is not in (0, " +
                                                qstr(quarter_power(i)) + ")");
            }
        } else {
            s.epsilon = o.epsilons.empty() ? s.delta : o.epsilons[idx];
            if (!(s.epsilon > 0 && s.epsilon <= s.delta)) {
                throw Infeasible("epsilon", "eps_" + std::to_string(i) + " = " + qstr(s.epsilon) + " is not in (0, " +
                                                qstr(s.delta) + "]");
            }
        }

        if (mode == PlanMode::Strict) {
            // 2d(l+2+n_{i-1}) * 4^i < n_i
            Rational collar_term = Rational(2 * d) * Rational(s.collar + 2 + prev_side) / quarter_power(i);
            auto collar_ok = [&](Coord n) { return Rational(n) > collar_term; };
            Rational budget = min_p - mass_used;
            Rational mass_num = Rational(2 * d) * Rational(s.collar);
            auto mass_ok = [&](Coord n) { return mass_num / Rational(n) < budget; };
            if (!o.sides.empty()) {
                s.side = o.sides[idx];
                if (s.side <= 0 || !collar_ok(s.side)) {
                    throw Infeasible(collar_id, "n_" + std::to_string(i) + " = " + std::to_string(s.side) + " does not exceed " +
                                                    qstr(collar_term));
                }
                if (!mass_ok(s.side)) {
                    throw Infeasible(mass_id, "n_" + std::to_string(i) + " = " + std::to_string(s.side) +
                                                  " leaves no room under min p = " + qstr(min_p));
                }
            } else {
                if (budget <= 0) {
                    throw Infeasible(mass_id, "earlier stages already use the whole budget min p = " + qstr(min_p));
                }
                Coord n = std::max(least_above(collar_term), least_above(mass_num / budget));
                n = std::max<Coord>(n, 1);
                // The closed form is exact; the scan guards the boundary cases.
                while (n > 1 && collar_ok(n - 1) && mass_ok(n - 1)) {
                    --n;
                }
                while (!(collar_ok(n) && mass_ok(n)) && n <= o.side_cap) {
                    ++n;
                }
                if (n > o.side_cap) {
                    throw Infeasible(collar_ok(n) ? mass_id : collar_id,
                                     "no n_" + std::to_string(i) + " up to the cap " + std::to_string(o.side_cap));
                }
                s.side = n;
            }
            mass_used += mass_num / Rational(s.side);
        } else {
            Coord least = 2 * (s.collar + 2) + prev_side + 1;
            s.side = o.sides.empty() ? least : o.sides[idx];
            if (s.side < least) {
                throw Infeasible("size", "n_" + std::to_string(i) + " = " + std::to_string(s.side) + " is below 2(l+2)+n_{i-1}+1 = " +
                                             std::to_string(least));
            }
            if (s.side > o.side_cap) {
                throw Infeasible("size", "n_" + std::to_string(i) + " exceeds the cap " + std::to_string(o.side_cap));
            }
        }

        if (o.tail_masses) {
            s.tail_mass = (*o.tail_masses)[idx];
            if (s.tail_mass < 0 || s.tail_mass >= 1) {
                throw PlanError("tail mass at stage " + std::to_string(i) + " must lie in [0, 1)");
            }
        } else if (countable && i >= 2) {
            s.tail_mass = targets.sum(static_cast<std::size_t>(schedule.cutoff(i - 1)) + 1, static_cast<std::size_t>(schedule.cutoff(i)));
        } else {
            s.tail_mass = 0;
        }
        if (i == 1 && s.tail_mass != 0) {
            throw PlanError("stage 1 has no tail towers");
        }

        prev_side = s.side;
        plan.stages.push_back(s);
    }
    return plan;
}

StagePlan plan_stages(const RectFamily& f, const TargetDistribution& targets, int count, PlanMode mode, const PlanOverrides& o)
{
    return plan_stages(TileSchedule(f), targets, count, mode, o);
}

Rational predicted_uncovered_bound(const StagePlan& plan, const TileSchedule& schedule)
{
    const StageParams& top = plan.stages.back();
    const Point& period = plan.countable ? schedule.large_shape(plan.count()) : schedule.large_shape(1);
    Rational inside = 1;
    for (int a = 0; a < plan.dim; ++a) {
        Coord keep = std::max<Coord>(0, top.side - 2 * (top.collar + 1) - 2 * (period[a] - 1));
        inside *= Rational(keep, top.side);
    }
    Rational b = top.epsilon + (1 - inside);
    return std::min(b, Rational(1));
}

Rational inequality_error_bound(const StagePlan& plan)
{
    const StageParams& top = plan.stages.back();
    Coord prev = plan.count() >= 2 ? plan.stages[plan.stages.size() - 2].side : 0;
    return top.epsilon + Rational(2 * plan.dim) * Rational(top.collar + 2 + prev, top.side);
}

Coord usable_cells(int dim, Coord side, Coord collar, const Point& period)
{
    Coord cells = 1;
    for (int a = 0; a < dim; ++a) {
        Coord P = period[a];
        Coord lo = collar + 1;
        Coord hi = side - collar - 1; // exclusive
        if (hi <= lo) {
            return 0;
        }
        Coord first = (lo + P - 1) / P;
        Coord last = hi / P - 1;
        Coord tiles = std::max<Coord>(0, last - first + 1);
        cells *= tiles * P;
    }
    return cells;
}

// ---------------------------------------------------------------- towers

std::size_t StageTowers::tail_count() const
{
    return static_cast<std::size_t>(std::count(tail.begin(), tail.end(), std::uint8_t{1}));
}

double StageTowers::error_fraction() const
{
    Coord v = window.volume();
    return v == 0 ? 0.0 : static_cast<double>(error_cells) / static_cast<double>(v);
}

Region StageTowers::error_region() const
{
    std::vector<std::uint8_t> hit(static_cast<std::size_t>(window.volume()), 0);
    for (std::size_t i = 0; i < anchors.size(); ++i) {
        tower(i).for_each_cell([&](const Point& p) { hit[window.index_of(p)] = 1; });
    }
    std::vector<Point> cells;
    for (std::size_t k = 0; k < hit.size(); ++k) {
        if (!hit[k]) {
            cells.push_back(window.cell_at(k));
        }
    }
    return Region(std::move(cells));
}

StageTowers towers_on_lattice(const Box& window, Coord side, Coord gap, const Point& offset, int stage)
{
    const int d = window.dim();
    if (side <= 0) {
        throw PlanError("tower side must be positive");
    }
    for (int a = 0; a < d; ++a) {
        if (window.shape[a] < side) {
            throw WindowTooSmall(window, side);
        }
    }
    StageTowers t;
    t.stage = stage;
    t.side = side;
    t.gap = gap;
    t.window = window;
    t.offset = offset;
    const Coord step = side + gap;
    std::vector<Coord> count(static_cast<std::size_t>(d));
    std::size_t total = 1;
    for (int a = 0; a < d; ++a) {
        Coord room = window.shape[a] - offset[a] - side;
        count[static_cast<std::size_t>(a)] = room < 0 ? 0 : room / step + 1;
        total *= static_cast<std::size_t>(count[static_cast<std::size_t>(a)]);
    }
    t.anchors.reserve(total);
    if (total > 0) {
        Point idx(d, 0);
        for (std::size_t n = 0; n < total; ++n) {
            Point anchor = window.anchor + offset;
            for (int a = 0; a < d; ++a) {
                anchor[a] += idx[a] * step;
            }
            t.anchors.push_back(anchor);
            for (int a = d - 1; a >= 0; --a) {
                if (++idx[a] < count[static_cast<std::size_t>(a)]) {
                    break;
                }
                idx[a] = 0;
            }
        }
    }
    Coord tower_cells = Point(d, side).product();
    t.error_cells = window.volume() - static_cast<Coord>(total) * tower_cells;
    return t;
}

StageTowers sample_towers(const StagePlan& plan, const Box& window, int stage, std::uint64_t seed)
{
    const StageParams& s = plan.stage(stage);
    Rng rng(derive_seed(seed, static_cast<std::uint64_t>(stage)));
    Point offset(window.dim(), 0);
    for (int a = 0; a < window.dim(); ++a) {
        offset[a] = static_cast<Coord>(rng.below(static_cast<std::uint64_t>(s.side + s.gap)));
    }
    return towers_on_lattice(window, s.side, s.gap, offset, stage);
}

void assign_tails(StageTowers& towers, std::size_t count, std::uint64_t seed)
{
    count = std::min(count, towers.size());
    std::vector<std::size_t> order(towers.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order);
    towers.tail.assign(towers.size(), 0);
    for (std::size_t k = 0; k < count; ++k) {
        towers.tail[order[k]] = 1;
    }
}

// ---------------------------------------------------------------- stages

std::size_t ConstructionState::good_occurrences() const
{
    std::size_t n = 0;
    for (const TowerBlock& b : blocks) {
        n += b.good.size();
    }
    return n;
}

const TowerBlock* ConstructionState::block_at(const Point& tower_anchor) const
{
    auto it = std::lower_bound(blocks.begin(), blocks.end(), tower_anchor,
                               [](const TowerBlock& b, const Point& p) { return b.tower.anchor < p; });
    if (it == blocks.end() || it->tower.anchor != tower_anchor) {
        return nullptr;
    }
    return &*it;
}

SymbolicWord ConstructionState::word(const Alphabet& alphabet, const Box& window) const
{
    SymbolicWord out(window);
    for (const TowerBlock& b : blocks) {
        if (b.domain.intersects(window)) {
            encode_into(b.patch(), alphabet, window, out);
        }
    }
    return out;
}

namespace {

// Ambient wall tiles meeting the domain, minus those lying in a hole.
std::vector<Placement> ambient_outside_holes(const BrickWall& wall, const Box& domain, const std::vector<Box>& holes)
{
    const int d = domain.dim();
    std::vector<Placement> tiles = wall.tiles_meeting(domain);
    if (holes.empty() || tiles.empty()) {
        return tiles;
    }
    // tiles_meeting enumerates a grid; index it by tile coordinates.
    const Point first = tiles.front().anchor;
    const Point& P = wall.period();
    Point count(d, 0);
    for (int a = 0; a < d; ++a) {
        count[a] = (tiles.back().anchor[a] - first[a]) / P[a] + 1;
    }
    Box grid(Point(d, 0), count);
    std::vector<std::uint8_t> in_hole(static_cast<std::size_t>(grid.volume()), 0);
    for (const Box& h : holes) {
        Point lo(d, 0);
        Point hi(d, 0);
        for (int a = 0; a < d; ++a) {
            lo[a] = std::max<Coord>(0, floor_div(h.anchor[a] - first[a], P[a]));
            hi[a] = std::min<Coord>(count[a], floor_div(h.anchor[a] + h.shape[a] - 1 - first[a], P[a]) + 1);
            if (hi[a] <= lo[a]) {
                lo = hi; // empty
                break;
            }
        }
        if (lo == hi) {
            continue;
        }
        Box::from_bounds(lo, hi).for_each_cell([&](const Point& g) { in_hole[grid.index_of(g)] = 1; });
    }
    std::vector<Placement> out;
    out.reserve(tiles.size());
    for (const Placement& p : tiles) {
        Point g(d, 0);
        for (int a = 0; a < d; ++a) {
            g[a] = (p.anchor[a] - first[a]) / P[a];
        }
        if (!in_hole[grid.index_of(g)]) {
            out.push_back(p);
        }
    }
    return out;
}

TowerBlock make_block(const Box& tower, BlockKind kind, int level, Coord collar, const TileSchedule& schedule)
{
    TowerBlock b;
    b.tower = tower;
    auto dom = interior(tower, collar + 1);
    if (!dom) {
        throw PlanError("tower side " + std::to_string(tower.shape[0]) + " leaves no interior for collar " + std::to_string(collar));
    }
    b.domain = *dom;
    b.kind = kind;
    b.level = level;
    b.ambient = schedule.wall(level, tower.anchor);
    return b;
}

} // namespace

ConstructionState build_stage(const ConstructionState& prev, const StageTowers& towers, const TileSchedule& schedule,
                              const StagePlan& plan)
{
    const int i = towers.stage;
    if (i != prev.stage + 1) {
        throw std::logic_error("build_stage: stage " + std::to_string(i) + " after stage " + std::to_string(prev.stage));
    }
    const int d = towers.window.dim();
    const Coord main_collar = plan.base_collar;
    const Alphabet alphabet = schedule.alphabet();

    ConstructionState next;
    next.stage = i;
    next.blocks.reserve(towers.size());
    for (std::size_t t = 0; t < towers.size(); ++t) {
        if (towers.is_tail(t)) {
            if (!plan.countable || i > schedule.levels()) {
                throw std::logic_error("tail tower outside a countable run");
            }
            next.blocks.push_back(make_block(towers.tower(t), BlockKind::Tail, i, schedule.collar_width(i), schedule));
        } else {
            next.blocks.push_back(make_block(towers.tower(t), BlockKind::Main, 1, main_collar, schedule));
        }
    }

    // Good occurrences: previous tower anchors b with b - a in the
    // (l + 2 + n_{i-1})-interior of R_{n_i}, for main towers only.
    std::vector<std::vector<const TowerBlock*>> good(towers.size());
    if (i > 1 && !prev.blocks.empty()) {
        const Coord n_prev = plan.stage(i - 1).side;
        const Coord margin = main_collar + 2 + n_prev;
        const Coord step = towers.side + towers.gap;
        std::unordered_map<Point, std::size_t, PointHash> by_cell;
        by_cell.reserve(towers.size() * 2);
        auto cell_of = [&](const Point& p) {
            Point c(d, 0);
            for (int a = 0; a < d; ++a) {
                c[a] = floor_div(p[a] - towers.window.anchor[a] - towers.offset[a], step);
            }
            return c;
        };
        for (std::size_t t = 0; t < towers.size(); ++t) {
            by_cell.emplace(cell_of(towers.anchors[t]), t);
        }
        for (const TowerBlock& pb : prev.blocks) {
            auto it = by_cell.find(cell_of(pb.tower.anchor));
            if (it == by_cell.end() || towers.is_tail(it->second)) {
                continue;
            }
            const Point& a = towers.anchors[it->second];
            bool inside = true;
            for (int ax = 0; ax < d && inside; ++ax) {
                Coord rel = pb.tower.anchor[ax] - a[ax];
                inside = rel >= margin && rel <= towers.side - 1 - margin;
            }
            if (inside) {
                good[it->second].push_back(&pb);
            }
        }
    }

    for (std::size_t t = 0; t < towers.size(); ++t) {
        TowerBlock& b = next.blocks[t];
        std::vector<Placement> placed;
        for (const TowerBlock* pb : good[t]) {
            FilledWord fw = glue(pb->patch(), b.ambient, schedule.base(), alphabet);
            if (!(fw.inner_wall() == pb->ambient)) {
                throw std::logic_error("glued occurrence at " + pb->tower.anchor.str() + " does not carry its own ambient wall");
            }
            const Box& hole = fw.outer_hole();
            if (!b.domain.contains(hole) || !pb->tower.contains(hole)) {
                throw std::logic_error("filling hole " + hole.str() + " leaves its tower");
            }
            std::vector<Placement> inner = fw.placements_meeting(hole, alphabet);
            placed.insert(placed.end(), inner.begin(), inner.end());
            b.good.push_back(pb->tower.anchor);
            b.holes.push_back(hole);
        }
        std::vector<Placement> amb = ambient_outside_holes(b.ambient, b.domain, b.holes);
        placed.insert(placed.end(), amb.begin(), amb.end());
        std::sort(placed.begin(), placed.end());
        b.placements = std::move(placed);
    }
    return next;
}

bool satisfies_induct(const TowerBlock& block, const Alphabet& alphabet)
{
    SymbolicWord w = encode(block.patch(), alphabet);
    Region ring = inner_collar(block.domain, 2);
    for (const Point& p : ring) {
        const Symbol* s = w.find(p);
        if (!s || *s != block.ambient.at(p)) {
            return false;
        }
    }
    return true;
}

std::vector<Violation> validate_block(const TowerBlock& block, const Alphabet& alphabet)
{
    return validate_word(encode(block.patch(), alphabet), alphabet);
}

bool preserves_occurrences(const TowerBlock& block, const ConstructionState& prev, const Alphabet& alphabet)
{
    if (block.good.empty()) {
        return true;
    }
    SymbolicWord w = encode(block.patch(), alphabet);
    for (const Point& g : block.good) {
        const TowerBlock* pb = prev.block_at(g);
        if (!pb) {
            return false;
        }
        SymbolicWord before = encode(pb->patch(), alphabet);
        if (!(w.restricted(pb->domain) == before)) {
            return false;
        }
    }
    return true;
}

// ---------------------------------------------------------------- reports

Coord FrequencyReport::cells_of(TileId t) const
{
    auto it = cells.find(t);
    return it == cells.end() ? 0 : it->second;
}

Coord FrequencyReport::small_cells() const
{
    Coord n = 0;
    for (const auto& [t, c] : cells) {
        if (t.is_small()) {
            n += c;
        }
    }
    return n;
}

Coord FrequencyReport::large_cells() const
{
    Coord n = 0;
    for (const auto& [t, c] : cells) {
        if (t.is_large()) {
            n += c;
        }
    }
    return n;
}

double FrequencyReport::window_fraction(TileId t) const
{
    return window_cells == 0 ? 0.0 : static_cast<double>(cells_of(t)) / static_cast<double>(window_cells);
}

double FrequencyReport::uncovered_fraction() const
{
    return window_cells == 0 ? 0.0 : static_cast<double>(uncovered_cells()) / static_cast<double>(window_cells);
}

double FrequencyReport::covered_fraction(TileId t) const
{
    return covered_cells == 0 ? 0.0 : static_cast<double>(cells_of(t)) / static_cast<double>(covered_cells);
}

double FrequencyReport::small_fraction() const
{
    return covered_cells == 0 ? 0.0 : static_cast<double>(small_cells()) / static_cast<double>(covered_cells);
}

std::vector<double> FrequencyReport::deltas(const TargetDistribution& targets) const
{
    std::vector<double> out;
    for (std::size_t j = 1; j <= targets.size(); ++j) {
        out.push_back(covered_fraction(TileId::small(static_cast<int>(j))) - to_double(targets.p(j)));
    }
    return out;
}

double FrequencyReport::max_abs_delta(const TargetDistribution& targets) const
{
    double m = 0;
    for (double x : deltas(targets)) {
        m = std::max(m, std::abs(x));
    }
    return m;
}

FrequencyReport measure(const Tiling& t, const Alphabet& alphabet, const Box& window)
{
    FrequencyReport r;
    r.window_cells = window.volume();
    for (TileId id : alphabet.tiles()) {
        r.cells[id] = 0;
    }
    for (const Placement& p : t.placements) {
        auto part = placement_box(p, alphabet).intersection(window);
        if (part) {
            r.cells[p.tile] += part->volume();
            r.covered_cells += part->volume();
        }
    }
    return r;
}

MsrsCheck check_msrs(const FrequencyReport& report, const TargetDistribution& targets, const StagePlan& plan,
                     const TileSchedule& schedule)
{
    MsrsCheck c;
    std::size_t n = plan.countable ? static_cast<std::size_t>(schedule.cutoff(1)) : targets.size();
    c.min_target = to_double(targets.min_prefix(n));
    for (const auto& [t, cells] : report.cells) {
        if (t.is_small()) {
            c.max_small_fraction = std::max(c.max_small_fraction, report.covered_fraction(t));
        }
    }
    c.small_below_target = c.max_small_fraction < c.min_target;
    c.large_fraction = report.covered_cells == 0
                           ? 0.0
                           : static_cast<double>(report.large_cells()) / static_cast<double>(report.covered_cells);
    Rational used = 0;
    for (const StageParams& s : plan.stages) {
        used += Rational(2 * plan.dim) * Rational(s.collar, s.side);
    }
    c.large_bound = to_double(1 - used);
    c.large_above_bound = c.large_fraction > c.large_bound;
    return c;
}

Finalized finalize(const ConstructionState& state, const Box& window, const Alphabet& alphabet)
{
    Finalized f;
    f.tiling.dim = window.dim();
    Coord domain_cells = 0;
    Coord whole_cells = 0;
    for (const TowerBlock& b : state.blocks) {
        auto dom = b.domain.intersection(window);
        if (!dom) {
            continue;
        }
        domain_cells += dom->volume();
        for (const Placement& p : b.placements) {
            Box pb = placement_box(p, alphabet);
            if (dom->contains(pb)) {
                f.tiling.placements.push_back(p);
                whole_cells += pb.volume();
            }
        }
    }
    f.tiling.canonicalize();
    f.partial_cells = domain_cells - whole_cells;
    f.report = measure(f.tiling, alphabet, window);
    return f;
}

// ---------------------------------------------------------------- redistribution

std::vector<Coord> largest_remainder(Coord total, const std::vector<Rational>& weights, const std::vector<Rational>& fallback,
                                     std::uint64_t seed)
{
    const std::size_t m = weights.size();
    std::vector<Coord> out(m, 0);
    if (total <= 0 || m == 0) {
        return out;
    }
    Rational sum = 0;
    for (const Rational& w : weights) {
        sum += w;
    }
    const std::vector<Rational>* w = &weights;
    if (sum <= 0) {
        w = &fallback;
        sum = 0;
        for (const Rational& q : fallback) {
            sum += q;
        }
        if (sum <= 0) {
            throw std::logic_error("largest_remainder: no positive weight");
        }
    }
    std::vector<Rational> frac(m);
    Coord assigned = 0;
    for (std::size_t j = 0; j < m; ++j) {
        Rational q = Rational(total) * (*w)[j] / sum;
        Coord fl = floor_of(q);
        out[j] = fl;
        frac[j] = q - Rational(fl);
        assigned += fl;
    }
    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    Rng rng(seed);
    rng.shuffle(order); // random priority among equal remainders
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return frac[a] > frac[b]; });
    for (std::size_t k = 0; assigned < total; ++k) {
        std::size_t j = order[k % m];
        if ((*w)[j] > 0) {
            ++out[j];
            ++assigned;
        }
    }
    return out;
}

LabelCounts plan_labels(const FrequencyReport& report, const TargetDistribution& targets, const TileSchedule& schedule,
                        std::uint64_t seed)
{
    const int K = schedule.levels();
    const auto k_tiles = static_cast<std::size_t>(schedule.cutoff(K));
    if (targets.size() != k_tiles) {
        throw PlanError("got " + std::to_string(targets.size()) + " targets for " + std::to_string(k_tiles) + " tiles");
    }
    const Rational covered(report.covered_cells);
    std::vector<Rational> current(k_tiles);
    for (std::size_t j = 1; j <= k_tiles; ++j) {
        TileId id = TileId::small(static_cast<int>(j));
        current[j - 1] = Rational(report.cells_of(id));
        Rational goal = targets.p(j) * covered;
        if (current[j - 1] > goal) {
            throw TargetsInfeasible(id, report.covered_fraction(id), to_double(targets.p(j)));
        }
    }
    LabelCounts labels(static_cast<std::size_t>(K), std::vector<Coord>(k_tiles, 0));
    // Top level first: tiles only a level-k domino can hold take it before
    // the lower levels are spent on tiles 1..n_1.
    for (int k = K; k >= 1; --k) {
        const Coord N = report.cells_of(TileId::large(k)) / schedule.large_shape(k).product();
        if (N == 0) {
            continue;
        }
        const Rational mass(schedule.large_shape(k).product());
        const auto nk = static_cast<std::size_t>(schedule.cutoff(k));
        const auto nlow = k == 1 ? std::size_t{0} : static_cast<std::size_t>(schedule.cutoff(k - 1));
        std::vector<Rational> deficit(nk), prior(nk);
        for (std::size_t j = 0; j < nk; ++j) {
            deficit[j] = std::max(Rational(0), Rational(targets.p(j + 1) * covered - current[j]));
            prior[j] = targets.p(j + 1);
        }
        std::vector<Coord> counts(nk, 0);
        const std::uint64_t level_seed = derive_seed(seed, static_cast<std::uint64_t>(k));
        if (k == 1) {
            counts = largest_remainder(N, deficit, prior, level_seed);
        } else {
            std::vector<Rational> top(deficit.begin() + static_cast<std::ptrdiff_t>(nlow), deficit.end());
            std::vector<Rational> top_prior(prior.begin() + static_cast<std::ptrdiff_t>(nlow), prior.end());
            Rational demand = 0;
            for (const Rational& q : top) {
                demand += q;
            }
            Rational want = demand / mass;
            Coord n_top = std::clamp<Coord>(floor_of(want + Rational(1, 2)), 0, N);
            if (demand > 0 || nlow == 0) {
                std::vector<Coord> c = largest_remainder(n_top, top, top_prior, level_seed);
                for (std::size_t j = 0; j < c.size(); ++j) {
                    counts[nlow + j] = c[j];
                }
            } else {
                n_top = 0;
            }
            std::vector<Rational> low(deficit.begin(), deficit.begin() + static_cast<std::ptrdiff_t>(nlow));
            std::vector<Rational> low_prior(prior.begin(), prior.begin() + static_cast<std::ptrdiff_t>(nlow));
            std::vector<Coord> c = largest_remainder(N - n_top, low, low_prior, derive_seed(level_seed, 1));
            for (std::size_t j = 0; j < c.size(); ++j) {
                counts[j] = c[j];
            }
        }
        for (std::size_t j = 0; j < nk; ++j) {
            labels[static_cast<std::size_t>(k - 1)][j] = counts[j];
            current[j] += Rational(counts[j]) * mass;
        }
    }
    return labels;
}

Tiling redistribute(const Tiling& t, const TargetDistribution& targets, const FrequencyReport& report, const TileSchedule& schedule,
                    std::uint64_t seed)
{
    const int K = schedule.levels();
    const int d = schedule.dim();
    LabelCounts labels = plan_labels(report, targets, schedule, seed);

    Tiling out;
    out.dim = t.dim;
    std::vector<std::vector<Point>> large(static_cast<std::size_t>(K));
    for (const Placement& p : t.placements) {
        if (p.tile.is_large()) {
            if (p.tile.index() > K) {
                throw UnknownTile(p.tile);
            }
            large[static_cast<std::size_t>(p.tile.index() - 1)].push_back(p.anchor);
        } else {
            out.placements.push_back(p);
        }
    }
    for (int k = 1; k <= K; ++k) {
        std::vector<Point>& anchors = large[static_cast<std::size_t>(k - 1)];
        std::sort(anchors.begin(), anchors.end());
        const std::vector<Coord>& counts = labels[static_cast<std::size_t>(k - 1)];
        Coord planned = std::accumulate(counts.begin(), counts.end(), Coord{0});
        if (planned != static_cast<Coord>(anchors.size())) {
            throw std::logic_error("redistribute: report does not match the tiling's level-" + std::to_string(k) + " dominoes");
        }
        Rng rng(derive_seed(seed, 100 + static_cast<std::uint64_t>(k)));
        rng.shuffle(anchors);
        const Point& W = schedule.large_shape(k);
        std::size_t next = 0;
        for (std::size_t j = 0; j < counts.size(); ++j) {
            const Point& w = schedule.shapes()[j];
            Point grid(d, 0);
            for (int a = 0; a < d; ++a) {
                grid[a] = W[a] / w[a];
            }
            const Box g(Point(d, 0), grid);
            for (Coord c = 0; c < counts[j]; ++c, ++next) {
                const Point& base = anchors[next];
                g.for_each_cell([&](const Point& m) {
                    Point a = base;
                    for (int ax = 0; ax < d; ++ax) {
                        a[ax] += m[ax] * w[ax];
                    }
                    out.placements.push_back(Placement{TileId::small(static_cast<int>(j + 1)), a});
                });
            }
        }
    }
    out.canonicalize();
    return out;
}

// ---------------------------------------------------------------- pipeline

PipelineResult run_pipeline(const PipelineInput& in)
{
    const TileSchedule& schedule = in.schedule;
    const StagePlan& plan = in.plan;
    const Alphabet alphabet = schedule.alphabet();
    const int d = schedule.dim();
    if (in.window.dim() != d) {
        throw PlanError("window dimension does not match the tile family");
    }

    PipelineResult r;
    ConstructionState state;
    for (int i = 1; i <= plan.count(); ++i) {
        StageTowers towers = sample_towers(plan, in.window, i, in.seed);
        const StageParams& s = plan.stage(i);
        StageSummary sum;
        sum.stage = i;
        sum.tail_target = to_double(s.tail_mass);
        if (plan.countable && i >= 2 && s.tail_mass > 0) {
            // Match the tail share of usable cells to the target, to the nearest tower.
            const double u_main = static_cast<double>(usable_cells(d, s.side, plan.base_collar, schedule.large_shape(1)));
            const double u_tail = static_cast<double>(usable_cells(d, s.side, schedule.collar_width(i), schedule.large_shape(i)));
            const double N = static_cast<double>(towers.size());
            const double q = to_double(s.tail_mass);
            double t = u_tail * (1 - q) + q * u_main > 0 ? q * N * u_main / (u_tail * (1 - q) + q * u_main) : 0.0;
            auto count = static_cast<std::size_t>(std::llround(t));
            assign_tails(towers, count, derive_seed(in.seed, kTailStream + static_cast<std::uint64_t>(i)));
            const double tc = static_cast<double>(towers.tail_count());
            const double denom = tc * u_tail + (N - tc) * u_main;
            sum.tail_realized = denom > 0 ? tc * u_tail / denom : 0.0;
        }
        sum.towers = towers.size();
        sum.tail_towers = towers.tail_count();
        sum.error_cells = towers.error_cells;
        sum.error_fraction = towers.error_fraction();

        ConstructionState next = build_stage(state, towers, schedule, plan);
        sum.good_occurrences = next.good_occurrences();
        if (in.check_blocks) {
            sum.checked = true;
            for (const TowerBlock& b : next.blocks) {
                sum.blocks_valid = sum.blocks_valid && validate_block(b, alphabet).empty();
                sum.induct_holds = sum.induct_holds && satisfies_induct(b, alphabet);
                sum.nesting_holds = sum.nesting_holds && preserves_occurrences(b, state, alphabet);
            }
        }
        r.stages.push_back(sum);
        state = std::move(next);
    }
    r.raw = finalize(state, in.window, alphabet);
    r.msrs = check_msrs(r.raw.report, in.targets, plan, schedule);
    r.tiling = redistribute(r.raw.tiling, in.targets, r.raw.report, schedule, derive_seed(in.seed, kRedistributeStream));
    r.report = measure(r.tiling, alphabet, in.window);
    r.predicted_bound = predicted_uncovered_bound(plan, schedule);
    r.state = std::move(state);
    return r;
}

} // namespace domtile
