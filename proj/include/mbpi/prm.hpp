#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

#include "mbpi/grid_map.hpp"
#include "mbpi/sampler.hpp"

namespace mbpi {

struct PrmConfig {
    int k_neighbors = 10;
    int batch_size = 20;
    int max_milestones = 50000;        // sampled milestones, start/goal excluded
    double local_step = 0.0;           // probe spacing in meters; 0 = half a cell
    long long max_attempts_per_batch = 100000;
};

// Straight-segment collision test: probe points spaced at most `local_step`
// apart (endpoints always included) must all fall in free in-bounds cells.
bool segment_valid(WorldPoint a, WorldPoint b, const OccupancyGrid& grid, double local_step);

// Undirected milestone graph with a union-find over its connectivity.
class Roadmap {
public:
    int add_milestone(WorldPoint p);
    void add_edge(int a, int b, double weight);

    int size() const { return static_cast<int>(milestones_.size()); }
    WorldPoint milestone(int id) const { return milestones_[id]; }
    const std::vector<WorldPoint>& milestones() const { return milestones_; }
    const std::vector<std::pair<int, double>>& neighbors(int id) const { return adjacency_[id]; }
    bool same_component(int a, int b) const { return find(a) == find(b); }

private:
    int find(int v) const;

    std::vector<WorldPoint> milestones_;
    std::vector<std::vector<std::pair<int, double>>> adjacency_;
    mutable std::vector<int> parent_;  // union-find with path compression
};

struct PlanResult {
    std::vector<WorldPoint> path;  // empty when no path was found
    double planning_time_s = 0.0;
    int milestone_count = 0;       // includes start and goal
    double path_length_m = std::numeric_limits<double>::infinity();

    bool success() const { return !path.empty(); }
};

struct BuildOutcome {
    Roadmap roadmap;
    PlanResult result;
    std::vector<int> path_ids;
};

// Grows a roadmap in batches until start and goal share a component or the
// milestone budget runs out, then answers the query. Start and goal become
// milestones 0 and 1. planning_time_s covers growth and query only; passage
// identification happens before this call and is timed by the caller.
// Throws std::invalid_argument when start or goal lies outside the map or in
// an Occupied cell.
BuildOutcome build_roadmap(const OccupancyGrid& grid, MilestoneSampler& sampler,
                           const PrmConfig& cfg, WorldPoint start, WorldPoint goal,
                           RngStream& rng);

// Shortest milestone path by A* with a straight-line heuristic (edge weights
// are Euclidean, so the heuristic is admissible). nullopt when start and goal
// are in different components.
std::optional<std::vector<int>> query(const Roadmap& roadmap, int start_id, int goal_id);

// Line-oriented dump: milestone table, edge list, then path milestone ids.
void export_roadmap(const Roadmap& roadmap, const std::vector<int>& path_ids, std::ostream& out);

double resolved_local_step(const OccupancyGrid& grid, const PrmConfig& cfg);

}  // namespace mbpi
