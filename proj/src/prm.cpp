#include "mbpi/prm.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>
#include <queue>
#include <stdexcept>

namespace mbpi {

bool segment_valid(WorldPoint a, WorldPoint b, const OccupancyGrid& grid, double local_step) {
    if (local_step <= 0.0) {
        throw std::invalid_argument("segment_valid: local_step must be positive");
    }
    const double length = distance(a, b);
    const int steps = std::max(1, static_cast<int>(std::ceil(length / local_step)));
    for (int i = 0; i <= steps; ++i) {
        const double t = static_cast<double>(i) / steps;
        const WorldPoint p{a.x + (b.x - a.x) * t, a.y + (b.y - a.y) * t};
        const auto cell = world_to_cell(grid, p);
        if (!cell || !grid.is_free(*cell)) return false;
    }
    return true;
}

int Roadmap::add_milestone(WorldPoint p) {
    const int id = static_cast<int>(milestones_.size());
    milestones_.push_back(p);
    adjacency_.emplace_back();
    parent_.push_back(id);
    return id;
}

void Roadmap::add_edge(int a, int b, double weight) {
    adjacency_[a].emplace_back(b, weight);
    adjacency_[b].emplace_back(a, weight);
    const int ra = find(a);
    const int rb = find(b);
    if (ra != rb) parent_[ra] = rb;
}

int Roadmap::find(int v) const {
    while (parent_[v] != v) {
        parent_[v] = parent_[parent_[v]];
        v = parent_[v];
    }
    return v;
}

double resolved_local_step(const OccupancyGrid& grid, const PrmConfig& cfg) {
    return cfg.local_step > 0.0 ? cfg.local_step : 0.5 * grid.resolution;
}

namespace {

// Connect a fresh milestone to its k nearest predecessors. Ties break on the
// lower id so growth is reproducible.
void connect_new_milestone(Roadmap& map, int id, int k_neighbors, const OccupancyGrid& grid,
                           double local_step) {
    const WorldPoint p = map.milestone(id);
    std::vector<std::pair<double, int>> candidates;
    candidates.reserve(id);
    for (int other = 0; other < id; ++other) {
        candidates.emplace_back(distance(p, map.milestone(other)), other);
    }
    const std::size_t keep = std::min<std::size_t>(k_neighbors, candidates.size());
    std::partial_sort(candidates.begin(), candidates.begin() + keep, candidates.end());
    for (std::size_t i = 0; i < keep; ++i) {
        const auto [dist_to, other] = candidates[i];
        if (segment_valid(p, map.milestone(other), grid, local_step)) {
            map.add_edge(id, other, dist_to);
        }
    }
}

}  // namespace

BuildOutcome build_roadmap(const OccupancyGrid& grid, MilestoneSampler& sampler,
                           const PrmConfig& cfg, WorldPoint start, WorldPoint goal,
                           RngStream& rng) {
    const auto t0 = std::chrono::steady_clock::now();

    const auto start_cell = world_to_cell(grid, start);
    const auto goal_cell = world_to_cell(grid, goal);
    if (!start_cell || !grid.is_free(*start_cell)) {
        throw std::invalid_argument("build_roadmap: start is outside the map or in an obstacle");
    }
    if (!goal_cell || !grid.is_free(*goal_cell)) {
        throw std::invalid_argument("build_roadmap: goal is outside the map or in an obstacle");
    }

    const double local_step = resolved_local_step(grid, cfg);
    BuildOutcome out;
    Roadmap& map = out.roadmap;
    const int start_id = map.add_milestone(start);
    const int goal_id = map.add_milestone(goal);
    connect_new_milestone(map, goal_id, cfg.k_neighbors, grid, local_step);

    int sampled = 0;
    bool attempts_exhausted = false;
    while (!map.same_component(start_id, goal_id) && sampled < cfg.max_milestones &&
           !attempts_exhausted) {
        const int batch = std::min(cfg.batch_size, cfg.max_milestones - sampled);
        long long attempts = 0;
        int accepted = 0;
        while (accepted < batch) {
            if (++attempts > cfg.max_attempts_per_batch) {
                attempts_exhausted = true;
                break;
            }
            const auto p = sampler.try_sample(rng);
            if (!p) continue;
            const int id = map.add_milestone(*p);
            connect_new_milestone(map, id, cfg.k_neighbors, grid, local_step);
            ++accepted;
        }
        sampled += accepted;
    }

    PlanResult& result = out.result;
    if (start == goal) {
        out.path_ids = {start_id};
        result.path = {start};
        result.path_length_m = 0.0;
    } else if (map.same_component(start_id, goal_id)) {
        const auto ids = query(map, start_id, goal_id);
        if (!ids) {
            throw std::logic_error("build_roadmap: connected components but query failed");
        }
        out.path_ids = *ids;
        double length = 0.0;
        for (std::size_t i = 0; i < ids->size(); ++i) {
            result.path.push_back(map.milestone((*ids)[i]));
            if (i > 0) length += distance(result.path[i - 1], result.path[i]);
        }
        result.path_length_m = length;
    }
    result.milestone_count = map.size();
    result.planning_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return out;
}

std::optional<std::vector<int>> query(const Roadmap& roadmap, int start_id, int goal_id) {
    if (!roadmap.same_component(start_id, goal_id)) return std::nullopt;

    const int n = roadmap.size();
    constexpr double kInf = std::numeric_limits<double>::infinity();
    std::vector<double> g(n, kInf);
    std::vector<int> parent(n, -1);
    std::vector<char> closed(n, 0);
    const WorldPoint goal_p = roadmap.milestone(goal_id);

    // (f, node): the id tie-break keeps expansion order deterministic.
    using Entry = std::pair<double, int>;
    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    g[start_id] = 0.0;
    open.emplace(distance(roadmap.milestone(start_id), goal_p), start_id);

    while (!open.empty()) {
        const auto [f, node] = open.top();
        open.pop();
        if (closed[node]) continue;
        closed[node] = 1;
        if (node == goal_id) break;
        for (const auto& [next, weight] : roadmap.neighbors(node)) {
            if (closed[next]) continue;
            const double cand = g[node] + weight;
            if (cand < g[next]) {
                g[next] = cand;
                parent[next] = node;
                open.emplace(cand + distance(roadmap.milestone(next), goal_p), next);
            }
        }
    }
    if (g[goal_id] == kInf) return std::nullopt;

    std::vector<int> path;
    for (int v = goal_id; v != -1; v = parent[v]) path.push_back(v);
    std::reverse(path.begin(), path.end());
    return path;
}

void export_roadmap(const Roadmap& roadmap, const std::vector<int>& path_ids, std::ostream& out) {
    char buf[96];
    out << "milestones " << roadmap.size() << "\n";
    for (int id = 0; id < roadmap.size(); ++id) {
        const WorldPoint p = roadmap.milestone(id);
        std::snprintf(buf, sizeof(buf), "%d %.9f %.9f\n", id, p.x, p.y);
        out << buf;
    }
    std::size_t edge_count = 0;
    for (int id = 0; id < roadmap.size(); ++id) {
        for (const auto& [other, weight] : roadmap.neighbors(id)) {
            if (id < other) ++edge_count;
        }
    }
    out << "edges " << edge_count << "\n";
    for (int id = 0; id < roadmap.size(); ++id) {
        for (const auto& [other, weight] : roadmap.neighbors(id)) {
            if (id < other) {
                std::snprintf(buf, sizeof(buf), "%d %d %.9f\n", id, other, weight);
                out << buf;
            }
        }
    }
    out << "path " << path_ids.size() << "\n";
    for (const int id : path_ids) out << id << "\n";
}

}  // namespace mbpi
