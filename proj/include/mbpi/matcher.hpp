#pragma once

#include <optional>
#include <utility>
#include <vector>

#include "mbpi/components.hpp"
#include "mbpi/grid_map.hpp"

namespace mbpi {

// An unordered pair of obstacle cells whose connecting segment may span a
// passage. Stored canonically with a < b (lexicographic on (row, col)) so
// duplicates collapse; distance is the Euclidean cell-center distance.
struct ObstacleMatch {
    CellCoord a;
    CellCoord b;
    double distance = 0.0;

    static ObstacleMatch make(CellCoord u, CellCoord v);

    friend bool operator==(const ObstacleMatch& lhs, const ObstacleMatch& rhs) {
        return lhs.a == rhs.a && lhs.b == rhs.b;
    }
    friend auto operator<=>(const ObstacleMatch& lhs, const ObstacleMatch& rhs) {
        if (auto c = lhs.a <=> rhs.a; c != 0) return c;
        return lhs.b <=> rhs.b;
    }
};

struct MatcherConfig {
    // Matches longer than this fraction of the map's short side are dropped;
    // anything wider is not worth treating as a narrow passage.
    double max_distance_fraction = 0.05;

    double max_distance(int map_short_side) const {
        return max_distance_fraction * map_short_side;
    }
};

// Nearest border cell belonging to a component other than the one `unit`
// lies in, minimizing Euclidean distance with ties broken toward the
// smallest (row, col). Returns nullopt when no other component exists.
std::optional<std::pair<CellCoord, double>> nearest_in_other_components(
    CellCoord unit, const ComponentLabeling& labeling,
    const std::vector<std::vector<CellCoord>>& borders);

// Matches between distinct obstacle components: every border cell is paired
// with its nearest border cell in any other component, pairs farther than
// cfg.max_distance(grid.short_side()) are dropped, and the survivors are
// canonicalized, deduplicated and sorted.
std::vector<ObstacleMatch> foreign_matcher(const ComponentLabeling& labeling,
                                           const OccupancyGrid& grid,
                                           const MatcherConfig& cfg);

// Same pairing over caller-supplied disjoint cell groups of `grid` (used on
// parts extracted from a single component); max_distance is absolute, in
// cells of the map the threshold was derived from.
std::vector<ObstacleMatch> match_between_groups(const std::vector<std::vector<CellCoord>>& groups,
                                                const OccupancyGrid& grid,
                                                double max_distance);

// Convex hull of cell centers, counterclockwise in (x=col, y=row) axes with
// strictly convex corners only. Degenerate inputs collapse: one point stays
// a point, collinear input becomes its two extreme points.
std::vector<CellCoord> convex_hull(std::vector<CellCoord> points);

struct PointSeparation {
    std::vector<CellCoord> inside;   // on or within the hull boundary
    std::vector<CellCoord> outside;
};

PointSeparation separate_points(const std::vector<CellCoord>& component_cells,
                                const std::vector<CellCoord>& hull);

struct SelfMatchStats {
    int max_depth = 0;           // 1 = no recursion happened
    int nested_match_count = 0;  // matches emitted while processing extracted parts
};

// Matches within a single component, found by cropping it onto its own map,
// taking the convex hull of each free-space component there, splitting the
// component cells into inside/outside sets, matching the extracted inside
// parts against each other and against the outside, then recursing into each
// part. Extracted parts are always proper subsets, so recursion terminates.
// `map_short_side` is the short side of the original map: the match length
// threshold stays global no matter how small the crops get.
std::vector<ObstacleMatch> self_matcher(const std::vector<CellCoord>& component_cells,
                                        const MatcherConfig& cfg, int map_short_side,
                                        SelfMatchStats* stats = nullptr);

}  // namespace mbpi
