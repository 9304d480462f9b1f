#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <set>
#include <vector>

#include "mbpi/components.hpp"
#include "mbpi/matcher.hpp"
#include "support/fixtures.hpp"

using namespace mbpi;
using testsupport::grid_from_ascii;

namespace {

double cell_distance(CellCoord a, CellCoord b) {
    const double dr = a.row - b.row;
    const double dc = a.col - b.col;
    return std::sqrt(dr * dr + dc * dc);
}

// Exhaustive nearest-other-component scan over all component cells, with the
// same smallest-(row, col) tie rule the contract promises.
std::optional<std::pair<CellCoord, double>> brute_nearest(CellCoord unit,
                                                          const ComponentLabeling& labeling) {
    const int self = labeling.label_at(unit);
    std::optional<std::pair<CellCoord, double>> best;
    for (int id = 0; id < labeling.component_count; ++id) {
        if (id == self) continue;
        for (const CellCoord c : labeling.members[id]) {
            const double d = cell_distance(unit, c);
            if (!best || d < best->second - 1e-12 ||
                (std::abs(d - best->second) <= 1e-12 && c < best->first)) {
                best = {c, d};
            }
        }
    }
    return best;
}

std::vector<ObstacleMatch> brute_foreign_matches(const OccupancyGrid& grid,
                                                 const MatcherConfig& cfg) {
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    const auto borders = border(labeling, grid);
    const double max_distance = cfg.max_distance(grid.short_side());
    std::set<ObstacleMatch> out;
    for (const auto& component_border : borders) {
        for (const CellCoord unit : component_border) {
            const auto nearest = brute_nearest(unit, labeling);
            if (nearest && nearest->second <= max_distance) {
                out.insert(ObstacleMatch::make(unit, nearest->first));
            }
        }
    }
    return {out.begin(), out.end()};
}

// Gift-wrapping hull oracle over cell centers in (x = col, y = row).
std::vector<CellCoord> jarvis_hull(std::vector<CellCoord> points) {
    std::sort(points.begin(), points.end());
    points.erase(std::unique(points.begin(), points.end()), points.end());
    if (points.size() <= 2) {
        std::sort(points.begin(), points.end(), [](CellCoord a, CellCoord b) {
            return a.col != b.col ? a.col < b.col : a.row < b.row;
        });
        return points;
    }
    auto cross = [](CellCoord o, CellCoord a, CellCoord b) {
        return static_cast<long long>(a.col - o.col) * (b.row - o.row) -
               static_cast<long long>(a.row - o.row) * (b.col - o.col);
    };
    std::size_t start = 0;
    for (std::size_t i = 1; i < points.size(); ++i) {
        if (points[i].col < points[start].col ||
            (points[i].col == points[start].col && points[i].row < points[start].row)) {
            start = i;
        }
    }
    std::vector<CellCoord> hull;
    std::size_t current = start;
    do {
        hull.push_back(points[current]);
        std::size_t candidate = (current + 1) % points.size();
        for (std::size_t i = 0; i < points.size(); ++i) {
            if (i == current) continue;
            const long long c = cross(points[current], points[candidate], points[i]);
            const bool farther =
                c == 0 && cell_distance(points[current], points[i]) >
                              cell_distance(points[current], points[candidate]);
            if (c > 0 || farther) candidate = i;
        }
        current = candidate;
    } while (current != start && hull.size() <= points.size());
    return hull;
}

std::set<CellCoord> as_set(const std::vector<CellCoord>& cells) {
    return {cells.begin(), cells.end()};
}

}  // namespace

TEST_CASE("nearest lookup needs a second component") {
    const OccupancyGrid grid = grid_from_ascii({
        "##....",
        "##....",
        "......",
    });
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 1);
    const auto borders = border(labeling, grid);
    CHECK_FALSE(nearest_in_other_components({0, 0}, labeling, borders).has_value());
}

TEST_CASE("nearest lookup between two single cells") {
    OccupancyGrid grid(8, 3);
    grid.at(0, 0) = CellState::Occupied;
    grid.at(0, 5) = CellState::Occupied;
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 2);
    const auto borders = border(labeling, grid);
    const auto hit = nearest_in_other_components({0, 0}, labeling, borders);
    REQUIRE(hit.has_value());
    CHECK(hit->first == CellCoord{0, 5});
    CHECK(hit->second == doctest::Approx(5.0));
}

TEST_CASE("equidistant candidates resolve to the smallest coordinates") {
    OccupancyGrid grid(6, 6);
    grid.at(2, 2) = CellState::Occupied;  // unit
    grid.at(0, 2) = CellState::Occupied;  // distance 2, above
    grid.at(2, 0) = CellState::Occupied;  // distance 2, left
    grid.at(2, 4) = CellState::Occupied;  // distance 2, right
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 4);
    const auto borders = border(labeling, grid);
    const auto hit = nearest_in_other_components({2, 2}, labeling, borders);
    REQUIRE(hit.has_value());
    CHECK(hit->first == CellCoord{0, 2});  // (0,2) < (2,0) < (2,4)
}

TEST_CASE("nearest lookup agrees with an exhaustive scan on random grids") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const OccupancyGrid grid = testsupport::random_grid(seed, 20, 20, 0.25);
        const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
        if (labeling.component_count < 3) continue;
        const auto borders = border(labeling, grid);
        for (const auto& component_border : borders) {
            for (const CellCoord unit : component_border) {
                const auto got = nearest_in_other_components(unit, labeling, borders);
                const auto expected = brute_nearest(unit, labeling);
                REQUIRE(got.has_value() == expected.has_value());
                if (got) {
                    CHECK(got->first == expected->first);
                    CHECK(got->second == doctest::Approx(expected->second));
                }
            }
        }
    }
}

TEST_CASE("foreign matcher is empty for a single component") {
    const OccupancyGrid grid = grid_from_ascii({
        ".....",
        ".###.",
        ".....",
    });
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    CHECK(foreign_matcher(labeling, grid, MatcherConfig{}).empty());
}

TEST_CASE("facing wall cells all pair up at the wall gap distance") {
    OccupancyGrid grid(500, 500);
    testsupport::fill_rect(grid, 10, 0, 10, 499);
    testsupport::fill_rect(grid, 13, 0, 13, 499);
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 2);
    const auto matches = foreign_matcher(labeling, grid, MatcherConfig{});

    std::set<CellCoord> matched;
    for (const ObstacleMatch& m : matches) {
        CHECK(m.distance == doctest::Approx(3.0));
        matched.insert(m.a);
        matched.insert(m.b);
    }
    CHECK(matched.size() == 1000);  // every cell of both walls
}

TEST_CASE("components beyond the distance cap never match") {
    OccupancyGrid grid(500, 500);
    testsupport::fill_rect(grid, 100, 100, 110, 110);
    testsupport::fill_rect(grid, 100, 171, 110, 181);  // 60 cells of clearance, cap is 25
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 2);
    CHECK(foreign_matcher(labeling, grid, MatcherConfig{}).empty());
}

TEST_CASE("foreign matcher equals the brute-force pairing on random maps") {
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        const OccupancyGrid grid = testsupport::random_grid(seed, 40, 40, 0.3);
        const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
        for (const double fraction : {0.05, 0.15}) {
            MatcherConfig cfg;
            cfg.max_distance_fraction = fraction;
            const auto got = foreign_matcher(labeling, grid, cfg);
            const auto expected = brute_foreign_matches(grid, cfg);
            CHECK(got == expected);
        }
    }
}

TEST_CASE("matches store canonical endpoint order and Euclidean distance") {
    const ObstacleMatch m = ObstacleMatch::make({5, 1}, {2, 4});
    CHECK(m.a == CellCoord{2, 4});
    CHECK(m.b == CellCoord{5, 1});
    CHECK(m.distance == doctest::Approx(std::sqrt(18.0)));
}

TEST_CASE("match endpoints are always obstacle cells within the cap") {
    const OccupancyGrid grid = testsupport::random_grid(77, 40, 40, 0.35);
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    MatcherConfig cfg;
    cfg.max_distance_fraction = 0.2;
    const auto matches = foreign_matcher(labeling, grid, cfg);
    const double cap = cfg.max_distance(grid.short_side());
    for (const ObstacleMatch& m : matches) {
        CHECK(grid.is_occupied(m.a.row, m.a.col));
        CHECK(grid.is_occupied(m.b.row, m.b.col));
        CHECK(m.distance <= cap + 1e-12);
        CHECK(m.a < m.b);
        CHECK(m.distance == doctest::Approx(cell_distance(m.a, m.b)));
    }
    CHECK(std::is_sorted(matches.begin(), matches.end()));
    CHECK(std::adjacent_find(matches.begin(), matches.end()) == matches.end());
}

TEST_CASE("hull of degenerate point sets") {
    CHECK(convex_hull({{3, 7}}) == std::vector<CellCoord>{{3, 7}});

    // Collinear points collapse to the two extremes.
    const auto segment = convex_hull({{0, 0}, {0, 2}, {0, 4}, {0, 1}});
    REQUIRE(segment.size() == 2);
    CHECK(as_set(segment) == std::set<CellCoord>{{0, 0}, {0, 4}});
}

TEST_CASE("hull of a square with center keeps only the corners") {
    const auto hull = convex_hull({{0, 0}, {0, 4}, {4, 0}, {4, 4}, {2, 2}});
    CHECK(as_set(hull) == std::set<CellCoord>{{0, 0}, {0, 4}, {4, 0}, {4, 4}});
    CHECK(hull.size() == 4);
}

TEST_CASE("hull matches a gift-wrapping oracle on random point sets") {
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        RngStream rng(seed);
        std::vector<CellCoord> points;
        for (int i = 0; i < 50; ++i) {
            points.push_back({static_cast<int>(rng.uniform_index(30)),
                              static_cast<int>(rng.uniform_index(30))});
        }
        const auto got = convex_hull(points);
        const auto expected = jarvis_hull(points);
        CHECK(as_set(got) == as_set(expected));
    }
}

TEST_CASE("point separation against the half-plane oracle") {
    const std::vector<CellCoord> hull = convex_hull({{0, 0}, {0, 10}, {10, 0}, {10, 10}, {5, 13}});
    std::vector<CellCoord> cells;
    RngStream rng(5);
    for (int i = 0; i < 200; ++i) {
        cells.push_back({static_cast<int>(rng.uniform_index(16)) - 2,
                         static_cast<int>(rng.uniform_index(16)) - 2});
    }
    const PointSeparation sep = separate_points(cells, hull);
    CHECK(sep.inside.size() + sep.outside.size() == cells.size());

    auto cross = [](CellCoord o, CellCoord a, CellCoord p) {
        return static_cast<long long>(a.col - o.col) * (p.row - o.row) -
               static_cast<long long>(a.row - o.row) * (p.col - o.col);
    };
    auto oracle_inside = [&](CellCoord p) {
        for (std::size_t i = 0; i < hull.size(); ++i) {
            if (cross(hull[i], hull[(i + 1) % hull.size()], p) < 0) return false;
        }
        return true;
    };
    for (const CellCoord c : sep.inside) CHECK(oracle_inside(c));
    for (const CellCoord c : sep.outside) CHECK_FALSE(oracle_inside(c));
}

TEST_CASE("separation with a single-point hull") {
    const std::vector<CellCoord> hull{{2, 2}};
    const PointSeparation sep = separate_points({{2, 2}, {3, 3}}, hull);
    CHECK(sep.inside == std::vector<CellCoord>{{2, 2}});
    CHECK(sep.outside == std::vector<CellCoord>{{3, 3}});
}

TEST_CASE("separation where all cells sit beside the hull") {
    const std::vector<CellCoord> hull = convex_hull({{0, 5}, {0, 8}, {4, 5}, {4, 8}});
    const PointSeparation sep = separate_points({{0, 0}, {2, 1}, {4, 2}}, hull);
    CHECK(sep.inside.empty());
    CHECK(sep.outside.size() == 3);
}

TEST_CASE("boundary cells count as inside the hull") {
    const std::vector<CellCoord> hull = convex_hull({{0, 0}, {0, 6}, {6, 0}, {6, 6}});
    const PointSeparation sep = separate_points({{0, 3}, {3, 0}, {6, 6}, {7, 3}}, hull);
    CHECK(as_set(sep.inside) == std::set<CellCoord>{{0, 3}, {3, 0}, {6, 6}});
    CHECK(sep.outside == std::vector<CellCoord>{{7, 3}});
}

TEST_CASE("self matcher ignores convex components") {
    for (const auto& shape : {std::pair{3, 5}, std::pair{1, 9}, std::pair{7, 7}}) {
        OccupancyGrid grid(30, 30);
        testsupport::fill_rect(grid, 4, 4, 3 + shape.first, 3 + shape.second);
        const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
        REQUIRE(labeling.component_count == 1);
        SelfMatchStats stats;
        CHECK(self_matcher(labeling.members[0], MatcherConfig{}, grid.short_side(), &stats).empty());
    }
}

TEST_CASE("self matcher spans the mouth of a pocket") {
    const OccupancyGrid grid = testsupport::inset_prong_u_map();
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 1);
    const auto matches = self_matcher(labeling.members[0], MatcherConfig{}, grid.short_side());
    REQUIRE_FALSE(matches.empty());

    // The prongs stand on columns 12 and 17 with a 4-cell pocket between
    // them; the tip-to-tip match across the mouth must be present and no
    // match may beat the wall-to-wall spacing.
    bool tip_match = false;
    double shortest = 1e9;
    for (const ObstacleMatch& m : matches) {
        CHECK(grid.is_occupied(m.a.row, m.a.col));
        CHECK(grid.is_occupied(m.b.row, m.b.col));
        shortest = std::min(shortest, m.distance);
        if (m.a == CellCoord{10, 12} && m.b == CellCoord{10, 17}) tip_match = true;
    }
    CHECK(tip_match);
    CHECK(shortest >= 1.0);
}

TEST_CASE("self matcher recurses into extracted parts on a spiral") {
    const OccupancyGrid grid = testsupport::spiral_map();
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    REQUIRE(labeling.component_count == 1);
    SelfMatchStats stats;
    const auto matches =
        self_matcher(labeling.members[0], MatcherConfig{}, grid.short_side(), &stats);
    CHECK(stats.max_depth >= 2);
    CHECK(stats.nested_match_count >= 1);

    // The innermost turn (rows 10 and 14) must be bridged across its mouth.
    bool inner_mouth = false;
    for (const ObstacleMatch& m : matches) {
        if (m.a.row == 10 && m.b.row == 14 && m.a.col == m.b.col) inner_mouth = true;
    }
    CHECK(inner_mouth);
}

TEST_CASE("self matcher output respects the distance cap") {
    const OccupancyGrid grid = testsupport::spiral_map();
    const ComponentLabeling labeling = find_connected_components(grid, CellState::Occupied);
    MatcherConfig cfg;
    const double cap = cfg.max_distance(grid.short_side());
    for (const ObstacleMatch& m : self_matcher(labeling.members[0], cfg, grid.short_side())) {
        CHECK(m.distance <= cap + 1e-12);
    }
}

TEST_CASE("match_between_groups pairs across caller-defined groups") {
    OccupancyGrid grid(20, 20);
    const std::vector<CellCoord> left{{5, 5}, {6, 5}};
    const std::vector<CellCoord> right{{5, 9}, {6, 9}};
    for (const CellCoord c : left) grid.at(c.row, c.col) = CellState::Occupied;
    for (const CellCoord c : right) grid.at(c.row, c.col) = CellState::Occupied;

    const auto matches = match_between_groups({left, right}, grid, 10.0);
    REQUIRE(matches.size() == 2);
    CHECK(matches[0] == ObstacleMatch::make({5, 5}, {5, 9}));
    CHECK(matches[1] == ObstacleMatch::make({6, 5}, {6, 9}));

    CHECK(match_between_groups({left, right}, grid, 3.0).empty());  // cap below spacing
    CHECK(match_between_groups({left}, grid, 10.0).empty());        // single group
    CHECK(match_between_groups({}, grid, 10.0).empty());
}
