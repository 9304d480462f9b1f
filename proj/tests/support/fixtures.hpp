#pragma once

// Shared grid builders for the test suite. Maps are drawn as ASCII art
// ('#' = obstacle, '.' = free) or assembled from axis-aligned primitives.

#include <stdexcept>
#include <string>
#include <vector>

#include "mbpi/grid_map.hpp"
#include "mbpi/sampler.hpp"

namespace testsupport {

inline mbpi::OccupancyGrid grid_from_ascii(const std::vector<std::string>& rows,
                                           double resolution = 1.0,
                                           mbpi::WorldPoint origin = {0.0, 0.0}) {
    if (rows.empty() || rows.front().empty()) {
        throw std::invalid_argument("grid_from_ascii: empty drawing");
    }
    const int height = static_cast<int>(rows.size());
    const int width = static_cast<int>(rows.front().size());
    mbpi::OccupancyGrid grid(width, height, resolution, origin);
    for (int r = 0; r < height; ++r) {
        if (static_cast<int>(rows[r].size()) != width) {
            throw std::invalid_argument("grid_from_ascii: ragged drawing");
        }
        for (int c = 0; c < width; ++c) {
            if (rows[r][c] == '#') grid.at(r, c) = mbpi::CellState::Occupied;
        }
    }
    return grid;
}

inline void fill_rect(mbpi::OccupancyGrid& grid, int row0, int col0, int row1, int col1,
                      mbpi::CellState state = mbpi::CellState::Occupied) {
    for (int r = row0; r <= row1; ++r) {
        for (int c = col0; c <= col1; ++c) {
            grid.at(r, c) = state;
        }
    }
}

// Bernoulli obstacle field; useful as input for oracle comparisons.
inline mbpi::OccupancyGrid random_grid(std::uint64_t seed, int width, int height,
                                       double occupied_probability) {
    mbpi::OccupancyGrid grid(width, height);
    mbpi::RngStream rng(seed);
    for (int r = 0; r < height; ++r) {
        for (int c = 0; c < width; ++c) {
            if (rng.uniform01() < occupied_probability) grid.at(r, c) = mbpi::CellState::Occupied;
        }
    }
    return grid;
}

// U-shaped obstacle whose prongs sit inboard of a wider base, leaving free
// columns on both flanks; the pocket between the prongs is 4 cells wide.
// Drawn near the top-left of an otherwise free `size`-square map.
inline mbpi::OccupancyGrid inset_prong_u_map(int size = 100) {
    mbpi::OccupancyGrid grid(size, size);
    fill_rect(grid, 19, 10, 19, 19);  // base, wider than the prong span
    fill_rect(grid, 10, 12, 18, 12);  // left prong
    fill_rect(grid, 10, 17, 18, 17);  // right prong, mouth cols 13..16
    return grid;
}

// One continuous wall coiled through two full turns; the free corridor is
// 3 cells wide everywhere and spirals from the entrance (left edge, near the
// top) into a central pocket. Drawn in the top-left of a free `size` map so
// the default match-length cap (5% of the short side) still exceeds the
// corridor span when size >= 100.
inline mbpi::OccupancyGrid spiral_map(int size = 100) {
    mbpi::OccupancyGrid grid(size, size);
    fill_rect(grid, 2, 2, 2, 22);    // outer top
    fill_rect(grid, 2, 22, 22, 22);  // outer right
    fill_rect(grid, 22, 2, 22, 22);  // outer bottom
    fill_rect(grid, 6, 2, 22, 2);    // outer left, entrance at rows 3..5
    fill_rect(grid, 6, 2, 6, 18);    // turn 1 top
    fill_rect(grid, 6, 18, 18, 18);  // turn 1 right
    fill_rect(grid, 18, 6, 18, 18);  // turn 1 bottom
    fill_rect(grid, 10, 6, 18, 6);   // turn 1 left
    fill_rect(grid, 10, 6, 10, 14);  // turn 2 top
    fill_rect(grid, 10, 14, 14, 14); // turn 2 right
    fill_rect(grid, 14, 10, 14, 14); // turn 2 bottom, pocket at rows 11..13
    return grid;
}

// Two long parallel horizontal walls with `corridor_width` free rows between
// them, centered vertically on a `size`-square map.
inline mbpi::OccupancyGrid corridor_map(int corridor_width, int size = 500,
                                        int wall_thickness = 2) {
    mbpi::OccupancyGrid grid(size, size);
    const int top_wall_last = size / 2 - corridor_width / 2 - 1;
    fill_rect(grid, top_wall_last - wall_thickness + 1, 0, top_wall_last, size - 1);
    fill_rect(grid, top_wall_last + corridor_width + 1, 0,
              top_wall_last + corridor_width + wall_thickness, size - 1);
    return grid;
}

}  // namespace testsupport
