// Generates the committed benchmark maps: six 500x500 occupancy grids with
// start/goal sidecars. Deterministic; rerun only to regenerate the maps/
// directory from scratch.

#include <cmath>
#include <cstdio>
#include <deque>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "mbpi/grid_map.hpp"
#include "mbpi/sampler.hpp"

namespace {

using namespace mbpi;

constexpr int kSize = 500;
constexpr double kResolution = 0.05;

void fill_rect(OccupancyGrid& grid, int r0, int c0, int r1, int c1,
               CellState state = CellState::Occupied) {
    for (int r = r0; r <= r1; ++r) {
        for (int c = c0; c <= c1; ++c) {
            if (grid.in_bounds(r, c)) grid.at(r, c) = state;
        }
    }
}

void add_border_ring(OccupancyGrid& grid, int thickness) {
    fill_rect(grid, 0, 0, thickness - 1, grid.width - 1);
    fill_rect(grid, grid.height - thickness, 0, grid.height - 1, grid.width - 1);
    fill_rect(grid, 0, 0, grid.height - 1, thickness - 1);
    fill_rect(grid, 0, grid.width - thickness, grid.height - 1, grid.width - 1);
}

// Rectangular wall frame at `offset` cells from the map border.
void add_ring_wall(OccupancyGrid& grid, int offset, int thickness) {
    const int lo = offset;
    const int hi = kSize - 1 - offset;
    fill_rect(grid, lo, lo, lo + thickness - 1, hi);
    fill_rect(grid, hi - thickness + 1, lo, hi, hi);
    fill_rect(grid, lo, lo, hi, lo + thickness - 1);
    fill_rect(grid, lo, hi - thickness + 1, hi, hi);
}

CellCoord nearest_free(const OccupancyGrid& grid, CellCoord want) {
    for (int radius = 0; radius < grid.short_side(); ++radius) {
        for (int dr = -radius; dr <= radius; ++dr) {
            for (int dc = -radius; dc <= radius; ++dc) {
                if (std::max(std::abs(dr), std::abs(dc)) != radius) continue;
                const CellCoord c{want.row + dr, want.col + dc};
                if (grid.in_bounds(c) && grid.is_free(c)) return c;
            }
        }
    }
    throw std::runtime_error("no free cell found");
}

bool reachable(const OccupancyGrid& grid, CellCoord from, CellCoord to) {
    std::vector<char> seen(grid.cells.size(), 0);
    std::deque<CellCoord> queue{from};
    seen[grid.index(from.row, from.col)] = 1;
    while (!queue.empty()) {
        const CellCoord cur = queue.front();
        queue.pop_front();
        if (cur == to) return true;
        const CellCoord next[4] = {{cur.row - 1, cur.col},
                                   {cur.row + 1, cur.col},
                                   {cur.row, cur.col - 1},
                                   {cur.row, cur.col + 1}};
        for (const CellCoord n : next) {
            if (!grid.in_bounds(n) || !grid.is_free(n)) continue;
            char& mark = seen[grid.index(n.row, n.col)];
            if (!mark) {
                mark = 1;
                queue.push_back(n);
            }
        }
    }
    return false;
}

void write_case(const std::filesystem::path& dir, const std::string& name,
                const OccupancyGrid& grid, CellCoord start_cell, CellCoord goal_cell) {
    const CellCoord start = nearest_free(grid, start_cell);
    const CellCoord goal = nearest_free(grid, goal_cell);
    if (!reachable(grid, start, goal)) {
        throw std::runtime_error(name + ": start and goal are not connected");
    }
    const WorldPoint s = cell_to_world(grid, start);
    const WorldPoint g = cell_to_world(grid, goal);

    save_pgm_file(grid, dir / (name + ".pgm"));

    nlohmann::json meta;
    meta["resolution"] = grid.resolution;
    meta["origin"] = {grid.origin.x, grid.origin.y};
    meta["start"] = {s.x, s.y};
    meta["goal"] = {g.x, g.y};
    std::ofstream out(dir / (name + ".json"));
    if (!out) throw std::runtime_error("cannot write sidecar for " + name);
    out << meta.dump(2) << "\n";
    std::printf("%s: start (%.2f, %.2f) goal (%.2f, %.2f)\n", name.c_str(), s.x, s.y, g.x, g.y);
}

OccupancyGrid blank() {
    OccupancyGrid grid(kSize, kSize, kResolution);
    return grid;
}

// Two large rooms joined by one narrow door in a full-height dividing wall.
OccupancyGrid make_bottle() {
    OccupancyGrid grid = blank();
    add_border_ring(grid, 2);
    fill_rect(grid, 2, 248, 497, 251);                       // dividing wall
    fill_rect(grid, 246, 248, 257, 251, CellState::Free);    // the door
    return grid;
}

// Serpentine: five full-width walls with alternating 10-cell doors, so every
// route zig-zags through all six chambers.
OccupancyGrid make_zigzag() {
    OccupancyGrid grid = blank();
    add_border_ring(grid, 2);
    const int wall_rows[5] = {82, 164, 246, 328, 410};
    for (int i = 0; i < 5; ++i) {
        const int r = wall_rows[i];
        if (i % 2 == 0) {
            fill_rect(grid, r, 2, r + 3, 487);    // door on the right: cols 488..497
        } else {
            fill_rect(grid, r, 12, r + 3, 497);   // door on the left: cols 2..11
        }
    }
    return grid;
}

// Randomized multi-room floor plan from the office generator.
OccupancyGrid make_rooms() {
    OfficeMapParams params;
    params.wall_count = 12;
    params.wall_thickness = 2;
    params.min_door_width = 8;
    OccupancyGrid grid = generate_office_map(7, kSize, kSize, params);
    grid.resolution = kResolution;
    return grid;
}

// Long thin sticks at assorted angles, plus a one-cell-thick broken line at
// mid-map whose two gaps are the only way across. Obstacle surface is scarce
// everywhere, which starves samplers that need to hit obstacles twice.
OccupancyGrid make_sticks() {
    OccupancyGrid grid = blank();

    fill_rect(grid, 0, 249, 99, 249);       // fence segments with 6-cell gaps at
    fill_rect(grid, 106, 249, 399, 249);    // rows 100..105 and 400..405, both
    fill_rect(grid, 406, 249, 499, 249);    // off the straight start-goal line

    RngStream rng(20240801);
    auto draw_stick = [&](int center_row, int center_col) {
        const double angle = rng.uniform(0.0, 3.14159265358979);
        const double half = 45.0 + rng.uniform(0.0, 20.0);
        const int r0 = center_row + static_cast<int>(half * std::sin(angle));
        const int c0 = center_col + static_cast<int>(half * std::cos(angle));
        const int r1 = center_row - static_cast<int>(half * std::sin(angle));
        const int c1 = center_col - static_cast<int>(half * std::cos(angle));
        const int steps = std::max(std::abs(r1 - r0), std::abs(c1 - c0));
        for (int i = 0; i <= steps; ++i) {
            const int r = r0 + (r1 - r0) * i / std::max(steps, 1);
            const int c = c0 + (c1 - c0) * i / std::max(steps, 1);
            fill_rect(grid, r, c, r + 1, c + 1);
        }
    };
    for (const int row : {40, 150, 260, 370, 460}) {
        for (const int col : {40, 150, 370, 460}) {  // keep clear of the fence band
            draw_stick(row + static_cast<int>(rng.uniform_index(17)) - 8,
                       col + static_cast<int>(rng.uniform_index(17)) - 8);
        }
    }
    return grid;
}

// Nested square rings with one 10-cell door each, on rotating sides.
OccupancyGrid make_maze() {
    OccupancyGrid grid = blank();
    const int offsets[5] = {45, 90, 135, 180, 225};
    for (int i = 0; i < 5; ++i) {
        const int o = offsets[i];
        add_ring_wall(grid, o, 3);
        const int hi = kSize - 1 - o;
        switch (i % 4) {
            case 0: fill_rect(grid, o, 245, o + 2, 254, CellState::Free); break;       // north
            case 1: fill_rect(grid, 245, hi - 2, 254, hi, CellState::Free); break;     // east
            case 2: fill_rect(grid, hi - 2, 245, hi, 254, CellState::Free); break;     // south
            case 3: fill_rect(grid, 245, o, 254, o + 2, CellState::Free); break;       // west
        }
    }
    return grid;
}

// Scattered solid rectangles; narrow passages appear wherever two blocks or
// a block and the border ring come close.
OccupancyGrid make_rects() {
    OccupancyGrid grid = blank();
    add_border_ring(grid, 2);
    RngStream rng(5150);
    for (int i = 0; i < 26; ++i) {
        const int h = 20 + static_cast<int>(rng.uniform_index(51));
        const int w = 20 + static_cast<int>(rng.uniform_index(51));
        const int r = 6 + static_cast<int>(rng.uniform_index(kSize - 12 - h));
        const int c = 6 + static_cast<int>(rng.uniform_index(kSize - 12 - w));
        fill_rect(grid, r, c, r + h - 1, c + w - 1);
    }
    return grid;
}

}  // namespace

int main(int argc, char** argv) {
    const std::filesystem::path dir = argc > 1 ? argv[1] : "maps";
    try {
        std::filesystem::create_directories(dir);
        write_case(dir, "env1_bottle", make_bottle(), {250, 120}, {250, 380});
        write_case(dir, "env2_zigzag", make_zigzag(), {40, 250}, {460, 250});
        write_case(dir, "env3_rooms", make_rooms(), {30, 30}, {470, 470});
        write_case(dir, "env4_sticks", make_sticks(), {250, 100}, {250, 400});
        write_case(dir, "env5_maze", make_maze(), {250, 250}, {20, 20});
        write_case(dir, "env6_rects", make_rects(), {30, 30}, {470, 470});
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
