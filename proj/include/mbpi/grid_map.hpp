#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <vector>

namespace mbpi {

enum class CellState : std::uint8_t { Free = 0, Occupied = 1 };

// Integer cell address, row-major. Comparison is lexicographic on (row, col),
// which is the tie-break order used throughout the matcher.
struct CellCoord {
    int row = 0;
    int col = 0;
    friend bool operator==(const CellCoord&, const CellCoord&) = default;
    friend auto operator<=>(const CellCoord&, const CellCoord&) = default;
};

struct WorldPoint {
    double x = 0.0;
    double y = 0.0;
    friend bool operator==(const WorldPoint&, const WorldPoint&) = default;
};

double distance(WorldPoint a, WorldPoint b);

// Binary occupancy grid stored row-major, row 0 first. `origin` is the world
// position of the corner of cell (0,0); cell centers sit half a cell further
// along both axes.
struct OccupancyGrid {
    int width = 0;
    int height = 0;
    double resolution = 1.0;  // meters per cell
    WorldPoint origin{0.0, 0.0};
    std::vector<CellState> cells;

    OccupancyGrid() = default;
    OccupancyGrid(int width, int height, double resolution = 1.0,
                  WorldPoint origin = {0.0, 0.0}, CellState fill = CellState::Free);

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
    }
    bool in_bounds(int row, int col) const {
        return row >= 0 && row < height && col >= 0 && col < width;
    }
    bool in_bounds(CellCoord c) const { return in_bounds(c.row, c.col); }

    CellState at(int row, int col) const { return cells[index(row, col)]; }
    CellState& at(int row, int col) { return cells[index(row, col)]; }
    CellState at(CellCoord c) const { return at(c.row, c.col); }
    CellState& at(CellCoord c) { return at(c.row, c.col); }

    bool is_free(int row, int col) const { return at(row, col) == CellState::Free; }
    bool is_free(CellCoord c) const { return is_free(c.row, c.col); }
    bool is_occupied(int row, int col) const { return at(row, col) == CellState::Occupied; }
    bool is_occupied(CellCoord c) const { return is_occupied(c.row, c.col); }

    int short_side() const { return width < height ? width : height; }
    double world_width() const { return width * resolution; }
    double world_height() const { return height * resolution; }

    friend bool operator==(const OccupancyGrid&, const OccupancyGrid&) = default;
};

// World position of the center of cell `c`.
WorldPoint cell_to_world(const OccupancyGrid& grid, CellCoord c);

// Cell containing world point `p`, or nullopt when `p` lies outside the map.
std::optional<CellCoord> world_to_cell(const OccupancyGrid& grid, WorldPoint p);

// PGM input. Accepts P2 (ASCII) and P5 (binary raw) with maxval in [1, 255].
// A pixel is Occupied when its gray value is <= occupied_threshold.
// Throws std::runtime_error on malformed headers, out-of-range maxval or a
// truncated payload. Resolution/origin are not part of PGM and default to
// 1 cell = 1 m at (0,0); callers overwrite them from side metadata.
OccupancyGrid load_pgm(std::istream& in, int occupied_threshold = 127);
OccupancyGrid load_pgm_file(const std::filesystem::path& path, int occupied_threshold = 127);

// PGM output: always P5 with maxval 255, Occupied -> 0, Free -> 255.
void save_pgm(const OccupancyGrid& grid, std::ostream& out);
void save_pgm_file(const OccupancyGrid& grid, const std::filesystem::path& path);

struct OfficeMapParams {
    int wall_count = 10;
    int wall_thickness = 2;
    int min_door_width = 6;
};

// Randomized multi-room floor plan. Rooms are produced by recursive splits:
// every wall is axis-aligned, spans its room completely (so its ends attach
// perpendicular to the map border or to previously placed walls) and carries
// at least one door gap at least min_door_width wide. The result is a pure
// function of (seed, width, height, params) and its free space is a single
// 4-connected component. Placement of each wall is retried a bounded number
// of times; std::runtime_error is thrown when the parameters cannot be
// satisfied.
OccupancyGrid generate_office_map(std::uint64_t seed, int width, int height,
                                  const OfficeMapParams& params);

}  // namespace mbpi
