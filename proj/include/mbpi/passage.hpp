#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "mbpi/grid_map.hpp"
#include "mbpi/matcher.hpp"

namespace mbpi {

// Per-cell estimate of the narrowest passage running through each cell, in
// cell units. Cells no verified match line crosses keep the initial value,
// the map's short side: the widest distance a passage on this map could have.
struct PassageValueMatrix {
    int width = 0;
    int height = 0;
    double initial_value = 0.0;
    std::vector<double> values;

    static PassageValueMatrix initial_for(const OccupancyGrid& grid);

    std::size_t index(int row, int col) const {
        return static_cast<std::size_t>(row) * static_cast<std::size_t>(width) + static_cast<std::size_t>(col);
    }
    double at(int row, int col) const { return values[index(row, col)]; }
    double& at(int row, int col) { return values[index(row, col)]; }
    double at(CellCoord c) const { return at(c.row, c.col); }
    double& at(CellCoord c) { return at(c.row, c.col); }

    friend bool operator==(const PassageValueMatrix&, const PassageValueMatrix&) = default;
};

// Raster line from a to b inclusive; consecutive cells are 8-adjacent and the
// result never leaves the bounding rectangle of the endpoints.
std::vector<CellCoord> bresenham_line(CellCoord a, CellCoord b);

struct CollisionCheckReport {
    int valid = 0;    // line interior entirely free: match contributes values
    int invalid = 0;  // something blocks the line between the endpoints
    int skipped = 0;  // endpoint was not Occupied (precondition violation)
};

// Validates every match line against the full map and lowers the passage
// value of all cells on each valid line (endpoints included) to the match
// distance if that is smaller. Only the cells strictly between the endpoints
// must be free for a line to count.
PassageValueMatrix collision_check(const std::vector<ObstacleMatch>& matches,
                                   const OccupancyGrid& grid,
                                   CollisionCheckReport* report = nullptr);

// Full pipeline: cluster obstacles, match components against each other,
// match each component against itself, then collision-check the union.
// Deterministic for a given grid and config.
PassageValueMatrix identify_passages(const OccupancyGrid& grid, const MatcherConfig& cfg = {});

// Text serialization: "width height" on the first line, then one row of
// ASCII values per line.
void save_passage_matrix(const PassageValueMatrix& matrix, std::ostream& out);
void save_passage_matrix_file(const PassageValueMatrix& matrix, const std::filesystem::path& path);
PassageValueMatrix load_passage_matrix(std::istream& in);
PassageValueMatrix load_passage_matrix_file(const std::filesystem::path& path);

// Grayscale rendering (P5), low values dark, the initial value white.
void save_passage_heatmap(const PassageValueMatrix& matrix, std::ostream& out);
void save_passage_heatmap_file(const PassageValueMatrix& matrix, const std::filesystem::path& path);

}  // namespace mbpi
