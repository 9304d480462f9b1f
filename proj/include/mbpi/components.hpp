#pragma once

#include <vector>

#include "mbpi/grid_map.hpp"

namespace mbpi {

// Partition of all cells of one state into connected components. Obstacle
// cells cluster 8-connected (diagonal contact keeps a wall in one piece);
// free cells cluster 4-connected (a robot cannot slip through a diagonal
// gap). Component ids are assigned in row-major discovery order and each
// member list is sorted by (row, col).
struct ComponentLabeling {
    static constexpr int kNoLabel = -1;

    int width = 0;
    int height = 0;
    CellState target = CellState::Occupied;
    int component_count = 0;
    std::vector<int> labels;  // kNoLabel on cells of the other state
    std::vector<std::vector<CellCoord>> members;

    int label_at(int row, int col) const {
        return labels[static_cast<std::size_t>(row) * width + col];
    }
    int label_at(CellCoord c) const { return label_at(c.row, c.col); }
};

ComponentLabeling find_connected_components(const OccupancyGrid& grid, CellState target);

// Border cells of each obstacle component: members with at least one
// 4-neighbor that is Free or beyond the map edge (off-map counts as free
// space). Lists are sorted by (row, col).
std::vector<std::vector<CellCoord>> border(const ComponentLabeling& labeling,
                                           const OccupancyGrid& grid);

// Groups an arbitrary cell set by adjacency; used on point sets extracted
// from a component rather than on a whole grid. Groups are ordered by their
// smallest member and sorted internally.
std::vector<std::vector<CellCoord>> connected_cell_groups(const std::vector<CellCoord>& cells,
                                                          bool eight_connected);

}  // namespace mbpi
