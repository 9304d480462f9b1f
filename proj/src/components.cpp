#include "mbpi/components.hpp"

#include <algorithm>
#include <limits>
#include <stdexcept>

namespace mbpi {

namespace {

constexpr int kDr8[8] = {-1, -1, -1, 0, 0, 1, 1, 1};
constexpr int kDc8[8] = {-1, 0, 1, -1, 1, -1, 0, 1};
constexpr int kDr4[4] = {-1, 1, 0, 0};
constexpr int kDc4[4] = {0, 0, -1, 1};

}  // namespace

ComponentLabeling find_connected_components(const OccupancyGrid& grid, CellState target) {
    ComponentLabeling out;
    out.width = grid.width;
    out.height = grid.height;
    out.target = target;
    out.labels.assign(grid.cells.size(), ComponentLabeling::kNoLabel);

    const bool eight = target == CellState::Occupied;
    const int* dr = eight ? kDr8 : kDr4;
    const int* dc = eight ? kDc8 : kDc4;
    const int n_dirs = eight ? 8 : 4;

    std::vector<CellCoord> stack;
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            const std::size_t idx = grid.index(row, col);
            if (grid.cells[idx] != target || out.labels[idx] != ComponentLabeling::kNoLabel) {
                continue;
            }
            const int id = out.component_count++;
            out.members.emplace_back();
            out.labels[idx] = id;
            stack.push_back({row, col});
            while (!stack.empty()) {
                const CellCoord c = stack.back();
                stack.pop_back();
                out.members[id].push_back(c);
                for (int k = 0; k < n_dirs; ++k) {
                    const int nr = c.row + dr[k];
                    const int nc = c.col + dc[k];
                    if (!grid.in_bounds(nr, nc)) continue;
                    const std::size_t nidx = grid.index(nr, nc);
                    if (grid.cells[nidx] != target ||
                        out.labels[nidx] != ComponentLabeling::kNoLabel) {
                        continue;
                    }
                    out.labels[nidx] = id;
                    stack.push_back({nr, nc});
                }
            }
            std::sort(out.members[id].begin(), out.members[id].end());
        }
    }
    return out;
}

std::vector<std::vector<CellCoord>> border(const ComponentLabeling& labeling,
                                           const OccupancyGrid& grid) {
    if (labeling.width != grid.width || labeling.height != grid.height) {
        throw std::invalid_argument("border: labeling does not match grid dimensions");
    }
    std::vector<std::vector<CellCoord>> out(labeling.component_count);
    for (int id = 0; id < labeling.component_count; ++id) {
        for (const CellCoord c : labeling.members[id]) {
            bool is_border = false;
            for (int k = 0; k < 4 && !is_border; ++k) {
                const int nr = c.row + kDr4[k];
                const int nc = c.col + kDc4[k];
                is_border = !grid.in_bounds(nr, nc) || grid.is_free(nr, nc);
            }
            if (is_border) out[id].push_back(c);
        }
        // members are sorted, so each border list already is
    }
    return out;
}

std::vector<std::vector<CellCoord>> connected_cell_groups(const std::vector<CellCoord>& cells,
                                                          bool eight_connected) {
    if (cells.empty()) return {};

    int rmin = std::numeric_limits<int>::max(), rmax = std::numeric_limits<int>::min();
    int cmin = rmin, cmax = rmax;
    for (const CellCoord c : cells) {
        rmin = std::min(rmin, c.row);
        rmax = std::max(rmax, c.row);
        cmin = std::min(cmin, c.col);
        cmax = std::max(cmax, c.col);
    }
    const int h = rmax - rmin + 1;
    const int w = cmax - cmin + 1;
    std::vector<int> grid_id(static_cast<std::size_t>(h) * w, ComponentLabeling::kNoLabel);
    auto idx = [&](int row, int col) {
        return static_cast<std::size_t>(row - rmin) * w + (col - cmin);
    };
    constexpr int kUnvisited = -2;
    for (const CellCoord c : cells) grid_id[idx(c.row, c.col)] = kUnvisited;

    const int* dr = eight_connected ? kDr8 : kDr4;
    const int* dc = eight_connected ? kDc8 : kDc4;
    const int n_dirs = eight_connected ? 8 : 4;

    std::vector<std::vector<CellCoord>> groups;
    std::vector<CellCoord> sorted(cells);
    std::sort(sorted.begin(), sorted.end());
    std::vector<CellCoord> stack;
    for (const CellCoord seed : sorted) {
        if (grid_id[idx(seed.row, seed.col)] != kUnvisited) continue;
        const int id = static_cast<int>(groups.size());
        groups.emplace_back();
        grid_id[idx(seed.row, seed.col)] = id;
        stack.push_back(seed);
        while (!stack.empty()) {
            const CellCoord c = stack.back();
            stack.pop_back();
            groups[id].push_back(c);
            for (int k = 0; k < n_dirs; ++k) {
                const int nr = c.row + dr[k];
                const int nc = c.col + dc[k];
                if (nr < rmin || nr > rmax || nc < cmin || nc > cmax) continue;
                if (grid_id[idx(nr, nc)] != kUnvisited) continue;
                grid_id[idx(nr, nc)] = id;
                stack.push_back({nr, nc});
            }
        }
        std::sort(groups[id].begin(), groups[id].end());
    }
    return groups;
}

}  // namespace mbpi
