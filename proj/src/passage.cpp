#include "mbpi/passage.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "mbpi/components.hpp"

namespace mbpi {

PassageValueMatrix PassageValueMatrix::initial_for(const OccupancyGrid& grid) {
    PassageValueMatrix m;
    m.width = grid.width;
    m.height = grid.height;
    m.initial_value = static_cast<double>(grid.short_side());
    m.values.assign(grid.cells.size(), m.initial_value);
    return m;
}

std::vector<CellCoord> bresenham_line(CellCoord a, CellCoord b) {
    std::vector<CellCoord> line;
    const int dr = std::abs(b.row - a.row);
    const int dc = std::abs(b.col - a.col);
    const int step_r = a.row < b.row ? 1 : -1;
    const int step_c = a.col < b.col ? 1 : -1;
    int err = dc - dr;
    int row = a.row;
    int col = a.col;
    line.reserve(static_cast<std::size_t>(std::max(dr, dc)) + 1);
    while (true) {
        line.push_back({row, col});
        if (row == b.row && col == b.col) break;
        const int e2 = 2 * err;
        if (e2 > -dr) {
            err -= dr;
            col += step_c;
        }
        if (e2 < dc) {
            err += dc;
            row += step_r;
        }
    }
    return line;
}

PassageValueMatrix collision_check(const std::vector<ObstacleMatch>& matches,
                                   const OccupancyGrid& grid, CollisionCheckReport* report) {
    PassageValueMatrix matrix = PassageValueMatrix::initial_for(grid);
    CollisionCheckReport counts;
    for (const ObstacleMatch& match : matches) {
        if (!grid.in_bounds(match.a) || !grid.in_bounds(match.b) ||
            !grid.is_occupied(match.a) || !grid.is_occupied(match.b)) {
            ++counts.skipped;
            continue;
        }
        const std::vector<CellCoord> line = bresenham_line(match.a, match.b);
        bool clear = true;
        for (std::size_t i = 1; i + 1 < line.size(); ++i) {
            if (grid.is_occupied(line[i])) {
                clear = false;
                break;
            }
        }
        if (!clear) {
            ++counts.invalid;
            continue;
        }
        ++counts.valid;
        for (const CellCoord c : line) {
            double& v = matrix.at(c);
            v = std::min(v, match.distance);
        }
    }
    if (report) *report = counts;
    return matrix;
}

PassageValueMatrix identify_passages(const OccupancyGrid& grid, const MatcherConfig& cfg) {
    const ComponentLabeling obstacles = find_connected_components(grid, CellState::Occupied);
    std::vector<ObstacleMatch> matches = foreign_matcher(obstacles, grid, cfg);
    for (int id = 0; id < obstacles.component_count; ++id) {
        const auto self = self_matcher(obstacles.members[id], cfg, grid.short_side());
        matches.insert(matches.end(), self.begin(), self.end());
    }
    std::sort(matches.begin(), matches.end());
    matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
    return collision_check(matches, grid);
}

void save_passage_matrix(const PassageValueMatrix& matrix, std::ostream& out) {
    out << matrix.width << " " << matrix.height << "\n";
    char buf[64];
    for (int row = 0; row < matrix.height; ++row) {
        for (int col = 0; col < matrix.width; ++col) {
            std::snprintf(buf, sizeof(buf), "%.17g", matrix.at(row, col));
            out << buf << (col + 1 == matrix.width ? "\n" : " ");
        }
    }
}

void save_passage_matrix_file(const PassageValueMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("passage matrix: cannot open '" + path.string() + "' for writing");
    save_passage_matrix(matrix, out);
    if (!out) throw std::runtime_error("passage matrix: write failed for '" + path.string() + "'");
}

PassageValueMatrix load_passage_matrix(std::istream& in) {
    PassageValueMatrix matrix;
    if (!(in >> matrix.width >> matrix.height) || matrix.width <= 0 || matrix.height <= 0) {
        throw std::runtime_error("passage matrix: malformed header");
    }
    const std::size_t count = static_cast<std::size_t>(matrix.width) * matrix.height;
    matrix.values.resize(count);
    double max_seen = 0.0;
    for (std::size_t i = 0; i < count; ++i) {
        if (!(in >> matrix.values[i])) {
            throw std::runtime_error("passage matrix: truncated payload");
        }
        max_seen = std::max(max_seen, matrix.values[i]);
    }
    matrix.initial_value = max_seen;
    return matrix;
}

PassageValueMatrix load_passage_matrix_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("passage matrix: cannot open '" + path.string() + "'");
    return load_passage_matrix(in);
}

void save_passage_heatmap(const PassageValueMatrix& matrix, std::ostream& out) {
    out << "P5\n" << matrix.width << " " << matrix.height << "\n255\n";
    std::vector<unsigned char> raw(matrix.values.size());
    const double scale = matrix.initial_value > 0.0 ? 255.0 / matrix.initial_value : 0.0;
    for (std::size_t i = 0; i < matrix.values.size(); ++i) {
        const double v = std::clamp(matrix.values[i] * scale, 0.0, 255.0);
        raw[i] = static_cast<unsigned char>(std::lround(v));
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void save_passage_heatmap_file(const PassageValueMatrix& matrix, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("heatmap: cannot open '" + path.string() + "' for writing");
    save_passage_heatmap(matrix, out);
    if (!out) throw std::runtime_error("heatmap: write failed for '" + path.string() + "'");
}

}  // namespace mbpi
