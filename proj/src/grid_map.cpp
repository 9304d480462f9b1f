#include "mbpi/grid_map.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>

namespace mbpi {

double distance(WorldPoint a, WorldPoint b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

OccupancyGrid::OccupancyGrid(int width_, int height_, double resolution_,
                             WorldPoint origin_, CellState fill)
    : width(width_), height(height_), resolution(resolution_), origin(origin_) {
    if (width < 0 || height < 0) {
        throw std::invalid_argument("grid dimensions must be non-negative");
    }
    if (resolution <= 0.0) {
        throw std::invalid_argument("grid resolution must be positive");
    }
    cells.assign(static_cast<std::size_t>(width) * static_cast<std::size_t>(height), fill);
}

WorldPoint cell_to_world(const OccupancyGrid& grid, CellCoord c) {
    return {grid.origin.x + (c.col + 0.5) * grid.resolution,
            grid.origin.y + (c.row + 0.5) * grid.resolution};
}

std::optional<CellCoord> world_to_cell(const OccupancyGrid& grid, WorldPoint p) {
    const int col = static_cast<int>(std::floor((p.x - grid.origin.x) / grid.resolution));
    const int row = static_cast<int>(std::floor((p.y - grid.origin.y) / grid.resolution));
    if (!grid.in_bounds(row, col)) {
        return std::nullopt;
    }
    return CellCoord{row, col};
}

namespace {

// Reads the next whitespace/comment-delimited header token. PGM comments run
// from '#' to end of line and may appear between any two tokens.
std::string next_pgm_token(std::istream& in) {
    std::string token;
    int ch = 0;
    while ((ch = in.get()) != EOF) {
        if (ch == '#') {
            while ((ch = in.get()) != EOF && ch != '\n') {
            }
            continue;
        }
        if (std::isspace(ch)) {
            if (!token.empty()) {
                in.unget();
                break;
            }
            continue;
        }
        token.push_back(static_cast<char>(ch));
    }
    return token;
}

int parse_pgm_int(std::istream& in, const char* what) {
    const std::string token = next_pgm_token(in);
    if (token.empty()) {
        throw std::runtime_error(std::string("pgm: missing ") + what);
    }
    int value = 0;
    for (char c : token) {
        if (!std::isdigit(static_cast<unsigned char>(c))) {
            throw std::runtime_error(std::string("pgm: malformed ") + what + " '" + token + "'");
        }
        value = value * 10 + (c - '0');
        if (value > 1 << 20) {
            throw std::runtime_error(std::string("pgm: implausible ") + what);
        }
    }
    return value;
}

}  // namespace

OccupancyGrid load_pgm(std::istream& in, int occupied_threshold) {
    const std::string magic = next_pgm_token(in);
    if (magic != "P2" && magic != "P5") {
        throw std::runtime_error("pgm: unsupported magic '" + magic + "' (expected P2 or P5)");
    }
    const int width = parse_pgm_int(in, "width");
    const int height = parse_pgm_int(in, "height");
    const int maxval = parse_pgm_int(in, "maxval");
    if (width <= 0 || height <= 0) {
        throw std::runtime_error("pgm: non-positive dimensions");
    }
    if (maxval < 1 || maxval > 255) {
        throw std::runtime_error("pgm: maxval out of supported range [1, 255]");
    }

    OccupancyGrid grid(width, height);
    const std::size_t count = grid.cells.size();
    if (magic == "P5") {
        // Exactly one whitespace byte separates the maxval from the raster.
        const int sep = in.get();
        if (sep == EOF || !std::isspace(sep)) {
            throw std::runtime_error("pgm: missing raster separator");
        }
        std::vector<unsigned char> raw(count);
        in.read(reinterpret_cast<char*>(raw.data()), static_cast<std::streamsize>(count));
        if (static_cast<std::size_t>(in.gcount()) != count) {
            throw std::runtime_error("pgm: truncated raster payload");
        }
        for (std::size_t i = 0; i < count; ++i) {
            if (raw[i] > maxval) {
                throw std::runtime_error("pgm: pixel value exceeds maxval");
            }
            grid.cells[i] = raw[i] <= occupied_threshold ? CellState::Occupied : CellState::Free;
        }
    } else {
        for (std::size_t i = 0; i < count; ++i) {
            const int value = parse_pgm_int(in, "pixel");
            if (value > maxval) {
                throw std::runtime_error("pgm: pixel value exceeds maxval");
            }
            grid.cells[i] = value <= occupied_threshold ? CellState::Occupied : CellState::Free;
        }
    }
    return grid;
}

OccupancyGrid load_pgm_file(const std::filesystem::path& path, int occupied_threshold) {
    std::ifstream in(path, std::ios::binary);
    if (!in) {
        throw std::runtime_error("pgm: cannot open '" + path.string() + "'");
    }
    return load_pgm(in, occupied_threshold);
}

void save_pgm(const OccupancyGrid& grid, std::ostream& out) {
    out << "P5\n" << grid.width << " " << grid.height << "\n255\n";
    std::vector<unsigned char> raw(grid.cells.size());
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        raw[i] = grid.cells[i] == CellState::Occupied ? 0 : 255;
    }
    out.write(reinterpret_cast<const char*>(raw.data()), static_cast<std::streamsize>(raw.size()));
}

void save_pgm_file(const OccupancyGrid& grid, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) {
        throw std::runtime_error("pgm: cannot open '" + path.string() + "' for writing");
    }
    save_pgm(grid, out);
    if (!out) {
        throw std::runtime_error("pgm: write failed for '" + path.string() + "'");
    }
}

namespace {

struct Room {
    int r0, c0, r1, c1;  // inclusive free interior
    int rows() const { return r1 - r0 + 1; }
    int cols() const { return c1 - c0 + 1; }
};

// Free cells reachable from the first free cell (4-connected).
std::size_t flood_fill_free_count(const OccupancyGrid& grid, std::size_t* total_free) {
    *total_free = 0;
    std::size_t first = grid.cells.size();
    for (std::size_t i = 0; i < grid.cells.size(); ++i) {
        if (grid.cells[i] == CellState::Free) {
            ++*total_free;
            if (first == grid.cells.size()) first = i;
        }
    }
    if (first == grid.cells.size()) return 0;

    std::vector<char> seen(grid.cells.size(), 0);
    std::vector<CellCoord> stack;
    stack.push_back({static_cast<int>(first) / grid.width, static_cast<int>(first) % grid.width});
    seen[first] = 1;
    std::size_t reached = 0;
    while (!stack.empty()) {
        const CellCoord c = stack.back();
        stack.pop_back();
        ++reached;
        const int dr[4] = {-1, 1, 0, 0};
        const int dc[4] = {0, 0, -1, 1};
        for (int k = 0; k < 4; ++k) {
            const int nr = c.row + dr[k];
            const int nc = c.col + dc[k];
            if (!grid.in_bounds(nr, nc) || !grid.is_free(nr, nc)) continue;
            const std::size_t idx = grid.index(nr, nc);
            if (!seen[idx]) {
                seen[idx] = 1;
                stack.push_back({nr, nc});
            }
        }
    }
    return reached;
}

}  // namespace

OccupancyGrid generate_office_map(std::uint64_t seed, int width, int height,
                                  const OfficeMapParams& params) {
    if (width <= 0 || height <= 0) {
        throw std::invalid_argument("office map: dimensions must be positive");
    }
    if (params.wall_count < 0 || params.wall_thickness < 1 || params.min_door_width < 1) {
        throw std::invalid_argument("office map: bad wall parameters");
    }

    OccupancyGrid grid(width, height);
    if (params.wall_count == 0) {
        return grid;
    }

    std::mt19937_64 rng(seed);
    auto uniform_int = [&rng](int lo, int hi) {  // inclusive range
        return std::uniform_int_distribution<int>(lo, hi)(rng);
    };

    // Children of a split must stay wide enough to host a door along a future
    // perpendicular wall.
    const int t = params.wall_thickness;
    const int min_child = std::max(2, params.min_door_width);

    std::vector<Room> rooms{{0, 0, height - 1, width - 1}};
    constexpr int kMaxAttemptsPerWall = 100;

    for (int wall = 0; wall < params.wall_count; ++wall) {
        bool placed = false;
        for (int attempt = 0; attempt < kMaxAttemptsPerWall && !placed; ++attempt) {
            Room& room = rooms[static_cast<std::size_t>(uniform_int(0, static_cast<int>(rooms.size()) - 1))];

            const bool can_vertical = room.cols() >= 2 * min_child + t && room.rows() >= params.min_door_width;
            const bool can_horizontal = room.rows() >= 2 * min_child + t && room.cols() >= params.min_door_width;
            if (!can_vertical && !can_horizontal) continue;

            bool vertical;
            if (can_vertical && can_horizontal) {
                // Prefer cutting the long axis so rooms stay roughly square.
                vertical = room.cols() > room.rows() ? true
                         : room.rows() > room.cols() ? false
                                                     : uniform_int(0, 1) == 1;
            } else {
                vertical = can_vertical;
            }

            if (vertical) {
                const int c = uniform_int(room.c0 + min_child, room.c1 - t + 1 - min_child);
                const int door_max = std::min(2 * params.min_door_width, room.rows());
                const int door = uniform_int(params.min_door_width, door_max);
                const int door_r0 = uniform_int(room.r0, room.r1 - door + 1);
                for (int r = room.r0; r <= room.r1; ++r) {
                    if (r >= door_r0 && r < door_r0 + door) continue;
                    for (int k = 0; k < t; ++k) grid.at(r, c + k) = CellState::Occupied;
                }
                const Room right{room.r0, c + t, room.r1, room.c1};
                room.c1 = c - 1;
                rooms.push_back(right);
            } else {
                const int r = uniform_int(room.r0 + min_child, room.r1 - t + 1 - min_child);
                const int door_max = std::min(2 * params.min_door_width, room.cols());
                const int door = uniform_int(params.min_door_width, door_max);
                const int door_c0 = uniform_int(room.c0, room.c1 - door + 1);
                for (int c = room.c0; c <= room.c1; ++c) {
                    if (c >= door_c0 && c < door_c0 + door) continue;
                    for (int k = 0; k < t; ++k) grid.at(r + k, c) = CellState::Occupied;
                }
                const Room below{r + t, room.c0, room.r1, room.c1};
                room.r1 = r - 1;
                rooms.push_back(below);
            }
            placed = true;
        }
        if (!placed) {
            throw std::runtime_error("office map: wall placement unsatisfiable after bounded retries");
        }
    }

    // Every wall keeps a door, so the room adjacency graph is a tree and the
    // free space must come out connected; guard against generator bugs.
    std::size_t total_free = 0;
    const std::size_t reached = flood_fill_free_count(grid, &total_free);
    if (reached != total_free) {
        throw std::runtime_error("office map: free space unexpectedly disconnected");
    }
    return grid;
}

}  // namespace mbpi
