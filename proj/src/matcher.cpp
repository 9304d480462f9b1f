#include "mbpi/matcher.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mbpi {

namespace {

constexpr long long kNoCandidate = std::numeric_limits<long long>::max();

long long squared(long long v) { return v * v; }

// Raster of group ids over a grid; kNoLabel where no indexed cell lies.
struct GroupRaster {
    int width = 0;
    int height = 0;
    std::vector<int> id;

    GroupRaster(int w, int h)
        : width(w), height(h),
          id(static_cast<std::size_t>(w) * static_cast<std::size_t>(h), ComponentLabeling::kNoLabel) {}

    int at(int row, int col) const {
        return id[static_cast<std::size_t>(row) * width + col];
    }
    void set(CellCoord c, int group) {
        id[static_cast<std::size_t>(c.row) * width + c.col] = group;
    }
};

struct NearestHit {
    CellCoord cell;
    long long d2 = kNoCandidate;
};

// Expanding-ring scan around `unit` for the nearest indexed cell whose group
// differs from `exclude`. Rings are Chebyshev shells: every cell in shell r is
// at least r away in Euclidean terms, so the scan can stop as soon as the
// shell index exceeds the best distance found. `max_radius` bounds the scan;
// ties on distance resolve toward the smallest (row, col).
std::optional<NearestHit> nearest_other_in_raster(const GroupRaster& raster, CellCoord unit,
                                                  int exclude, int max_radius) {
    NearestHit best;
    auto consider = [&](int row, int col) {
        if (row < 0 || row >= raster.height || col < 0 || col >= raster.width) return;
        const int group = raster.at(row, col);
        if (group == ComponentLabeling::kNoLabel || group == exclude) return;
        const long long d2 = squared(row - unit.row) + squared(col - unit.col);
        if (d2 < best.d2 || (d2 == best.d2 && CellCoord{row, col} < best.cell)) {
            best = {{row, col}, d2};
        }
    };

    for (int r = 0; r <= max_radius; ++r) {
        if (best.d2 != kNoCandidate && squared(r) > best.d2) break;
        if (r == 0) {
            consider(unit.row, unit.col);
            continue;
        }
        for (int col = unit.col - r; col <= unit.col + r; ++col) {
            consider(unit.row - r, col);
            consider(unit.row + r, col);
        }
        for (int row = unit.row - r + 1; row <= unit.row + r - 1; ++row) {
            consider(row, unit.col - r);
            consider(row, unit.col + r);
        }
    }
    if (best.d2 == kNoCandidate) return std::nullopt;
    return best;
}

bool is_group_border_cell(const OccupancyGrid& grid, CellCoord c) {
    constexpr int dr[4] = {-1, 1, 0, 0};
    constexpr int dc[4] = {0, 0, -1, 1};
    for (int k = 0; k < 4; ++k) {
        const int nr = c.row + dr[k];
        const int nc = c.col + dc[k];
        if (!grid.in_bounds(nr, nc) || grid.is_free(nr, nc)) return true;
    }
    return false;
}

void sort_and_dedup(std::vector<ObstacleMatch>& matches) {
    std::sort(matches.begin(), matches.end());
    matches.erase(std::unique(matches.begin(), matches.end()), matches.end());
}

}  // namespace

ObstacleMatch ObstacleMatch::make(CellCoord u, CellCoord v) {
    if (v < u) std::swap(u, v);
    const double d = std::sqrt(static_cast<double>(squared(u.row - v.row) + squared(u.col - v.col)));
    return {u, v, d};
}

std::optional<std::pair<CellCoord, double>> nearest_in_other_components(
    CellCoord unit, const ComponentLabeling& labeling,
    const std::vector<std::vector<CellCoord>>& borders) {
    if (static_cast<int>(borders.size()) != labeling.component_count) {
        throw std::invalid_argument("nearest_in_other_components: borders do not match labeling");
    }
    GroupRaster raster(labeling.width, labeling.height);
    for (int id = 0; id < labeling.component_count; ++id) {
        for (const CellCoord c : borders[id]) raster.set(c, id);
    }
    const int self = labeling.label_at(unit);
    const int max_radius = std::max(std::max(unit.row, labeling.height - 1 - unit.row),
                                    std::max(unit.col, labeling.width - 1 - unit.col));
    const auto hit = nearest_other_in_raster(raster, unit, self, max_radius);
    if (!hit) return std::nullopt;
    return std::make_pair(hit->cell, std::sqrt(static_cast<double>(hit->d2)));
}

std::vector<ObstacleMatch> match_between_groups(const std::vector<std::vector<CellCoord>>& groups,
                                                const OccupancyGrid& grid, double max_distance) {
    std::vector<const std::vector<CellCoord>*> live;
    for (const auto& g : groups) {
        if (!g.empty()) live.push_back(&g);
    }
    if (live.size() < 2 || max_distance <= 0.0) return {};

    GroupRaster raster(grid.width, grid.height);
    std::vector<std::vector<CellCoord>> group_borders(live.size());
    for (std::size_t g = 0; g < live.size(); ++g) {
        for (const CellCoord c : *live[g]) {
            if (is_group_border_cell(grid, c)) {
                raster.set(c, static_cast<int>(g));
                group_borders[g].push_back(c);
            }
        }
    }

    // Any pair within max_distance also sits within this many Chebyshev
    // shells, so the per-cell scan can be capped hard.
    const int cap = static_cast<int>(max_distance);
    const double max_d2 = max_distance * max_distance;

    std::vector<ObstacleMatch> out;
    for (std::size_t g = 0; g < live.size(); ++g) {
        for (const CellCoord unit : group_borders[g]) {
            const auto hit = nearest_other_in_raster(raster, unit, static_cast<int>(g), cap);
            if (!hit || static_cast<double>(hit->d2) > max_d2) continue;
            out.push_back(ObstacleMatch::make(unit, hit->cell));
        }
    }
    sort_and_dedup(out);
    return out;
}

std::vector<ObstacleMatch> foreign_matcher(const ComponentLabeling& labeling,
                                           const OccupancyGrid& grid, const MatcherConfig& cfg) {
    if (labeling.target != CellState::Occupied) {
        throw std::invalid_argument("foreign_matcher: labeling must cover obstacle cells");
    }
    return match_between_groups(labeling.members, grid, cfg.max_distance(grid.short_side()));
}

std::vector<CellCoord> convex_hull(std::vector<CellCoord> points) {
    // Work in (x = col, y = row); cross > 0 is a counterclockwise turn.
    std::sort(points.begin(), points.end(), [](CellCoord a, CellCoord b) {
        return a.col != b.col ? a.col < b.col : a.row < b.row;
    });
    points.erase(std::unique(points.begin(), points.end()), points.end());
    const std::size_t n = points.size();
    if (n <= 2) return points;

    auto cross = [](CellCoord o, CellCoord a, CellCoord b) {
        return static_cast<long long>(a.col - o.col) * (b.row - o.row) -
               static_cast<long long>(a.row - o.row) * (b.col - o.col);
    };

    std::vector<CellCoord> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {  // lower hull
        while (k >= 2 && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {  // upper hull
        while (k >= lower && cross(hull[k - 2], hull[k - 1], points[i]) <= 0) --k;
        hull[k++] = points[i];
    }
    hull.resize(k - 1);  // last point repeats the first
    return hull;
}

PointSeparation separate_points(const std::vector<CellCoord>& component_cells,
                                const std::vector<CellCoord>& hull) {
    PointSeparation sep;
    auto cross = [](CellCoord o, CellCoord a, CellCoord p) {
        return static_cast<long long>(a.col - o.col) * (p.row - o.row) -
               static_cast<long long>(a.row - o.row) * (p.col - o.col);
    };

    auto inside = [&](CellCoord p) -> bool {
        if (hull.empty()) return false;
        if (hull.size() == 1) return p == hull[0];
        if (hull.size() == 2) {
            if (cross(hull[0], hull[1], p) != 0) return false;
            const long long dx = hull[1].col - hull[0].col;
            const long long dy = hull[1].row - hull[0].row;
            const long long t = dx * (p.col - hull[0].col) + dy * (p.row - hull[0].row);
            return t >= 0 && t <= dx * dx + dy * dy;
        }
        for (std::size_t i = 0; i < hull.size(); ++i) {
            const CellCoord a = hull[i];
            const CellCoord b = hull[(i + 1) % hull.size()];
            if (cross(a, b, p) < 0) return false;  // hull is counterclockwise
        }
        return true;
    };

    for (const CellCoord c : component_cells) {
        (inside(c) ? sep.inside : sep.outside).push_back(c);
    }
    return sep;
}

namespace {

struct Crop {
    OccupancyGrid grid;  // component-only occupancy with a one-cell free margin
    int row_off = 0;     // original coords = local coords + offsets
    int col_off = 0;
};

Crop crop_component(const std::vector<CellCoord>& comp) {
    int rmin = std::numeric_limits<int>::max(), rmax = std::numeric_limits<int>::min();
    int cmin = rmin, cmax = rmax;
    for (const CellCoord c : comp) {
        rmin = std::min(rmin, c.row);
        rmax = std::max(rmax, c.row);
        cmin = std::min(cmin, c.col);
        cmax = std::max(cmax, c.col);
    }
    Crop crop;
    crop.row_off = rmin - 1;
    crop.col_off = cmin - 1;
    crop.grid = OccupancyGrid(cmax - cmin + 3, rmax - rmin + 3);
    for (const CellCoord c : comp) {
        crop.grid.at(c.row - crop.row_off, c.col - crop.col_off) = CellState::Occupied;
    }
    return crop;
}

void append_translated(const std::vector<ObstacleMatch>& local, const Crop& crop, int depth,
                       SelfMatchStats* stats, std::vector<ObstacleMatch>& out) {
    for (const ObstacleMatch& m : local) {
        out.push_back({{m.a.row + crop.row_off, m.a.col + crop.col_off},
                       {m.b.row + crop.row_off, m.b.col + crop.col_off},
                       m.distance});
    }
    if (stats && depth >= 2) {
        stats->nested_match_count += static_cast<int>(local.size());
    }
}

void self_match_into(const std::vector<CellCoord>& comp, double max_distance, int depth,
                     SelfMatchStats* stats, std::vector<ObstacleMatch>& out) {
    if (stats) stats->max_depth = std::max(stats->max_depth, depth);
    if (comp.size() < 2) return;

    const Crop crop = crop_component(comp);
    std::vector<CellCoord> local(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) {
        local[i] = {comp[i].row - crop.row_off, comp[i].col - crop.col_off};
    }

    const ComponentLabeling free_space = find_connected_components(crop.grid, CellState::Free);
    for (int f = 0; f < free_space.component_count; ++f) {
        // The margin ring exists so that all free space surrounding the
        // component fuses into one region; its cells say nothing about the
        // component's own cavities, so the hull is taken over the interior
        // free cells only. A hull that swallows the whole component means
        // this region is the outside world: nothing to extract from it.
        std::vector<CellCoord> hull_points;
        for (const CellCoord c : free_space.members[f]) {
            if (c.row >= 1 && c.row <= crop.grid.height - 2 && c.col >= 1 &&
                c.col <= crop.grid.width - 2) {
                hull_points.push_back(c);
            }
        }
        if (hull_points.empty()) continue;

        const std::vector<CellCoord> hull = convex_hull(std::move(hull_points));
        PointSeparation sep = separate_points(local, hull);
        if (sep.inside.empty() || sep.inside.size() == local.size()) continue;

        const auto parts = connected_cell_groups(sep.inside, /*eight_connected=*/true);
        append_translated(match_between_groups(parts, crop.grid, max_distance), crop, depth, stats, out);
        append_translated(match_between_groups({sep.inside, sep.outside}, crop.grid, max_distance),
                          crop, depth, stats, out);

        for (const auto& part : parts) {
            if (part.size() >= comp.size()) {
                throw std::logic_error("self_matcher: extracted part is not a proper subset");
            }
            std::vector<CellCoord> part_original(part.size());
            for (std::size_t i = 0; i < part.size(); ++i) {
                part_original[i] = {part[i].row + crop.row_off, part[i].col + crop.col_off};
            }
            self_match_into(part_original, max_distance, depth + 1, stats, out);
        }
    }
}

}  // namespace

std::vector<ObstacleMatch> self_matcher(const std::vector<CellCoord>& component_cells,
                                        const MatcherConfig& cfg, int map_short_side,
                                        SelfMatchStats* stats) {
    if (stats) *stats = {};
    if (component_cells.empty()) return {};
    std::vector<ObstacleMatch> out;
    self_match_into(component_cells, cfg.max_distance(map_short_side), 1, stats, out);
    sort_and_dedup(out);
    return out;
}

}  // namespace mbpi
