#include "mbpi/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mbpi {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value) {
    return splitmix64(seed ^ splitmix64(value));
}

std::uint64_t hash_string(std::string_view s) {
    // FNV-1a
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (const char c : s) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001B3ULL;
    }
    return h;
}

RngStream RngStream::derive(std::uint64_t stream_id) const {
    return RngStream(hash_combine(seed_, stream_id));
}

std::string to_string(SamplerKind kind) {
    switch (kind) {
        case SamplerKind::MbpiHybrid: return "mbpi";
        case SamplerKind::NarrowOnly: return "narrow";
        case SamplerKind::Uniform: return "uniform";
        case SamplerKind::Gaussian: return "gaussian";
        case SamplerKind::BridgeTest: return "bridge";
        case SamplerKind::ObstacleBased: return "obprm";
    }
    return "unknown";
}

std::optional<SamplerKind> sampler_kind_from_string(std::string_view name) {
    if (name == "mbpi") return SamplerKind::MbpiHybrid;
    if (name == "narrow") return SamplerKind::NarrowOnly;
    if (name == "uniform") return SamplerKind::Uniform;
    if (name == "gaussian") return SamplerKind::Gaussian;
    if (name == "bridge") return SamplerKind::BridgeTest;
    if (name == "obprm") return SamplerKind::ObstacleBased;
    return std::nullopt;
}

SamplingDistribution SamplingDistribution::from_weights(int width, int height,
                                                        const std::vector<double>& weights) {
    if (width <= 0 || height <= 0 ||
        weights.size() != static_cast<std::size_t>(width) * static_cast<std::size_t>(height)) {
        throw std::invalid_argument("sampling distribution: weight vector does not match dimensions");
    }
    double sum = 0.0;
    for (const double w : weights) {
        if (w < 0.0 || !std::isfinite(w)) {
            throw std::invalid_argument("sampling distribution: weights must be finite and non-negative");
        }
        sum += w;
    }
    if (sum <= 0.0) {
        throw std::runtime_error("sampling distribution: no cell carries positive weight");
    }

    SamplingDistribution dist;
    dist.width = width;
    dist.height = height;
    dist.probabilities.resize(weights.size());
    dist.cumulative.resize(weights.size());
    // Accumulate raw weights and divide by the total: the running sum is
    // non-decreasing and reproduces `sum` exactly on the last element (same
    // addition order), so the cumulative sums are sorted and end at 1.
    double running = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        dist.probabilities[i] = weights[i] / sum;
        running += weights[i];
        dist.cumulative[i] = running / sum;
    }
    dist.cumulative.back() = 1.0;
    return dist;
}

SamplingDistribution build_distribution(const PassageValueMatrix& matrix, const OccupancyGrid& grid,
                                        WeightMode mode) {
    if (matrix.width != grid.width || matrix.height != grid.height) {
        throw std::invalid_argument("build_distribution: matrix does not match grid dimensions");
    }
    std::vector<double> weights(matrix.values.size(), 0.0);
    double sum = 0.0;
    bool any_free = false;
    for (int row = 0; row < grid.height; ++row) {
        for (int col = 0; col < grid.width; ++col) {
            const std::size_t i = grid.index(row, col);
            if (!grid.is_free(row, col)) continue;
            any_free = true;
            const double v = matrix.values[i];
            weights[i] = mode == WeightMode::InvertNarrowness
                             ? std::max(0.0, matrix.initial_value - v)
                             : std::max(0.0, v);
            sum += weights[i];
        }
    }
    if (!any_free) {
        throw std::runtime_error("build_distribution: map has no free cell to sample");
    }
    if (sum <= 0.0) {
        // Nothing detected (or an all-zero matrix): degrade to uniform over
        // the free cells rather than failing, so the weighted sampler behaves
        // like a uniform one on featureless maps.
        for (int row = 0; row < grid.height; ++row) {
            for (int col = 0; col < grid.width; ++col) {
                if (grid.is_free(row, col)) weights[grid.index(row, col)] = 1.0;
            }
        }
    }
    return SamplingDistribution::from_weights(matrix.width, matrix.height, weights);
}

std::size_t select_index(const SamplingDistribution& dist, double u) {
    const auto it = std::lower_bound(dist.cumulative.begin(), dist.cumulative.end(), u);
    if (it == dist.cumulative.end()) return dist.cumulative.size() - 1;
    return static_cast<std::size_t>(it - dist.cumulative.begin());
}

std::size_t select_sampleable_index(const SamplingDistribution& dist, double u) {
    std::size_t k = select_index(dist, u);
    // lower_bound guarantees cumulative[k-1] < u <= cumulative[k], so a
    // zero-mass hit is only possible when u exactly equals a plateau start
    // (u == 0 in particular); step forward to the cell that owns the mass.
    while (k + 1 < dist.probabilities.size() && dist.probabilities[k] <= 0.0) ++k;
    return k;
}

WorldPoint sample_narrow(const SamplingDistribution& dist, const OccupancyGrid& grid,
                         RngStream& rng) {
    if (dist.width != grid.width || dist.height != grid.height) {
        throw std::invalid_argument("sample_narrow: distribution does not match grid");
    }
    const std::size_t k = select_sampleable_index(dist, rng.uniform01());
    const CellCoord cell = dist.index_cell(k);
    const double x = grid.origin.x + (cell.col + rng.uniform01()) * grid.resolution;
    const double y = grid.origin.y + (cell.row + rng.uniform01()) * grid.resolution;
    return {x, y};
}

WorldPoint sample_uniform(const OccupancyGrid& grid, RngStream& rng) {
    constexpr int kMaxAttempts = 1000000;
    for (int attempt = 0; attempt < kMaxAttempts; ++attempt) {
        const WorldPoint p{rng.uniform(grid.origin.x, grid.origin.x + grid.world_width()),
                           rng.uniform(grid.origin.y, grid.origin.y + grid.world_height())};
        const auto cell = world_to_cell(grid, p);
        if (cell && grid.is_free(*cell)) return p;
    }
    throw std::runtime_error("sample_uniform: no free cell found within attempt budget");
}

namespace {

bool point_is_valid(const OccupancyGrid& grid, WorldPoint p) {
    const auto cell = world_to_cell(grid, p);
    return cell && grid.is_free(*cell);
}

bool point_is_obstacle(const OccupancyGrid& grid, WorldPoint p) {
    const auto cell = world_to_cell(grid, p);
    return cell && grid.is_occupied(*cell);
}

WorldPoint uniform_map_point(const OccupancyGrid& grid, RngStream& rng) {
    return {rng.uniform(grid.origin.x, grid.origin.x + grid.world_width()),
            rng.uniform(grid.origin.y, grid.origin.y + grid.world_height())};
}

}  // namespace

std::optional<WorldPoint> sample_gaussian(const OccupancyGrid& grid, RngStream& rng, double sigma) {
    const WorldPoint q1 = uniform_map_point(grid, rng);
    const WorldPoint q2{q1.x + rng.normal(0.0, sigma), q1.y + rng.normal(0.0, sigma)};
    const bool v1 = point_is_valid(grid, q1);
    const bool v2 = point_is_valid(grid, q2);
    if (v1 == v2) return std::nullopt;
    return v1 ? q1 : q2;
}

std::optional<WorldPoint> sample_bridge(const OccupancyGrid& grid, RngStream& rng, double sigma) {
    const WorldPoint q1 = uniform_map_point(grid, rng);
    if (!point_is_obstacle(grid, q1)) return std::nullopt;
    const WorldPoint q2{q1.x + rng.normal(0.0, sigma), q1.y + rng.normal(0.0, sigma)};
    if (!point_is_obstacle(grid, q2)) return std::nullopt;
    const WorldPoint mid{(q1.x + q2.x) / 2.0, (q1.y + q2.y) / 2.0};
    if (!point_is_valid(grid, mid)) return std::nullopt;
    return mid;
}

std::optional<WorldPoint> sample_obstacle_based(const OccupancyGrid& grid, RngStream& rng,
                                                double step) {
    const WorldPoint q = uniform_map_point(grid, rng);
    if (!point_is_valid(grid, q)) return std::nullopt;
    const double theta = rng.uniform(0.0, 2.0 * std::numbers::pi);
    const double dx = std::cos(theta) * step;
    const double dy = std::sin(theta) * step;
    WorldPoint prev = q;
    while (true) {
        const WorldPoint next{prev.x + dx, prev.y + dy};
        const auto cell = world_to_cell(grid, next);
        if (!cell) return std::nullopt;  // marched off the map
        if (grid.is_occupied(*cell)) return prev;
        prev = next;
    }
}

double default_gaussian_sigma(const OccupancyGrid& grid) {
    return 0.05 * grid.short_side() * grid.resolution;
}

double default_obstacle_step(const OccupancyGrid& grid) { return grid.resolution; }

HybridSampler::HybridSampler(const SamplingDistribution* dist, HybridRatio ratio)
    : dist_(dist), ratio_(ratio) {
    if (ratio_.uniform < 0 || ratio_.narrow < 0 || ratio_.uniform + ratio_.narrow == 0) {
        throw std::invalid_argument("hybrid sampler: ratio must have a positive total");
    }
    if (ratio_.narrow > 0 && dist_ == nullptr) {
        throw std::invalid_argument("hybrid sampler: weighted draws need a distribution");
    }
}

bool HybridSampler::next_draw_is_narrow() const { return cycle_pos_ >= ratio_.uniform; }

WorldPoint HybridSampler::next(const OccupancyGrid& grid, RngStream& rng) {
    const bool narrow = next_draw_is_narrow();
    cycle_pos_ = (cycle_pos_ + 1) % (ratio_.uniform + ratio_.narrow);
    return narrow ? sample_narrow(*dist_, grid, rng) : sample_uniform(grid, rng);
}

MilestoneSampler::MilestoneSampler(const OccupancyGrid& grid, const SamplerParams& params,
                                   const SamplingDistribution* dist)
    : grid_(&grid),
      params_(params),
      dist_(dist),
      hybrid_(params.kind == SamplerKind::MbpiHybrid ? dist : nullptr,
              params.kind == SamplerKind::MbpiHybrid ? params.ratio : HybridRatio{1, 0}) {
    const bool needs_dist =
        params_.kind == SamplerKind::NarrowOnly ||
        (params_.kind == SamplerKind::MbpiHybrid && params_.ratio.narrow > 0);
    if (needs_dist && dist_ == nullptr) {
        throw std::invalid_argument("milestone sampler: this kind needs a sampling distribution");
    }
    if (params_.sigma <= 0.0) params_.sigma = default_gaussian_sigma(grid);
    if (params_.step <= 0.0) params_.step = default_obstacle_step(grid);
}

std::optional<WorldPoint> MilestoneSampler::try_sample(RngStream& rng) {
    switch (params_.kind) {
        case SamplerKind::MbpiHybrid: return hybrid_.next(*grid_, rng);
        case SamplerKind::NarrowOnly: return sample_narrow(*dist_, *grid_, rng);
        case SamplerKind::Uniform: return sample_uniform(*grid_, rng);
        case SamplerKind::Gaussian: return sample_gaussian(*grid_, rng, params_.sigma);
        case SamplerKind::BridgeTest: return sample_bridge(*grid_, rng, params_.sigma);
        case SamplerKind::ObstacleBased: return sample_obstacle_based(*grid_, rng, params_.step);
    }
    return std::nullopt;
}

}  // namespace mbpi
