#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "mbpi/grid_map.hpp"
#include "mbpi/passage.hpp"

namespace mbpi {

// Deterministic random stream. Identical seeds give identical sequences;
// derive() splits off an independent stream from the seed and an id, so the
// draw order of one stream can never perturb another.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : seed_(seed), engine_(seed) {}

    double uniform01() { return std::uniform_real_distribution<double>(0.0, 1.0)(engine_); }
    double uniform(double lo, double hi) {
        return std::uniform_real_distribution<double>(lo, hi)(engine_);
    }
    double normal(double mean, double stddev) {
        return std::normal_distribution<double>(mean, stddev)(engine_);
    }
    std::uint64_t uniform_index(std::uint64_t n) {
        return std::uniform_int_distribution<std::uint64_t>(0, n - 1)(engine_);
    }

    RngStream derive(std::uint64_t stream_id) const;
    std::uint64_t seed() const { return seed_; }

private:
    std::uint64_t seed_;
    std::mt19937_64 engine_;
};

std::uint64_t splitmix64(std::uint64_t x);
std::uint64_t hash_combine(std::uint64_t seed, std::uint64_t value);
std::uint64_t hash_string(std::string_view s);

enum class SamplerKind { MbpiHybrid, NarrowOnly, Uniform, Gaussian, BridgeTest, ObstacleBased };

std::string to_string(SamplerKind kind);
std::optional<SamplerKind> sampler_kind_from_string(std::string_view name);

// Normalized per-cell sampling distribution in row-major order, with the
// running cumulative sums used for inverse-transform draws. Flat index k maps
// to cell (k / width, k % width).
struct SamplingDistribution {
    int width = 0;
    int height = 0;
    std::vector<double> probabilities;
    std::vector<double> cumulative;

    static SamplingDistribution from_weights(int width, int height, const std::vector<double>& weights);

    std::size_t cell_index(CellCoord c) const {
        return static_cast<std::size_t>(c.row) * width + c.col;
    }
    CellCoord index_cell(std::size_t k) const {
        return {static_cast<int>(k) / width, static_cast<int>(k) % width};
    }
};

enum class WeightMode {
    // Weight each free cell by (initial - value): untouched cells get zero
    // and the narrowest detected cells get the most mass. Falls back to a
    // uniform distribution over free cells when nothing was detected.
    InvertNarrowness,
    // Weight by the raw matrix value (kept for comparison runs).
    RawMatrix,
};

// Turns a passage value matrix into a sampling distribution. Occupied cells
// always get zero mass. Throws std::runtime_error when no free cell exists.
SamplingDistribution build_distribution(const PassageValueMatrix& matrix, const OccupancyGrid& grid,
                                        WeightMode mode = WeightMode::InvertNarrowness);

// Smallest index k with u <= cumulative[k] (binary search).
std::size_t select_index(const SamplingDistribution& dist, double u);

// Same, but never lands on a zero-mass cell: exact plateau hits (only
// possible at u == 0 or u equal to a cumulative value) advance to the next
// cell with positive probability.
std::size_t select_sampleable_index(const SamplingDistribution& dist, double u);

// One weighted draw: pick a cell by inverse transform, then jitter uniformly
// within the cell's area. Always lands in a Free cell.
WorldPoint sample_narrow(const SamplingDistribution& dist, const OccupancyGrid& grid, RngStream& rng);

// Rejection sampling of the free area; throws after an attempt cap on
// pathological maps.
WorldPoint sample_uniform(const OccupancyGrid& grid, RngStream& rng);

// Gaussian pair test: q1 uniform over the map, q2 Gaussian-perturbed per
// axis. Accepts (returns) the one valid point iff exactly one of the two is
// inside the map and Free.
std::optional<WorldPoint> sample_gaussian(const OccupancyGrid& grid, RngStream& rng, double sigma);

// Bridge test: both endpoints must land on obstacles and the midpoint must
// be free; accepts the midpoint.
std::optional<WorldPoint> sample_bridge(const OccupancyGrid& grid, RngStream& rng, double sigma);

// Obstacle-surface sampling: from a free point, march along a random ray
// until an obstacle cell is hit and accept the last free point before it;
// rays that leave the map reject.
std::optional<WorldPoint> sample_obstacle_based(const OccupancyGrid& grid, RngStream& rng, double step);

// Default scale parameters, in world units.
double default_gaussian_sigma(const OccupancyGrid& grid);  // 5% of the short side
double default_obstacle_step(const OccupancyGrid& grid);   // one cell

struct HybridRatio {
    int uniform = 1;
    int narrow = 1;
};

// Deterministic alternation between uniform and weighted draws: each cycle
// emits `ratio.uniform` uniform samples followed by `ratio.narrow` weighted
// ones, so draw counts track the ratio exactly, not just in expectation.
class HybridSampler {
public:
    HybridSampler(const SamplingDistribution* dist, HybridRatio ratio);

    bool next_draw_is_narrow() const;
    WorldPoint next(const OccupancyGrid& grid, RngStream& rng);

private:
    const SamplingDistribution* dist_;
    HybridRatio ratio_;
    int cycle_pos_ = 0;
};

struct SamplerParams {
    SamplerKind kind = SamplerKind::MbpiHybrid;
    HybridRatio ratio{1, 1};
    double sigma = 0.0;  // 0 = default_gaussian_sigma
    double step = 0.0;   // 0 = default_obstacle_step
};

// Uniform draw interface over all sampler kinds for the planner: one attempt
// per call, nullopt meaning the attempt was rejected.
class MilestoneSampler {
public:
    // dist may be null for kinds that do not need a distribution.
    MilestoneSampler(const OccupancyGrid& grid, const SamplerParams& params,
                     const SamplingDistribution* dist);

    std::optional<WorldPoint> try_sample(RngStream& rng);

private:
    const OccupancyGrid* grid_;
    SamplerParams params_;
    const SamplingDistribution* dist_;
    HybridSampler hybrid_;
};

}  // namespace mbpi
