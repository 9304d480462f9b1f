#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "mbpi/grid_map.hpp"
#include "mbpi/matcher.hpp"
#include "mbpi/prm.hpp"
#include "mbpi/sampler.hpp"

namespace mbpi {

struct TrialRecord {
    std::string map_id;
    std::string sampler;
    std::uint64_t seed = 0;
    double planning_time_s = 0.0;
    double identification_time_s = 0.0;  // 0 for samplers that run no identification
    int milestones = 0;
    double path_length_m = 0.0;  // inf when no path was found
    bool success = false;
};

enum class TimeMode {
    Wall,  // record wall-clock timings
    None,  // write zeros; output becomes byte-reproducible across runs
};

struct BenchConfig {
    int threads = 0;  // 0 = PASSAGE_PRM_THREADS env var, else hardware concurrency
    TimeMode time_mode = TimeMode::Wall;
    PrmConfig prm;
    MatcherConfig matcher;
    WeightMode weight_mode = WeightMode::InvertNarrowness;
    HybridRatio mbpi_ratio{1, 1};
};

// A benchmark map with its fixed query endpoints (world coordinates).
struct SpecificMapCase {
    std::string id;
    OccupancyGrid grid;
    WorldPoint start;
    WorldPoint goal;
};

// Loads a PGM plus its "<stem>.json" sidecar carrying resolution, origin,
// start and goal. load_map_cases_from_dir picks up every *.pgm with a
// sidecar, sorted by filename.
SpecificMapCase load_map_case(const std::filesystem::path& pgm_path, int occupied_threshold = 127);
std::vector<SpecificMapCase> load_map_cases_from_dir(const std::filesystem::path& dir,
                                                     int occupied_threshold = 127);

// Repeated-trial benchmark on fixed maps: per (map, sampler), trials run with
// record seeds base_seed .. base_seed + trials - 1. Identification runs once
// per map and its time is charged to every trial of the samplers that use it.
// Records come back ordered by (map, sampler, trial) regardless of the
// thread count, and identical inputs reproduce identical sampling outcomes.
std::vector<TrialRecord> run_specific(const std::vector<SpecificMapCase>& maps,
                                      const std::vector<SamplerKind>& samplers, int trials,
                                      std::uint64_t base_seed, const BenchConfig& cfg);

struct RandomBenchParams {
    int map_count = 200;
    int map_width = 500;
    int map_height = 500;
    double resolution = 0.05;
    OfficeMapParams office;
    double min_start_goal_dist_m = 0.0;  // 0 = 40% of the map short side
};

// Monte-Carlo benchmark over generated office maps, one trial per
// (map, sampler). Map i uses seed base_seed + i; start/goal are uniform free
// cells at least min_start_goal_dist_m apart (always mutually reachable:
// generated maps have connected free space).
std::vector<TrialRecord> run_random_monte_carlo(const RandomBenchParams& params,
                                                const std::vector<SamplerKind>& samplers,
                                                std::uint64_t base_seed, const BenchConfig& cfg);

// Hybrid mix sweep: the weighted sampler under several uniform:narrow
// ratios, labeled "mbpi-U:N" in the records.
std::vector<TrialRecord> ratio_sweep(const std::vector<SpecificMapCase>& maps,
                                     const std::vector<HybridRatio>& ratios, int trials,
                                     std::uint64_t base_seed, const BenchConfig& cfg);

// Identification cost amortized over n_p plans of the same map:
// t_p + t_i / n_p (the per-plan share of the one-off identification).
double combined_time(double planning_time, int plan_count, double identification_time);

struct MetricSummary {
    int count = 0;
    double mean = 0.0;
    double std_dev = 0.0;  // population standard deviation
    double median = 0.0;
    double q1 = 0.0;
    double q3 = 0.0;
    double whisker_low = 0.0;   // Tukey fences (1.5 IQR) clipped to the data
    double whisker_high = 0.0;
    std::vector<double> outliers;
};

MetricSummary summarize_metric(std::vector<double> values);

struct GroupSummary {
    std::string map_id;
    std::string sampler;
    int trials = 0;
    double success_rate = 0.0;
    MetricSummary planning_time;
    MetricSummary milestones;
    MetricSummary path_length;  // over successful trials only
};

// Per-(map, sampler) statistics, sorted by (map_id, sampler); invariant
// under any reordering of the records.
std::vector<GroupSummary> summarize(const std::vector<TrialRecord>& records);

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out);
void write_summary_csv(const std::vector<GroupSummary>& summaries, std::ostream& out);
void write_boxplot_csv(const std::vector<GroupSummary>& summaries, std::ostream& out);

// One-sided Welch's t-test p-value for the hypothesis that `a` has the
// smaller mean, computed on log-transformed samples (timings and counts are
// heavy-tailed, so comparisons run on log scale).
double welch_log_p_value(const std::vector<double>& a, const std::vector<double>& b);

int resolve_thread_count(int configured);

}  // namespace mbpi
