#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "mbpi/bench.hpp"
#include "support/fixtures.hpp"

using namespace mbpi;

namespace {

// 60x60 map split by a vertical wall whose only door sits near the bottom,
// so the straight start-goal segment is blocked and planning has to sample.
SpecificMapCase door_map_case() {
    SpecificMapCase map;
    map.id = "door";
    map.grid = OccupancyGrid(60, 60);
    testsupport::fill_rect(map.grid, 0, 28, 49, 29);
    testsupport::fill_rect(map.grid, 56, 28, 59, 29);  // door rows 50..55
    map.start = {5.5, 10.5};
    map.goal = {55.5, 20.5};
    return map;
}

std::string records_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    write_records_csv(records, out);
    return out.str();
}

std::string summary_csv(const std::vector<TrialRecord>& records) {
    std::ostringstream out;
    write_summary_csv(summarize(records), out);
    return out.str();
}

}  // namespace

TEST_CASE("amortized cost splits identification across plans") {
    CHECK(combined_time(0.0022, 5, 0.0055) == doctest::Approx(0.0033).epsilon(1e-12));
    const double planning = 0.123456789;
    CHECK(combined_time(planning, 7, 0.0) == planning);  // exact, not approximate
    CHECK(combined_time(0.0, 1, 4.0) == 4.0);
    CHECK_THROWS_AS(combined_time(1.0, 0, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(combined_time(1.0, -3, 1.0), std::invalid_argument);
}

TEST_CASE("metric summaries compute textbook statistics") {
    const MetricSummary s = summarize_metric({3.0, 1.0, 2.0});
    CHECK(s.count == 3);
    CHECK(s.mean == doctest::Approx(2.0));
    CHECK(s.std_dev == doctest::Approx(std::sqrt(2.0 / 3.0)));  // population convention
    CHECK(s.median == 2.0);
    CHECK(s.q1 == doctest::Approx(1.5));
    CHECK(s.q3 == doctest::Approx(2.5));
    CHECK(s.whisker_low == 1.0);
    CHECK(s.whisker_high == 3.0);
    CHECK(s.outliers.empty());
}

TEST_CASE("metric summaries handle degenerate inputs") {
    const MetricSummary single = summarize_metric({7.0});
    CHECK(single.count == 1);
    CHECK(single.mean == 7.0);
    CHECK(single.std_dev == 0.0);
    CHECK(single.median == 7.0);
    CHECK(single.q1 == 7.0);
    CHECK(single.q3 == 7.0);
    CHECK(single.whisker_low == 7.0);
    CHECK(single.whisker_high == 7.0);

    const MetricSummary empty = summarize_metric({});
    CHECK(empty.count == 0);
    CHECK(empty.mean == 0.0);
}

TEST_CASE("whiskers clip to the data and outliers fall outside the fences") {
    const MetricSummary s = summarize_metric({1.0, 2.0, 3.0, 4.0, 100.0});
    CHECK(s.q1 == 2.0);
    CHECK(s.q3 == 4.0);
    // Fences at q1 - 1.5*iqr = -1 and q3 + 1.5*iqr = 7.
    CHECK(s.whisker_low == 1.0);
    CHECK(s.whisker_high == 4.0);
    REQUIRE(s.outliers.size() == 1);
    CHECK(s.outliers[0] == 100.0);
}

TEST_CASE("log-scale mean comparison points the right way") {
    std::vector<double> small, large;
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> jitter(0.9, 1.1);
    for (int i = 0; i < 30; ++i) {
        small.push_back(1.0 * jitter(rng));
        large.push_back(5.0 * jitter(rng));
    }
    CHECK(welch_log_p_value(small, large) < 1e-6);
    CHECK(welch_log_p_value(large, small) > 1.0 - 1e-6);
    CHECK_THROWS_AS(welch_log_p_value({1.0}, large), std::invalid_argument);
    CHECK_THROWS_AS(welch_log_p_value(small, {2.0}), std::invalid_argument);
    small.push_back(0.0);
    CHECK_THROWS_AS(welch_log_p_value(small, large), std::invalid_argument);
}

TEST_CASE("csv fields with separators or quotes are escaped") {
    TrialRecord tricky;
    tricky.map_id = "a,b";
    tricky.sampler = "says \"hi\"";
    tricky.seed = 9;
    tricky.milestones = 4;
    tricky.path_length_m = std::numeric_limits<double>::infinity();
    const std::string csv = records_csv({tricky});
    CHECK(csv.find("map_id,sampler,seed,planning_time_s,identification_time_s,"
                   "milestones,path_length_m,success\n") == 0);
    CHECK(csv.find("\"a,b\",\"says \"\"hi\"\"\",9,") != std::string::npos);
    CHECK(csv.find(",inf,false\n") != std::string::npos);
}

TEST_CASE("fixed-map benchmarks order records by map, sampler and trial") {
    const std::vector<SpecificMapCase> maps{door_map_case()};
    BenchConfig cfg;
    cfg.threads = 1;
    const std::vector<TrialRecord> records =
        run_specific(maps, {SamplerKind::MbpiHybrid, SamplerKind::Uniform}, 3, 100, cfg);
    REQUIRE(records.size() == 6);
    for (int t = 0; t < 3; ++t) {
        CHECK(records[t].sampler == "mbpi");
        CHECK(records[t].seed == 100 + static_cast<std::uint64_t>(t));
        CHECK(records[3 + t].sampler == "uniform");
        CHECK(records[3 + t].seed == 100 + static_cast<std::uint64_t>(t));
    }
    for (const TrialRecord& r : records) {
        CHECK(r.map_id == "door");
        CHECK(r.success);
        CHECK(r.milestones >= 2);
        CHECK(std::isfinite(r.path_length_m));
        CHECK(r.path_length_m >= distance(maps[0].start, maps[0].goal));
    }

    // Identification ran once for the map: every weighted trial is charged
    // the same positive cost, and uniform trials are never charged.
    const double ident = records[0].identification_time_s;
    CHECK(ident > 0.0);
    CHECK(records[1].identification_time_s == ident);
    CHECK(records[2].identification_time_s == ident);
    CHECK(records[3].identification_time_s == 0.0);
    CHECK(records[4].identification_time_s == 0.0);
}

TEST_CASE("disabling timing zeroes both time columns") {
    BenchConfig cfg;
    cfg.threads = 1;
    cfg.time_mode = TimeMode::None;
    const std::vector<TrialRecord> records =
        run_specific({door_map_case()}, {SamplerKind::MbpiHybrid, SamplerKind::Uniform}, 2, 1, cfg);
    for (const TrialRecord& r : records) {
        CHECK(r.planning_time_s == 0.0);
        CHECK(r.identification_time_s == 0.0);
    }
}

TEST_CASE("untimed benchmark output is byte-identical across runs and thread counts") {
    const std::vector<SpecificMapCase> maps{door_map_case()};
    const std::vector<SamplerKind> samplers{SamplerKind::MbpiHybrid, SamplerKind::Uniform,
                                            SamplerKind::Gaussian};
    BenchConfig cfg;
    cfg.time_mode = TimeMode::None;
    cfg.threads = 1;
    cfg.prm.max_milestones = 3000;  // bound the run if a sampler fails to connect
    const std::string single = records_csv(run_specific(maps, samplers, 3, 7, cfg));
    const std::string again = records_csv(run_specific(maps, samplers, 3, 7, cfg));
    cfg.threads = 3;
    const std::string threaded = records_csv(run_specific(maps, samplers, 3, 7, cfg));
    CHECK(single == again);
    CHECK(single == threaded);
}

TEST_CASE("random benchmark generates one trial per map and sampler") {
    RandomBenchParams params;
    params.map_count = 2;
    params.map_width = 60;
    params.map_height = 60;
    params.resolution = 0.1;
    params.office = {4, 2, 5};
    BenchConfig cfg;
    cfg.threads = 1;
    cfg.time_mode = TimeMode::None;
    const std::vector<SamplerKind> samplers{SamplerKind::Uniform, SamplerKind::MbpiHybrid};
    const std::vector<TrialRecord> records = run_random_monte_carlo(params, samplers, 50, cfg);
    REQUIRE(records.size() == 4);
    CHECK(records[0].map_id == "random_0000");
    CHECK(records[0].sampler == "uniform");
    CHECK(records[1].map_id == "random_0000");
    CHECK(records[1].sampler == "mbpi");
    CHECK(records[2].map_id == "random_0001");
    CHECK(records[3].map_id == "random_0001");
    CHECK(records[0].seed == 50);
    CHECK(records[2].seed == 51);
    for (const TrialRecord& r : records) CHECK(r.success);  // office maps are connected

    const std::vector<TrialRecord> replay = run_random_monte_carlo(params, samplers, 50, cfg);
    CHECK(records_csv(records) == records_csv(replay));
}

TEST_CASE("ratio sweeps label each mix and run every cell") {
    const std::vector<HybridRatio> ratios{{1, 1}, {5, 1}};
    BenchConfig cfg;
    cfg.threads = 1;
    cfg.time_mode = TimeMode::None;
    const std::vector<TrialRecord> records = ratio_sweep({door_map_case()}, ratios, 2, 3, cfg);
    REQUIRE(records.size() == 4);
    CHECK(records[0].sampler == "mbpi-1:1");
    CHECK(records[1].sampler == "mbpi-1:1");
    CHECK(records[2].sampler == "mbpi-5:1");
    CHECK(records[3].sampler == "mbpi-5:1");
    for (const TrialRecord& r : records) CHECK(r.success);
}

TEST_CASE("summaries group by map and sampler and count successes only for lengths") {
    std::vector<TrialRecord> records;
    TrialRecord r;
    r.map_id = "m1";
    r.sampler = "uniform";
    r.milestones = 10;
    r.planning_time_s = 0.5;
    r.success = true;
    r.path_length_m = 3.0;
    records.push_back(r);
    r.milestones = 20;
    r.success = false;
    r.path_length_m = std::numeric_limits<double>::infinity();
    records.push_back(r);
    r.map_id = "m0";
    r.sampler = "mbpi";
    r.milestones = 5;
    r.success = true;
    r.path_length_m = 4.0;
    records.push_back(r);

    const std::vector<GroupSummary> groups = summarize(records);
    REQUIRE(groups.size() == 2);
    CHECK(groups[0].map_id == "m0");  // sorted by (map_id, sampler)
    CHECK(groups[0].sampler == "mbpi");
    CHECK(groups[1].map_id == "m1");
    CHECK(groups[1].sampler == "uniform");
    CHECK(groups[1].trials == 2);
    CHECK(groups[1].success_rate == doctest::Approx(0.5));
    CHECK(groups[1].milestones.mean == doctest::Approx(15.0));
    CHECK(groups[1].path_length.count == 1);  // failures carry no length
    CHECK(groups[1].path_length.mean == doctest::Approx(3.0));
}

TEST_CASE("summaries are invariant under record order") {
    BenchConfig cfg;
    cfg.threads = 1;
    cfg.time_mode = TimeMode::None;
    std::vector<TrialRecord> records =
        run_specific({door_map_case()}, {SamplerKind::MbpiHybrid, SamplerKind::Uniform}, 4, 11, cfg);
    const std::string before = summary_csv(records);
    std::shuffle(records.begin(), records.end(), std::mt19937(5));
    CHECK(summary_csv(records) == before);
}

TEST_CASE("summary and boxplot tables carry their headers") {
    BenchConfig cfg;
    cfg.threads = 1;
    cfg.time_mode = TimeMode::None;
    const auto records = run_specific({door_map_case()}, {SamplerKind::Uniform}, 2, 1, cfg);
    const auto groups = summarize(records);

    std::ostringstream summary_out;
    write_summary_csv(groups, summary_out);
    CHECK(summary_out.str().find("map_id,sampler,trials,success_rate,metric,count,mean,"
                                 "std_dev,median,q1,q3\n") == 0);
    CHECK(summary_out.str().find("planning_time_s") != std::string::npos);
    CHECK(summary_out.str().find("milestones") != std::string::npos);
    CHECK(summary_out.str().find("path_length_m") != std::string::npos);

    std::ostringstream box_out;
    write_boxplot_csv(groups, box_out);
    CHECK(box_out.str().find("map_id,sampler,metric,whisker_low,q1,median,q3,"
                             "whisker_high,outliers\n") == 0);
}

TEST_CASE("thread count resolution prefers config, then environment") {
    CHECK(resolve_thread_count(4) == 4);
    setenv("PASSAGE_PRM_THREADS", "7", 1);
    CHECK(resolve_thread_count(0) == 7);
    CHECK(resolve_thread_count(2) == 2);  // explicit config still wins
    unsetenv("PASSAGE_PRM_THREADS");
    CHECK(resolve_thread_count(0) >= 1);
}

TEST_CASE("benchmark fixtures load with their sidecar metadata") {
    const auto cases = load_map_cases_from_dir(FIXTURE_MAPS_DIR);
    REQUIRE(cases.size() == 6);
    const std::vector<std::string> ids{"env1_bottle", "env2_zigzag", "env3_rooms",
                                       "env4_sticks", "env5_maze",   "env6_rects"};
    for (std::size_t i = 0; i < cases.size(); ++i) {
        CHECK(cases[i].id == ids[i]);
        CHECK(cases[i].grid.width == 500);
        CHECK(cases[i].grid.height == 500);
        CHECK(cases[i].grid.resolution == doctest::Approx(0.05));
        CHECK(distance(cases[i].start, cases[i].goal) > 1.0);
        const auto start_cell = world_to_cell(cases[i].grid, cases[i].start);
        const auto goal_cell = world_to_cell(cases[i].grid, cases[i].goal);
        REQUIRE(start_cell.has_value());
        REQUIRE(goal_cell.has_value());
        CHECK(cases[i].grid.is_free(*start_cell));
        CHECK(cases[i].grid.is_free(*goal_cell));
    }
}

TEST_CASE("a map without its sidecar is rejected") {
    const auto dir = std::filesystem::temp_directory_path() / "mbpi_test_maps";
    std::filesystem::create_directories(dir);
    const auto pgm = dir / "lonely.pgm";
    save_pgm_file(OccupancyGrid(4, 4), pgm);
    CHECK_THROWS_AS(load_map_case(pgm), std::runtime_error);
    std::filesystem::remove(pgm);
}
