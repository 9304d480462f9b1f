// Command line front end: passage identification, single PRM queries and the
// benchmark drivers. Exit codes: 0 success, 1 planning found no path,
// 2 usage error, 3 file/format error.

#include <chrono>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "mbpi/bench.hpp"
#include "mbpi/grid_map.hpp"
#include "mbpi/passage.hpp"
#include "mbpi/prm.hpp"
#include "mbpi/sampler.hpp"

namespace {

using namespace mbpi;

WorldPoint parse_point(const std::string& text, const char* flag) {
    WorldPoint p;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%lf,%lf%n", &p.x, &p.y, &consumed) != 2 ||
        consumed != static_cast<int>(text.size())) {
        throw std::invalid_argument(std::string(flag) + ": expected \"X,Y\", got \"" + text + "\"");
    }
    return p;
}

HybridRatio parse_ratio(const std::string& text, const char* flag) {
    HybridRatio r;
    int consumed = 0;
    if (std::sscanf(text.c_str(), "%d:%d%n", &r.uniform, &r.narrow, &consumed) != 2 ||
        consumed != static_cast<int>(text.size()) || r.uniform < 0 || r.narrow < 0 ||
        r.uniform + r.narrow == 0) {
        throw std::invalid_argument(std::string(flag) + ": expected \"U:N\", got \"" + text + "\"");
    }
    return r;
}

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t comma = text.find(',', pos);
        const std::size_t end = comma == std::string::npos ? text.size() : comma;
        if (end > pos) out.push_back(text.substr(pos, end - pos));
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

std::vector<SamplerKind> parse_samplers(const std::string& text) {
    std::vector<SamplerKind> out;
    for (const std::string& name : split_list(text)) {
        const auto kind = sampler_kind_from_string(name);
        if (!kind) {
            throw std::invalid_argument("--samplers: unknown sampler \"" + name + "\"");
        }
        out.push_back(*kind);
    }
    if (out.empty()) throw std::invalid_argument("--samplers: empty list");
    return out;
}

std::vector<HybridRatio> parse_ratios(const std::string& text) {
    std::vector<HybridRatio> out;
    for (const std::string& item : split_list(text)) out.push_back(parse_ratio(item, "--ratios"));
    if (out.empty()) throw std::invalid_argument("--ratios: empty list");
    return out;
}

std::ofstream open_output(const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return out;
}

// Options shared by the plan and bench subcommands.
struct PlannerOpts {
    int max_milestones = 50000;
    int neighbors = 10;
    int batch = 20;
    double local_step = 0.0;
    double max_distance_fraction = 0.05;
    long long max_attempts = 100000;
    std::string ratio = "1:1";

    void attach(CLI::App* cmd) {
        cmd->add_option("--max-milestones", max_milestones, "Sampled milestone budget")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--max-attempts", max_attempts,
                        "Sampling attempts allowed per milestone batch")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--neighbors", neighbors, "Connection attempts per new milestone")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--batch", batch, "Milestones added between connectivity checks")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--local-step", local_step,
                        "Collision probe spacing in meters (0 = half a cell)");
        cmd->add_option("--max-dist,--max-distance-fraction", max_distance_fraction,
                        "Match distance cap as a fraction of the map short side");
        cmd->add_option("--ratio", ratio, "uniform:weighted draw ratio of the passage sampler");
    }

    PrmConfig prm() const {
        PrmConfig cfg;
        cfg.max_milestones = max_milestones;
        cfg.k_neighbors = neighbors;
        cfg.batch_size = batch;
        cfg.local_step = local_step;
        cfg.max_attempts_per_batch = max_attempts;
        return cfg;
    }

    MatcherConfig matcher() const {
        MatcherConfig cfg;
        cfg.max_distance_fraction = max_distance_fraction;
        return cfg;
    }
};

struct BenchOutputs {
    std::string records;
    std::string summary;
    std::string boxplot;

    void attach(CLI::App* cmd) {
        cmd->add_option("--records", records, "Per-trial CSV output path")->required();
        cmd->add_option("--summary", summary, "Aggregated per-(map,sampler) CSV output path");
        cmd->add_option("--boxplot", boxplot, "Box plot CSV output path (whiskers and outliers)");
    }

    void write(const std::vector<TrialRecord>& recs) const {
        {
            auto out = open_output(records);
            write_records_csv(recs, out);
        }
        if (!summary.empty() || !boxplot.empty()) {
            const auto groups = summarize(recs);
            if (!summary.empty()) {
                auto out = open_output(summary);
                write_summary_csv(groups, out);
            }
            if (!boxplot.empty()) {
                auto out = open_output(boxplot);
                write_boxplot_csv(groups, out);
            }
        }
        std::printf("wrote %zu records to %s\n", recs.size(), records.c_str());
    }
};

int run_identify(const std::string& map_path, int threshold, double fraction,
                 const std::string& out_path, const std::string& heatmap_path) {
    const OccupancyGrid grid = load_pgm_file(map_path, threshold);
    MatcherConfig cfg;
    cfg.max_distance_fraction = fraction;

    const auto t0 = std::chrono::steady_clock::now();
    const PassageValueMatrix matrix = identify_passages(grid, cfg);
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();

    save_passage_matrix_file(matrix, out_path);
    if (!heatmap_path.empty()) save_passage_heatmap_file(matrix, heatmap_path);

    int touched = 0;
    double narrowest = matrix.initial_value;
    for (const double v : matrix.values) {
        if (v < matrix.initial_value) {
            ++touched;
            if (v < narrowest) narrowest = v;
        }
    }
    std::printf("identification_time_s: %.6f\n", seconds);
    std::printf("cells_on_passages: %d\n", touched);
    std::printf("narrowest_value_cells: %.3f\n", narrowest);
    return 0;
}

struct PlanOpts {
    std::string map_path;
    std::string start_text;
    std::string goal_text;
    std::string sampler_name = "mbpi";
    std::string matrix_path;
    std::string roadmap_path;
    std::string origin_text = "0,0";
    double resolution = 0.05;
    int threshold = 127;
    std::uint64_t seed = 1;
    double sigma = 0.0;
    double step = 0.0;
    PlannerOpts planner;
};

int run_plan(const PlanOpts& opts) {
    OccupancyGrid grid = load_pgm_file(opts.map_path, opts.threshold);
    grid.resolution = opts.resolution;
    grid.origin = parse_point(opts.origin_text, "--origin");
    const WorldPoint start = parse_point(opts.start_text, "--start");
    const WorldPoint goal = parse_point(opts.goal_text, "--goal");

    const auto kind = sampler_kind_from_string(opts.sampler_name);
    if (!kind) throw std::invalid_argument("--sampler: unknown sampler \"" + opts.sampler_name + "\"");

    SamplerParams params;
    params.kind = *kind;
    params.ratio = parse_ratio(opts.planner.ratio, "--ratio");
    params.sigma = opts.sigma;
    params.step = opts.step;

    std::optional<SamplingDistribution> dist;
    double identification_time_s = 0.0;
    if (*kind == SamplerKind::MbpiHybrid || *kind == SamplerKind::NarrowOnly) {
        PassageValueMatrix matrix;
        const auto t0 = std::chrono::steady_clock::now();
        if (!opts.matrix_path.empty()) {
            matrix = load_passage_matrix_file(opts.matrix_path);
            if (matrix.width != grid.width || matrix.height != grid.height) {
                throw std::invalid_argument("--matrix: dimensions do not match the map");
            }
        } else {
            matrix = identify_passages(grid, opts.planner.matcher());
        }
        dist = build_distribution(matrix, grid);
        identification_time_s =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }

    MilestoneSampler sampler(grid, params, dist ? &*dist : nullptr);
    RngStream rng(opts.seed);
    const BuildOutcome outcome = build_roadmap(grid, sampler, opts.planner.prm(), start, goal, rng);

    if (!opts.roadmap_path.empty()) {
        auto out = open_output(opts.roadmap_path);
        export_roadmap(outcome.roadmap, outcome.path_ids, out);
    }

    std::printf("identification_time_s: %.6f\n", identification_time_s);
    std::printf("planning_time_s: %.6f\n", outcome.result.planning_time_s);
    std::printf("milestones: %d\n", outcome.result.milestone_count);
    if (outcome.result.success()) {
        std::printf("path_length_m: %.6f\n", outcome.result.path_length_m);
        std::printf("success: true\n");
        return 0;
    }
    std::printf("path_length_m: inf\n");
    std::printf("success: false\n");
    return 1;
}

void write_sidecar(const std::filesystem::path& pgm_path, const OccupancyGrid& grid,
                   WorldPoint start, WorldPoint goal) {
    nlohmann::json meta;
    meta["resolution"] = grid.resolution;
    meta["origin"] = {grid.origin.x, grid.origin.y};
    meta["start"] = {start.x, start.y};
    meta["goal"] = {goal.x, goal.y};
    std::filesystem::path sidecar = pgm_path;
    sidecar.replace_extension(".json");
    auto out = open_output(sidecar);
    out << meta.dump(2) << "\n";
}

int run_genmap(std::uint64_t seed, int width, int height, const OfficeMapParams& params,
               double resolution, const std::string& out_path, bool sidecar) {
    OccupancyGrid grid = generate_office_map(seed, width, height, params);
    grid.resolution = resolution;
    save_pgm_file(grid, out_path);

    if (sidecar) {
        std::vector<CellCoord> free_cells;
        for (int row = 0; row < grid.height; ++row) {
            for (int col = 0; col < grid.width; ++col) {
                if (grid.is_free(row, col)) free_cells.push_back({row, col});
            }
        }
        if (free_cells.empty()) throw std::runtime_error("genmap: map has no free cells");
        const double min_dist = 0.4 * grid.short_side() * grid.resolution;
        RngStream rng(hash_combine(seed, hash_string("start-goal")));
        for (int attempt = 0; attempt < 1000; ++attempt) {
            const WorldPoint a = cell_to_world(grid, free_cells[rng.uniform_index(free_cells.size())]);
            const WorldPoint b = cell_to_world(grid, free_cells[rng.uniform_index(free_cells.size())]);
            if (distance(a, b) >= min_dist) {
                write_sidecar(out_path, grid, a, b);
                std::printf("wrote %s (+sidecar)\n", out_path.c_str());
                return 0;
            }
        }
        throw std::runtime_error("genmap: could not place start/goal far enough apart");
    }
    std::printf("wrote %s\n", out_path.c_str());
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Narrow-passage aware probabilistic roadmap planning on occupancy grids"};
    app.set_version_flag("--version", "passage_prm 0.1.0");
    app.require_subcommand(1);

    // identify
    auto* identify = app.add_subcommand("identify", "Detect narrow passages and write the value matrix");
    std::string id_map, id_out, id_heatmap;
    int id_threshold = 127;
    double id_fraction = 0.05;
    identify->add_option("--map", id_map, "Input PGM occupancy grid")->required();
    identify->add_option("--out", id_out, "Output value matrix (text)")->required();
    identify->add_option("--heatmap", id_heatmap, "Optional grayscale rendering (PGM)");
    identify->add_option("--threshold", id_threshold, "Gray values <= threshold are obstacles");
    identify->add_option("--max-dist,--max-distance-fraction", id_fraction,
                         "Match distance cap as a fraction of the map short side");

    // plan
    auto* plan = app.add_subcommand("plan", "Run one PRM query");
    PlanOpts plan_opts;
    plan->add_option("--map", plan_opts.map_path, "Input PGM occupancy grid")->required();
    plan->add_option("--start", plan_opts.start_text, "Start position \"X,Y\" in meters")->required();
    plan->add_option("--goal", plan_opts.goal_text, "Goal position \"X,Y\" in meters")->required();
    plan->add_option("--sampler", plan_opts.sampler_name,
                     "mbpi | narrow | uniform | gaussian | bridge | obprm");
    plan->add_option("--resolution", plan_opts.resolution, "Meters per cell");
    plan->add_option("--origin", plan_opts.origin_text, "World position of the map corner \"X,Y\"");
    plan->add_option("--threshold", plan_opts.threshold, "Gray values <= threshold are obstacles");
    plan->add_option("--seed", plan_opts.seed, "Random seed");
    plan->add_option("--sigma", plan_opts.sigma, "Gaussian/bridge spread in meters (0 = default)");
    plan->add_option("--step", plan_opts.step, "Obstacle sampler ray step in meters (0 = default)");
    plan->add_option("--matrix", plan_opts.matrix_path, "Reuse a precomputed value matrix");
    plan->add_option("--roadmap", plan_opts.roadmap_path, "Write the roadmap and path");
    plan_opts.planner.attach(plan);

    // bench + subcommands
    auto* bench = app.add_subcommand("bench", "Benchmark drivers");
    bench->require_subcommand(1);
    std::string bench_samplers = "mbpi,uniform,gaussian,bridge,obprm";
    int bench_trials = 30;
    std::uint64_t bench_seed = 1;
    int bench_threads = 0;
    bool bench_no_time = false;
    int bench_threshold = 127;
    PlannerOpts bench_planner;
    BenchOutputs bench_out;

    auto* specific = bench->add_subcommand("specific", "Repeated trials on fixed maps");
    std::string spec_maps_dir;
    specific->add_option("--maps", spec_maps_dir, "Directory of PGM maps with JSON sidecars")
        ->required();

    auto* random_cmd = bench->add_subcommand("random", "Monte Carlo over generated office maps");
    RandomBenchParams random_params;
    random_cmd->add_option("--count", random_params.map_count, "Number of generated maps");
    random_cmd->add_option("--width", random_params.map_width, "Map width in cells");
    random_cmd->add_option("--height", random_params.map_height, "Map height in cells");
    random_cmd->add_option("--resolution", random_params.resolution, "Meters per cell");
    random_cmd->add_option("--walls", random_params.office.wall_count, "Walls per map");
    random_cmd->add_option("--wall-thickness", random_params.office.wall_thickness,
                           "Wall thickness in cells");
    random_cmd->add_option("--door", random_params.office.min_door_width,
                           "Minimum door width in cells");
    random_cmd->add_option("--min-start-goal-dist", random_params.min_start_goal_dist_m,
                           "Minimum start/goal separation in meters (0 = 40% of the short side)");

    auto* sweep = bench->add_subcommand("ratio-sweep", "Sweep the uniform:weighted draw ratio");
    std::string sweep_maps_dir;
    std::string sweep_ratios = "5:1,3:1,1:1,1:3,1:5";
    sweep->add_option("--maps", sweep_maps_dir, "Directory of PGM maps with JSON sidecars")
        ->required();
    sweep->add_option("--ratios", sweep_ratios, "Comma separated U:N ratios");

    for (CLI::App* cmd : {specific, random_cmd, sweep}) {
        cmd->add_option("--samplers", bench_samplers, "Comma separated sampler names");
        cmd->add_option("--trials", bench_trials, "Trials per (map, sampler)")
            ->check(CLI::PositiveNumber);
        cmd->add_option("--seed", bench_seed, "Base random seed");
        cmd->add_option("--threads", bench_threads,
                        "Worker threads (0 = PASSAGE_PRM_THREADS env, else hardware)");
        cmd->add_flag("--no-time", bench_no_time,
                      "Zero the time columns; output becomes byte-reproducible");
        cmd->add_option("--threshold", bench_threshold, "Gray values <= threshold are obstacles");
        bench_planner.attach(cmd);
        bench_out.attach(cmd);
    }

    // genmap
    auto* genmap = app.add_subcommand("genmap", "Generate a random office map");
    std::string gen_out;
    std::uint64_t gen_seed = 1;
    std::string gen_size;
    int gen_width = 500, gen_height = 500;
    OfficeMapParams gen_params;
    double gen_resolution = 0.05;
    bool gen_sidecar = false;
    genmap->add_option("--out", gen_out, "Output PGM path")->required();
    genmap->add_option("--seed", gen_seed, "Generator seed");
    genmap->add_option("--size", gen_size, "Dimensions in cells as \"WxH\"");
    genmap->add_option("--width", gen_width, "Width in cells")->check(CLI::PositiveNumber);
    genmap->add_option("--height", gen_height, "Height in cells")->check(CLI::PositiveNumber);
    genmap->add_option("--walls", gen_params.wall_count, "Number of walls");
    genmap->add_option("--wall-thickness", gen_params.wall_thickness, "Wall thickness in cells");
    genmap->add_option("--door", gen_params.min_door_width, "Minimum door width in cells");
    genmap->add_option("--resolution", gen_resolution, "Meters per cell (sidecar metadata)");
    genmap->add_flag("--sidecar", gen_sidecar, "Also write a JSON sidecar with start/goal");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }

    try {
        if (identify->parsed()) {
            return run_identify(id_map, id_threshold, id_fraction, id_out, id_heatmap);
        }
        if (plan->parsed()) {
            return run_plan(plan_opts);
        }
        if (bench->parsed()) {
            BenchConfig cfg;
            cfg.threads = bench_threads;
            cfg.time_mode = bench_no_time ? TimeMode::None : TimeMode::Wall;
            cfg.prm = bench_planner.prm();
            cfg.matcher = bench_planner.matcher();
            cfg.mbpi_ratio = parse_ratio(bench_planner.ratio, "--ratio");

            std::vector<TrialRecord> records;
            if (specific->parsed()) {
                const auto maps = load_map_cases_from_dir(spec_maps_dir, bench_threshold);
                if (maps.empty()) {
                    throw std::runtime_error("no PGM+JSON map pairs found in '" + spec_maps_dir + "'");
                }
                records = run_specific(maps, parse_samplers(bench_samplers), bench_trials,
                                       bench_seed, cfg);
            } else if (random_cmd->parsed()) {
                records = run_random_monte_carlo(random_params, parse_samplers(bench_samplers),
                                                 bench_seed, cfg);
            } else {
                const auto maps = load_map_cases_from_dir(sweep_maps_dir, bench_threshold);
                if (maps.empty()) {
                    throw std::runtime_error("no PGM+JSON map pairs found in '" + sweep_maps_dir + "'");
                }
                records = ratio_sweep(maps, parse_ratios(sweep_ratios), bench_trials, bench_seed, cfg);
            }
            bench_out.write(records);
            return 0;
        }
        if (!gen_size.empty()) {
            int consumed = 0;
            if (std::sscanf(gen_size.c_str(), "%dx%d%n", &gen_width, &gen_height, &consumed) != 2 ||
                consumed != static_cast<int>(gen_size.size()) || gen_width <= 0 || gen_height <= 0) {
                throw std::invalid_argument("--size: expected \"WxH\", got \"" + gen_size + "\"");
            }
        }
        return run_genmap(gen_seed, gen_width, gen_height, gen_params, gen_resolution, gen_out,
                          gen_sidecar);
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 3;
    }
}
