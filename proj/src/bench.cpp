#include "mbpi/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <stdexcept>
#include <thread>

#include <boost/math/distributions/students_t.hpp>
#include <json.hpp>

#include "mbpi/passage.hpp"

namespace mbpi {

namespace {

using json = nlohmann::json;

double time_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string format_double(double v, int decimals) {
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
    return buf;
}

std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
    std::string quoted = "\"";
    for (const char c : s) {
        if (c == '"') quoted += "\"\"";
        else quoted += c;
    }
    quoted += "\"";
    return quoted;
}

std::string ratio_label(HybridRatio ratio) {
    return "mbpi-" + std::to_string(ratio.uniform) + ":" + std::to_string(ratio.narrow);
}

struct PreparedMap {
    SpecificMapCase map;
    bool has_distribution = false;
    SamplingDistribution distribution;
    double identification_time_s = 0.0;
};

// The sampling distribution is built once per map; detecting the passages
// and shaping them into a distribution are both part of identification time.
void prepare_distribution(PreparedMap& prepared, const BenchConfig& cfg) {
    if (prepared.has_distribution) return;
    const auto t0 = std::chrono::steady_clock::now();
    const PassageValueMatrix matrix = identify_passages(prepared.map.grid, cfg.matcher);
    prepared.distribution = build_distribution(matrix, prepared.map.grid, cfg.weight_mode);
    prepared.identification_time_s = time_since(t0);
    prepared.has_distribution = true;
}

struct TrialTask {
    const PreparedMap* map = nullptr;
    SamplerParams params;
    std::string sampler_label;
    bool uses_identification = false;
    std::uint64_t record_seed = 0;
};

std::uint64_t trial_rng_seed(const TrialTask& task) {
    // Documented stream split: every trial owns an RNG seeded from the
    // record seed, the map id and the sampler label, so trials never share
    // or steal random draws no matter how execution interleaves.
    std::uint64_t h = splitmix64(task.record_seed);
    h = hash_combine(h, hash_string(task.map->map.id));
    h = hash_combine(h, hash_string(task.sampler_label));
    return h;
}

TrialRecord run_trial(const TrialTask& task, const BenchConfig& cfg) {
    const PreparedMap& prepared = *task.map;
    const SamplingDistribution* dist = prepared.has_distribution ? &prepared.distribution : nullptr;
    MilestoneSampler sampler(prepared.map.grid, task.params, dist);
    RngStream rng(trial_rng_seed(task));
    const BuildOutcome outcome =
        build_roadmap(prepared.map.grid, sampler, cfg.prm, prepared.map.start, prepared.map.goal, rng);

    TrialRecord rec;
    rec.map_id = prepared.map.id;
    rec.sampler = task.sampler_label;
    rec.seed = task.record_seed;
    const bool wall = cfg.time_mode == TimeMode::Wall;
    rec.planning_time_s = wall ? outcome.result.planning_time_s : 0.0;
    rec.identification_time_s =
        task.uses_identification && wall ? prepared.identification_time_s : 0.0;
    rec.milestones = outcome.result.milestone_count;
    rec.path_length_m = outcome.result.path_length_m;
    rec.success = outcome.result.success();
    return rec;
}

std::vector<TrialRecord> execute_trials(const std::vector<TrialTask>& tasks,
                                        const BenchConfig& cfg) {
    std::vector<TrialRecord> records(tasks.size());
    const std::size_t want = static_cast<std::size_t>(resolve_thread_count(cfg.threads));
    const int threads = static_cast<int>(std::min(want, std::max<std::size_t>(tasks.size(), 1)));
    if (threads <= 1) {
        for (std::size_t i = 0; i < tasks.size(); ++i) records[i] = run_trial(tasks[i], cfg);
        return records;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        while (true) {
            const std::size_t i = next.fetch_add(1);
            if (i >= tasks.size()) return;
            try {
                records[i] = run_trial(tasks[i], cfg);
            } catch (...) {
                std::lock_guard lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
    if (failure) std::rethrow_exception(failure);
    return records;
}

SamplerParams params_for(SamplerKind kind, const BenchConfig& cfg) {
    SamplerParams params;
    params.kind = kind;
    params.ratio = kind == SamplerKind::MbpiHybrid ? cfg.mbpi_ratio : HybridRatio{1, 1};
    return params;
}

bool needs_identification(SamplerKind kind) {
    return kind == SamplerKind::MbpiHybrid || kind == SamplerKind::NarrowOnly;
}

double quantile(const std::vector<double>& sorted, double p) {
    if (sorted.empty()) return 0.0;
    const double h = (static_cast<double>(sorted.size()) - 1.0) * p;
    const std::size_t lo = static_cast<std::size_t>(h);
    if (lo + 1 >= sorted.size()) return sorted.back();
    const double frac = h - static_cast<double>(lo);
    return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

}  // namespace

SpecificMapCase load_map_case(const std::filesystem::path& pgm_path, int occupied_threshold) {
    SpecificMapCase out;
    out.id = pgm_path.stem().string();
    out.grid = load_pgm_file(pgm_path, occupied_threshold);

    std::filesystem::path sidecar = pgm_path;
    sidecar.replace_extension(".json");
    std::ifstream in(sidecar);
    if (!in) {
        throw std::runtime_error("map case: missing sidecar '" + sidecar.string() + "'");
    }
    json meta;
    try {
        in >> meta;
        out.grid.resolution = meta.at("resolution").get<double>();
        out.grid.origin = {meta.at("origin").at(0).get<double>(), meta.at("origin").at(1).get<double>()};
        out.start = {meta.at("start").at(0).get<double>(), meta.at("start").at(1).get<double>()};
        out.goal = {meta.at("goal").at(0).get<double>(), meta.at("goal").at(1).get<double>()};
    } catch (const json::exception& e) {
        throw std::runtime_error("map case: malformed sidecar '" + sidecar.string() + "': " + e.what());
    }
    return out;
}

std::vector<SpecificMapCase> load_map_cases_from_dir(const std::filesystem::path& dir,
                                                     int occupied_threshold) {
    std::vector<std::filesystem::path> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        if (entry.path().extension() == ".pgm") {
            std::filesystem::path sidecar = entry.path();
            sidecar.replace_extension(".json");
            if (std::filesystem::exists(sidecar)) paths.push_back(entry.path());
        }
    }
    std::sort(paths.begin(), paths.end());
    std::vector<SpecificMapCase> out;
    out.reserve(paths.size());
    for (const auto& path : paths) out.push_back(load_map_case(path, occupied_threshold));
    return out;
}

int resolve_thread_count(int configured) {
    if (configured > 0) return configured;
    if (const char* env = std::getenv("PASSAGE_PRM_THREADS")) {
        const int parsed = std::atoi(env);
        if (parsed > 0) return parsed;
    }
    const unsigned hw = std::thread::hardware_concurrency();
    return hw > 0 ? static_cast<int>(hw) : 1;
}

std::vector<TrialRecord> run_specific(const std::vector<SpecificMapCase>& maps,
                                      const std::vector<SamplerKind>& samplers, int trials,
                                      std::uint64_t base_seed, const BenchConfig& cfg) {
    const bool any_identified = std::any_of(samplers.begin(), samplers.end(), needs_identification);
    std::vector<PreparedMap> prepared(maps.size());
    for (std::size_t m = 0; m < maps.size(); ++m) {
        prepared[m].map = maps[m];
        if (any_identified) prepare_distribution(prepared[m], cfg);
    }

    std::vector<TrialTask> tasks;
    tasks.reserve(maps.size() * samplers.size() * static_cast<std::size_t>(trials));
    for (const PreparedMap& map : prepared) {
        for (const SamplerKind kind : samplers) {
            for (int t = 0; t < trials; ++t) {
                TrialTask task;
                task.map = &map;
                task.params = params_for(kind, cfg);
                task.sampler_label = to_string(kind);
                task.uses_identification = needs_identification(kind);
                task.record_seed = base_seed + static_cast<std::uint64_t>(t);
                tasks.push_back(std::move(task));
            }
        }
    }
    return execute_trials(tasks, cfg);
}

std::vector<TrialRecord> run_random_monte_carlo(const RandomBenchParams& params,
                                                const std::vector<SamplerKind>& samplers,
                                                std::uint64_t base_seed, const BenchConfig& cfg) {
    const double min_dist = params.min_start_goal_dist_m > 0.0
                                ? params.min_start_goal_dist_m
                                : 0.4 * std::min(params.map_width, params.map_height) * params.resolution;

    const bool any_identified = std::any_of(samplers.begin(), samplers.end(), needs_identification);
    std::vector<PreparedMap> prepared(static_cast<std::size_t>(params.map_count));
    for (int i = 0; i < params.map_count; ++i) {
        const std::uint64_t map_seed = base_seed + static_cast<std::uint64_t>(i);
        PreparedMap& p = prepared[i];
        p.map.grid = generate_office_map(map_seed, params.map_width, params.map_height, params.office);
        p.map.grid.resolution = params.resolution;
        char id[32];
        std::snprintf(id, sizeof(id), "random_%04d", i);
        p.map.id = id;

        std::vector<CellCoord> free_cells;
        for (int row = 0; row < p.map.grid.height; ++row) {
            for (int col = 0; col < p.map.grid.width; ++col) {
                if (p.map.grid.is_free(row, col)) free_cells.push_back({row, col});
            }
        }
        if (free_cells.empty()) {
            throw std::runtime_error("random bench: generated map has no free cells");
        }
        RngStream sg_rng(hash_combine(map_seed, hash_string("start-goal")));
        bool placed = false;
        for (int attempt = 0; attempt < 1000 && !placed; ++attempt) {
            const CellCoord a = free_cells[sg_rng.uniform_index(free_cells.size())];
            const CellCoord b = free_cells[sg_rng.uniform_index(free_cells.size())];
            const WorldPoint pa = cell_to_world(p.map.grid, a);
            const WorldPoint pb = cell_to_world(p.map.grid, b);
            if (distance(pa, pb) >= min_dist) {
                p.map.start = pa;
                p.map.goal = pb;
                placed = true;
            }
        }
        if (!placed) {
            throw std::runtime_error("random bench: could not place start/goal far enough apart");
        }
        if (any_identified) prepare_distribution(p, cfg);
    }

    std::vector<TrialTask> tasks;
    tasks.reserve(prepared.size() * samplers.size());
    for (std::size_t i = 0; i < prepared.size(); ++i) {
        for (const SamplerKind kind : samplers) {
            TrialTask task;
            task.map = &prepared[i];
            task.params = params_for(kind, cfg);
            task.sampler_label = to_string(kind);
            task.uses_identification = needs_identification(kind);
            task.record_seed = base_seed + static_cast<std::uint64_t>(i);
            tasks.push_back(std::move(task));
        }
    }
    return execute_trials(tasks, cfg);
}

std::vector<TrialRecord> ratio_sweep(const std::vector<SpecificMapCase>& maps,
                                     const std::vector<HybridRatio>& ratios, int trials,
                                     std::uint64_t base_seed, const BenchConfig& cfg) {
    std::vector<PreparedMap> prepared(maps.size());
    for (std::size_t m = 0; m < maps.size(); ++m) {
        prepared[m].map = maps[m];
        prepare_distribution(prepared[m], cfg);
    }

    std::vector<TrialTask> tasks;
    tasks.reserve(maps.size() * ratios.size() * static_cast<std::size_t>(trials));
    for (const PreparedMap& map : prepared) {
        for (const HybridRatio ratio : ratios) {
            for (int t = 0; t < trials; ++t) {
                TrialTask task;
                task.map = &map;
                task.params.kind = SamplerKind::MbpiHybrid;
                task.params.ratio = ratio;
                task.sampler_label = ratio_label(ratio);
                task.uses_identification = true;
                task.record_seed = base_seed + static_cast<std::uint64_t>(t);
                tasks.push_back(std::move(task));
            }
        }
    }
    return execute_trials(tasks, cfg);
}

double combined_time(double planning_time, int plan_count, double identification_time) {
    if (plan_count <= 0) {
        throw std::invalid_argument("combined_time: plan count must be positive");
    }
    return planning_time + identification_time / plan_count;
}

MetricSummary summarize_metric(std::vector<double> values) {
    MetricSummary s;
    s.count = static_cast<int>(values.size());
    if (values.empty()) return s;

    std::sort(values.begin(), values.end());
    double sum = 0.0;
    for (const double v : values) sum += v;
    s.mean = sum / values.size();
    double sq = 0.0;
    for (const double v : values) sq += (v - s.mean) * (v - s.mean);
    s.std_dev = std::sqrt(sq / values.size());
    s.median = quantile(values, 0.5);
    s.q1 = quantile(values, 0.25);
    s.q3 = quantile(values, 0.75);

    const double iqr = s.q3 - s.q1;
    const double lo_fence = s.q1 - 1.5 * iqr;
    const double hi_fence = s.q3 + 1.5 * iqr;
    s.whisker_low = s.median;
    s.whisker_high = s.median;
    for (const double v : values) {
        if (v < lo_fence || v > hi_fence) {
            s.outliers.push_back(v);
        }
    }
    for (const double v : values) {
        if (v >= lo_fence) {
            s.whisker_low = v;
            break;
        }
    }
    for (auto it = values.rbegin(); it != values.rend(); ++it) {
        if (*it <= hi_fence) {
            s.whisker_high = *it;
            break;
        }
    }
    return s;
}

std::vector<GroupSummary> summarize(const std::vector<TrialRecord>& records) {
    std::vector<std::pair<std::string, std::string>> keys;
    for (const TrialRecord& r : records) keys.emplace_back(r.map_id, r.sampler);
    std::sort(keys.begin(), keys.end());
    keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

    std::vector<GroupSummary> out;
    out.reserve(keys.size());
    for (const auto& [map_id, sampler] : keys) {
        GroupSummary g;
        g.map_id = map_id;
        g.sampler = sampler;
        std::vector<double> times, milestones, lengths;
        int successes = 0;
        for (const TrialRecord& r : records) {
            if (r.map_id != map_id || r.sampler != sampler) continue;
            ++g.trials;
            times.push_back(r.planning_time_s);
            milestones.push_back(static_cast<double>(r.milestones));
            if (r.success) {
                ++successes;
                lengths.push_back(r.path_length_m);
            }
        }
        g.success_rate = g.trials > 0 ? static_cast<double>(successes) / g.trials : 0.0;
        g.planning_time = summarize_metric(std::move(times));
        g.milestones = summarize_metric(std::move(milestones));
        g.path_length = summarize_metric(std::move(lengths));
        out.push_back(std::move(g));
    }
    return out;
}

void write_records_csv(const std::vector<TrialRecord>& records, std::ostream& out) {
    out << "map_id,sampler,seed,planning_time_s,identification_time_s,milestones,path_length_m,success\n";
    for (const TrialRecord& r : records) {
        out << csv_field(r.map_id) << ',' << csv_field(r.sampler) << ',' << r.seed << ','
            << format_double(r.planning_time_s, 6) << ','
            << format_double(r.identification_time_s, 6) << ',' << r.milestones << ','
            << format_double(r.path_length_m, 6) << ',' << (r.success ? "true" : "false") << "\n";
    }
}

namespace {

void write_metric_row(std::ostream& out, const GroupSummary& g, const char* metric,
                      const MetricSummary& m) {
    out << csv_field(g.map_id) << ',' << csv_field(g.sampler) << ',' << g.trials << ','
        << format_double(g.success_rate, 6) << ',' << metric << ',' << m.count << ','
        << format_double(m.mean, 6) << ',' << format_double(m.std_dev, 6) << ','
        << format_double(m.median, 6) << ',' << format_double(m.q1, 6) << ','
        << format_double(m.q3, 6) << "\n";
}

void write_boxplot_row(std::ostream& out, const GroupSummary& g, const char* metric,
                       const MetricSummary& m) {
    std::string outliers;
    for (std::size_t i = 0; i < m.outliers.size(); ++i) {
        if (i > 0) outliers += ';';
        outliers += format_double(m.outliers[i], 6);
    }
    out << csv_field(g.map_id) << ',' << csv_field(g.sampler) << ',' << metric << ','
        << format_double(m.whisker_low, 6) << ',' << format_double(m.q1, 6) << ','
        << format_double(m.median, 6) << ',' << format_double(m.q3, 6) << ','
        << format_double(m.whisker_high, 6) << ',' << csv_field(outliers) << "\n";
}

}  // namespace

void write_summary_csv(const std::vector<GroupSummary>& summaries, std::ostream& out) {
    out << "map_id,sampler,trials,success_rate,metric,count,mean,std_dev,median,q1,q3\n";
    for (const GroupSummary& g : summaries) {
        write_metric_row(out, g, "planning_time_s", g.planning_time);
        write_metric_row(out, g, "milestones", g.milestones);
        write_metric_row(out, g, "path_length_m", g.path_length);
    }
}

void write_boxplot_csv(const std::vector<GroupSummary>& summaries, std::ostream& out) {
    out << "map_id,sampler,metric,whisker_low,q1,median,q3,whisker_high,outliers\n";
    for (const GroupSummary& g : summaries) {
        write_boxplot_row(out, g, "planning_time_s", g.planning_time);
        write_boxplot_row(out, g, "milestones", g.milestones);
        write_boxplot_row(out, g, "path_length_m", g.path_length);
    }
}

double welch_log_p_value(const std::vector<double>& a, const std::vector<double>& b) {
    if (a.size() < 2 || b.size() < 2) {
        throw std::invalid_argument("welch test: need at least two samples per side");
    }
    auto log_stats = [](const std::vector<double>& xs) {
        double mean = 0.0;
        for (const double x : xs) {
            if (x <= 0.0) throw std::invalid_argument("welch test: samples must be positive");
            mean += std::log(x);
        }
        mean /= xs.size();
        double var = 0.0;
        for (const double x : xs) var += (std::log(x) - mean) * (std::log(x) - mean);
        var /= (xs.size() - 1);  // sample variance
        return std::make_pair(mean, var);
    };
    const auto [ma, va] = log_stats(a);
    const auto [mb, vb] = log_stats(b);
    const double sa = va / a.size();
    const double sb = vb / b.size();
    const double se = std::sqrt(sa + sb);
    if (se == 0.0) return ma < mb ? 0.0 : 1.0;
    const double t = (ma - mb) / se;
    const double df = (sa + sb) * (sa + sb) /
                      (sa * sa / (a.size() - 1) + sb * sb / (b.size() - 1));
    boost::math::students_t_distribution<double> dist(df);
    return boost::math::cdf(dist, t);
}

}  // namespace mbpi
