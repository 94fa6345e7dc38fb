#include "cryosim/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <mutex>
#include <thread>

#include "cryosim/report.hpp"
#include "cryosim/trace.hpp"

namespace cryosim {

std::filesystem::path sweep_stats_path(const std::filesystem::path &out_dir,
                                       const std::filesystem::path &trace,
                                       const std::string &preset) {
    return out_dir / (trace.stem().string() + "__" + preset + ".stats");
}

std::vector<WeightedRegion> read_weights_file(const std::filesystem::path &path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open weights file '" + path.string() + "'");
    std::vector<WeightedRegion> regions;
    std::string line;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos)
            line = line.substr(0, hash);
        if (line.find_first_not_of(" \t\r") == std::string::npos)
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw FormatError("weights file: expected 'trace,weight' in line '" + line + "'");
        try {
            regions.push_back({line.substr(0, comma), std::stod(line.substr(comma + 1))});
        } catch (const std::exception &) {
            throw FormatError("weights file: bad weight in line '" + line + "'");
        }
    }
    return regions;
}

SweepResult run_sweep(const SweepOptions &options) {
    if (options.traces.empty())
        throw InvalidParamError("sweep: at least one trace required");
    std::filesystem::create_directories(options.out_dir);

    struct Cell {
        std::filesystem::path trace;
        std::string preset;
    };
    std::vector<Cell> cells;
    for (const auto &trace : options.traces)
        for (const std::string &preset : preset_names())
            cells.push_back({trace, preset});

    // Traces are immutable; load each once and share read-only.
    std::vector<Trace> traces;
    for (const auto &path : options.traces)
        traces.push_back(read_trace(path));

    std::vector<std::optional<RunStats>> results(cells.size());
    std::vector<std::string> failures_by_cell(cells.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cells.size())
                return;
            const Cell &cell = cells[i];
            const auto stats_path = sweep_stats_path(options.out_dir, cell.trace, cell.preset);
            try {
                if (options.resume && std::filesystem::exists(stats_path)) {
                    results[i] = read_stats(stats_path);
                    continue;
                }
                SystemConfig cfg = make_preset(cell.preset);
                if (options.config_file)
                    apply_config_file(cfg, *options.config_file);
                cfg.warmup = options.warmup;
                const std::size_t trace_idx =
                    std::find(options.traces.begin(), options.traces.end(), cell.trace) -
                    options.traces.begin();
                RunStats stats =
                    run_simulation(cfg, traces[trace_idx], cell.trace.stem().string());
                write_stats(stats, stats_path);
                results[i] = std::move(stats);
            } catch (const std::exception &e) {
                failures_by_cell[i] = cell.trace.string() + " x " + cell.preset + ": " + e.what();
            }
        }
    };

    const int jobs = std::max(1, options.jobs);
    if (jobs == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int j = 0; j < jobs; ++j)
            pool.emplace_back(worker);
        for (std::thread &t : pool)
            t.join();
    }

    SweepResult out;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (results[i])
            out.runs.push_back(*results[i]);
        else
            out.failures.push_back(failures_by_cell[i]);
    }

    if (!out.runs.empty()) {
        std::vector<ReportRow> rows = build_report(out.runs, options.baseline);

        if (options.weights) {
            // Combine the listed region traces into one estimated row per
            // preset; the estimate's instruction total defaults to the sum of
            // the region lengths.
            const auto regions = read_weights_file(*options.weights);
            for (const std::string &preset : preset_names()) {
                std::vector<RegionWeight> rw;
                std::uint64_t total = 0;
                bool complete = true;
                for (const WeightedRegion &r : regions) {
                    const RunStats *found = nullptr;
                    for (const RunStats &s : out.runs)
                        if (s.config_id == preset && s.trace_name == r.trace.stem().string())
                            found = &s;
                    if (!found) {
                        complete = false;
                        break;
                    }
                    rw.push_back({r.weight, *found});
                    total += found->committed_instructions;
                }
                if (!complete)
                    continue;
                const SimpointAggregate agg = simpoint_combine(rw, total);
                ReportRow row;
                row.trace = "simpoint-combined";
                row.preset = preset;
                row.sim_ticks = static_cast<Tick>(agg.est_time_ticks);
                row.ipc = agg.cpi > 0.0 ? 1.0 / agg.cpi : 0.0;
                row.l3_mpki = agg.l3_mpki;
                row.l1d_demand_bw_gbps = agg.l1d_demand_bw / 1e9;
                row.l1i_bw = agg.l1i_bw / 1e9;
                row.l2_bw = agg.l2_bw / 1e9;
                row.l3_bw = agg.l3_bw / 1e9;
                row.mem_bw = agg.mem_bw / 1e9;
                rows.push_back(row);
            }
            // Estimated-time speedups relative to the baseline preset's
            // combined row.
            double baseline_est = 0.0;
            for (const ReportRow &r : rows)
                if (r.trace == "simpoint-combined" && r.preset == options.baseline)
                    baseline_est = static_cast<double>(r.sim_ticks);
            for (ReportRow &r : rows)
                if (r.trace == "simpoint-combined" && baseline_est > 0.0 && r.sim_ticks > 0)
                    r.speedup_vs_baseline = baseline_est / static_cast<double>(r.sim_ticks);
            std::sort(rows.begin(), rows.end(), [](const ReportRow &a, const ReportRow &b) {
                if (a.trace != b.trace)
                    return a.trace < b.trace;
                return a.preset < b.preset;
            });
        }

        write_report_csv(rows, options.out_dir / "report.csv");
        write_report_svgs(rows, options.out_dir);
    }
    return out;
}

} // namespace cryosim
