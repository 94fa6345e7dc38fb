#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "cryosim/report.hpp"
#include "cryosim/sweep.hpp"
#include "cryosim/system.hpp"
#include "cryosim/trace.hpp"

namespace fs = std::filesystem;
using namespace cryosim;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitSimFault = 4;

int classify(const std::exception &e) {
    if (dynamic_cast<const IoError *>(&e) || dynamic_cast<const FormatError *>(&e))
        return kExitIo;
    if (dynamic_cast<const DeadlockError *>(&e) || dynamic_cast<const InvariantError *>(&e) ||
        dynamic_cast<const OverflowError *>(&e) || dynamic_cast<const SchedulePastError *>(&e))
        return kExitSimFault;
    return kExitUsage; // config / parameter problems
}

SystemConfig resolve_config(const std::string &preset, const std::string &config_path,
                            bool no_warmup, int cores) {
    SystemConfig cfg = preset.empty() ? SystemConfig{} : make_preset(preset);
    if (!config_path.empty())
        apply_config_file(cfg, config_path);
    if (no_warmup)
        cfg.warmup = false;
    if (cores > 0)
        cfg.cores = cores;
    return cfg;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"cryosim: multi-clock-domain core and cache-hierarchy timing simulator"};
    app.require_subcommand(1);

    // --- gen ---
    auto *gen = app.add_subcommand("gen", "Generate a synthetic instruction trace");
    std::string gen_kind;
    std::uint64_t gen_n = 100000, gen_seed = 0;
    std::string gen_footprint = "16KB";
    double gen_mem_ratio = 0.1, gen_predictability = 1.0;
    std::string gen_pattern = "uniform-random";
    std::string gen_out;
    gen->add_option("generator", gen_kind, "compute-bound | memory-bound | branchy")->required();
    gen->add_option("--n", gen_n, "instruction count");
    gen->add_option("--footprint", gen_footprint, "data footprint (accepts KB/MB suffixes)");
    gen->add_option("--mem-ratio", gen_mem_ratio, "memory-op fraction (compute-bound)");
    gen->add_option("--pattern", gen_pattern, "uniform-random | pointer-chase (memory-bound)");
    gen->add_option("--predictability", gen_predictability, "branch predictability (branchy)");
    gen->add_option("--seed", gen_seed, "generator seed");
    gen->add_option("-o,--out", gen_out, "output trace path")->required();

    // --- run ---
    auto *run = app.add_subcommand("run", "Simulate one trace on one configuration");
    std::string run_preset, run_config, run_trace, run_trace2, run_out;
    bool run_no_warmup = false;
    int run_cores = 0;
    run->add_option("--preset", run_preset, "one of the built-in configurations");
    run->add_option("--config", run_config, "config file overriding preset fields");
    run->add_option("--trace", run_trace, "input trace")->required();
    run->add_option("--trace2", run_trace2, "second trace, pinned to core 1 (with --cores 2)");
    run->add_option("--cores", run_cores, "number of cores (1 or 2)");
    run->add_flag("--no-warmup", run_no_warmup, "skip the functional cache warmup pass");
    run->add_option("-o,--out", run_out, "output stats path")->required();

    // --- sweep ---
    auto *sweep = app.add_subcommand("sweep", "Run every preset over the given traces");
    std::vector<std::string> sweep_traces;
    std::string sweep_out, sweep_baseline = "CryoAll", sweep_weights, sweep_config;
    int sweep_jobs = 1;
    bool sweep_resume = false, sweep_no_warmup = false;
    sweep->add_option("traces", sweep_traces, "input traces")->required();
    sweep->add_option("-o,--out", sweep_out, "output directory")->required();
    sweep->add_option("--baseline", sweep_baseline, "baseline preset for speedups");
    sweep->add_option("--jobs", sweep_jobs, "parallel simulations");
    sweep->add_option("--weights", sweep_weights, "regions csv (trace,weight) to combine");
    sweep->add_option("--config", sweep_config, "config file applied on top of every preset");
    sweep->add_flag("--resume", sweep_resume, "only simulate cells missing a stats file");
    sweep->add_flag("--no-warmup", sweep_no_warmup, "skip the functional cache warmup pass");

    // --- report ---
    auto *report = app.add_subcommand("report", "Rebuild CSV + SVG reports from stats files");
    std::string report_dir, report_baseline = "CryoAll", report_out;
    report->add_option("--stats", report_dir, "directory of .stats files")->required();
    report->add_option("--baseline", report_baseline, "baseline preset for speedups");
    report->add_option("-o,--out", report_out, "output directory (defaults to --stats)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : kExitUsage;
    }

    try {
        if (gen->parsed()) {
            Trace trace;
            if (gen_kind == "compute-bound") {
                trace = gen_compute_bound(gen_n, parse_size(gen_footprint), gen_mem_ratio, gen_seed);
            } else if (gen_kind == "memory-bound") {
                MemPattern pattern;
                if (gen_pattern == "uniform-random")
                    pattern = MemPattern::UniformRandom;
                else if (gen_pattern == "pointer-chase")
                    pattern = MemPattern::PointerChase;
                else
                    throw InvalidParamError("unknown pattern '" + gen_pattern +
                                            "' (uniform-random | pointer-chase)");
                trace = gen_memory_bound(gen_n, parse_size(gen_footprint), pattern, gen_seed);
            } else if (gen_kind == "branchy") {
                trace = gen_branchy(gen_n, gen_predictability, gen_seed);
            } else {
                throw InvalidParamError("unknown generator '" + gen_kind +
                                        "' (compute-bound | memory-bound | branchy)");
            }
            write_trace(trace, gen_out);
            std::printf("wrote %zu instructions to %s\n", trace.size(), gen_out.c_str());
            for (const auto &[k, v] : trace.metadata)
                std::printf("  %s=%s\n", k.c_str(), v.c_str());
            return 0;
        }

        if (run->parsed()) {
            SystemConfig cfg = resolve_config(run_preset, run_config, run_no_warmup, run_cores);
            if (cfg.cores == 2 && run_trace2.empty())
                throw ConfigError("--cores 2 requires --trace2");
            const Trace trace = read_trace(run_trace);
            if (cfg.cores == 2) {
                const Trace trace2 = read_trace(run_trace2);
                auto stats = run_simulation(cfg, {&trace, &trace2},
                                            {fs::path(run_trace).stem().string(),
                                             fs::path(run_trace2).stem().string()});
                write_stats(stats[0], run_out);
                write_stats(stats[1], run_out + ".core1");
                std::printf("%s: %llu ticks (core0), %llu ticks (core1)\n",
                            cfg.preset_name.c_str(),
                            static_cast<unsigned long long>(stats[0].sim_ticks),
                            static_cast<unsigned long long>(stats[1].sim_ticks));
            } else {
                RunStats stats = run_simulation(cfg, trace, fs::path(run_trace).stem().string());
                write_stats(stats, run_out);
                std::printf("%s: %llu instructions, %llu cycles, %llu ticks\n",
                            cfg.preset_name.c_str(),
                            static_cast<unsigned long long>(stats.committed_instructions),
                            static_cast<unsigned long long>(stats.core_cycles),
                            static_cast<unsigned long long>(stats.sim_ticks));
            }
            return 0;
        }

        if (sweep->parsed()) {
            SweepOptions opt;
            for (const std::string &t : sweep_traces)
                opt.traces.push_back(t);
            opt.out_dir = sweep_out;
            opt.baseline = sweep_baseline;
            opt.jobs = sweep_jobs;
            opt.resume = sweep_resume;
            opt.warmup = !sweep_no_warmup;
            if (!sweep_weights.empty())
                opt.weights = sweep_weights;
            if (!sweep_config.empty())
                opt.config_file = sweep_config;
            const SweepResult result = run_sweep(opt);
            std::printf("sweep: %zu runs, %zu failures\n", result.runs.size(),
                        result.failures.size());
            for (const std::string &f : result.failures)
                std::fprintf(stderr, "failed: %s\n", f.c_str());
            return result.failures.empty() ? 0 : kExitSimFault;
        }

        if (report->parsed()) {
            std::vector<RunStats> runs;
            for (const auto &entry : fs::directory_iterator(report_dir))
                if (entry.path().extension() == ".stats")
                    runs.push_back(read_stats(entry.path()));
            if (runs.empty())
                throw IoError("no .stats files in '" + report_dir + "'");
            const fs::path out = report_out.empty() ? fs::path(report_dir) : fs::path(report_out);
            fs::create_directories(out);
            const auto rows = build_report(runs, report_baseline);
            write_report_csv(rows, out / "report.csv");
            write_report_svgs(rows, out);
            std::printf("report: %zu rows -> %s\n", rows.size(),
                        (out / "report.csv").string().c_str());
            return 0;
        }
    } catch (const std::exception &e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return classify(e);
    }
    return 0;
}
