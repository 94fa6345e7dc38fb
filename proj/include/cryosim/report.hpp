#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "cryosim/stats.hpp"

namespace cryosim {

struct ReportRow {
    std::string trace;
    std::string preset;
    Tick sim_ticks = 0;
    double speedup_vs_baseline = 0.0;
    double ipc = 0.0;
    double l3_mpki = 0.0;
    double l1d_demand_bw_gbps = 0.0;
    double l1i_bw = 0.0;
    double l2_bw = 0.0;
    double l3_bw = 0.0;
    double mem_bw = 0.0;
};

// Derives one row per run; speedups are relative to the baseline preset's
// run of the same trace. Rows come out sorted by (trace, preset).
std::vector<ReportRow> build_report(const std::vector<RunStats> &runs,
                                    const std::string &baseline_preset);

void write_report_csv(const std::vector<ReportRow> &rows, const std::filesystem::path &path);

// Grouped bar charts, one SVG per metric: speedup.svg, l3_mpki.svg,
// l1d_bandwidth.svg.
void write_report_svgs(const std::vector<ReportRow> &rows, const std::filesystem::path &dir);

} // namespace cryosim
