#include "cryosim/report.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>

namespace cryosim {

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6f", v);
    return buf;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.2f", v);
    return buf;
}

void write_file(const std::filesystem::path &path, const std::string &content) {
    std::FILE *f = std::fopen(path.string().c_str(), "wb");
    if (!f)
        throw IoError("cannot open '" + path.string() + "' for writing");
    const std::size_t written = std::fwrite(content.data(), 1, content.size(), f);
    const int rc = std::fclose(f);
    if (written != content.size() || rc != 0)
        throw IoError("short write to '" + path.string() + "'");
}

const std::array<const char *, 6> kPalette = {"#4878d0", "#ee854a", "#6acc64",
                                              "#d65f5f", "#956cb4", "#8c613c"};

std::string svg_bar_chart(const std::string &title, const std::string &ylabel,
                          const std::vector<ReportRow> &rows,
                          double (*metric)(const ReportRow &)) {
    std::vector<std::string> traces, presets;
    for (const ReportRow &r : rows) {
        if (std::find(traces.begin(), traces.end(), r.trace) == traces.end())
            traces.push_back(r.trace);
        if (std::find(presets.begin(), presets.end(), r.preset) == presets.end())
            presets.push_back(r.preset);
    }
    std::map<std::pair<std::string, std::string>, double> values;
    double vmax = 0.0;
    for (const ReportRow &r : rows) {
        const double v = metric(r);
        values[{r.trace, r.preset}] = v;
        vmax = std::max(vmax, v);
    }
    if (vmax <= 0.0)
        vmax = 1.0;

    const double bar_w = 18.0, bar_gap = 2.0, group_gap = 30.0;
    const double left = 70.0, top = 50.0, plot_h = 300.0, bottom = 80.0;
    const double group_w = presets.size() * (bar_w + bar_gap) + group_gap;
    const double width = left + traces.size() * group_w + 180.0;
    const double height = top + plot_h + bottom;

    std::string s;
    s += "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n";
    s += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + fmt2(width) + "\" height=\"" +
         fmt2(height) + "\">\n";
    s += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    s += "<text x=\"" + fmt2(left) + "\" y=\"24\" font-family=\"sans-serif\" font-size=\"16\">" +
         title + "</text>\n";
    s += "<text x=\"12\" y=\"" + fmt2(top + plot_h / 2) +
         "\" font-family=\"sans-serif\" font-size=\"12\" transform=\"rotate(-90 12 " +
         fmt2(top + plot_h / 2) + ")\">" + ylabel + "</text>\n";
    // Axis and gridlines.
    s += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top) + "\" x2=\"" + fmt2(left) +
         "\" y2=\"" + fmt2(top + plot_h) + "\" stroke=\"black\"/>\n";
    s += "<line x1=\"" + fmt2(left) + "\" y1=\"" + fmt2(top + plot_h) + "\" x2=\"" +
         fmt2(width - 160.0) + "\" y2=\"" + fmt2(top + plot_h) + "\" stroke=\"black\"/>\n";
    for (int g = 0; g <= 4; ++g) {
        const double v = vmax * g / 4.0;
        const double y = top + plot_h - plot_h * g / 4.0;
        s += "<text x=\"" + fmt2(left - 8) + "\" y=\"" + fmt2(y + 4) +
             "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\">" + fmt2(v) +
             "</text>\n";
    }

    for (std::size_t t = 0; t < traces.size(); ++t) {
        const double gx = left + t * group_w + group_gap / 2;
        s += "<g>\n";
        for (std::size_t p = 0; p < presets.size(); ++p) {
            const auto it = values.find({traces[t], presets[p]});
            if (it == values.end())
                continue;
            const double h = plot_h * it->second / vmax;
            const double x = gx + p * (bar_w + bar_gap);
            s += "<rect x=\"" + fmt2(x) + "\" y=\"" + fmt2(top + plot_h - h) + "\" width=\"" +
                 fmt2(bar_w) + "\" height=\"" + fmt2(h) + "\" fill=\"" +
                 kPalette[p % kPalette.size()] + "\"/>\n";
        }
        const double lx = gx + presets.size() * (bar_w + bar_gap) / 2;
        s += "<text x=\"" + fmt2(lx) + "\" y=\"" + fmt2(top + plot_h + 14) +
             "\" font-family=\"sans-serif\" font-size=\"10\" text-anchor=\"end\" transform=\"rotate(-35 " +
             fmt2(lx) + " " + fmt2(top + plot_h + 14) + ")\">" + traces[t] + "</text>\n";
        s += "</g>\n";
    }

    // Legend.
    for (std::size_t p = 0; p < presets.size(); ++p) {
        const double y = top + 16.0 * p;
        s += "<rect x=\"" + fmt2(width - 150.0) + "\" y=\"" + fmt2(y) +
             "\" width=\"12\" height=\"12\" fill=\"" + kPalette[p % kPalette.size()] + "\"/>\n";
        s += "<text x=\"" + fmt2(width - 133.0) + "\" y=\"" + fmt2(y + 10) +
             "\" font-family=\"sans-serif\" font-size=\"11\">" + presets[p] + "</text>\n";
    }
    s += "</svg>\n";
    return s;
}

} // namespace

std::vector<ReportRow> build_report(const std::vector<RunStats> &runs,
                                    const std::string &baseline_preset) {
    std::map<std::string, const RunStats *> baselines;
    for (const RunStats &r : runs)
        if (r.config_id == baseline_preset)
            baselines[r.trace_name] = &r;

    std::vector<ReportRow> rows;
    for (const RunStats &r : runs) {
        auto b = baselines.find(r.trace_name);
        if (b == baselines.end())
            throw ConfigError("report: no '" + baseline_preset + "' baseline run for trace '" +
                              r.trace_name + "'");
        ReportRow row;
        row.trace = r.trace_name;
        row.preset = r.config_id;
        row.sim_ticks = r.sim_ticks;
        row.speedup_vs_baseline = speedup(*b->second, r);
        row.ipc = r.ipc();
        row.l3_mpki = mpki(r.l3.misses, r.committed_instructions);
        row.l1d_demand_bw_gbps = bandwidth(r.l1d.demand_bytes, r.sim_ticks) / 1e9;
        row.l1i_bw = bandwidth(r.l1i.demand_bytes, r.sim_ticks) / 1e9;
        row.l2_bw = bandwidth(r.l2.demand_bytes, r.sim_ticks) / 1e9;
        row.l3_bw = bandwidth(r.l3.demand_bytes, r.sim_ticks) / 1e9;
        row.mem_bw = bandwidth(r.mem.bytes, r.sim_ticks) / 1e9;
        rows.push_back(row);
    }
    std::sort(rows.begin(), rows.end(), [](const ReportRow &a, const ReportRow &b) {
        if (a.trace != b.trace)
            return a.trace < b.trace;
        return a.preset < b.preset;
    });
    return rows;
}

void write_report_csv(const std::vector<ReportRow> &rows, const std::filesystem::path &path) {
    std::string out = "trace,preset,sim_ticks,speedup_vs_baseline,ipc,l3_mpki,"
                      "l1d_demand_bw_gbps,l1i_bw,l2_bw,l3_bw,mem_bw\r\n";
    for (const ReportRow &r : rows) {
        out += r.trace + "," + r.preset + "," + std::to_string(r.sim_ticks) + "," +
               fmt(r.speedup_vs_baseline) + "," + fmt(r.ipc) + "," + fmt(r.l3_mpki) + "," +
               fmt(r.l1d_demand_bw_gbps) + "," + fmt(r.l1i_bw) + "," + fmt(r.l2_bw) + "," +
               fmt(r.l3_bw) + "," + fmt(r.mem_bw) + "\r\n";
    }
    write_file(path, out);
}

void write_report_svgs(const std::vector<ReportRow> &rows, const std::filesystem::path &dir) {
    write_file(dir / "speedup.svg",
               svg_bar_chart("Speedup vs baseline", "speedup", rows,
                             [](const ReportRow &r) { return r.speedup_vs_baseline; }));
    write_file(dir / "l3_mpki.svg", svg_bar_chart("L3 MPKI", "misses / kilo-instruction", rows,
                                                  [](const ReportRow &r) { return r.l3_mpki; }));
    write_file(dir / "l1d_bandwidth.svg",
               svg_bar_chart("L1D demand bandwidth", "GB/s", rows,
                             [](const ReportRow &r) { return r.l1d_demand_bw_gbps; }));
}

} // namespace cryosim
