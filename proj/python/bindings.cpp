#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "cryosim/kernel.hpp"
#include "cryosim/stats.hpp"
#include "cryosim/system.hpp"
#include "cryosim/trace.hpp"

namespace py = pybind11;
using namespace cryosim;

namespace {

RunStats run_with_overrides(const std::string &preset, const Trace &trace,
                            const std::string &trace_name, bool warmup,
                            const std::map<std::string, std::string> &overrides) {
    SystemConfig cfg = make_preset(preset);
    for (const auto &[k, v] : overrides)
        apply_config_line(cfg, k, v);
    cfg.warmup = warmup;
    return run_simulation(cfg, trace, trace_name);
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Trace-driven multi-clock-domain core and cache-hierarchy timing simulator";

    py::register_exception<SimError>(m, "SimError");

    py::class_<ClockDomain>(m, "ClockDomain")
        .def_readonly("name", &ClockDomain::name)
        .def_readonly("frequency_hz", &ClockDomain::frequency_hz)
        .def_readonly("period", &ClockDomain::period)
        .def("__repr__", [](const ClockDomain &d) {
            return "ClockDomain(" + d.name + ", " + std::to_string(d.frequency_hz) + " Hz, " +
                   std::to_string(d.period) + " ticks)";
        });
    m.def("make_domain", &make_domain, py::arg("name"), py::arg("frequency_hz"));
    m.def("cycles_to_ticks", &cycles_to_ticks, py::arg("domain"), py::arg("cycles"));
    m.def("next_edge", &next_edge, py::arg("domain"), py::arg("tick"));

    py::class_<Trace>(m, "Trace")
        .def("__len__", [](const Trace &t) { return t.size(); })
        .def_readonly("metadata", &Trace::metadata)
        .def("save", [](const Trace &t, const std::filesystem::path &p) { write_trace(t, p); },
             py::arg("path"));
    m.def("load_trace", &read_trace, py::arg("path"));

    m.def("gen_compute_bound", &gen_compute_bound, py::arg("n"), py::arg("footprint"),
          py::arg("mem_ratio"), py::arg("seed"));
    py::enum_<MemPattern>(m, "MemPattern")
        .value("UniformRandom", MemPattern::UniformRandom)
        .value("PointerChase", MemPattern::PointerChase);
    m.def("gen_memory_bound", &gen_memory_bound, py::arg("n"), py::arg("footprint"),
          py::arg("pattern"), py::arg("seed"));
    m.def("gen_branchy", &gen_branchy, py::arg("n"), py::arg("predictability"), py::arg("seed"));

    py::class_<LevelCounters>(m, "LevelCounters")
        .def_readonly("demand_accesses", &LevelCounters::demand_accesses)
        .def_readonly("hits", &LevelCounters::hits)
        .def_readonly("misses", &LevelCounters::misses)
        .def_readonly("mshr_merges", &LevelCounters::mshr_merges)
        .def_readonly("demand_bytes", &LevelCounters::demand_bytes)
        .def_readonly("fill_bytes", &LevelCounters::fill_bytes);
    py::class_<MemCounters>(m, "MemCounters")
        .def_readonly("reads", &MemCounters::reads)
        .def_readonly("writes", &MemCounters::writes)
        .def_readonly("bytes", &MemCounters::bytes);
    py::class_<RunStats>(m, "RunStats")
        .def_readonly("config_id", &RunStats::config_id)
        .def_readonly("trace_name", &RunStats::trace_name)
        .def_readonly("sim_ticks", &RunStats::sim_ticks)
        .def_readonly("core_period", &RunStats::core_period)
        .def_readonly("core_cycles", &RunStats::core_cycles)
        .def_readonly("committed_instructions", &RunStats::committed_instructions)
        .def_readonly("branches", &RunStats::branches)
        .def_readonly("mispredictions", &RunStats::mispredictions)
        .def_readonly("l1i", &RunStats::l1i)
        .def_readonly("l1d", &RunStats::l1d)
        .def_readonly("l2", &RunStats::l2)
        .def_readonly("l3", &RunStats::l3)
        .def_readonly("mem", &RunStats::mem)
        .def("ipc", &RunStats::ipc)
        .def("__repr__", [](const RunStats &s) {
            return "RunStats(" + s.config_id + "/" + s.trace_name + ", " +
                   std::to_string(s.sim_ticks) + " ticks, " +
                   std::to_string(s.committed_instructions) + " instructions)";
        });

    m.def("preset_names", [] { return preset_names(); });
    m.def("run", &run_with_overrides, py::arg("preset"), py::arg("trace"),
          py::arg("trace_name") = "trace", py::arg("warmup") = true,
          py::arg("overrides") = std::map<std::string, std::string>{},
          "Simulate a trace on a preset, optionally overriding config keys");

    m.def("speedup", &speedup, py::arg("baseline"), py::arg("test"));
    m.def("mpki", &mpki, py::arg("misses"), py::arg("instructions"));
    m.def("bandwidth", &bandwidth, py::arg("bytes"), py::arg("sim_ticks"));
    m.def(
        "simpoint_combine",
        [](const std::vector<std::pair<double, RunStats>> &regions, std::uint64_t total) {
            std::vector<RegionWeight> rw;
            for (const auto &[w, s] : regions)
                rw.push_back({w, s});
            const SimpointAggregate agg = simpoint_combine(rw, total);
            py::dict d;
            d["config_id"] = agg.config_id;
            d["cpi"] = agg.cpi;
            d["est_time_ticks"] = agg.est_time_ticks;
            d["l3_mpki"] = agg.l3_mpki;
            d["l1d_demand_bw"] = agg.l1d_demand_bw;
            d["total_instructions"] = agg.total_instructions;
            return d;
        },
        py::arg("regions"), py::arg("total_instructions"),
        "Weighted combination of (weight, RunStats) regions");

#ifdef VERSION_INFO
    m.attr("__version__") = VERSION_INFO;
#else
    m.attr("__version__") = "dev";
#endif
}
