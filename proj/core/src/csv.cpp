// SPDX-License-Identifier: Apache-2.0

#include "fdx/csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

#include "fdx/config.hpp"
#include "fdx/errors.hpp"

namespace fdx {

std::string format_number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", x);
    return buf;
}

namespace {

std::string ratio_row(const ExperimentRecord& r) {
    return r.experiment + "," + to_string(r.mode) + "," + format_number(r.snr_db) + "," +
           std::to_string(r.n_c) + "," + std::to_string(r.n) + "," + format_number(r.ratio) +
           "," + format_number(r.predicted_ratio) + "," + format_number(r.sinr_db) + "," +
           std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + r.flags + "\n";
}

std::string rate_row(const ExperimentRecord& r) {
    return r.experiment + "," + std::to_string(r.n) + "," + format_number(r.t_coh_s) + "," +
           format_number(r.c_cal) + "," + format_number(r.c_nocal) + "," +
           format_number(r.sinr_c_db) + "," + format_number(r.sinr_nc_db) + "," +
           format_number(r.snr_db) + "," + std::to_string(r.trials) + "," +
           std::to_string(r.seed) + "," + r.flags + "\n";
}

std::string crlb_row(const ExperimentRecord& r) {
    return r.experiment + "," + r.profile + "," + std::to_string(r.m) + "," +
           std::to_string(r.n) + "," + format_number(r.variance) + "," +
           format_number(r.bound) + "," + format_number(r.ratio) + "," +
           std::to_string(r.trials) + "," + std::to_string(r.seed) + "," + r.flags + "\n";
}

const char* header_for(const std::string& experiment) {
    if (experiment == "ratio")
        return "experiment,mode,snr_db,n_c,n,ratio,predicted_ratio,sinr_db,trials,seed,flags\n";
    if (experiment == "rate")
        return "experiment,n,t_coh_s,c_cal,c_nocal,sinr_c_db,sinr_nc_db,snr_db,trials,seed,"
               "flags\n";
    if (experiment == "crlb")
        return "experiment,profile,m,n,variance,bound,ratio,trials,seed,flags\n";
    throw EstimationError("emit_csv: unknown experiment kind '" + experiment + "'");
}

}  // namespace

void emit_csv(const std::vector<ExperimentRecord>& records, const std::string& path) {
    if (records.empty()) throw EstimationError("emit_csv: no records to write");
    const std::string& kind = records.front().experiment;
    for (const ExperimentRecord& r : records)
        if (r.experiment != kind)
            throw EstimationError("emit_csv: mixed experiment kinds in one file");

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << header_for(kind);
    for (const ExperimentRecord& r : records) {
        if (kind == "ratio")
            out << ratio_row(r);
        else if (kind == "rate")
            out << rate_row(r);
        else
            out << crlb_row(r);
    }
    out.flush();
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

void emit_plot_script(const std::vector<ExperimentRecord>& records, const std::string& path) {
    if (records.empty()) throw EstimationError("emit_plot_script: no records");
    const std::string& kind = records.front().experiment;

    std::ofstream out(path, std::ios::binary);
    if (!out) throw ConfigError("cannot open output file '" + path + "'");
    out << "#!/usr/bin/env python3\n"
           "\"\"\"Plots the CSV produced alongside this script. Usage: plot.py "
           "results.csv\"\"\"\n"
           "import csv\n"
           "import sys\n"
           "\n"
           "import matplotlib\n"
           "matplotlib.use(\"Agg\")\n"
           "import matplotlib.pyplot as plt\n"
           "\n"
           "path = sys.argv[1] if len(sys.argv) > 1 else \"results.csv\"\n"
           "with open(path, newline=\"\") as f:\n"
           "    rows = list(csv.DictReader(f))\n"
           "fig, ax = plt.subplots(figsize=(7, 5))\n";
    if (kind == "ratio") {
        out << "modes = sorted({r[\"mode\"] for r in rows})\n"
               "for mode in modes:\n"
               "    pts = [r for r in rows if r[\"mode\"] == mode]\n"
               "    xs = [float(r[\"n_c\"]) for r in pts]\n"
               "    ys = [float(r[\"ratio\"]) for r in pts]\n"
               "    ax.plot(xs, ys, \"o-\", label=f\"measured ({mode})\")\n"
               "    ps = [float(r[\"predicted_ratio\"]) for r in pts]\n"
               "    ax.plot(xs, ps, \"k--\", label=\"predicted\" if mode == modes[0] else "
               "None)\n"
               "ax.set_xlabel(\"calibration samples $N_c$\")\n"
               "ax.set_ylabel(\"sample size ratio $N/N_c$\")\n";
    } else if (kind == "rate") {
        out << "for n in sorted({int(r[\"n\"]) for r in rows}):\n"
               "    pts = [r for r in rows if int(r[\"n\"]) == n and r[\"flags\"] != "
               "\"infeasible\"]\n"
               "    xs = [float(r[\"t_coh_s\"]) for r in pts]\n"
               "    ax.plot(xs, [float(r[\"c_cal\"]) for r in pts], \"o-\", label=f\"calibrated,"
               " N={n}\")\n"
               "    ax.plot(xs, [float(r[\"c_nocal\"]) for r in pts], \"s--\", "
               "label=f\"uncalibrated, N={n}\")\n"
               "ax.set_xscale(\"log\")\n"
               "ax.set_xlabel(\"coherence time [s]\")\n"
               "ax.set_ylabel(\"achievable rate [bits/s/Hz]\")\n";
    } else {
        out << "for prof in sorted({r[\"profile\"] for r in rows}):\n"
               "    pts = [r for r in rows if r[\"profile\"] == prof]\n"
               "    xs = [float(r[\"n\"]) for r in pts]\n"
               "    ax.plot(xs, [float(r[\"variance\"]) for r in pts], \"o-\", "
               "label=f\"variance ({prof})\")\n"
               "    ax.plot(xs, [float(r[\"bound\"]) for r in pts], \"--\", label=f\"bound "
               "({prof})\")\n"
               "ax.set_xscale(\"log\")\n"
               "ax.set_yscale(\"log\")\n"
               "ax.set_xlabel(\"estimation samples $N$\")\n"
               "ax.set_ylabel(\"per-tap variance\")\n";
    }
    out << "ax.grid(True, which=\"both\", alpha=0.3)\n"
           "ax.legend()\n"
           "fig.tight_layout()\n"
           "fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
    out.flush();
    if (!out) throw ConfigError("failed writing output file '" + path + "'");
}

}  // namespace fdx
