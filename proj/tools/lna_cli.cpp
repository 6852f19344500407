// Command-line front end: analyze | synthesize | sweep | compare | stability.
// Exit codes: 0 success, 1 usage error, 2 domain error (infeasible, parse, ...).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "lna/analysis.hpp"
#include "lna/devices.hpp"
#include "lna/explorer.hpp"
#include "lna/synthesis.hpp"
#include "lna/touchstone.hpp"

namespace {

// Frequency grid syntax "lo:hi:n", linear in Hz, with k/M/G unit suffixes.
double parse_freq(const std::string& s) {
    if (s.empty())
        throw lna::InvalidArgument("empty frequency");
    double scale = 1.0;
    std::string num = s;
    switch (s.back()) {
    case 'k': scale = 1e3; num = s.substr(0, s.size() - 1); break;
    case 'M': scale = 1e6; num = s.substr(0, s.size() - 1); break;
    case 'G': scale = 1e9; num = s.substr(0, s.size() - 1); break;
    default: break;
    }
    std::size_t used = 0;
    const double v = std::stod(num, &used);
    if (used != num.size() || !(v > 0.0))
        throw lna::InvalidArgument("bad frequency '" + s + "'");
    return v * scale;
}

std::vector<double> parse_grid(const std::string& s) {
    const auto c1 = s.find(':');
    const auto c2 = s.find(':', c1 == std::string::npos ? c1 : c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos)
        throw lna::InvalidArgument("grid must be lo:hi:n, e.g. 2.2G:2.7G:101");
    const double lo = parse_freq(s.substr(0, c1));
    const double hi = parse_freq(s.substr(c1 + 1, c2 - c1 - 1));
    const long n = std::stol(s.substr(c2 + 1));
    if (n < 1 || (n == 1 && lo != hi) || (n > 1 && !(hi > lo)))
        throw lna::InvalidArgument("bad grid '" + s + "'");
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>(n));
    for (long i = 0; i < n; ++i)
        grid.push_back(n == 1 ? lo : lo + (hi - lo) * static_cast<double>(i) /
                                              static_cast<double>(n - 1));
    return grid;
}

void write_text_file(const std::string& path, const std::string& text) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw lna::IoError("cannot open for writing: " + tmp);
        out << text;
        if (!out)
            throw lna::IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw lna::IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

lna::Technology tech_or_default(const std::string& path) {
    if (path.empty())
        return lna::Technology{};
    return lna::load_technology(path);
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Design toolkit for inductively degenerated common-source LNAs"};
    app.require_subcommand(1);

    // analyze
    std::string an_netlist, an_grid = "2.2G:2.7G:101", an_out;
    double an_z0 = 50.0;
    auto* analyze = app.add_subcommand("analyze", "AC-sweep a netlist and write Touchstone");
    analyze->add_option("netlist", an_netlist, "netlist JSON")->required()->check(CLI::ExistingFile);
    analyze->add_option("--grid", an_grid, "frequency grid lo:hi:n (suffixes k/M/G)");
    analyze->add_option("--z0", an_z0, "reference impedance, ohms");
    analyze->add_option("-o,--output", an_out, "output .s2p path")->required();

    // synthesize
    std::string sy_spec, sy_tech, sy_out, sy_netlist_out;
    double sy_id_ma = 0.0, sy_w1 = 0.0;
    auto* synth = app.add_subcommand("synthesize", "Size the passive network for one design point");
    synth->add_option("spec", sy_spec, "design spec JSON")->required()->check(CLI::ExistingFile);
    synth->add_option("--id", sy_id_ma, "bias current, mA")->required();
    synth->add_option("--w1", sy_w1, "input device width, um")->required();
    synth->add_option("--tech", sy_tech, "technology JSON")->check(CLI::ExistingFile);
    synth->add_option("-o,--output", sy_out, "output network JSON")->required();
    synth->add_option("--emit-netlist", sy_netlist_out, "also write the verification netlist JSON");

    // sweep
    std::string sw_config, sw_out;
    auto* sweep_cmd = app.add_subcommand("sweep", "Evaluate the (id, w1) design-space grid");
    sweep_cmd->add_option("config", sw_config, "sweep config JSON")->required()->check(CLI::ExistingFile);
    sweep_cmd->add_option("-o,--output", sw_out, "output CSV path")->required();

    // compare
    std::string cm_meas, cm_sim, cm_out;
    double cm_f0_ghz = 2.45;
    auto* cmp = app.add_subcommand("compare", "Compare measured vs simulated S-parameter files");
    cmp->add_option("measured", cm_meas, "measured .s2p")->required()->check(CLI::ExistingFile);
    cmp->add_option("simulated", cm_sim, "simulated .s2p")->required()->check(CLI::ExistingFile);
    cmp->add_option("--f0", cm_f0_ghz, "comparison frequency, GHz");
    cmp->add_option("-o,--output", cm_out, "output report JSON")->required();

    // stability
    std::string st_file;
    auto* stab = app.add_subcommand("stability", "Print per-frequency K, |Delta| and verdict");
    stab->add_option("file", st_file, ".s2p file")->required()->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (*analyze) {
            const lna::Netlist nl = lna::Netlist::from_json_file(an_netlist);
            const auto grid = parse_grid(an_grid);
            const lna::TwoPortParams tp = lna::extract_two_port(nl, grid, an_z0);
            lna::TouchstoneData data;
            data.freq_unit = lna::TouchstoneData::FreqUnit::GHz;
            data.param_kind = lna::TouchstoneData::ParamKind::S;
            data.format = lna::TouchstoneData::Format::RI;
            data.z0 = tp.z0;
            data.freqs = tp.freqs;
            data.values = tp.s;
            lna::write_touchstone_file(data, an_out);
        } else if (*synth) {
            const lna::DesignSpec spec = lna::DesignSpec::load(sy_spec);
            const lna::Technology tech = tech_or_default(sy_tech);
            const double id = sy_id_ma * 1e-3;
            const lna::LnaNetwork net = lna::synthesize(spec, id, sy_w1, tech);
            const lna::MosOpPoint m1 = lna::small_signal(id, {sy_w1, tech.l_min}, tech);
            const lna::MosOpPoint m2 = lna::small_signal(id, {sy_w1 / 2.0, tech.l_min}, tech);
            // Evaluate before writing anything so a failure leaves no output.
            const lna::LnaMetrics m = lna::evaluate_lna(net, m1, m2, spec, tech);
            write_text_file(sy_out, net.to_json() + "\n");
            if (!sy_netlist_out.empty()) {
                const lna::Netlist nl = lna::build_lna_netlist(net, m1, m2, tech, spec.rs, spec.rl);
                write_text_file(sy_netlist_out, nl.to_json() + "\n");
            }
            std::fprintf(stderr,
                         "verified at %.4f GHz: S11 %.1f dB, S22 %.1f dB, |S21| %.2f dB "
                         "(available %.2f dB), NF %.2f dB, IIP3 %.2f dBm\n",
                         m.f0 / 1e9, m.s11_db, m.s22_db, m.gain_db, m.gain_available_db,
                         m.nf_db, lna::iip3_power_series(m1, spec.rs));
        } else if (*sweep_cmd) {
            const lna::SweepConfig cfg = lna::SweepConfig::load(sw_config);
            const auto records = lna::sweep(cfg.spec, cfg.grid, cfg.tech);
            for (const auto& r : records)
                if (!r.network)
                    std::fprintf(stderr, "infeasible (id = %.3g mA, w1 = %.3g um): %s\n",
                                 r.id * 1e3, r.w1, r.failure.c_str());
            lna::export_table(records, sw_out);
        } else if (*cmp) {
            const lna::TouchstoneData meas = lna::parse_touchstone_file(cm_meas);
            const lna::TouchstoneData sim = lna::parse_touchstone_file(cm_sim);
            const lna::ComparisonReport rep = lna::compare(meas, sim, cm_f0_ghz * 1e9);
            write_text_file(cm_out, rep.to_json() + "\n");
        } else if (*stab) {
            const lna::TouchstoneData data = lna::parse_touchstone_file(st_file);
            const lna::StabilityReport rep = lna::stability(data.to_two_port());
            for (const auto& p : rep.points) {
                if (p.unilateral)
                    std::printf("%.6e Hz  K = inf (unilateral)  |Delta| = %.6f  %s\n", p.freq,
                                p.delta_mag, p.stable ? "stable" : "not unconditionally stable");
                else
                    std::printf("%.6e Hz  K = %.6f  |Delta| = %.6f  %s\n", p.freq, p.k,
                                p.delta_mag, p.stable ? "stable" : "not unconditionally stable");
            }
            std::printf("verdict: %s\n", rep.stable_everywhere
                                             ? "unconditionally stable over the grid"
                                             : "not unconditionally stable over the grid");
        }
    } catch (const lna::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
    return 0;
}
