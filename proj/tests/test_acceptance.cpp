// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Criteria cover the sizing equations, the AC engine against closed
// forms, the end-to-end synthesis gates, the device model's linearity peak,
// the selection rule, stability math, Touchstone round trips, the
// measured-vs-simulated workflow, and determinism.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <string>
#include <vector>

#include "lna/analysis.hpp"
#include "lna/devices.hpp"
#include "lna/explorer.hpp"
#include "lna/netlist.hpp"
#include "lna/synthesis.hpp"
#include "lna/touchstone.hpp"
#include "oracles.hpp"

using namespace lna;

namespace {

int g_failed = 0;

void report(int n, const char* name, bool pass, const std::string& detail = "") {
    std::printf("criterion %2d: %s — %s%s%s\n", n, pass ? "PASS" : "FAIL", name,
                detail.empty() ? "" : " — ", detail.c_str());
    if (!pass)
        ++g_failed;
}

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

std::string slurp(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

CandidateRecord fixture_record(double id, double w1, double iip3) {
    CandidateRecord r;
    r.id = id;
    r.w1 = w1;
    r.network = LnaNetwork{2e-9, 8e-9, 15e-9, 300e-15, 300e-15, 1.5e-12, 30e-12, 10e3, 12.0};
    r.gain_db = 10.5;
    r.nf_db = 2.7;
    r.iip3_dbm = iip3;
    r.s11_db = -20.0;
    r.s22_db = -21.0;
    r.s12_db = -45.0;
    r.p_dc = 5e-4;
    return r;
}

TouchstoneData comparison_fixture(bool measured) {
    TouchstoneData d;
    d.freq_unit = TouchstoneData::FreqUnit::GHz;
    d.format = TouchstoneData::Format::DB;
    d.z0 = 50.0;
    const double dip = measured ? 2.30e9 : 2.45e9;
    const double s21_at_245 = measured ? 10.2 : 10.7;
    for (int i = 0; i <= 60; ++i) {
        const double f = 2.0e9 + 0.9e9 * i / 60.0;
        const double xg = (f - 2.45e9) / 0.35e9;
        const double xd = (f - dip) / 0.25e9;
        Mat2c m;
        m[0] = std::polar(db_to_mag(std::min(-6.0, -18.0 + 6.0 * xg * xg)), 2.1);
        m[1] = std::polar(db_to_mag(-40.0), -0.4);
        m[2] = std::polar(db_to_mag(s21_at_245 - 2.0 * xg * xg), 1.0);
        m[3] = std::polar(db_to_mag(std::min(-4.0, -25.0 + 18.0 * xd * xd)), -1.2);
        d.freqs.push_back(f);
        d.values.push_back(m);
    }
    return d;
}

} // namespace

int main() {
    const double t_start = now_s();
    const Technology tech;
    const DesignSpec spec;
    const double omega0 = 2.0 * constants::pi * 2.45e9;

    // ---- 1: effective transconductance ----------------------------------
    {
        const double gm = effective_transconductance(1.8e-9, omega0);
        report(1, "Gm(1.8 nH, 2.45 GHz) = 18.04 mS +/- 0.01 mS",
               std::abs(gm - 18.04e-3) <= 0.01e-3);
    }

    // ---- 2: gain chain and its inversion --------------------------------
    {
        const GainBreakdown g = available_gain(1.8e-9, 9.5e-9, 10.0, 1e-4, 50.0, omega0);
        const bool chain_ok = std::abs(g.gain_db - 13.174666643532) <= 0.01;
        Technology t10 = tech;
        t10.inductor_q = 10.0;
        const double ls = ls_for_gain(g.gain_linear, 9.5e-9, 10.0, 1e-4, 50.0, omega0, t10);
        const bool inv_ok = std::abs(ls - 1.8e-9) <= 1e-9 * 1.8e-9;
        report(2, "13.17 dB worked example and 1.8 nH inversion", chain_ok && inv_ok);
    }

    // ---- 3: engine vs closed-form input impedance ------------------------
    {
        const double gm = 20e-3, cgs = 300e-15, cx = 420e-15, ls = 1.8e-9, lg = 4.0e-9;
        Netlist nl;
        const NodeId in = nl.node("in"), g = nl.node("g"), s = nl.node("s");
        nl.add_inductor(in, g, lg);
        nl.add_mos(g, s, nl.ground(), gm, 0.0, cgs, 0.0);
        nl.add_capacitor(g, s, cx);
        nl.add_inductor(s, nl.ground(), ls);
        nl.add_port(in, 50.0);
        bool ok = true;
        for (int i = 0; i < 10; ++i) {
            const double f = 2.2e9 + 0.5e9 * i / 9.0;
            const Complex z = input_impedance(nl, 0, f);
            const Complex want = oracles::degenerated_zin(2.0 * constants::pi * f, ls, lg,
                                                          cgs + cx, gm);
            ok = ok && std::abs(z - want) <= 1e-9 * std::abs(want);
        }
        report(3, "degenerated-stage Zin matches the closed form to 1e-9", ok);
    }

    // ---- 4: synthesis at the reference point -----------------------------
    {
        const double t0 = now_s();
        bool ok = false;
        std::string detail;
        try {
            const LnaNetwork net = synthesize(spec, 0.4e-3, 40.0, tech);
            const MosOpPoint m1 = small_signal(0.4e-3, {40.0, tech.l_min}, tech);
            const MosOpPoint m2 = small_signal(0.4e-3, {20.0, tech.l_min}, tech);
            const LnaMetrics m = evaluate_lna(net, m1, m2, spec, tech);
            char buf[160];
            std::snprintf(buf, sizeof(buf), "S11 %.1f dB, S22 %.1f dB, gain %.3f dB, %.2f s",
                          m.s11_db, m.s22_db, m.gain_db, now_s() - t0);
            detail = buf;
            ok = m.s11_db <= -15.0 && m.s22_db <= -15.0 && m.gain_db >= 10.3 &&
                 m.gain_db <= 10.9 && (now_s() - t0) < 5.0;
        } catch (const Error& e) {
            detail = e.what();
        }
        report(4, "synthesis at (0.4 mA, 40 um) passes the window", ok, detail);
    }

    // ---- 5: linearity sweet spot ------------------------------------------
    {
        const double t0 = now_s();
        std::vector<double> iip3;
        int crossings = 0;
        double prev_gm3 = 0.0;
        for (int i = 0; i < 100; ++i) {
            const double id = 10e-6 * std::pow(2e-3 / 10e-6, i / 99.0);
            const MosOpPoint op = small_signal(id, {40.0, tech.l_min}, tech);
            if (i > 0 && prev_gm3 * op.gm3 < 0.0)
                ++crossings;
            prev_gm3 = op.gm3;
            iip3.push_back(iip3_power_series(op, 50.0));
        }
        std::size_t best = 0;
        int ties = 0;
        for (std::size_t i = 1; i < iip3.size(); ++i) {
            if (iip3[i] > iip3[best]) {
                best = i;
                ties = 0;
            } else if (iip3[i] == iip3[best]) {
                ++ties;
            }
        }
        const bool ok = crossings == 1 && ties == 0 && best > 0 && best + 1 < iip3.size() &&
                        (now_s() - t0) < 2.0;
        report(5, "unique interior IIP3 maximum and single gm3 sign change", ok);
    }

    // ---- 6: selection rule -------------------------------------------------
    {
        const std::vector<CandidateRecord> recs = {
            fixture_record(0.3e-3, 32.0, -5.0), // fails the IIP3 floor
            fixture_record(0.4e-3, 24.0, 0.5),
            fixture_record(0.4e-3, 40.0, 0.9),
        };
        bool ok = false;
        try {
            const CandidateRecord sel = select(recs, spec);
            const std::vector<CandidateRecord> perm = {recs[2], recs[0], recs[1]};
            const CandidateRecord sel2 = select(perm, spec);
            ok = sel.id == 0.4e-3 && sel.iip3_dbm == 0.9 && sel.w1 == 40.0 &&
                 sel2.id == sel.id && sel2.w1 == sel.w1;
        } catch (const Error&) {
        }
        report(6, "lowest feasible current with IIP3 tie-break, order-invariant", ok);
    }

    // ---- 7: stability math ---------------------------------------------------
    {
        TwoPortParams p;
        p.freqs = {2.45e9};
        p.s = {{Complex(0, 0), Complex(0.5, 0), Complex(0.5, 0), Complex(0, 0)}};
        const auto sym = stability(p).points[0];
        p.s = {{Complex(0.2, 0), Complex(0, 0), Complex(3.0, 0), Complex(0.1, 0)}};
        const auto uni = stability(p).points[0];
        p.s = {{Complex(0.9, 0), Complex(0.1, 0), Complex(8.0, 0), Complex(0.9, 0)}};
        const auto bad = stability(p).points[0];
        const bool ok = std::abs(sym.k - 2.125) <= 1e-12 &&
                        std::abs(sym.delta_mag - 0.25) <= 1e-12 && sym.stable &&
                        uni.unilateral && uni.stable && !bad.stable;
        report(7, "K = 2.125, |Delta| = 0.25, unilateral flag, verdict logic", ok);
    }

    // ---- 8: touchstone round trip ---------------------------------------------
    {
        TouchstoneData base;
        base.format = TouchstoneData::Format::RI;
        for (int i = 0; i < 50; ++i) {
            const double f = 2.0e9 + 1.0e9 * i / 49.0;
            const double x = (f - 2.45e9) / 0.3e9;
            Mat2c m;
            m[0] = std::polar(0.2 + 0.1 * x * x, 2.0 + 0.5 * x);
            m[1] = std::polar(0.009 + 0.002 * x * x, -1.0 + x);
            m[2] = std::polar(3.4 / (1.0 + x * x), 1.5 - 0.8 * x);
            m[3] = std::polar(0.15 + 0.2 * x * x, -2.0 + 0.3 * x);
            base.freqs.push_back(f);
            base.values.push_back(m);
        }
        bool ok = true;
        for (auto fmt : {TouchstoneData::Format::RI, TouchstoneData::Format::MA,
                         TouchstoneData::Format::DB}) {
            TouchstoneData d = base;
            d.format = fmt;
            const TouchstoneData back = parse_touchstone(write_touchstone(d));
            ok = ok && back.freqs.size() == base.freqs.size();
            for (std::size_t i = 0; ok && i < back.freqs.size(); ++i)
                for (int k = 0; k < 4; ++k) {
                    const Complex a = back.values[i][static_cast<std::size_t>(k)];
                    const Complex b = base.values[i][static_cast<std::size_t>(k)];
                    ok = ok && std::abs(a - b) <= 1e-5 * std::max(1e-30, std::abs(b));
                }
        }
        // malformed input carries a line number
        bool line_ok = false;
        try {
            (void)parse_touchstone("# GHz S RI R 50\n1.0 0 0 0 0 0 0 0 0\nnonsense\n");
        } catch (const TouchstoneSyntaxError& e) {
            line_ok = e.line == 3;
        }
        report(8, "parse/write identity at 1e-5 across RI/MA/DB, line-numbered errors",
               ok && line_ok);
    }

    // ---- 9: comparison workflow --------------------------------------------------
    {
        bool ok = false;
        std::string detail;
        try {
            const ComparisonReport rep =
                compare(comparison_fixture(true), comparison_fixture(false), 2.45e9);
            char buf[120];
            std::snprintf(buf, sizeof(buf), "dS21 %.3f dB, shift %.1f MHz",
                          rep.s21.delta_db, rep.s22_min_shift / 1e6);
            detail = buf;
            ok = std::abs(rep.s21.delta_db - (-0.5)) <= 1e-9 &&
                 std::abs(rep.s22_min_shift - (-150e6)) <= 1.0;
        } catch (const Error& e) {
            detail = e.what();
        }
        report(9, "measured-vs-simulated gap of -0.5 dB and -150 MHz dip shift", ok, detail);
    }

    // ---- 10: determinism and noise sanity ------------------------------------------
    {
        bool ok = false;
        std::string detail;
        try {
            const auto r1 = sweep(spec, SweepGrid::defaults(), tech);
            const auto r2 = sweep(spec, SweepGrid::defaults(), tech);
            export_table(r1, "acceptance_sweep_1.csv");
            export_table(r2, "acceptance_sweep_2.csv");
            const bool bytes_ok = slurp("acceptance_sweep_1.csv") ==
                                  slurp("acceptance_sweep_2.csv");
            std::remove("acceptance_sweep_1.csv");
            std::remove("acceptance_sweep_2.csv");

            Netlist thr;
            const NodeId x = thr.node("x");
            const int p = thr.add_port(x, 50.0);
            thr.add_port(x, 50.0);
            thr.set_source_noise_port(p);
            const double nf0 = noise_figure(thr, 2.45e9, 0, 1);

            const LnaNetwork net = synthesize(spec, 0.4e-3, 40.0, tech);
            const MosOpPoint m1 = small_signal(0.4e-3, {40.0, tech.l_min}, tech);
            const MosOpPoint m2 = small_signal(0.4e-3, {20.0, tech.l_min}, tech);
            const double nf = evaluate_lna(net, m1, m2, spec, tech).nf_db;

            char buf[120];
            std::snprintf(buf, sizeof(buf), "NF(noiseless) %.2e dB, NF(candidate) %.3f dB",
                          nf0, nf);
            detail = buf;
            ok = bytes_ok && std::abs(nf0) <= 1e-9 && std::isfinite(nf) && nf > 0.0 &&
                 nf < 3.0;
        } catch (const Error& e) {
            detail = e.what();
        }
        const double elapsed = now_s() - t_start;
        ok = ok && elapsed < 10.0;
        report(10, "byte-identical sweeps, NF sanity, suite under 10 s", ok, detail);
    }

    if (g_failed == 0) {
        std::printf("acceptance: all criteria passed\n");
        return 0;
    }
    std::printf("acceptance: %d criterion(s) failed\n", g_failed);
    return 1;
}
