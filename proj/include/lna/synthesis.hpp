#pragma once

#include <string>

#include "lna/analysis.hpp"
#include "lna/devices.hpp"
#include "lna/netlist.hpp"
#include "lna/twoport.hpp"

namespace lna {

/// Target specification for one amplifier design.
struct DesignSpec {
    double band_lo = 2.4e9;       // Hz
    double band_hi = 2.5e9;       // Hz
    double gain_target_db = 10.5; // dB
    double gain_tol_db = 0.5;     // dB
    double nf_max_db = 3.0;
    double iip3_min_dbm = -4.0;
    double s11_max_db = -10.0;
    double s22_max_db = -10.0;
    double rs = 50.0; // ohms
    double rl = 50.0; // ohms

    void validate() const;
    /// Geometric mean of the band edges: symmetric error on a log axis.
    double center_freq() const;
    double omega0() const;

    static DesignSpec load(const std::string& path);
    std::string to_json() const;
};

/// Synthesized passive network of the amplifier.
struct LnaNetwork {
    double l_s; // H, source degeneration
    double l_g; // H, gate inductor
    double l_d; // H, drain/tank inductor
    double c_x; // F, gate-source tuning cap (0 = absent)
    double c_1; // F, output divider series cap
    double c_p; // F, output divider shunt cap
    double c_b; // F, input DC block
    double r_g; // ohms, gate bias resistor
    double q_d; // assumed inductor quality factor (record)

    void validate(const Technology& tech) const;

    static LnaNetwork load(const std::string& path);
    std::string to_json() const;
};

struct SynthesisOptions {
    double ceq_floor = 50e-15; // minimum tank capacitance left for the divider
};

/// Degeneration inductance delivering an available-gain target:
/// Gm_req = sqrt(gain*G'o/Rs), Ls = 1/(2*omega0*Gm_req).
double ls_for_gain(double gain_target_linear, double l_d, double q_d, double y_od_real,
                   double r_s, double omega0, const Technology& tech);

/// Total gate-source capacitance for a real-part input match: Ct = gm*Ls/Rs.
double ct_for_match(double gm, double l_s, double r_s);

/// Splits Ct into the explicit tuning cap: Cx = Ct - Cgs. Throws NegativeCx
/// when the device capacitance alone already exceeds Ct.
double split_ct(double c_t, double c_gs);

/// Gate inductance completing the series resonance: Lg = 1/(omega0^2*Ct) - Ls.
double lg_for_resonance(double c_t, double l_s, double omega0, const Technology& tech);

struct DividerCaps {
    double c_1;
    double c_p;
};

/// Output capacitive divider from the high-Q transformer approximation:
/// m = sqrt(Rp/Rl), Ceq = 1/(omega0^2*Ld) - Cout, then Cp = m*Ceq and
/// C1 = m*Ceq/(m-1) so that series(C1,Cp) = Ceq and (C1+Cp)/C1 = m.
DividerCaps output_divider(double l_d, double q_d, double y_od_real, double c_out,
                           double rl, double omega0);

/// Output admittance of the cascode at omega, looking into the upper drain
/// (excluding its cgd): gds2*Yl/(Yl + gm2 + gds2) with Yl = gds1 + jw*Cmid.
Complex cascode_output_admittance(const MosOpPoint& m1, const MosOpPoint& m2, double omega);

/// Full small-signal verification netlist for a synthesized amplifier:
/// port 1 - Cb - Lg - gate, Rg to ground, Cx across gate-source, M1 stamp,
/// Ls to ground, cascode M2 with grounded gate, Ld tank, C1/Cp divider,
/// port 2 at the divider tap. Port 1 is the noise-figure source reference.
Netlist build_lna_netlist(const LnaNetwork& net, const MosOpPoint& m1, const MosOpPoint& m2,
                          const Technology& tech, double rs, double rl);

/// Verified (engine) metrics of a synthesized network at the band center.
struct LnaMetrics {
    double f0;                // Hz
    double s11_db;
    double s22_db;
    double s12_db;
    double gain_db;           // 20*log10|S21|
    double gain_available_db; // |S21|^2 / (1 - |S22|^2), power dB
    double nf_db;
};

LnaMetrics evaluate_lna(const LnaNetwork& net, const MosOpPoint& m1, const MosOpPoint& m2,
                        const DesignSpec& spec, const Technology& tech);

/// Synthesizes the passive network for one (bias current, width) point:
/// the analytic sizing chain seeds every element, then a deterministic
/// engine-in-the-loop trim adjusts (C1,Cp), (Cx,Lg) and Ls until the
/// verified matches and gain hit the targets at the band center. W2 = W1/2,
/// L = l_min. Throws SynthesisError tagged with the failing stage.
LnaNetwork synthesize(const DesignSpec& spec, double id, double w1_um, const Technology& tech,
                      const SynthesisOptions& opts = {});

} // namespace lna
