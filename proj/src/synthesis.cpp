#include "lna/synthesis.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>

#include <json.hpp>

namespace lna {

// ---------------------------------------------------------------------------
// DesignSpec
// ---------------------------------------------------------------------------

void DesignSpec::validate() const {
    if (!(band_lo > 0.0) || !(band_lo < band_hi))
        throw InvalidArgument("spec: band must be a nonempty positive interval");
    if (!(gain_tol_db > 0.0))
        throw InvalidArgument("spec: gain tolerance must be positive");
    if (!(rs > 0.0) || !(rl > 0.0))
        throw InvalidArgument("spec: source and load resistances must be positive");
}

double DesignSpec::center_freq() const { return std::sqrt(band_lo * band_hi); }
double DesignSpec::omega0() const { return 2.0 * constants::pi * center_freq(); }

DesignSpec DesignSpec::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open spec file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("spec file " + path + ": " + e.what());
    }
    DesignSpec s;
    try {
        s.band_lo = j.at("band_hz").at(0).get<double>();
        s.band_hi = j.at("band_hz").at(1).get<double>();
        s.gain_target_db = j.at("gain_db").at("target").get<double>();
        s.gain_tol_db = j.at("gain_db").at("tol").get<double>();
        s.nf_max_db = j.at("nf_max_db").get<double>();
        s.iip3_min_dbm = j.at("iip3_min_dbm").get<double>();
        s.s11_max_db = j.at("s11_max_db").get<double>();
        s.s22_max_db = j.at("s22_max_db").get<double>();
        s.rs = j.at("rs_ohms").get<double>();
        s.rl = j.at("rl_ohms").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("spec file " + path + ": " + e.what());
    }
    s.validate();
    return s;
}

std::string DesignSpec::to_json() const {
    nlohmann::json j;
    j["band_hz"] = {band_lo, band_hi};
    j["gain_db"] = {{"target", gain_target_db}, {"tol", gain_tol_db}};
    j["nf_max_db"] = nf_max_db;
    j["iip3_min_dbm"] = iip3_min_dbm;
    j["s11_max_db"] = s11_max_db;
    j["s22_max_db"] = s22_max_db;
    j["rs_ohms"] = rs;
    j["rl_ohms"] = rl;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// LnaNetwork
// ---------------------------------------------------------------------------

void LnaNetwork::validate(const Technology& tech) const {
    auto in_ind_range = [&](double l, const char* name) {
        if (!(l >= tech.inductor_range[0]) || !(l <= tech.inductor_range[1])) {
            std::ostringstream os;
            os << "network: " << name << " = " << l << " H outside inductor range";
            throw OutOfTechnologyRange(os.str());
        }
    };
    auto in_cap_range = [&](double c, const char* name) {
        if (!(c >= tech.cap_range[0]) || !(c <= tech.cap_range[1])) {
            std::ostringstream os;
            os << "network: " << name << " = " << c << " F outside capacitor range";
            throw OutOfTechnologyRange(os.str());
        }
    };
    in_ind_range(l_s, "l_s");
    in_ind_range(l_g, "l_g");
    in_ind_range(l_d, "l_d");
    if (c_x < 0.0)
        throw InvalidArgument("network: c_x must be non-negative");
    if (c_x > 0.0)
        in_cap_range(c_x, "c_x");
    in_cap_range(c_1, "c_1");
    in_cap_range(c_p, "c_p");
    in_cap_range(c_b, "c_b");
    if (!(r_g > 0.0) || !(q_d > 0.0))
        throw InvalidArgument("network: r_g and q_d must be positive");
}

LnaNetwork LnaNetwork::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open network file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("network file " + path + ": " + e.what());
    }
    LnaNetwork n;
    try {
        n.l_s = j.at("l_s_h").get<double>();
        n.l_g = j.at("l_g_h").get<double>();
        n.l_d = j.at("l_d_h").get<double>();
        n.c_x = j.at("c_x_f").get<double>();
        n.c_1 = j.at("c_1_f").get<double>();
        n.c_p = j.at("c_p_f").get<double>();
        n.c_b = j.at("c_b_f").get<double>();
        n.r_g = j.at("r_g_ohms").get<double>();
        n.q_d = j.at("q_d").get<double>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("network file " + path + ": " + e.what());
    }
    return n;
}

std::string LnaNetwork::to_json() const {
    nlohmann::json j;
    j["l_s_h"] = l_s;
    j["l_g_h"] = l_g;
    j["l_d_h"] = l_d;
    j["c_x_f"] = c_x;
    j["c_1_f"] = c_1;
    j["c_p_f"] = c_p;
    j["c_b_f"] = c_b;
    j["r_g_ohms"] = r_g;
    j["q_d"] = q_d;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Sizing chain
// ---------------------------------------------------------------------------

double ls_for_gain(double gain_target_linear, double l_d, double q_d, double y_od_real,
                   double r_s, double omega0, const Technology& tech) {
    if (!(gain_target_linear > 0.0))
        throw InvalidArgument("ls_for_gain: gain target must be positive");
    const double go = output_conductance(l_d, q_d, y_od_real, omega0);
    const double gm_req = std::sqrt(gain_target_linear * go / r_s);
    const double l_s = 1.0 / (2.0 * omega0 * gm_req);
    if (l_s < tech.inductor_range[0] || l_s > tech.inductor_range[1]) {
        std::ostringstream os;
        os << "ls_for_gain: required Ls = " << l_s << " H outside inductor range";
        throw OutOfTechnologyRange(os.str());
    }
    return l_s;
}

double ct_for_match(double gm, double l_s, double r_s) {
    if (!(gm > 0.0) || !(l_s > 0.0) || !(r_s > 0.0))
        throw InvalidArgument("ct_for_match: inputs must be positive");
    return gm * l_s / r_s;
}

double split_ct(double c_t, double c_gs) {
    const double c_x = c_t - c_gs;
    if (c_x < 0.0) {
        std::ostringstream os;
        os << "split_ct: device Cgs = " << c_gs << " F exceeds required Ct = " << c_t << " F";
        throw NegativeCx(os.str());
    }
    return c_x;
}

double lg_for_resonance(double c_t, double l_s, double omega0, const Technology& tech) {
    if (!(c_t > 0.0) || !(l_s > 0.0) || !(omega0 > 0.0))
        throw InvalidArgument("lg_for_resonance: inputs must be positive");
    const double l_g = 1.0 / (omega0 * omega0 * c_t) - l_s;
    if (!(l_g > 0.0)) {
        std::ostringstream os;
        os << "lg_for_resonance: series resonance already below target (Lg = " << l_g << " H)";
        throw NonPositiveLg(os.str());
    }
    if (l_g < tech.inductor_range[0] || l_g > tech.inductor_range[1]) {
        std::ostringstream os;
        os << "lg_for_resonance: Lg = " << l_g << " H outside inductor range";
        throw OutOfTechnologyRange(os.str());
    }
    return l_g;
}

DividerCaps output_divider(double l_d, double q_d, double y_od_real, double c_out,
                           double rl, double omega0) {
    const double go = output_conductance(l_d, q_d, y_od_real, omega0);
    const double r_p = 1.0 / go;
    if (!(r_p > rl)) {
        std::ostringstream os;
        os << "output_divider: tank resistance " << r_p << " ohm not above load " << rl;
        throw TransformImpossible(os.str());
    }
    const double m = std::sqrt(r_p / rl);
    const double c_eq = 1.0 / (omega0 * omega0 * l_d) - c_out;
    if (!(c_eq > 0.0)) {
        std::ostringstream os;
        os << "output_divider: fixed output capacitance " << c_out
           << " F exceeds tank capacitance";
        throw NegativeCeq(os.str());
    }
    return {m * c_eq / (m - 1.0), m * c_eq};
}

Complex cascode_output_admittance(const MosOpPoint& m1, const MosOpPoint& m2, double omega) {
    const Complex y_mid(m1.gds, omega * (m1.cgd + m2.cgs));
    return m2.gds * y_mid / (y_mid + m2.gm + m2.gds);
}

// ---------------------------------------------------------------------------
// Verification netlist
// ---------------------------------------------------------------------------

Netlist build_lna_netlist(const LnaNetwork& net, const MosOpPoint& m1, const MosOpPoint& m2,
                          const Technology& tech, double rs, double rl) {
    Netlist nl;
    const NodeId in = nl.node("in");
    const NodeId nb = nl.node("nb");
    const NodeId g = nl.node("g");
    const NodeId s = nl.node("s");
    const NodeId mid = nl.node("m");
    const NodeId d = nl.node("d");
    const NodeId out = nl.node("out");
    const NodeId gnd = nl.ground();

    nl.add_capacitor(in, nb, net.c_b);
    nl.add_inductor(nb, g, net.l_g, 0.0, net.q_d);
    nl.add_resistor(g, gnd, net.r_g);
    if (net.c_x > 0.0)
        nl.add_capacitor(g, s, net.c_x);
    nl.add_mos(g, s, mid, m1.gm, m1.gds, m1.cgs, m1.cgd, tech.gamma_noise);
    nl.add_inductor(s, gnd, net.l_s, 0.0, net.q_d);
    nl.add_mos(gnd, mid, d, m2.gm, m2.gds, m2.cgs, m2.cgd, tech.gamma_noise);
    nl.add_inductor(d, gnd, net.l_d, 0.0, net.q_d);
    nl.add_capacitor(d, out, net.c_1);
    nl.add_capacitor(out, gnd, net.c_p);

    const int p_in = nl.add_port(in, rs);
    nl.add_port(out, rl);
    nl.set_source_noise_port(p_in);
    return nl;
}

LnaMetrics evaluate_lna(const LnaNetwork& net, const MosOpPoint& m1, const MosOpPoint& m2,
                        const DesignSpec& spec, const Technology& tech) {
    const double f0 = spec.center_freq();
    const Netlist nl = build_lna_netlist(net, m1, m2, tech, spec.rs, spec.rl);
    const TwoPortParams tp = extract_two_port(nl, {f0}, spec.rs);

    LnaMetrics m;
    m.f0 = f0;
    m.s11_db = mag_db(std::abs(tp.s[0][0]));
    m.s12_db = mag_db(std::abs(tp.s[0][1]));
    m.gain_db = mag_db(std::abs(tp.s[0][2]));
    m.s22_db = mag_db(std::abs(tp.s[0][3]));
    m.gain_available_db = power_db(std::norm(tp.s[0][2]) / (1.0 - std::norm(tp.s[0][3])));
    m.nf_db = noise_figure(nl, f0, 0, 1);
    return m;
}

// ---------------------------------------------------------------------------
// synthesize
// ---------------------------------------------------------------------------

namespace {

struct Bounds {
    double lo, hi;
    double clamp(double v) const { return std::min(hi, std::max(lo, v)); }
};

// Damped 2-variable Newton driving a complex residual to zero. Jacobian by
// central differences; variables clamped to their bounds each step. scale_a
// and scale_b set the magnitude floor so zero-valued variables can move.
void newton2(std::function<Complex(double, double)> residual, double& va, double& vb,
             Bounds ba, Bounds bb, double scale_a, double scale_b, double tol,
             const char* stage) {
    for (int it = 0; it < 80; ++it) {
        const Complex r = residual(va, vb);
        if (std::abs(r) <= tol)
            return;
        const double ha = 1e-6 * std::max(std::abs(va), scale_a);
        const double hb = 1e-6 * std::max(std::abs(vb), scale_b);
        const Complex ra = (residual(va + ha, vb) - residual(va - ha, vb)) / (2.0 * ha);
        const Complex rb = (residual(va, vb + hb) - residual(va, vb - hb)) / (2.0 * hb);
        // Solve [Re ra  Re rb; Im ra  Im rb] * d = -[Re r; Im r]
        const double det = ra.real() * rb.imag() - rb.real() * ra.imag();
        if (!(std::abs(det) > 1e-300))
            throw SynthesisError(stage, "singular trim Jacobian");
        double da = (-r.real() * rb.imag() + rb.real() * r.imag()) / det;
        double db = (-ra.real() * r.imag() + r.real() * ra.imag()) / det;
        // Limit the relative step to keep the iteration inside the basin.
        const double lim_a = 0.5 * std::max(std::abs(va), scale_a);
        const double lim_b = 0.5 * std::max(std::abs(vb), scale_b);
        va = ba.clamp(va + std::clamp(da, -lim_a, lim_a));
        vb = bb.clamp(vb + std::clamp(db, -lim_b, lim_b));
    }
    throw SynthesisError(stage, "match trim did not converge");
}

} // namespace

LnaNetwork synthesize(const DesignSpec& spec, double id, double w1_um, const Technology& tech,
                      const SynthesisOptions& opts) {
    spec.validate();
    tech.validate();
    if (!(id > 0.0) || !(w1_um > 0.0))
        throw InvalidArgument("synthesize: bias current and width must be positive");

    const double omega0 = spec.omega0();
    const double f0 = spec.center_freq();

    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const SynthesisError&) {
            throw;
        } catch (const Error& e) {
            throw SynthesisError(name, e.what());
        }
    };

    // Device operating points; W2 = W1/2, minimum channel length.
    const MosGeometry g1{w1_um, tech.l_min};
    const MosGeometry g2{w1_um / 2.0, tech.l_min};
    const MosOpPoint m1 = stage("device_bias", [&] { return small_signal(id, g1, tech); });
    const MosOpPoint m2 = stage("device_bias", [&] { return small_signal(id, g2, tech); });

    const double c_out = m2.cgd;
    const double y_od = cascode_output_admittance(m1, m2, omega0).real();

    // Fix the drain inductor first: the largest in-range value that leaves
    // at least ceq_floor of capacitance for the output divider.
    const double l_ceq = 1.0 / (omega0 * omega0 * (opts.ceq_floor + c_out));
    const double l_d = std::min(tech.inductor_range[1], l_ceq);
    if (l_d < tech.inductor_range[0])
        throw SynthesisError("fix_ld", "no in-range drain inductance leaves room for the divider");

    const double q_d = tech.inductor_q;
    const double gain_target_lin = db_to_power(spec.gain_target_db);

    LnaNetwork net;
    net.l_d = l_d;
    net.q_d = q_d;
    net.r_g = 10e3;
    net.l_s = stage("ls_for_gain",
                    [&] { return ls_for_gain(gain_target_lin, l_d, q_d, y_od, spec.rs, omega0, tech); });
    const double c_t = stage("ct_for_match", [&] { return ct_for_match(m1.gm, net.l_s, spec.rs); });
    net.c_x = stage("split_ct", [&] { return split_ct(c_t, m1.cgs); });
    net.l_g = stage("lg_for_resonance", [&] { return lg_for_resonance(c_t, net.l_s, omega0, tech); });
    const DividerCaps div = stage("output_divider",
                                  [&] { return output_divider(l_d, q_d, y_od, c_out, spec.rl, omega0); });
    net.c_1 = div.c_1;
    net.c_p = div.c_p;
    // Decade-dominant DC block, capped at the largest realizable capacitor.
    net.c_b = std::min(100.0 * c_t, tech.cap_range[1]);

    // The sizing equations use the simplified input stage and a high-Q output
    // transform; with lossy inductors, Cgd and the cascode they land close
    // but not inside the matching/gain gates. Trim against the AC engine:
    // exact output match, exact input match, then Ls until the verified
    // band-center gain hits the target.
    const Bounds cap_b{0.0, tech.cap_range[1]};
    const Bounds cap_b_min{tech.cap_range[0], tech.cap_range[1]};
    const Bounds ind_b{tech.inductor_range[0], tech.inductor_range[1]};

    auto z_out = [&](double c1, double cp) {
        LnaNetwork trial = net;
        trial.c_1 = c1;
        trial.c_p = cp;
        const Netlist nl = build_lna_netlist(trial, m1, m2, tech, spec.rs, spec.rl);
        return input_impedance(nl, 1, f0) - Complex(spec.rl, 0.0);
    };
    auto z_in = [&](double cx, double lg) {
        LnaNetwork trial = net;
        trial.c_x = cx;
        trial.l_g = lg;
        const Netlist nl = build_lna_netlist(trial, m1, m2, tech, spec.rs, spec.rl);
        return input_impedance(nl, 0, f0) - Complex(spec.rs, 0.0);
    };

    const double match_tol = 1e-6; // ohms; reflection around -160 dB
    bool gain_converged = false;
    for (int outer = 0; outer < 30; ++outer) {
        stage("output_match_trim", [&] {
            newton2(z_out, net.c_1, net.c_p, cap_b_min, cap_b_min, 1e-13, 1e-13, match_tol,
                    "output_match_trim");
            return 0;
        });
        stage("input_match_trim", [&] {
            newton2(z_in, net.c_x, net.l_g, cap_b, ind_b, 1e-13, 1e-9, match_tol,
                    "input_match_trim");
            return 0;
        });

        const Netlist nl = build_lna_netlist(net, m1, m2, tech, spec.rs, spec.rl);
        const TwoPortParams tp = extract_two_port(nl, {f0}, spec.rs);
        const double gain_db = mag_db(std::abs(tp.s[0][2]));
        if (std::abs(gain_db - spec.gain_target_db) <= 0.02) {
            gain_converged = true;
            break;
        }
        // G scales as 1/Ls^2 to first order.
        const double next = net.l_s * std::pow(10.0, (gain_db - spec.gain_target_db) / 40.0);
        net.l_s = ind_b.clamp(next);
        if (net.l_s != next && (outer > 3))
            throw SynthesisError("gain_trim", "gain target unreachable within inductor range");
    }
    if (!gain_converged)
        throw SynthesisError("gain_trim", "verified gain did not converge to target");

    stage("validate_network", [&] {
        net.validate(tech);
        return 0;
    });
    return net;
}

} // namespace lna
