#pragma once

#include <array>
#include <string>

#include "lna/errors.hpp"
#include "lna/util.hpp"

namespace lna {

/// Analytic process parameters standing in for a foundry PDK.
/// All values are SI unless the field name says otherwise (w/l in um).
struct Technology {
    double cox = 12e-15;        // gate capacitance per area, F/um^2
    double cov = 0.35e-15;      // overlap capacitance per width, F/um
    double vt0 = 0.35;          // threshold voltage, V
    double n_slope = 1.3;       // subthreshold slope factor
    double beta_sq = 350e-6;    // transconductance factor uCox, A/V^2
    double theta = 0.3;         // mobility-reduction factor, 1/V
    double a_early = 30.0;      // gds = gm / a_early
    double gamma_noise = 1.0;   // channel thermal-noise coefficient
    double temp = 300.0;        // device temperature, K
    double l_min = 0.12;        // minimum channel length, um
    std::array<double, 2> inductor_range = {0.5e-9, 15e-9}; // H
    double inductor_q = 12.0;   // inductor quality factor
    std::array<double, 2> cap_range = {10e-15, 50e-12};     // F
    double vdd = 1.2;           // supply voltage, V

    void validate() const;
};

struct MosGeometry {
    double w; // um
    double l; // um

    void validate(const Technology& tech) const;
};

/// Bias-dependent small-signal and nonlinearity data at one operating point.
struct MosOpPoint {
    double id;      // A
    double vgs;     // V
    double gm;      // S, dI/dVgs
    double gm2;     // A/V^2, d2I/dVgs^2
    double gm3;     // A/V^3, d3I/dVgs^3
    double gds;     // S
    double cgs;     // F
    double cgd;     // F
    double omega_t; // rad/s, gm/(cgs+cgd)
};

/// Drain current for a given overdrive vov = Vgs - Vt. Continuous from weak
/// to strong inversion with a mobility-reduction denominator:
///   Id = 2*n*beta*Ut^2 * ln^2(1 + exp(vov/(2*n*Ut))) / (1 + theta*max(vov, 0))
/// Strictly increasing in vov. Smooth except for a corner in the mobility
/// term at vov = 0 (the denominator's one-sided ramp).
double mos_current(double vov, const MosGeometry& geom, const Technology& tech);

/// Gate-source voltage that delivers id_target, solved by bracketed bisection
/// on the monotone current law. Throws Unattainable when the current cannot
/// be reached below the overdrive ceiling.
double bias_for_current(double id_target, const MosGeometry& geom, const Technology& tech,
                        double vov_ceiling = 0.7);

/// Operating point at a given drain current: analytic gm/gm2/gm3, gate
/// capacitances, and gds = gm/a_early.
MosOpPoint small_signal(double id, const MosGeometry& geom, const Technology& tech);

/// Input-referred third-order intercept from the memoryless power series,
/// A^2 = (4/3)*|gm/gm3|, reported as available source power at match in dBm.
/// Returns +infinity when |gm3| < 1e-12 A/V^3 (the sweet spot itself).
double iip3_power_series(const MosOpPoint& op, double source_z);

/// Series loss resistance of an on-chip inductor: R = omega*L/Q.
/// Throws OutOfTechnologyRange when l is outside the technology's range.
double inductor_loss(double l, double freq, const Technology& tech);

/// Loads a Technology from a JSON file. Every field must be present;
/// missing fields are errors rather than silent defaults.
Technology load_technology(const std::string& path);

/// Serializes a Technology to the same JSON schema load_technology() reads.
std::string technology_to_json(const Technology& tech);

} // namespace lna
