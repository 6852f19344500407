#pragma once

#include <array>
#include <vector>

#include "lna/errors.hpp"
#include "lna/util.hpp"

namespace lna {

/// Complex 2x2 matrix, row-major: m[0]=s11 m[1]=s12 m[2]=s21 m[3]=s22.
using Mat2c = std::array<Complex, 4>;

/// Two-port parameters (S-matrix) over a frequency grid.
struct TwoPortParams {
    std::vector<double> freqs; // Hz, strictly increasing
    std::vector<Mat2c> s;      // one matrix per frequency
    double z0 = 50.0;          // ohms, reference impedance

    void validate() const;
    std::size_t size() const { return freqs.size(); }
};

/// Intermediates of the gain chain G = Gm^2 * Rs / G'o.
struct GainBreakdown {
    double gm_eff;      // S
    double go_prime;    // S
    double y_od_real;   // S
    double l_d;         // H
    double q_d;
    double l_s;         // H
    double r_s;         // ohms
    double omega0;      // rad/s
    double gain_linear;
    double gain_db;
};

struct StabilityReport {
    struct Point {
        double freq;       // Hz
        double k;          // Rollett factor (+inf when unilateral)
        double delta_mag;  // |S11*S22 - S12*S21|
        bool unilateral;   // |S12*S21| < 1e-15
        bool stable;       // k > 1 && delta_mag < 1
    };
    std::vector<Point> points;
    bool stable_everywhere = false;
};

struct BandMetrics {
    double worst_s11_db;
    double worst_s22_db;
    double min_s21_db;
    double max_s21_db;
    double s12_db_at_center;
    double center_freq; // Hz, geometric mean of band edges
};

/// Y-parameters to S-parameters at real reference z0.
Mat2c y_to_s(const Mat2c& y, double z0);

/// Inverse of y_to_s.
Mat2c s_to_y(const Mat2c& s, double z0);

/// Z-parameters to S-parameters at real reference z0.
Mat2c z_to_s(const Mat2c& z, double z0);

/// Effective transconductance of the degenerated input stage under input
/// matching: Gm = 1/(2*omega0*Ls).
double effective_transconductance(double l_s, double omega0);

/// Real output conductance of the drain tank: G'o = Re{Yod} + 1/(omega0*Ld*Qd).
double output_conductance(double l_d, double q_d, double y_od_real, double omega0);

/// Available power gain G = Gm^2*Rs/G'o with all the chain intermediates.
GainBreakdown available_gain(double l_s, double l_d, double q_d, double y_od_real,
                             double r_s, double omega0);

/// Rollett stability over the full grid: K > 1 and |Delta| < 1 per point.
StabilityReport stability(const TwoPortParams& p);

/// Worst-case reflection and gain extremes over the in-band grid points,
/// plus |S12| interpolated at the band's geometric center.
BandMetrics band_metrics(const TwoPortParams& p, double f_lo, double f_hi);

/// dB magnitude of one S entry at f, interpolated linearly in (log f, dB).
/// entry is row-major index 0..3. Throws FrequencyOutOfRange.
double interp_db(const TwoPortParams& p, int entry, double f);

} // namespace lna
