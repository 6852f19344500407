#include "lna/twoport.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace lna {

void TwoPortParams::validate() const {
    if (freqs.size() != s.size())
        throw InvalidArgument("two-port: frequency grid and matrix list differ in length");
    if (!(z0 > 0.0))
        throw InvalidArgument("two-port: z0 must be positive");
    for (std::size_t i = 1; i < freqs.size(); ++i)
        if (!(freqs[i] > freqs[i - 1]))
            throw InvalidArgument("two-port: frequency grid must be strictly increasing");
    for (const auto& m : s)
        for (const auto& e : m)
            if (!std::isfinite(e.real()) || !std::isfinite(e.imag()))
                throw InvalidArgument("two-port: non-finite matrix entry");
}

namespace {

// 2x2 inverse; throws DegenerateConversion when the determinant underflows.
Mat2c inv2(const Mat2c& m, const char* what) {
    const Complex det = m[0] * m[3] - m[1] * m[2];
    if (std::abs(det) < 1e-300)
        throw DegenerateConversion(what);
    return {m[3] / det, -m[1] / det, -m[2] / det, m[0] / det};
}

Mat2c mul2(const Mat2c& a, const Mat2c& b) {
    return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3],
            a[2] * b[0] + a[3] * b[2], a[2] * b[1] + a[3] * b[3]};
}

constexpr Mat2c kIdentity = {Complex(1, 0), Complex(0, 0), Complex(0, 0), Complex(1, 0)};

Mat2c sub2(const Mat2c& a, const Mat2c& b) {
    return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

Mat2c add2(const Mat2c& a, const Mat2c& b) {
    return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

Mat2c scale2(const Mat2c& a, Complex c) {
    return {a[0] * c, a[1] * c, a[2] * c, a[3] * c};
}

} // namespace

Mat2c y_to_s(const Mat2c& y, double z0) {
    if (!(z0 > 0.0))
        throw InvalidArgument("y_to_s: z0 must be positive");
    // S = (I - z0*Y) * (I + z0*Y)^-1
    const Mat2c zy = scale2(y, Complex(z0, 0.0));
    return mul2(sub2(kIdentity, zy), inv2(add2(kIdentity, zy), "y_to_s: I + z0*Y singular"));
}

Mat2c s_to_y(const Mat2c& s, double z0) {
    if (!(z0 > 0.0))
        throw InvalidArgument("s_to_y: z0 must be positive");
    // Y = (1/z0) * (I + S)^-1 * (I - S)
    const Mat2c inv = inv2(add2(kIdentity, s), "s_to_y: I + S singular");
    return scale2(mul2(inv, sub2(kIdentity, s)), Complex(1.0 / z0, 0.0));
}

Mat2c z_to_s(const Mat2c& z, double z0) {
    if (!(z0 > 0.0))
        throw InvalidArgument("z_to_s: z0 must be positive");
    // S = (Z - z0*I) * (Z + z0*I)^-1
    const Mat2c zi = scale2(kIdentity, Complex(z0, 0.0));
    return mul2(sub2(z, zi), inv2(add2(z, zi), "z_to_s: Z + z0*I singular"));
}

double effective_transconductance(double l_s, double omega0) {
    if (!(l_s > 0.0) || !(omega0 > 0.0))
        throw InvalidArgument("effective_transconductance: l_s and omega0 must be positive");
    return 1.0 / (2.0 * omega0 * l_s);
}

double output_conductance(double l_d, double q_d, double y_od_real, double omega0) {
    if (!(l_d > 0.0) || !(q_d > 0.0) || !(omega0 > 0.0) || y_od_real < 0.0)
        throw InvalidArgument("output_conductance: inputs must be positive");
    return y_od_real + 1.0 / (omega0 * l_d * q_d);
}

GainBreakdown available_gain(double l_s, double l_d, double q_d, double y_od_real,
                             double r_s, double omega0) {
    GainBreakdown g;
    g.gm_eff = effective_transconductance(l_s, omega0);
    g.go_prime = output_conductance(l_d, q_d, y_od_real, omega0);
    g.y_od_real = y_od_real;
    g.l_d = l_d;
    g.q_d = q_d;
    g.l_s = l_s;
    g.r_s = r_s;
    g.omega0 = omega0;
    g.gain_linear = g.gm_eff * g.gm_eff * r_s / g.go_prime;
    g.gain_db = power_db(g.gain_linear);
    return g;
}

StabilityReport stability(const TwoPortParams& p) {
    p.validate();
    StabilityReport rep;
    rep.points.reserve(p.size());
    bool all = !p.s.empty();
    for (std::size_t i = 0; i < p.size(); ++i) {
        const Mat2c& s = p.s[i];
        const Complex delta = s[0] * s[3] - s[1] * s[2];
        const double cross = std::abs(s[1] * s[2]);
        StabilityReport::Point pt;
        pt.freq = p.freqs[i];
        pt.delta_mag = std::abs(delta);
        pt.unilateral = cross < 1e-15;
        const double num =
            1.0 - std::norm(s[0]) - std::norm(s[3]) + std::norm(delta);
        if (pt.unilateral)
            pt.k = num >= 0.0 ? std::numeric_limits<double>::infinity()
                              : -std::numeric_limits<double>::infinity();
        else
            pt.k = num / (2.0 * cross);
        pt.stable = pt.k > 1.0 && pt.delta_mag < 1.0;
        all = all && pt.stable;
        rep.points.push_back(pt);
    }
    rep.stable_everywhere = all;
    return rep;
}

double interp_db(const TwoPortParams& p, int entry, double f) {
    p.validate();
    if (entry < 0 || entry > 3)
        throw InvalidArgument("interp_db: entry index out of range");
    if (p.freqs.empty() || f < p.freqs.front() || f > p.freqs.back()) {
        std::ostringstream os;
        os << "interp_db: " << f << " Hz outside grid";
        throw FrequencyOutOfRange(os.str());
    }
    const auto it = std::lower_bound(p.freqs.begin(), p.freqs.end(), f);
    const std::size_t hi = static_cast<std::size_t>(it - p.freqs.begin());
    if (p.freqs[hi] == f)
        return mag_db(std::abs(p.s[hi][static_cast<std::size_t>(entry)]));
    const std::size_t lo = hi - 1;
    const double db_lo = mag_db(std::abs(p.s[lo][static_cast<std::size_t>(entry)]));
    const double db_hi = mag_db(std::abs(p.s[hi][static_cast<std::size_t>(entry)]));
    const double t = (std::log(f) - std::log(p.freqs[lo])) /
                     (std::log(p.freqs[hi]) - std::log(p.freqs[lo]));
    return db_lo + t * (db_hi - db_lo);
}

BandMetrics band_metrics(const TwoPortParams& p, double f_lo, double f_hi) {
    p.validate();
    if (!(f_lo < f_hi))
        throw InvalidArgument("band_metrics: band must be a nonempty interval");
    if (p.freqs.empty() || f_lo < p.freqs.front() || f_hi > p.freqs.back()) {
        std::ostringstream os;
        os << "band_metrics: band [" << f_lo << ", " << f_hi << "] Hz outside grid";
        throw BandOutsideGrid(os.str());
    }

    BandMetrics m;
    m.worst_s11_db = -std::numeric_limits<double>::infinity();
    m.worst_s22_db = -std::numeric_limits<double>::infinity();
    m.min_s21_db = std::numeric_limits<double>::infinity();
    m.max_s21_db = -std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p.freqs[i] < f_lo || p.freqs[i] > f_hi)
            continue;
        any = true;
        m.worst_s11_db = std::max(m.worst_s11_db, mag_db(std::abs(p.s[i][0])));
        m.worst_s22_db = std::max(m.worst_s22_db, mag_db(std::abs(p.s[i][3])));
        const double s21 = mag_db(std::abs(p.s[i][2]));
        m.min_s21_db = std::min(m.min_s21_db, s21);
        m.max_s21_db = std::max(m.max_s21_db, s21);
    }
    if (!any)
        throw BandOutsideGrid("band_metrics: no grid points inside band");
    m.center_freq = std::sqrt(f_lo * f_hi);
    m.s12_db_at_center = interp_db(p, 1, m.center_freq);
    return m;
}

} // namespace lna
