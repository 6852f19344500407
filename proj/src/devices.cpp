#include "lna/devices.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace lna {

void Technology::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v))
            throw InvalidArgument(std::string("technology: ") + name + " must be positive");
    };
    positive(cox, "cox");
    positive(cov, "cov");
    positive(vt0, "vt0");
    positive(n_slope, "n_slope");
    positive(beta_sq, "beta_sq");
    positive(theta, "theta");
    positive(a_early, "a_early");
    positive(gamma_noise, "gamma_noise");
    positive(temp, "temp");
    positive(l_min, "l_min");
    positive(inductor_q, "inductor_q");
    positive(vdd, "vdd");
    if (!(inductor_range[0] > 0.0) || !(inductor_range[0] < inductor_range[1]))
        throw InvalidArgument("technology: inductor_range must be a nonempty positive interval");
    if (!(cap_range[0] > 0.0) || !(cap_range[0] < cap_range[1]))
        throw InvalidArgument("technology: cap_range must be a nonempty positive interval");
}

void MosGeometry::validate(const Technology& tech) const {
    if (!(w > 0.0))
        throw InvalidArgument("geometry: width must be positive");
    if (!(l >= tech.l_min))
        throw InvalidArgument("geometry: length below technology minimum");
}

namespace {

// ln(1 + exp(x)) without overflow for large |x|.
double softplus(double x) {
    if (x > 40.0) return x + std::log1p(std::exp(-x));
    return std::log1p(std::exp(x));
}

double sigmoid(double x) {
    if (x >= 0.0) {
        const double e = std::exp(-x);
        return 1.0 / (1.0 + e);
    }
    const double e = std::exp(x);
    return e / (1.0 + e);
}

struct CurrentAndDerivs {
    double i;   // A
    double d1;  // dI/dvov
    double d2;
    double d3;
};

// Current law and its first three analytic derivatives with respect to vov.
// Numerator N = K*s^2 with s = softplus(vov/a), a = 2*n*Ut, K = 2*n*beta*Ut^2.
// Denominator D = 1 + theta*max(vov, 0) is piecewise linear with a corner at
// vov = 0; derivatives below are the one-sided values away from the corner.
CurrentAndDerivs mos_current_derivs(double vov, const MosGeometry& geom, const Technology& tech) {
    const double ut = thermal_voltage(tech.temp);
    const double n = tech.n_slope;
    const double beta = tech.beta_sq * geom.w / geom.l;
    const double a = 2.0 * n * ut;
    const double k = 2.0 * n * beta * ut * ut;

    const double x = vov / a;
    const double s = softplus(x);
    const double sg = sigmoid(x);
    const double sg1 = sg * (1.0 - sg);        // d(sigmoid)/dx
    const double sg2 = sg1 * (1.0 - 2.0 * sg); // d2(sigmoid)/dx2

    const double nv = k * s * s;
    const double n1 = k * 2.0 * s * sg / a;
    const double n2 = k * 2.0 * (sg * sg + s * sg1) / (a * a);
    const double n3 = k * 2.0 * (3.0 * sg * sg1 + s * sg2) / (a * a * a);

    if (vov <= 0.0)
        return {nv, n1, n2, n3};

    const double th = tech.theta;
    const double d = 1.0 + th * vov;
    const double d2 = d * d;
    const double d3 = d2 * d;
    const double d4 = d3 * d;
    return {
        nv / d,
        n1 / d - nv * th / d2,
        n2 / d - 2.0 * n1 * th / d2 + 2.0 * nv * th * th / d3,
        n3 / d - 3.0 * n2 * th / d2 + 6.0 * n1 * th * th / d3 - 6.0 * nv * th * th * th / d4,
    };
}

} // namespace

double mos_current(double vov, const MosGeometry& geom, const Technology& tech) {
    geom.validate(tech);
    return mos_current_derivs(vov, geom, tech).i;
}

double bias_for_current(double id_target, const MosGeometry& geom, const Technology& tech,
                        double vov_ceiling) {
    geom.validate(tech);
    if (!(id_target > 0.0))
        throw InvalidArgument("bias_for_current: target current must be positive");

    const double hi_current = mos_current(vov_ceiling, geom, tech);
    if (id_target > hi_current) {
        std::ostringstream os;
        os << "bias_for_current: " << id_target << " A not attainable for W/L = "
           << geom.w << "/" << geom.l << " um below vov = " << vov_ceiling << " V";
        throw Unattainable(os.str());
    }

    double lo = -1.0;
    while (mos_current(lo, geom, tech) > id_target)
        lo -= 0.5;
    double hi = vov_ceiling;
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid == lo || mid == hi) break;
        if (mos_current(mid, geom, tech) < id_target)
            lo = mid;
        else
            hi = mid;
    }
    return tech.vt0 + 0.5 * (lo + hi);
}

MosOpPoint small_signal(double id, const MosGeometry& geom, const Technology& tech) {
    const double vgs = bias_for_current(id, geom, tech);
    const auto d = mos_current_derivs(vgs - tech.vt0, geom, tech);

    MosOpPoint op;
    op.id = id;
    op.vgs = vgs;
    op.gm = d.d1;
    op.gm2 = d.d2;
    op.gm3 = d.d3;
    op.gds = d.d1 / tech.a_early;
    op.cgs = (2.0 / 3.0) * tech.cox * geom.w * geom.l + tech.cov * geom.w;
    op.cgd = tech.cov * geom.w;
    op.omega_t = op.gm / (op.cgs + op.cgd);
    return op;
}

double iip3_power_series(const MosOpPoint& op, double source_z) {
    if (!(op.gm > 0.0))
        throw InvalidArgument("iip3_power_series: gm must be positive");
    if (!(source_z > 0.0))
        throw InvalidArgument("iip3_power_series: source impedance must be positive");
    if (std::abs(op.gm3) < 1e-12)
        return std::numeric_limits<double>::infinity();
    const double a2 = (4.0 / 3.0) * std::abs(op.gm / op.gm3); // V^2
    const double p_avail = a2 / (8.0 * source_z);             // W
    return power_db(p_avail / 1e-3);
}

double inductor_loss(double l, double freq, const Technology& tech) {
    if (!(freq > 0.0))
        throw InvalidArgument("inductor_loss: frequency must be positive");
    if (l < tech.inductor_range[0] || l > tech.inductor_range[1]) {
        std::ostringstream os;
        os << "inductor_loss: " << l << " H outside technology range ["
           << tech.inductor_range[0] << ", " << tech.inductor_range[1] << "] H";
        throw OutOfTechnologyRange(os.str());
    }
    return 2.0 * constants::pi * freq * l / tech.inductor_q;
}

namespace {

double require_number(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key))
        throw InvalidArgument("technology file: missing field '" + key + "'");
    if (!j[key].is_number())
        throw InvalidArgument("technology file: field '" + key + "' must be a number");
    return j[key].get<double>();
}

std::array<double, 2> require_range(const nlohmann::json& j, const std::string& key) {
    if (!j.contains(key) || !j[key].is_array() || j[key].size() != 2)
        throw InvalidArgument("technology file: field '" + key + "' must be [min, max]");
    return {j[key][0].get<double>(), j[key][1].get<double>()};
}

} // namespace

Technology load_technology(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open technology file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("technology file " + path + ": " + e.what());
    }

    Technology t;
    t.cox = require_number(j, "cox_f_per_um2");
    t.cov = require_number(j, "cov_f_per_um");
    t.vt0 = require_number(j, "vt0_v");
    t.n_slope = require_number(j, "n_slope");
    t.beta_sq = require_number(j, "beta_sq_a_per_v2");
    t.theta = require_number(j, "theta_per_v");
    t.a_early = require_number(j, "a_early");
    t.gamma_noise = require_number(j, "gamma_noise");
    t.temp = require_number(j, "temp_k");
    t.l_min = require_number(j, "l_min_um");
    t.inductor_range = require_range(j, "inductor_range_h");
    t.inductor_q = require_number(j, "inductor_q");
    t.cap_range = require_range(j, "cap_range_f");
    t.vdd = require_number(j, "vdd_v");
    t.validate();
    return t;
}

std::string technology_to_json(const Technology& tech) {
    nlohmann::json j;
    j["cox_f_per_um2"] = tech.cox;
    j["cov_f_per_um"] = tech.cov;
    j["vt0_v"] = tech.vt0;
    j["n_slope"] = tech.n_slope;
    j["beta_sq_a_per_v2"] = tech.beta_sq;
    j["theta_per_v"] = tech.theta;
    j["a_early"] = tech.a_early;
    j["gamma_noise"] = tech.gamma_noise;
    j["temp_k"] = tech.temp;
    j["l_min_um"] = tech.l_min;
    j["inductor_range_h"] = tech.inductor_range;
    j["inductor_q"] = tech.inductor_q;
    j["cap_range_f"] = tech.cap_range;
    j["vdd_v"] = tech.vdd;
    return j.dump(2);
}

} // namespace lna
