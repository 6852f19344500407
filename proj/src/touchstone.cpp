#include "lna/touchstone.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace lna {

double TouchstoneData::unit_scale() const {
    switch (freq_unit) {
    case FreqUnit::Hz: return 1.0;
    case FreqUnit::kHz: return 1e3;
    case FreqUnit::MHz: return 1e6;
    case FreqUnit::GHz: return 1e9;
    }
    return 1.0;
}

TwoPortParams TouchstoneData::to_two_port() const {
    TwoPortParams p;
    p.z0 = z0;
    p.freqs = freqs;
    p.s.reserve(values.size());
    for (const auto& m : values) {
        switch (param_kind) {
        case ParamKind::S: p.s.push_back(m); break;
        case ParamKind::Y: p.s.push_back(y_to_s(m, z0)); break;
        case ParamKind::Z: p.s.push_back(z_to_s(m, z0)); break;
        }
    }
    p.validate();
    return p;
}

namespace {

std::string upper(std::string s) {
    std::transform(s.begin(), s.end(), s.begin(),
                   [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
    return s;
}

Complex decode(TouchstoneData::Format fmt, double a, double b) {
    switch (fmt) {
    case TouchstoneData::Format::RI: return {a, b};
    case TouchstoneData::Format::MA: return std::polar(a, deg_to_rad(b));
    case TouchstoneData::Format::DB: return std::polar(db_to_mag(a), deg_to_rad(b));
    }
    return {};
}

std::pair<double, double> encode(TouchstoneData::Format fmt, Complex v) {
    switch (fmt) {
    case TouchstoneData::Format::RI: return {v.real(), v.imag()};
    case TouchstoneData::Format::MA: return {std::abs(v), rad_to_deg(std::arg(v))};
    case TouchstoneData::Format::DB: return {mag_db(std::abs(v)), rad_to_deg(std::arg(v))};
    }
    return {};
}

struct OptionLine {
    TouchstoneData::FreqUnit unit = TouchstoneData::FreqUnit::GHz;
    TouchstoneData::ParamKind kind = TouchstoneData::ParamKind::S;
    TouchstoneData::Format format = TouchstoneData::Format::MA;
    double z0 = 50.0;
};

OptionLine parse_option_line(const std::string& line, int lineno) {
    OptionLine opt;
    std::istringstream is(line.substr(1)); // past '#'
    std::string tok;
    bool have_unit = false, have_kind = false, have_fmt = false, have_r = false;
    while (is >> tok) {
        const std::string t = upper(tok);
        if (t == "HZ" || t == "KHZ" || t == "MHZ" || t == "GHZ") {
            if (have_unit)
                throw TouchstoneSyntaxError(lineno, "duplicate frequency unit");
            have_unit = true;
            opt.unit = t == "HZ"    ? TouchstoneData::FreqUnit::Hz
                       : t == "KHZ" ? TouchstoneData::FreqUnit::kHz
                       : t == "MHZ" ? TouchstoneData::FreqUnit::MHz
                                    : TouchstoneData::FreqUnit::GHz;
        } else if (t == "S" || t == "Y" || t == "Z") {
            if (have_kind)
                throw TouchstoneSyntaxError(lineno, "duplicate parameter kind");
            have_kind = true;
            opt.kind = t == "S"   ? TouchstoneData::ParamKind::S
                       : t == "Y" ? TouchstoneData::ParamKind::Y
                                  : TouchstoneData::ParamKind::Z;
        } else if (t == "G" || t == "H") {
            throw TouchstoneSyntaxError(lineno, "parameter kind '" + tok + "' not supported");
        } else if (t == "RI" || t == "MA" || t == "DB") {
            if (have_fmt)
                throw TouchstoneSyntaxError(lineno, "duplicate format");
            have_fmt = true;
            opt.format = t == "RI"   ? TouchstoneData::Format::RI
                         : t == "MA" ? TouchstoneData::Format::MA
                                     : TouchstoneData::Format::DB;
        } else if (t == "R") {
            if (have_r)
                throw TouchstoneSyntaxError(lineno, "duplicate reference impedance");
            have_r = true;
            if (!(is >> opt.z0) || !(opt.z0 > 0.0))
                throw TouchstoneSyntaxError(lineno, "'R' must be followed by a positive number");
        } else {
            throw TouchstoneSyntaxError(lineno, "unknown option token '" + tok + "'");
        }
    }
    return opt;
}

} // namespace

TouchstoneData parse_touchstone(const std::string& text) {
    TouchstoneData data;
    bool have_option = false;

    // Numeric tokens accumulate across lines (continuations tolerated);
    // each group of 9 forms one logical two-port row.
    std::vector<double> pending;
    int pending_line = 0;

    auto flush_row = [&]() {
        while (pending.size() >= 9) {
            const double f = pending[0] * data.unit_scale();
            if (!(f > 0.0))
                throw TouchstoneSyntaxError(pending_line, "frequency must be positive");
            if (!data.freqs.empty() && !(f > data.freqs.back()))
                throw NonMonotonicFrequency(pending_line, "frequency does not increase");
            data.freqs.push_back(f);
            // File order S11 S21 S12 S22 -> row-major 11,12,21,22.
            Mat2c m;
            m[0] = decode(data.format, pending[1], pending[2]);
            m[2] = decode(data.format, pending[3], pending[4]);
            m[1] = decode(data.format, pending[5], pending[6]);
            m[3] = decode(data.format, pending[7], pending[8]);
            data.values.push_back(m);
            pending.erase(pending.begin(), pending.begin() + 9);
        }
    };

    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r')
            line.pop_back();

        // '!' starts a comment; comment text is preserved verbatim.
        std::string body = line;
        const auto bang = line.find('!');
        if (bang != std::string::npos) {
            body = line.substr(0, bang);
            data.comments.push_back(line.substr(bang + 1));
        }
        // v2 keyword lines like [Version] are a different grammar.
        const auto first = body.find_first_not_of(" \t");
        if (first != std::string::npos && body[first] == '[')
            throw TouchstoneSyntaxError(lineno, "Touchstone v2 keyword; only v1 is supported");
        if (first != std::string::npos && body[first] == '#') {
            if (have_option)
                throw TouchstoneSyntaxError(lineno, "second option line");
            if (!data.freqs.empty() || !pending.empty())
                throw TouchstoneSyntaxError(lineno, "option line after data");
            const OptionLine opt = parse_option_line(body.substr(first), lineno);
            data.freq_unit = opt.unit;
            data.param_kind = opt.kind;
            data.format = opt.format;
            data.z0 = opt.z0;
            have_option = true;
            continue;
        }

        std::istringstream ls(body);
        std::string tok;
        while (ls >> tok) {
            try {
                std::size_t used = 0;
                const double v = std::stod(tok, &used);
                if (used != tok.size())
                    throw std::invalid_argument(tok);
                if (pending.empty())
                    pending_line = lineno;
                pending.push_back(v);
            } catch (const std::exception&) {
                throw TouchstoneSyntaxError(lineno, "not a number: '" + tok + "'");
            }
        }
        flush_row();
    }

    if (!pending.empty())
        throw WrongColumnCount(pending_line, std::to_string(pending.size()) +
                                                 " trailing values (9 per two-port row)");
    if (data.freqs.empty())
        throw TouchstoneSyntaxError(lineno, "no data rows");
    return data;
}

TouchstoneData parse_touchstone_file(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open touchstone file: " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_touchstone(text);
}

std::string write_touchstone(const TouchstoneData& data) {
    std::ostringstream os;
    for (const auto& c : data.comments)
        os << '!' << c << '\n';
    const char* unit = data.freq_unit == TouchstoneData::FreqUnit::Hz    ? "Hz"
                       : data.freq_unit == TouchstoneData::FreqUnit::kHz ? "kHz"
                       : data.freq_unit == TouchstoneData::FreqUnit::MHz ? "MHz"
                                                                         : "GHz";
    const char* kind = data.param_kind == TouchstoneData::ParamKind::S   ? "S"
                       : data.param_kind == TouchstoneData::ParamKind::Y ? "Y"
                                                                         : "Z";
    const char* fmt = data.format == TouchstoneData::Format::RI   ? "RI"
                      : data.format == TouchstoneData::Format::MA ? "MA"
                                                                  : "DB";
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.6g", data.z0);
    os << "# " << unit << ' ' << kind << ' ' << fmt << " R " << buf << '\n';

    const double scale = data.unit_scale();
    for (std::size_t i = 0; i < data.freqs.size(); ++i) {
        std::snprintf(buf, sizeof(buf), "%.9g", data.freqs[i] / scale);
        os << buf;
        // Row order S11 S21 S12 S22.
        for (int e : {0, 2, 1, 3}) {
            const auto [a, b] = encode(data.format, data.values[i][static_cast<std::size_t>(e)]);
            std::snprintf(buf, sizeof(buf), " %.6g %.6g", a, b);
            os << buf;
        }
        os << '\n';
    }
    return os.str();
}

void write_touchstone_file(const TouchstoneData& data, const std::string& path) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp);
        out << write_touchstone(data);
        if (!out)
            throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

namespace {

double s22_min_freq(const TwoPortParams& p) {
    std::size_t best = 0;
    double best_mag = std::abs(p.s[0][3]);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double m = std::abs(p.s[i][3]);
        if (m < best_mag) {
            best_mag = m;
            best = i;
        }
    }
    return p.freqs[best];
}

ComparisonReport::StabilitySummary summarize_stability(const TwoPortParams& p, double f0) {
    const StabilityReport rep = stability(p);
    std::size_t nearest = 0;
    double dist = std::abs(p.freqs[0] - f0);
    for (std::size_t i = 1; i < p.size(); ++i) {
        const double d = std::abs(p.freqs[i] - f0);
        if (d < dist) {
            dist = d;
            nearest = i;
        }
    }
    return {rep.stable_everywhere, rep.points[nearest].k, rep.points[nearest].delta_mag,
            rep.points[nearest].unilateral};
}

} // namespace

ComparisonReport compare(const TouchstoneData& measured, const TouchstoneData& simulated,
                         double f0) {
    const TwoPortParams pm = measured.to_two_port();
    const TwoPortParams ps = simulated.to_two_port();
    if (pm.freqs.empty() || f0 < pm.freqs.front() || f0 > pm.freqs.back())
        throw FrequencyOutOfRange("compare: f0 outside the measured grid");
    if (ps.freqs.empty() || f0 < ps.freqs.front() || f0 > ps.freqs.back())
        throw FrequencyOutOfRange("compare: f0 outside the simulated grid");

    ComparisonReport rep;
    rep.f0 = f0;
    auto delta = [&](int entry) {
        const double md = interp_db(pm, entry, f0);
        const double sd = interp_db(ps, entry, f0);
        return ComparisonReport::ParamDelta{md, sd, md - sd};
    };
    rep.s11 = delta(0);
    rep.s12 = delta(1);
    rep.s21 = delta(2);
    rep.s22 = delta(3);
    rep.s22_min_freq_measured = s22_min_freq(pm);
    rep.s22_min_freq_simulated = s22_min_freq(ps);
    rep.s22_min_shift = rep.s22_min_freq_measured - rep.s22_min_freq_simulated;
    rep.measured = summarize_stability(pm, f0);
    rep.simulated = summarize_stability(ps, f0);
    return rep;
}

std::string ComparisonReport::to_json() const {
    nlohmann::json j;
    j["f0_hz"] = f0;
    auto put = [&](const char* name, const ParamDelta& d) {
        j[name] = {{"measured_db", d.measured_db},
                   {"simulated_db", d.simulated_db},
                   {"delta_db", d.delta_db}};
    };
    put("s11", s11);
    put("s21", s21);
    put("s12", s12);
    put("s22", s22);
    j["s22_min"] = {{"measured_hz", s22_min_freq_measured},
                    {"simulated_hz", s22_min_freq_simulated},
                    {"shift_hz", s22_min_shift}};
    auto stab = [&](const StabilitySummary& s) {
        return nlohmann::json{{"stable_everywhere", s.stable_everywhere},
                              {"k_at_f0", s.k_at_f0},
                              {"delta_mag_at_f0", s.delta_mag_at_f0},
                              {"unilateral_at_f0", s.unilateral_at_f0}};
    };
    j["stability"] = {{"measured", stab(measured)}, {"simulated", stab(simulated)}};
    return j.dump(2);
}

} // namespace lna
