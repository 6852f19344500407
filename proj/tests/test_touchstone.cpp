#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "lna/touchstone.hpp"

using namespace lna;

namespace {

double rel_err(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0 ? std::abs(a - b) / scale : 0.0;
}

// Plausible amplifier-shaped data set for round-trip checks.
TouchstoneData synthetic(std::size_t n) {
    TouchstoneData d;
    d.freq_unit = TouchstoneData::FreqUnit::GHz;
    d.param_kind = TouchstoneData::ParamKind::S;
    d.format = TouchstoneData::Format::RI;
    d.z0 = 50.0;
    d.comments = {" synthetic two-port data", " generated for round-trip checks"};
    for (std::size_t i = 0; i < n; ++i) {
        const double f = 2.0e9 + 1.0e9 * static_cast<double>(i) / static_cast<double>(n - 1);
        const double x = (f - 2.45e9) / 0.3e9;
        Mat2c m;
        m[0] = std::polar(0.2 + 0.1 * x * x, 2.0 + 0.5 * x);  // S11
        m[1] = std::polar(0.009 + 0.002 * x * x, -1.0 + x);   // S12
        m[2] = std::polar(3.4 / (1.0 + x * x), 1.5 - 0.8 * x); // S21
        m[3] = std::polar(0.15 + 0.2 * x * x, -2.0 + 0.3 * x); // S22
        d.freqs.push_back(f);
        d.values.push_back(m);
    }
    return d;
}

} // namespace

TEST_CASE("parse a magnitude-angle row") {
    const std::string text =
        "! demo file\n"
        "# GHz S MA R 50\n"
        "2.45 0.063 170 3.39 95 0.0089 10 0.031 -60\n";
    const TouchstoneData d = parse_touchstone(text);
    REQUIRE(d.freqs.size() == 1);
    CHECK(d.freqs[0] == doctest::Approx(2.45e9).epsilon(1e-12));
    CHECK(d.z0 == 50.0);
    CHECK(d.format == TouchstoneData::Format::MA);
    CHECK(std::abs(d.values[0][2]) == doctest::Approx(3.39).epsilon(1e-12));
    CHECK(mag_db(std::abs(d.values[0][2])) == doctest::Approx(10.6039939641).epsilon(1e-9));
    CHECK(std::arg(d.values[0][2]) == doctest::Approx(deg_to_rad(95.0)).epsilon(1e-12));
    CHECK(std::abs(d.values[0][0]) == doctest::Approx(0.063).epsilon(1e-12));
    CHECK(d.comments.size() == 1);
    CHECK(d.comments[0] == " demo file");
}

TEST_CASE("option line defaults are GHz S MA R 50") {
    const TouchstoneData d = parse_touchstone("1.0 0.1 0 2.0 90 0.01 0 0.2 0\n");
    CHECK(d.freq_unit == TouchstoneData::FreqUnit::GHz);
    CHECK(d.param_kind == TouchstoneData::ParamKind::S);
    CHECK(d.format == TouchstoneData::Format::MA);
    CHECK(d.z0 == 50.0);
    CHECK(d.freqs[0] == doctest::Approx(1e9));
}

TEST_CASE("parse errors carry line numbers") {
    SUBCASE("empty data section") {
        CHECK_THROWS_AS((void)parse_touchstone("# GHz S MA R 50\n"), TouchstoneSyntaxError);
    }
    SUBCASE("bad token with its line") {
        try {
            (void)parse_touchstone("! one\n# GHz S RI R 50\n1.0 0 0 0 0 0 0 0 0\nbogus\n");
            FAIL("expected error");
        } catch (const TouchstoneSyntaxError& e) {
            CHECK(e.line == 4);
        }
    }
    SUBCASE("second option line") {
        try {
            (void)parse_touchstone("# GHz S RI R 50\n# MHz S RI R 50\n");
            FAIL("expected error");
        } catch (const TouchstoneSyntaxError& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("v2 keyword is rejected clearly") {
        try {
            (void)parse_touchstone("[Version] 2.0\n# GHz S MA R 50\n");
            FAIL("expected error");
        } catch (const TouchstoneSyntaxError& e) {
            CHECK(std::string(e.what()).find("v1") != std::string::npos);
        }
    }
    SUBCASE("wrong column count") {
        try {
            (void)parse_touchstone("# GHz S RI R 50\n1.0 0 0 0 0 0 0 0\n");
            FAIL("expected error");
        } catch (const WrongColumnCount& e) {
            CHECK(e.line == 2);
        }
    }
    SUBCASE("non-monotonic frequency") {
        CHECK_THROWS_AS((void)parse_touchstone("# GHz S RI R 50\n"
                                               "2.0 0 0 0 0 0 0 0 0\n"
                                               "1.5 0 0 0 0 0 0 0 0\n"),
                        NonMonotonicFrequency);
    }
    SUBCASE("non-positive frequency") {
        CHECK_THROWS_AS((void)parse_touchstone("# GHz S RI R 50\n"
                                               "-1.0 0 0 0 0 0 0 0 0\n"),
                        TouchstoneSyntaxError);
    }
    SUBCASE("unknown parameter kind") {
        CHECK_THROWS_AS((void)parse_touchstone("# GHz H MA R 50\n1 0 0 0 0 0 0 0 0\n"),
                        TouchstoneSyntaxError);
    }
}

TEST_CASE("line continuations are tolerated") {
    const std::string text =
        "# GHz S RI R 50\n"
        "2.45 0.1 0.0 0.5 0.1\n"
        "     0.009 0.001 0.2 -0.05\n";
    const TouchstoneData d = parse_touchstone(text);
    REQUIRE(d.freqs.size() == 1);
    CHECK(rel_err(d.values[0][2], Complex(0.5, 0.1)) < 1e-12);
    CHECK(rel_err(d.values[0][3], Complex(0.2, -0.05)) < 1e-12);
}

TEST_CASE("write/parse round trip across the three formats") {
    const TouchstoneData base = synthetic(50);
    for (auto fmt : {TouchstoneData::Format::RI, TouchstoneData::Format::MA,
                     TouchstoneData::Format::DB}) {
        TouchstoneData d = base;
        d.format = fmt;
        const TouchstoneData back = parse_touchstone(write_touchstone(d));
        REQUIRE(back.freqs.size() == base.freqs.size());
        CHECK(back.format == fmt);
        for (std::size_t i = 0; i < back.freqs.size(); ++i) {
            CHECK(std::abs(back.freqs[i] - base.freqs[i]) <= 1e-5 * base.freqs[i]);
            for (int k = 0; k < 4; ++k)
                CHECK(rel_err(back.values[i][static_cast<std::size_t>(k)],
                              base.values[i][static_cast<std::size_t>(k)]) < 1e-5);
        }
    }
}

TEST_CASE("format conversions preserve the complex values") {
    // writing the same values under a different format tag must read back
    // to the same complex data
    TouchstoneData ma = synthetic(10);
    ma.format = TouchstoneData::Format::MA;
    TouchstoneData db = ma;
    db.format = TouchstoneData::Format::DB;
    const TouchstoneData a = parse_touchstone(write_touchstone(ma));
    const TouchstoneData b = parse_touchstone(write_touchstone(db));
    for (std::size_t i = 0; i < a.freqs.size(); ++i)
        for (int k = 0; k < 4; ++k)
            CHECK(rel_err(a.values[i][static_cast<std::size_t>(k)],
                          b.values[i][static_cast<std::size_t>(k)]) < 1e-5);
}

TEST_CASE("comments survive a round trip verbatim") {
    const TouchstoneData d = synthetic(5);
    const TouchstoneData back = parse_touchstone(write_touchstone(d));
    CHECK(back.comments == d.comments);
}

TEST_CASE("writing empty data yields text that parse rejects") {
    TouchstoneData d;
    d.freqs.clear();
    d.values.clear();
    const std::string text = write_touchstone(d);
    CHECK(text.find("# GHz S MA R 50") != std::string::npos);
    CHECK_THROWS_AS((void)parse_touchstone(text), TouchstoneSyntaxError);
}

TEST_CASE("admittance-kind files convert to S for analysis") {
    // series 50 ohm resistor as Y-parameters
    const std::string text =
        "# Hz Y RI R 50\n"
        "2.45e9 0.02 0 -0.02 0 -0.02 0 0.02 0\n";
    const TouchstoneData d = parse_touchstone(text);
    CHECK(d.param_kind == TouchstoneData::ParamKind::Y);
    const TwoPortParams p = d.to_two_port();
    CHECK(rel_err(p.s[0][0], Complex(1.0 / 3.0, 0)) < 1e-12);
    CHECK(rel_err(p.s[0][2], Complex(2.0 / 3.0, 0)) < 1e-12);
}

namespace {

// Fixtures shaped like a measured-vs-simulated pair: same grid, the measured
// gain 0.5 dB low at 2.45 GHz, and the measured output-match dip moved from
// 2.45 GHz down to 2.30 GHz.
TouchstoneData comparison_fixture(bool measured) {
    TouchstoneData d;
    d.freq_unit = TouchstoneData::FreqUnit::GHz;
    d.format = TouchstoneData::Format::DB;
    d.z0 = 50.0;
    const double dip = measured ? 2.30e9 : 2.45e9;
    const double s21_at_245 = measured ? 10.2 : 10.7;
    for (int i = 0; i <= 60; ++i) {
        const double f = 2.0e9 + 0.9e9 * i / 60.0; // 15 MHz steps hit 2.30 and 2.45
        const double xg = (f - 2.45e9) / 0.35e9;
        const double xd = (f - dip) / 0.25e9;
        Mat2c m;
        m[0] = std::polar(db_to_mag(std::min(-6.0, -18.0 + 6.0 * xg * xg)), 2.1);
        m[1] = std::polar(db_to_mag(measured ? -38.0 : -41.0), -0.4);
        m[2] = std::polar(db_to_mag(s21_at_245 - 2.0 * xg * xg), 1.0);
        m[3] = std::polar(db_to_mag(std::min(-4.0, -25.0 + 18.0 * xd * xd)), -1.2);
        d.freqs.push_back(f);
        d.values.push_back(m);
    }
    return d;
}

} // namespace

TEST_CASE("comparison of measured against simulated data") {
    const TouchstoneData meas = comparison_fixture(true);
    const TouchstoneData sim = comparison_fixture(false);

    SUBCASE("identical files compare to zero") {
        const ComparisonReport rep = compare(sim, sim, 2.45e9);
        CHECK(rep.s21.delta_db == doctest::Approx(0.0));
        CHECK(rep.s11.delta_db == doctest::Approx(0.0));
        CHECK(rep.s22_min_shift == doctest::Approx(0.0));
    }
    SUBCASE("gain gap and output-match downshift") {
        const ComparisonReport rep = compare(meas, sim, 2.45e9);
        CHECK(rep.s21.delta_db == doctest::Approx(-0.5).epsilon(1e-9));
        CHECK(rep.s21.simulated_db == doctest::Approx(10.7).epsilon(1e-9));
        CHECK(rep.s22_min_freq_measured == doctest::Approx(2.30e9).epsilon(1e-12));
        CHECK(rep.s22_min_freq_simulated == doctest::Approx(2.45e9).epsilon(1e-12));
        CHECK(rep.s22_min_shift == doctest::Approx(-150e6).epsilon(1e-9));
        CHECK(rep.measured.stable_everywhere);
        CHECK(rep.simulated.stable_everywhere);

        const std::string json = rep.to_json();
        CHECK(json.find("\"delta_db\"") != std::string::npos);
        CHECK(json.find("\"shift_hz\"") != std::string::npos);
    }
    SUBCASE("out-of-range comparison frequency") {
        CHECK_THROWS_AS((void)compare(meas, sim, 1.0e9), FrequencyOutOfRange);
    }
}
