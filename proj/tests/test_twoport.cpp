#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "lna/twoport.hpp"

using namespace lna;

namespace {
constexpr double kOmega0 = 2.0 * constants::pi * 2.45e9;

double rel_err(Complex a, Complex b) {
    const double scale = std::max(std::abs(a), std::abs(b));
    return scale > 0 ? std::abs(a - b) / scale : 0.0;
}
} // namespace

TEST_CASE("y_to_s of a series 50 ohm element") {
    const Mat2c y = {Complex(0.02, 0), Complex(-0.02, 0), Complex(-0.02, 0), Complex(0.02, 0)};
    const Mat2c s = y_to_s(y, 50.0);
    CHECK(rel_err(s[0], Complex(1.0 / 3.0, 0)) < 1e-12);
    CHECK(rel_err(s[2], Complex(2.0 / 3.0, 0)) < 1e-12);
    CHECK(rel_err(s[1], s[2]) < 1e-12);
}

TEST_CASE("open network converts to identity S") {
    const Mat2c y = {Complex(0, 0), Complex(0, 0), Complex(0, 0), Complex(0, 0)};
    const Mat2c s = y_to_s(y, 50.0);
    CHECK(std::abs(s[0] - 1.0) < 1e-15);
    CHECK(std::abs(s[3] - 1.0) < 1e-15);
    CHECK(std::abs(s[1]) < 1e-15);
}

TEST_CASE("y/s conversion round trip on random passive matrices") {
    std::mt19937 rng(12345);
    std::uniform_real_distribution<double> g(1e-4, 0.05), b(-0.05, 0.05);
    for (int i = 0; i < 100; ++i) {
        // reciprocal with diagonally dominant real part
        const Complex y12(-g(rng) * 0.5, b(rng) * 0.5);
        Mat2c y = {Complex(g(rng), b(rng)), y12, y12, Complex(g(rng), b(rng))};
        y[0] += Complex(std::abs(y12.real()), 0);
        y[3] += Complex(std::abs(y12.real()), 0);
        const Mat2c back = s_to_y(y_to_s(y, 50.0), 50.0);
        for (int k = 0; k < 4; ++k)
            CHECK(rel_err(back[static_cast<std::size_t>(k)],
                          y[static_cast<std::size_t>(k)]) < 1e-12);
    }
}

TEST_CASE("degenerate conversion is reported") {
    const Mat2c s = {Complex(-1, 0), Complex(0, 0), Complex(0, 0), Complex(-1, 0)};
    CHECK_THROWS_AS((void)s_to_y(s, 50.0), DegenerateConversion);
}

TEST_CASE("effective transconductance") {
    SUBCASE("reference-design Ls at 2.45 GHz") {
        const double gm = effective_transconductance(1.8e-9, kOmega0);
        CHECK(gm == doctest::Approx(1.804477812833e-2).epsilon(1e-12));
        CHECK(std::abs(gm - 18.04e-3) < 0.01e-3);
    }
    SUBCASE("doubling Ls halves Gm") {
        CHECK(effective_transconductance(3.6e-9, kOmega0) ==
              doctest::Approx(0.5 * effective_transconductance(1.8e-9, kOmega0)).epsilon(1e-15));
    }
    SUBCASE("large Ls limit") {
        CHECK(effective_transconductance(1.0, kOmega0) < 1e-10);
    }
}

TEST_CASE("output conductance") {
    SUBCASE("hand value") {
        CHECK(output_conductance(9.5e-9, 10.0, 1e-4, kOmega0) ==
              doctest::Approx(7.838021185473e-4).epsilon(1e-12));
    }
    SUBCASE("infinite Q leaves only the cascode part") {
        CHECK(output_conductance(9.5e-9, 1e15, 1e-4, kOmega0) ==
              doctest::Approx(1e-4).epsilon(1e-9));
    }
    SUBCASE("pure tank loss") {
        CHECK(output_conductance(9.5e-9, 10.0, 0.0, kOmega0) ==
              doctest::Approx(1.0 / (kOmega0 * 9.5e-9 * 10.0)).epsilon(1e-15));
    }
}

TEST_CASE("available gain chain") {
    const GainBreakdown g = available_gain(1.8e-9, 9.5e-9, 10.0, 1e-4, 50.0, kOmega0);
    SUBCASE("hand-chained value") {
        CHECK(g.gain_linear == doctest::Approx(20.771442816730).epsilon(1e-12));
        CHECK(g.gain_db == doctest::Approx(13.174666643532).epsilon(1e-12));
    }
    SUBCASE("compositional identity") {
        CHECK(g.gain_linear == g.gm_eff * g.gm_eff * g.r_s / g.go_prime);
    }
    SUBCASE("halving Ls quadruples the gain") {
        const GainBreakdown h = available_gain(0.9e-9, 9.5e-9, 10.0, 1e-4, 50.0, kOmega0);
        CHECK(h.gain_linear == doctest::Approx(4.0 * g.gain_linear).epsilon(1e-12));
    }
    SUBCASE("gain increases with Ld*Qd") {
        double prev = 0.0;
        for (double scale : {1.0, 1.2, 1.5, 2.0, 3.0}) {
            const double gain =
                available_gain(1.8e-9, 9.5e-9 * scale, 10.0, 1e-4, 50.0, kOmega0).gain_linear;
            CHECK(gain > prev);
            prev = gain;
        }
    }
}

TEST_CASE("stability report") {
    TwoPortParams p;
    p.z0 = 50.0;
    p.freqs = {2.45e9};

    SUBCASE("symmetric fixture") {
        p.s = {{Complex(0, 0), Complex(0.5, 0), Complex(0.5, 0), Complex(0, 0)}};
        const StabilityReport rep = stability(p);
        CHECK(rep.points[0].k == doctest::Approx(2.125).epsilon(1e-12));
        CHECK(rep.points[0].delta_mag == doctest::Approx(0.25).epsilon(1e-12));
        CHECK(!rep.points[0].unilateral);
        CHECK(rep.points[0].stable);
        CHECK(rep.stable_everywhere);
    }
    SUBCASE("zero S12 flags unilateral") {
        p.s = {{Complex(0.2, 0), Complex(0, 0), Complex(3.0, 0), Complex(0.1, 0)}};
        const StabilityReport rep = stability(p);
        CHECK(rep.points[0].unilateral);
        CHECK(std::isinf(rep.points[0].k));
        CHECK(rep.points[0].stable);
    }
    SUBCASE("matched isolator") {
        p.s = {{Complex(0, 0), Complex(0, 0), Complex(1.0, 0), Complex(0, 0)}};
        const StabilityReport rep = stability(p);
        CHECK(rep.points[0].unilateral);
        CHECK(rep.points[0].stable);
    }
    SUBCASE("|delta| >= 1 is not unconditionally stable") {
        p.s = {{Complex(0.9, 0), Complex(0.1, 0), Complex(8.0, 0), Complex(0.9, 0)}};
        const StabilityReport rep = stability(p);
        CHECK(!rep.points[0].stable);
    }
}

TEST_CASE("stability invariant under reference-plane rotation") {
    std::mt19937 rng(777);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    for (int i = 0; i < 50; ++i) {
        TwoPortParams p;
        p.freqs = {1e9};
        Mat2c s;
        for (auto& e : s)
            e = Complex(u(rng), u(rng));
        p.s = {s};
        const auto base = stability(p).points[0];

        const double t1 = u(rng) * constants::pi, t2 = u(rng) * constants::pi;
        const Complex e1 = std::polar(1.0, t1), e2 = std::polar(1.0, t2);
        TwoPortParams q = p;
        q.s[0] = {s[0] * e1 * e1, s[1] * e1 * e2, s[2] * e1 * e2, s[3] * e2 * e2};
        const auto rot = stability(q).points[0];
        if (!base.unilateral) {
            CHECK(std::abs(rot.k - base.k) <= 1e-12 * std::abs(base.k));
        }
        CHECK(std::abs(rot.delta_mag - base.delta_mag) <= 1e-12);
    }
}

TEST_CASE("band metrics") {
    TwoPortParams p;
    p.z0 = 50.0;

    SUBCASE("constant reflection") {
        p.freqs = {2.4e9, 2.45e9, 2.5e9};
        const Mat2c m = {Complex(0.1, 0), Complex(0.01, 0), Complex(3.0, 0), Complex(0.1, 0)};
        p.s = {m, m, m};
        const BandMetrics bm = band_metrics(p, 2.4e9, 2.5e9);
        CHECK(bm.worst_s11_db == doctest::Approx(-20.0).epsilon(1e-12));
        CHECK(bm.worst_s22_db == doctest::Approx(-20.0).epsilon(1e-12));
    }
    SUBCASE("gain extremes over the grid") {
        p.freqs = {2.4e9, 2.45e9, 2.5e9};
        auto with_s21 = [](double v) {
            return Mat2c{Complex(0.1, 0), Complex(0.01, 0), Complex(v, 0), Complex(0.1, 0)};
        };
        p.s = {with_s21(3.0), with_s21(3.2), with_s21(3.1)};
        const BandMetrics bm = band_metrics(p, 2.4e9, 2.5e9);
        CHECK(bm.max_s21_db == doctest::Approx(10.1029995664).epsilon(1e-9));
        CHECK(bm.min_s21_db == doctest::Approx(9.5424250944).epsilon(1e-9));
        CHECK(std::abs(bm.max_s21_db - 10.1) < 5e-3);
        CHECK(std::abs(bm.min_s21_db - 9.54) < 5e-3);
    }
    SUBCASE("through network sits at 0 dB") {
        p.freqs = {2.4e9, 2.45e9, 2.5e9};
        const Mat2c thr = {Complex(0, 0), Complex(1, 0), Complex(1, 0), Complex(0, 0)};
        p.s = {thr, thr, thr};
        const BandMetrics bm = band_metrics(p, 2.4e9, 2.5e9);
        CHECK(bm.max_s21_db == doctest::Approx(0.0));
        CHECK(bm.min_s21_db == doctest::Approx(0.0));
        CHECK(bm.s12_db_at_center == doctest::Approx(0.0));
    }
    SUBCASE("band outside grid") {
        p.freqs = {2.4e9, 2.5e9};
        const Mat2c m{};
        p.s = {m, m};
        CHECK_THROWS_AS((void)band_metrics(p, 2.0e9, 2.1e9), BandOutsideGrid);
    }
}
