#pragma once

#include <string>
#include <vector>

#include "lna/twoport.hpp"

namespace lna {

/// Touchstone v1 two-port file contents. Values are stored internally as
/// complex numbers with frequencies in absolute Hz; the option-line choices
/// (unit, parameter kind, format, reference) are kept for writing back.
struct TouchstoneData {
    enum class FreqUnit { Hz, kHz, MHz, GHz };
    enum class ParamKind { S, Y, Z };
    enum class Format { RI, MA, DB };

    FreqUnit freq_unit = FreqUnit::GHz;
    ParamKind param_kind = ParamKind::S;
    Format format = Format::MA;
    double z0 = 50.0;

    std::vector<double> freqs;  // Hz, strictly increasing
    std::vector<Mat2c> values;  // row-major 11,12,21,22
    std::vector<std::string> comments; // text after '!', preserved verbatim

    double unit_scale() const;

    /// S-parameter view referenced to z0 (converts Y/Z data per point).
    TwoPortParams to_two_port() const;
};

/// Parses Touchstone v1 text (2-port). One '#' option line with defaults
/// "GHz S MA R 50" when omitted; '!' comments preserved; rows are 9 numbers
/// in S11 S21 S12 S22 order, line continuations tolerated. Errors carry
/// 1-based line numbers.
TouchstoneData parse_touchstone(const std::string& text);
TouchstoneData parse_touchstone_file(const std::string& path);

/// Canonical serialization: comments, one option line, 6 significant digits,
/// one frequency per line. parse(write(d)) matches d to 1e-5 relative.
std::string write_touchstone(const TouchstoneData& data);
void write_touchstone_file(const TouchstoneData& data, const std::string& path);

/// Per-parameter measured-vs-simulated deltas at f0, the |S22| minima and
/// their frequency shift, and stability verdicts for both data sets.
struct ComparisonReport {
    struct ParamDelta {
        double measured_db;
        double simulated_db;
        double delta_db; // measured - simulated
    };
    struct StabilitySummary {
        bool stable_everywhere;
        double k_at_f0;        // at the grid point nearest f0
        double delta_mag_at_f0;
        bool unilateral_at_f0;
    };

    double f0; // Hz
    ParamDelta s11, s21, s12, s22;
    double s22_min_freq_measured;  // Hz
    double s22_min_freq_simulated; // Hz
    double s22_min_shift;          // Hz, measured - simulated
    StabilitySummary measured, simulated;

    std::string to_json() const;
};

ComparisonReport compare(const TouchstoneData& measured, const TouchstoneData& simulated,
                         double f0);

} // namespace lna
