#pragma once

#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "lna/synthesis.hpp"

namespace lna {

/// Design-space grid over bias current and input-device width.
struct SweepGrid {
    std::vector<double> id_values; // A, strictly increasing
    std::vector<double> w1_values; // um, strictly increasing

    void validate() const;
    /// {0.3, 0.4} mA x {24..64} um step 8.
    static SweepGrid defaults();
};

/// One evaluated (id, w1) design point. Metrics are meaningful only when
/// network is present; failed syntheses carry the stage-tagged reason.
struct CandidateRecord {
    double id;  // A
    double w1;  // um
    std::optional<LnaNetwork> network;
    std::string failure; // empty when synthesized

    double gain_db = std::numeric_limits<double>::quiet_NaN();
    double nf_db = std::numeric_limits<double>::quiet_NaN();
    double iip3_dbm = std::numeric_limits<double>::quiet_NaN();
    double s11_db = std::numeric_limits<double>::quiet_NaN();
    double s22_db = std::numeric_limits<double>::quiet_NaN();
    double s12_db = std::numeric_limits<double>::quiet_NaN();
    double p_dc = 0.0; // W, (i_ref + id) * vdd; bookkeeping, present even on failure

    struct Flags {
        bool gain = false;
        bool nf = false;
        bool iip3 = false;
        bool s11 = false;
        bool s22 = false;
        bool all() const { return gain && nf && iip3 && s11 && s22; }
    } feasible;
};

struct SweepOptions {
    double w_b_um = 4.0; // mirror device width for I_REF = id * w_b/w1 bookkeeping
    bool parallel = true;
};

/// Evaluates every grid point (synthesize + engine verification + NF + IIP3).
/// Per-point failures are recorded, never dropped; output is id-major grid
/// order regardless of how the points were scheduled.
std::vector<CandidateRecord> sweep(const DesignSpec& spec, const SweepGrid& grid,
                                   const Technology& tech, const SweepOptions& opts = {});

/// The reporting window used for design-space tables: strict S11/S22 bound
/// and a closed gain interval.
struct FeasibilityWindow {
    double s_max_db = -15.0;
    double gain_lo_db = 10.3;
    double gain_hi_db = 10.9;
};

/// Keeps synthesized records whose verified metrics satisfy the window.
/// Pure, stable-order, idempotent.
std::vector<CandidateRecord> filter_feasible(const std::vector<CandidateRecord>& records,
                                             const FeasibilityWindow& window = {});

/// Lowest bias current among records meeting every spec constraint, then
/// highest IIP3, then smallest width. Throws NoFeasibleCandidate listing the
/// binding constraint of each record.
CandidateRecord select(const std::vector<CandidateRecord>& records, const DesignSpec& spec);

/// Writes the design-space table: fixed header, 6 decimal places,
/// deterministic ordering.
void export_table(const std::vector<CandidateRecord>& records, const std::string& path);

/// Reads back an exported table (metrics and feasibility only).
std::vector<CandidateRecord> import_table(const std::string& path);

/// Sweep configuration document: spec, grid, technology path.
struct SweepConfig {
    DesignSpec spec;
    SweepGrid grid;
    Technology tech;

    static SweepConfig load(const std::string& path);
};

} // namespace lna
