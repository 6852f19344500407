#include "lna/explorer.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <sstream>

#include <json.hpp>

namespace lna {

void SweepGrid::validate() const {
    auto check = [](const std::vector<double>& v, const char* name) {
        if (v.empty())
            throw InvalidArgument(std::string("sweep grid: ") + name + " is empty");
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!(v[i] > 0.0))
                throw InvalidArgument(std::string("sweep grid: ") + name + " must be positive");
            if (i > 0 && !(v[i] > v[i - 1]))
                throw InvalidArgument(std::string("sweep grid: ") + name +
                                      " must be strictly increasing");
        }
    };
    check(id_values, "id_values");
    check(w1_values, "w1_values");
}

SweepGrid SweepGrid::defaults() {
    SweepGrid g;
    g.id_values = {0.3e-3, 0.4e-3};
    for (double w = 24.0; w <= 64.0; w += 8.0)
        g.w1_values.push_back(w);
    return g;
}

namespace {

CandidateRecord evaluate_point(const DesignSpec& spec, const Technology& tech,
                               const SweepOptions& opts, double id, double w1) {
    CandidateRecord rec;
    rec.id = id;
    rec.w1 = w1;
    const double i_ref = id * opts.w_b_um / w1;
    rec.p_dc = (i_ref + id) * tech.vdd;
    try {
        rec.network = synthesize(spec, id, w1, tech);
        const MosOpPoint m1 = small_signal(id, {w1, tech.l_min}, tech);
        const MosOpPoint m2 = small_signal(id, {w1 / 2.0, tech.l_min}, tech);
        const LnaMetrics m = evaluate_lna(*rec.network, m1, m2, spec, tech);
        rec.gain_db = m.gain_db;
        rec.nf_db = m.nf_db;
        rec.s11_db = m.s11_db;
        rec.s22_db = m.s22_db;
        rec.s12_db = m.s12_db;
        rec.iip3_dbm = iip3_power_series(m1, spec.rs);

        rec.feasible.gain = std::abs(rec.gain_db - spec.gain_target_db) <= spec.gain_tol_db;
        rec.feasible.nf = rec.nf_db < spec.nf_max_db;
        rec.feasible.iip3 = rec.iip3_dbm > spec.iip3_min_dbm;
        rec.feasible.s11 = rec.s11_db < spec.s11_max_db;
        rec.feasible.s22 = rec.s22_db < spec.s22_max_db;
    } catch (const Error& e) {
        rec.network.reset();
        rec.failure = e.what();
    }
    return rec;
}

} // namespace

std::vector<CandidateRecord> sweep(const DesignSpec& spec, const SweepGrid& grid,
                                   const Technology& tech, const SweepOptions& opts) {
    spec.validate();
    grid.validate();
    tech.validate();

    std::vector<std::pair<double, double>> points;
    for (double id : grid.id_values)
        for (double w1 : grid.w1_values)
            points.emplace_back(id, w1);

    std::vector<CandidateRecord> records;
    records.reserve(points.size());
    if (opts.parallel && points.size() > 1) {
        std::vector<std::future<CandidateRecord>> futures;
        futures.reserve(points.size());
        for (const auto& [id, w1] : points)
            futures.push_back(std::async(std::launch::async, evaluate_point, std::cref(spec),
                                         std::cref(tech), std::cref(opts), id, w1));
        for (auto& f : futures)
            records.push_back(f.get()); // merge preserves grid order
    } else {
        for (const auto& [id, w1] : points)
            records.push_back(evaluate_point(spec, tech, opts, id, w1));
    }
    return records;
}

std::vector<CandidateRecord> filter_feasible(const std::vector<CandidateRecord>& records,
                                             const FeasibilityWindow& window) {
    std::vector<CandidateRecord> out;
    for (const auto& r : records) {
        if (!r.network)
            continue;
        if (!(r.s11_db < window.s_max_db) || !(r.s22_db < window.s_max_db))
            continue;
        if (r.gain_db < window.gain_lo_db || r.gain_db > window.gain_hi_db)
            continue;
        out.push_back(r);
    }
    return out;
}

namespace {

// Constraint check against the spec itself, not the stored flags, so that
// hand-built record fixtures behave the same as sweep output.
CandidateRecord::Flags spec_flags(const CandidateRecord& r, const DesignSpec& spec) {
    CandidateRecord::Flags f;
    f.gain = std::abs(r.gain_db - spec.gain_target_db) <= spec.gain_tol_db;
    f.nf = r.nf_db < spec.nf_max_db;
    f.iip3 = r.iip3_dbm > spec.iip3_min_dbm;
    f.s11 = r.s11_db < spec.s11_max_db;
    f.s22 = r.s22_db < spec.s22_max_db;
    return f;
}

} // namespace

CandidateRecord select(const std::vector<CandidateRecord>& records, const DesignSpec& spec) {
    if (records.empty())
        throw InvalidArgument("select: no records");

    const CandidateRecord* best = nullptr;
    for (const auto& r : records) {
        if (!r.network || !spec_flags(r, spec).all())
            continue;
        if (!best) {
            best = &r;
            continue;
        }
        if (r.id != best->id) {
            if (r.id < best->id) best = &r;
        } else if (r.iip3_dbm != best->iip3_dbm) {
            if (r.iip3_dbm > best->iip3_dbm) best = &r;
        } else if (r.w1 < best->w1) {
            best = &r;
        }
    }
    if (best)
        return *best;

    std::ostringstream os;
    os << "select: no feasible candidate among " << records.size() << " records:";
    for (const auto& r : records) {
        os << "\n  (id = " << r.id * 1e3 << " mA, w1 = " << r.w1 << " um): ";
        if (!r.network) {
            os << r.failure;
            continue;
        }
        const auto f = spec_flags(r, spec);
        if (!f.gain)
            os << "gain " << r.gain_db << " dB outside window";
        else if (!f.nf)
            os << "NF " << r.nf_db << " dB above limit";
        else if (!f.iip3)
            os << "IIP3 " << r.iip3_dbm << " dBm below limit";
        else if (!f.s11)
            os << "S11 " << r.s11_db << " dB above limit";
        else
            os << "S22 " << r.s22_db << " dB above limit";
    }
    throw NoFeasibleCandidate(os.str());
}

void export_table(const std::vector<CandidateRecord>& records, const std::string& path) {
    std::ostringstream os;
    os << "id_mA,w1_um,gain_db,nf_db,iip3_dbm,s11_db,s22_db,s12_db,p_dc_uW,feasible\n";
    char buf[400];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof(buf),
                      "%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%.6f,%d\n", r.id * 1e3, r.w1,
                      r.gain_db, r.nf_db, r.iip3_dbm, r.s11_db, r.s22_db, r.s12_db,
                      r.p_dc * 1e6, r.network && r.feasible.all() ? 1 : 0);
        os << buf;
    }

    // Write-to-temp, rename on success: no partial output.
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw IoError("cannot open for writing: " + tmp);
        out << os.str();
        if (!out)
            throw IoError("write failed: " + tmp);
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw IoError("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::vector<CandidateRecord> import_table(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open table: " + path);
    std::string line;
    if (!std::getline(in, line))
        throw IoError("empty table: " + path);
    std::vector<CandidateRecord> out;
    while (std::getline(in, line)) {
        if (line.empty())
            continue;
        // strtod-based split: iostreams refuse the nan fields of failed rows
        std::array<double, 10> col{};
        const char* p = line.c_str();
        bool ok = true;
        for (auto& c : col) {
            char* end = nullptr;
            c = std::strtod(p, &end);
            if (end == p) {
                ok = false;
                break;
            }
            p = *end == ',' ? end + 1 : end;
        }
        if (!ok)
            throw IoError("malformed table row: " + line);
        CandidateRecord r;
        r.id = col[0] * 1e-3;
        r.w1 = col[1];
        r.gain_db = col[2];
        r.nf_db = col[3];
        r.iip3_dbm = col[4];
        r.s11_db = col[5];
        r.s22_db = col[6];
        r.s12_db = col[7];
        r.p_dc = col[8] * 1e-6;
        r.feasible.gain = r.feasible.nf = r.feasible.iip3 = r.feasible.s11 = r.feasible.s22 =
            col[9] != 0.0;
        out.push_back(r);
    }
    return out;
}

SweepConfig SweepConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open sweep config: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw InvalidArgument("sweep config " + path + ": " + e.what());
    }

    SweepConfig cfg;
    try {
        const auto& s = j.at("spec");
        cfg.spec.band_lo = s.at("band_hz").at(0).get<double>();
        cfg.spec.band_hi = s.at("band_hz").at(1).get<double>();
        cfg.spec.gain_target_db = s.at("gain_db").at("target").get<double>();
        cfg.spec.gain_tol_db = s.at("gain_db").at("tol").get<double>();
        cfg.spec.nf_max_db = s.at("nf_max_db").get<double>();
        cfg.spec.iip3_min_dbm = s.at("iip3_min_dbm").get<double>();
        cfg.spec.s11_max_db = s.at("s11_max_db").get<double>();
        cfg.spec.s22_max_db = s.at("s22_max_db").get<double>();
        cfg.spec.rs = s.at("rs_ohms").get<double>();
        cfg.spec.rl = s.at("rl_ohms").get<double>();
        cfg.grid.id_values = j.at("grid").at("id_a").get<std::vector<double>>();
        cfg.grid.w1_values = j.at("grid").at("w1_um").get<std::vector<double>>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("sweep config " + path + ": " + e.what());
    }

    std::string tech_path;
    try {
        tech_path = j.at("technology").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
        throw InvalidArgument("sweep config " + path + ": " + e.what());
    }
    // Relative technology paths resolve against the config file's directory.
    std::filesystem::path tp(tech_path);
    if (tp.is_relative())
        tp = std::filesystem::path(path).parent_path() / tp;
    cfg.tech = load_technology(tp.string());

    cfg.spec.validate();
    cfg.grid.validate();
    return cfg;
}

} // namespace lna
