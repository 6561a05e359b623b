#include "nanotrap/atomic_data.hpp"

#include <cmath>
#include <fstream>
#include <set>

#include <json.hpp>

namespace nanotrap::atomic {

using nlohmann::json;

int AtomDatabase::index_of(const std::string& label) const {
    for (size_t i = 0; i < levels.size(); ++i)
        if (levels[i].label == label) return static_cast<int>(i);
    return -1;
}

const FineLevel& AtomDatabase::level(const std::string& label) const {
    const int i = index_of(label);
    if (i < 0) throw SchemaError("unknown level: " + label);
    return levels[i];
}

std::vector<const DipoleLine*> AtomDatabase::lines_of(int level_index) const {
    std::vector<const DipoleLine*> out;
    for (const auto& l : lines)
        if (l.lower == level_index || l.upper == level_index) out.push_back(&l);
    return out;
}

double hyperfine_shift_hz(double a_hz, double b_hz, double I, double J, double F) {
    const double K = F * (F + 1.0) - I * (I + 1.0) - J * (J + 1.0);
    double e = 0.5 * a_hz * K;
    if (b_hz != 0.0 && J > 0.5 && I > 0.5) {
        const double num = 1.5 * K * (K + 1.0) - 2.0 * I * (I + 1.0) * J * (J + 1.0);
        const double den = 2.0 * I * (2.0 * I - 1.0) * 2.0 * J * (2.0 * J - 1.0);
        e += b_hz * num / den;
    }
    return e;
}

std::vector<HyperfineLevel> hyperfine_levels(const FineLevel& level, double nuclear_spin) {
    std::vector<HyperfineLevel> out;
    const double I = nuclear_spin, J = level.J;
    for (double F = std::abs(J - I); F <= J + I + 0.1; F += 1.0) {
        out.push_back({F, level.energy_hz +
                              hyperfine_shift_hz(level.a_hfs_hz, level.b_hfs_hz, I, J, F)});
    }
    return out;
}

namespace {

// The manifold list the engine is built around: S 6..15, P (both J) 6..11,
// D (both J) 6..11.
std::vector<std::string> required_levels() {
    std::vector<std::string> out;
    for (int n = 6; n <= 15; ++n) out.push_back(std::to_string(n) + "S1/2");
    for (int n = 6; n <= 11; ++n) {
        out.push_back(std::to_string(n) + "P1/2");
        out.push_back(std::to_string(n) + "P3/2");
        out.push_back(std::to_string(n) + "D3/2");
        out.push_back(std::to_string(n) + "D5/2");
    }
    return out;
}

double tagged_number(const json& j, const char* what) {
    if (!j.is_object() || !j.contains("value") || !j.contains("source") ||
        !j["source"].is_string() || j["source"].get<std::string>().empty())
        throw SchemaError(std::string(what) + ": numeric entries need a value and a source tag");
    return j["value"].get<double>();
}

}  // namespace

AtomDatabase load_atom_data(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open atom data file: " + path);
    json root;
    try {
        root = json::parse(in);
    } catch (const json::exception& e) {
        throw ParseError(std::string("atom data parse failure: ") + e.what());
    }

    AtomDatabase db;
    try {
        db.constants.mass_kg = tagged_number(root.at("mass_kg"), "mass_kg");
        db.constants.ground_hfs_hz =
            tagged_number(root.at("ground_hyperfine_splitting_hz"), "ground hfs");
        db.constants.nuclear_spin = root.at("nuclear_spin").get<double>();

        for (const auto& jl : root.at("levels")) {
            FineLevel lev;
            lev.label = jl.at("label").get<std::string>();
            lev.n = jl.at("n").get<int>();
            lev.L = jl.at("L").get<int>();
            lev.J = jl.at("J").get<double>();
            lev.energy_hz = jl.at("energy_hz").get<double>();
            lev.a_hfs_hz = jl.value("A_hz", 0.0);
            lev.b_hfs_hz = jl.value("B_hz", 0.0);
            lev.gamma_hz = jl.value("gamma_hz", 0.0);
            lev.source = jl.value("source", std::string());
            if (lev.source.empty())
                throw SchemaError("level " + lev.label + " has no source tag");
            if (lev.a_hfs_hz == 0.0 && lev.L <= 2)
                db.warnings.push_back("level " + lev.label +
                                      ": no hyperfine constants, using A=B=0");
            if (lev.gamma_hz == 0.0)
                db.warnings.push_back("level " + lev.label + ": no linewidth, using Gamma=0");
            db.levels.push_back(std::move(lev));
        }

        for (const auto& jl : root.at("lines")) {
            DipoleLine line;
            line.lower = db.index_of(jl.at("lower").get<std::string>());
            line.upper = db.index_of(jl.at("upper").get<std::string>());
            line.reduced_ea0 = jl.at("reduced_ea0").get<double>();
            line.source = jl.value("source", std::string());
            if (line.lower < 0 || line.upper < 0)
                throw SchemaError("dipole line references an unknown level");
            if (line.source.empty()) throw SchemaError("dipole line has no source tag");
            const auto& lo = db.levels[line.lower];
            const auto& up = db.levels[line.upper];
            if (std::abs(lo.L - up.L) != 1 || std::abs(lo.J - up.J) > 1.01)
                throw SelectionRuleError("dipole-forbidden line " + lo.label + " -> " +
                                         up.label);
            if (!(line.reduced_ea0 > 0.0))
                throw SchemaError("reduced matrix element must be positive: " + lo.label +
                                  " -> " + up.label);
            db.lines.push_back(std::move(line));
        }
    } catch (const json::exception& e) {
        throw ParseError(std::string("atom data structure: ") + e.what());
    }

    // schema: every required manifold present and dipole-connected to 6S1/2
    // and/or 6P3/2 as selection rules allow
    const int i6s = db.index_of("6S1/2");
    const int i6p32 = db.index_of("6P3/2");
    if (i6s < 0) throw SchemaError("missing 6S1/2");
    if (i6p32 < 0) throw SchemaError("missing 6P3/2");
    std::set<std::pair<int, int>> have;
    for (const auto& l : db.lines) {
        have.insert({l.lower, l.upper});
        have.insert({l.upper, l.lower});
    }
    for (const auto& label : required_levels()) {
        const int i = db.index_of(label);
        if (i < 0) throw SchemaError("missing required level " + label);
        if (i == i6s) continue;
        const auto& lev = db.levels[i];
        bool connected = false;
        if (lev.L == 1) connected = have.count({i, i6s}) > 0;
        if (i == i6p32) connected = have.count({i, i6s}) > 0;
        if (lev.L == 0 || lev.L == 2)
            connected = have.count({i, i6p32}) > 0;
        if (!connected)
            throw SchemaError("level " + label + " has no dipole line to 6S1/2 or 6P3/2");
    }
    return db;
}

}  // namespace nanotrap::atomic
