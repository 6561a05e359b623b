#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace nanotrap::atomic {

struct ParseError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SchemaError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct SelectionRuleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// One fine-structure level of Cs.  Energies are E/h in Hz above the 6S1/2
/// centroid; hyperfine constants A, B in Hz; natural linewidth (Gamma/2pi)
/// in Hz, 0 when the data file has none.
struct FineLevel {
    std::string label;  // e.g. "6P3/2"
    int n = 0;
    int L = 0;
    double J = 0.0;
    double energy_hz = 0.0;
    double a_hfs_hz = 0.0;
    double b_hfs_hz = 0.0;
    double gamma_hz = 0.0;
    std::string source;
};

/// Reduced electric-dipole matrix element <J||d||J'> between two levels,
/// in units of e a0, positive by convention.
struct DipoleLine {
    int lower = -1;  // index into AtomDatabase::levels
    int upper = -1;
    double reduced_ea0 = 0.0;
    std::string source;
};

struct AtomConstants {
    double mass_kg = 0.0;
    double ground_hfs_hz = 0.0;  // 6S1/2 F=3 <-> F=4 splitting
    double nuclear_spin = 3.5;
};

struct HyperfineLevel {
    double F;
    double energy_hz;  // fine-structure energy + hyperfine shift
};

class AtomDatabase {
public:
    AtomConstants constants;
    std::vector<FineLevel> levels;
    std::vector<DipoleLine> lines;
    std::vector<std::string> warnings;  // loader notes (missing A/B/Gamma)

    int index_of(const std::string& label) const;  // -1 if absent
    const FineLevel& level(const std::string& label) const;

    /// Lines touching the given level, by level index.
    std::vector<const DipoleLine*> lines_of(int level_index) const;
};

/// Magnetic-dipole + electric-quadrupole hyperfine shift of (I, J, F).
double hyperfine_shift_hz(double a_hz, double b_hz, double I, double J, double F);

/// All hyperfine components of a level, ordered by increasing F.
std::vector<HyperfineLevel> hyperfine_levels(const FineLevel& level, double nuclear_spin);

/// Load and validate the bundled JSON level/line list.  Throws ParseError on
/// malformed files, SchemaError when a required manifold/line or source tag
/// is missing, SelectionRuleError for a dipole-forbidden line.
AtomDatabase load_atom_data(const std::string& path);

}  // namespace nanotrap::atomic
