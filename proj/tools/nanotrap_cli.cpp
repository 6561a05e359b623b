// Command-line driver: mode / polarizability / magic / scan / characterize.
// Exit codes: 0 success, 1 physics or no-result, 2 usage/config errors.

#include <cstdio>
#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>
#include <omp.h>

#include "nanotrap/atomic_data.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/light_shift.hpp"
#include "nanotrap/polarizability.hpp"
#include "nanotrap/run_config.hpp"
#include "nanotrap/trap_analysis.hpp"
#include "nanotrap/waveguide.hpp"

namespace cn = nanotrap::constants;
namespace wg = nanotrap::waveguide;
namespace at = nanotrap::atomic;
namespace pz = nanotrap::polarizability;
namespace ta = nanotrap::trap_analysis;
using nanotrap::run_config::RunConfig;
using nanotrap::trap::PreparedTrap;

namespace {

struct PhysicsFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.9e", v);
    return buf;
}

at::AtomDatabase load_db(const std::string& override_path) {
    const std::string path = override_path.empty() ? NANOTRAP_DATA_FILE : override_path;
    return at::load_atom_data(path);
}

int run_mode(double lambda, double radius, double n1, double n2, bool sellmeier) {
    wg::FiberSpec fiber{radius, sellmeier ? cn::silica_index(lambda) : n1, n2};
    const auto sol = wg::solve_he11(lambda, fiber);
    wg::BeamSpec beam{lambda, 1.0};
    const auto f = wg::mode_field(sol, beam, {radius * (1.0 + 1e-12), 0.0, 0.0});
    const double e2 = f.e_plus.squaredNorm();
    const double fz = std::norm(f.e_plus[2]) / e2;
    std::cout << "wavelength_m " << fmt(lambda) << "\n"
              << "n1 " << fmt(fiber.n1) << "\n"
              << "beta_rad_per_m " << fmt(sol.beta) << "\n"
              << "h_rad_per_m " << fmt(sol.h) << "\n"
              << "q_rad_per_m " << fmt(sol.q) << "\n"
              << "s " << fmt(sol.s) << "\n"
              << "effective_index " << fmt(sol.beta / sol.k0()) << "\n"
              << "longitudinal_fraction_surface " << fmt(fz) << "\n";
    return 0;
}

int run_spectrum(const at::AtomDatabase& db, double lo, double hi, int n,
                 double intensity, const std::string& out_path) {
    const std::vector<std::pair<std::string, double>> states{
        {"6S1/2", 3.0}, {"6S1/2", 4.0}, {"6P3/2", 4.0}};
    const auto rows = pz::scalar_light_shift_spectrum(db, states, lo, hi, n, intensity);
    std::ostream* os = &std::cout;
    std::ofstream file;
    if (!out_path.empty()) {
        file.open(out_path);
        if (!file) throw nanotrap::run_config::ConfigError("cannot write " + out_path);
        os = &file;
    }
    *os << "lambda_m,level,F,mF,shift_hz\n";
    for (const auto& r : rows) {
        *os << fmt(r.lambda) << ',' << r.level << ',' << r.F << ',' << r.m_f << ','
            << fmt(r.shift_hz) << '\n';
    }
    return 0;
}

int run_polarizability(const at::AtomDatabase& db, const std::string& level, double F,
                       double lambda) {
    const double omega = 2.0 * M_PI * cn::c_light / lambda;
    const auto p = pz::polarizabilities(db, level, F, omega);
    std::cout << "level " << level << " F " << F << " wavelength_m " << fmt(lambda) << "\n"
              << "alpha0_au " << fmt(p.a0_au()) << "\n"
              << "alpha1_au " << fmt(p.a1_au()) << "\n"
              << "alpha2_au " << fmt(p.a2_au()) << "\n"
              << "alpha0_si " << fmt(p.a0) << "\n"
              << "alpha1_si " << fmt(p.a1) << "\n"
              << "alpha2_si " << fmt(p.a2) << "\n";
    return 0;
}

int run_magic(const at::AtomDatabase& db, double lo, double hi, double ground_f,
              double excited_f, double excited_mf, double intensity) {
    const auto m = pz::find_magic_wavelength(db, lo, hi, "6S1/2", ground_f, "6P3/2",
                                             excited_f, excited_mf, intensity);
    std::cout << "magic_wavelength_m " << fmt(m.lambda) << "\n"
              << "magic_wavelength_nm " << fmt(m.lambda * 1e9) << "\n"
              << "crossing_slope_hz_per_m " << fmt(m.slope_hz_per_m) << "\n";
    return 0;
}

void write_scan_csv(std::ostream& os, const std::vector<ta::ScanRow>& rows) {
    os << "coord,eigenvalue_index,manifold,energy_hz,energy_mk\n";
    for (const auto& r : rows) {
        os << fmt(r.coord) << ',' << r.eigenvalue_index << ',' << r.manifold << ','
           << fmt(r.energy_hz) << ',' << fmt(r.energy_mk) << '\n';
    }
}

int run_scan(const RunConfig& rc, const at::AtomDatabase& db,
             const std::string& output_override) {
    if (!rc.scan) throw nanotrap::run_config::ConfigError("config has no scan directive");
    PreparedTrap prepared(rc.trap, db);
    std::vector<nanotrap::trap::Manifold> manifolds;
    for (const auto& [level, F] : rc.trap.manifolds)
        manifolds.push_back(prepared.manifold(level, F));
    ta::ScanGrid grid;
    grid.axis = rc.scan->axis;
    grid.r = rc.scan->r_m;
    grid.phi = rc.scan->phi_rad;
    grid.z = rc.scan->z_m;
    grid.lo = rc.scan->lo;
    grid.hi = rc.scan->hi;
    grid.n = rc.scan->n_points;
    const auto rows = ta::scan_potential(prepared, manifolds, grid);

    const std::string out = !output_override.empty() ? output_override
                            : rc.output ? *rc.output : std::string();
    if (out.empty()) {
        write_scan_csv(std::cout, rows);
    } else {
        std::ofstream f(out);
        if (!f) throw nanotrap::run_config::ConfigError("cannot write " + out);
        write_scan_csv(f, rows);
        std::cout << "wrote " << rows.size() << " rows to " << out << "\n";
    }
    return 0;
}

int run_characterize(const RunConfig& rc, const at::AtomDatabase& db,
                     const std::string& output_override) {
    PreparedTrap prepared(rc.trap, db);
    // characterize the highest-F ground manifold in the config
    std::string level;
    double best_f = -1.0;
    for (const auto& [lev, F] : rc.trap.manifolds) {
        if (db.level(lev).L == 0 && F > best_f) {
            level = lev;
            best_f = F;
        }
    }
    if (level.empty())
        throw nanotrap::run_config::ConfigError("characterize needs a ground manifold");
    const auto man = prepared.manifold(level, best_f);
    const auto ch = ta::characterize(prepared, man);

    const double a = rc.trap.fiber.radius;
    std::cout << "trap minimum: r-a = " << fmt((ch.minimum.location.r - a) * 1e9)
              << " nm, phi = " << fmt(ch.minimum.location.phi)
              << " rad, z = " << fmt(ch.minimum.location.z * 1e9) << " nm\n"
              << "depth: " << fmt(ch.minimum.depth_mk) << " mK ("
              << fmt(ch.minimum.depth_hz / 1e6) << " MHz), escape depth "
              << fmt(ch.minimum.escape_depth_hz / 1e6) << " MHz\n"
              << "frequencies: nu_r = " << fmt(ch.frequencies.nu_r / 1e3)
              << " kHz, nu_phi = " << fmt(ch.frequencies.nu_phi / 1e3)
              << " kHz, nu_z = " << fmt(ch.frequencies.nu_z / 1e3) << " kHz\n"
              << "motional widths: sigma_r = " << fmt(ch.sigma_r_m * 1e9)
              << " nm, sigma_phi = " << fmt(ch.sigma_phi_m * 1e9)
              << " nm, sigma_z = " << fmt(ch.sigma_z_m * 1e9) << " nm\n"
              << "F=" << man.F << " splitting at minimum: "
              << fmt(ch.splittings.span_at_min_hz) << " Hz (tau = "
              << fmt(ch.splittings.tau_s * 1e3) << " ms)\n"
              << "hyperfine-transition spread over sigma_phi: "
              << fmt(ch.splittings.f_diff_spread_hz) << " Hz (tau_m = "
              << fmt(ch.splittings.tau_m_s * 1e3) << " ms)\n";

    const std::string out = !output_override.empty() ? output_override
                            : rc.output ? *rc.output : std::string();
    if (!out.empty()) {
        nlohmann::ordered_json j;
        j["manifold"] = man.name();
        j["minimum"] = {{"r_m", ch.minimum.location.r},
                        {"r_minus_a_m", ch.minimum.location.r - a},
                        {"phi_rad", ch.minimum.location.phi},
                        {"z_m", ch.minimum.location.z}};
        j["depth_mk"] = ch.minimum.depth_mk;
        j["depth_hz"] = ch.minimum.depth_hz;
        j["escape_depth_hz"] = ch.minimum.escape_depth_hz;
        j["nu_r_hz"] = ch.frequencies.nu_r;
        j["nu_phi_hz"] = ch.frequencies.nu_phi;
        j["nu_z_hz"] = ch.frequencies.nu_z;
        j["sigma_r_m"] = ch.sigma_r_m;
        j["sigma_phi_m"] = ch.sigma_phi_m;
        j["sigma_z_m"] = ch.sigma_z_m;
        j["splitting_at_min_hz"] = ch.splittings.span_at_min_hz;
        j["splitting_spread_hz"] = ch.splittings.span_spread_hz;
        j["f_diff_spread_hz"] = ch.splittings.f_diff_spread_hz;
        j["tau_s"] = ch.splittings.tau_s;
        j["tau_m_s"] = ch.splittings.tau_m_s;
        std::ofstream f(out);
        if (!f) throw nanotrap::run_config::ConfigError("cannot write " + out);
        f << j.dump(1) << "\n";
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"nanofiber two-color trap calculator"};
    app.require_subcommand(1);
    app.fallthrough();  // global flags may follow the subcommand

    std::string atom_data, output;
    int threads = 0;
    app.add_option("--atom-data", atom_data, "atomic data file (default: bundled)");
    app.add_option("--output", output, "output path (default from config or stdout)");
    app.add_option("--threads", threads, "OpenMP thread count (default: all)");

    auto* mode = app.add_subcommand("mode", "solve the HE11 guided mode");
    double m_lambda = 937e-9, m_radius = 250e-9, m_n1 = 0.0, m_n2 = 1.0;
    mode->add_option("--wavelength", m_lambda, "wavelength (m)");
    mode->add_option("--radius", m_radius, "fiber radius (m)");
    auto* n1_opt = mode->add_option("--n1", m_n1, "core index (default: silica Sellmeier)");
    mode->add_option("--n2", m_n2, "cladding index");

    auto* pol = app.add_subcommand("polarizability", "dynamic polarizabilities of a level");
    std::string p_level = "6S1/2";
    double p_f = 4.0, p_lambda = 937e-9;
    pol->add_option("--level", p_level, "level label, e.g. 6P3/2");
    pol->add_option("--f", p_f, "hyperfine F");
    pol->add_option("--wavelength", p_lambda, "wavelength (m)");
    double sp_lo = 0.0, sp_hi = 0.0, sp_int = 2.9e9;
    int sp_n = 0;
    auto* sp_opt = pol->add_option("--spectrum-lo", sp_lo,
                                   "emit per-sublevel shifts from this wavelength (m)");
    pol->add_option("--spectrum-hi", sp_hi, "spectrum upper wavelength (m)");
    pol->add_option("--spectrum-n", sp_n, "spectrum points");
    pol->add_option("--intensity", sp_int, "spectrum intensity (W/m^2)");

    auto* magic = app.add_subcommand("magic", "find a magic wavelength");
    double g_lo = 930e-9, g_hi = 945e-9, g_f = 4.0, e_f = 4.0, e_mf = 0.0, g_int = 2.9e9;
    magic->add_option("--bracket-lo", g_lo, "bracket start (m)");
    magic->add_option("--bracket-hi", g_hi, "bracket end (m)");
    magic->add_option("--ground-f", g_f, "ground F");
    magic->add_option("--excited-f", e_f, "excited F'");
    magic->add_option("--excited-mf", e_mf, "excited m_F'");
    magic->add_option("--intensity", g_int, "intensity (W/m^2)");

    auto* scan = app.add_subcommand("scan", "tabulate adiabatic potentials on a grid");
    std::string s_config;
    scan->add_option("config", s_config, "run configuration file")->required();

    auto* chr = app.add_subcommand("characterize", "trap minimum, frequencies, splittings");
    std::string c_config;
    chr->add_option("config", c_config, "run configuration file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (threads > 0) omp_set_num_threads(threads);

    try {
        if (mode->parsed()) {
            if (!(m_radius > 0.0) || !(m_lambda > 0.0)) {
                std::cerr << "error: radius and wavelength must be positive\n";
                return 2;
            }
            return run_mode(m_lambda, m_radius, m_n1, m_n2, n1_opt->count() == 0);
        }
        if (pol->parsed()) {
            if (sp_opt->count() > 0)
                return run_spectrum(load_db(atom_data), sp_lo, sp_hi, sp_n, sp_int, output);
            return run_polarizability(load_db(atom_data), p_level, p_f, p_lambda);
        }
        if (magic->parsed())
            return run_magic(load_db(atom_data), g_lo, g_hi, g_f, e_f, e_mf, g_int);
        if (scan->parsed()) {
            auto rc = RunConfig::load(s_config);
            const auto db = load_db(!atom_data.empty() ? atom_data
                                                       : rc.atom_data.value_or(""));
            return run_scan(rc, db, output);
        }
        if (chr->parsed()) {
            auto rc = RunConfig::load(c_config);
            const auto db = load_db(!atom_data.empty() ? atom_data
                                                       : rc.atom_data.value_or(""));
            return run_characterize(rc, db, output);
        }
    } catch (const nanotrap::run_config::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nanotrap::atomic::ParseError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nanotrap::atomic::SchemaError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const nanotrap::atomic::SelectionRuleError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
