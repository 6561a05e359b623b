#include "nanotrap/run_config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

namespace nanotrap::run_config {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

void check_keys(const json& obj, const std::set<std::string>& allowed, const char* where) {
    for (const auto& [key, value] : obj.items()) {
        (void)value;
        if (!allowed.count(key))
            throw ConfigError(std::string("unknown key '") + key + "' in " + where);
    }
}

double require_number(const json& obj, const char* key, const char* where) {
    if (!obj.contains(key))
        throw ConfigError(std::string("missing '") + key + "' in " + where);
    if (!obj[key].is_number())
        throw ConfigError(std::string("'") + key + "' must be a number in " + where);
    return obj[key].get<double>();
}

}  // namespace

RunConfig RunConfig::parse(const std::string& text) {
    json root;
    try {
        root = json::parse(text);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config parse failure: ") + e.what());
    }
    if (!root.is_object()) throw ConfigError("config must be a JSON object");
    try {
    check_keys(root, {"fiber", "beams", "surface", "delta_fb_hz", "manifolds",
                      "atom_data", "scan", "output"},
               "config");

    RunConfig rc;

    const json& jf = root.at("fiber");
    check_keys(jf, {"radius_m", "n1", "n2"}, "fiber");
    rc.trap.fiber.radius = require_number(jf, "radius_m", "fiber");
    rc.trap.fiber.n2 = require_number(jf, "n2", "fiber");
    if (jf.at("n1").is_string()) {
        if (jf["n1"].get<std::string>() != "silica")
            throw ConfigError("fiber.n1 must be a number or \"silica\"");
        rc.trap.n1_from_sellmeier = true;
        rc.trap.fiber.n1 = 1.45;  // placeholder; per-beam Sellmeier applies
    } else {
        rc.trap.n1_from_sellmeier = false;
        rc.trap.fiber.n1 = jf["n1"].get<double>();
    }

    if (!root.at("beams").is_array() || root["beams"].empty())
        throw ConfigError("config needs a non-empty beams array");
    for (const auto& jb : root["beams"]) {
        check_keys(jb, {"wavelength_m", "power_w", "direction", "polarization_rad",
                        "coherence_group", "detuning_offset_hz"},
                   "beam");
        waveguide::BeamSpec b;
        b.wavelength = require_number(jb, "wavelength_m", "beam");
        b.power = require_number(jb, "power_w", "beam");
        const std::string dir = jb.at("direction").get<std::string>();
        if (dir == "forward") b.direction = waveguide::Direction::forward;
        else if (dir == "backward") b.direction = waveguide::Direction::backward;
        else throw ConfigError("beam.direction must be forward or backward");
        b.polarization_angle = require_number(jb, "polarization_rad", "beam");
        b.coherence_group = jb.at("coherence_group").get<int>();
        b.detuning_offset = jb.value("detuning_offset_hz", 0.0);
        rc.trap.beams.push_back(b);
    }

    const json& js = root.at("surface");
    check_keys(js, {"c3_over_h_khz_um3", "excited_scale"}, "surface");
    rc.trap.surface.c3_over_h_khz_um3 = require_number(js, "c3_over_h_khz_um3", "surface");
    rc.trap.surface.excited_scale = js.value("excited_scale", 2.0);

    rc.trap.delta_fb_hz = root.value("delta_fb_hz", 0.0);

    if (!root.contains("manifolds") || !root["manifolds"].is_array() ||
        root["manifolds"].empty())
        throw ConfigError("config needs a non-empty manifolds array");
    for (const auto& jm : root["manifolds"]) {
        check_keys(jm, {"level", "F"}, "manifold");
        rc.trap.manifolds.emplace_back(jm.at("level").get<std::string>(),
                                       jm.at("F").get<double>());
    }

    if (root.contains("atom_data")) rc.atom_data = root["atom_data"].get<std::string>();
    if (root.contains("output")) rc.output = root["output"].get<std::string>();

    if (root.contains("scan")) {
        const json& js2 = root["scan"];
        check_keys(js2, {"axis", "r_m", "phi_rad", "z_m", "lo", "hi", "n_points"}, "scan");
        ScanDirective sd;
        const std::string axis = js2.at("axis").get<std::string>();
        if (axis == "radial") sd.axis = trap_analysis::ScanAxis::radial;
        else if (axis == "azimuthal") sd.axis = trap_analysis::ScanAxis::azimuthal;
        else if (axis == "axial") sd.axis = trap_analysis::ScanAxis::axial;
        else throw ConfigError("scan.axis must be radial, azimuthal or axial");
        sd.r_m = js2.value("r_m", 0.0);
        sd.phi_rad = js2.value("phi_rad", 0.0);
        sd.z_m = js2.value("z_m", 0.0);
        sd.lo = require_number(js2, "lo", "scan");
        sd.hi = require_number(js2, "hi", "scan");
        sd.n_points = js2.at("n_points").get<int>();
        if (sd.n_points < 1) throw ConfigError("scan.n_points must be >= 1");
        rc.scan = sd;
    }

    rc.trap.validate();
    return rc;
    } catch (const json::exception& e) {
        throw ConfigError(std::string("config structure: ") + e.what());
    } catch (const std::invalid_argument& e) {
        throw ConfigError(e.what());
    }
}

RunConfig RunConfig::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
}

std::string RunConfig::serialize() const {
    ordered_json root;
    ordered_json jf;
    jf["radius_m"] = trap.fiber.radius;
    if (trap.n1_from_sellmeier) jf["n1"] = "silica";
    else jf["n1"] = trap.fiber.n1;
    jf["n2"] = trap.fiber.n2;
    root["fiber"] = jf;

    root["beams"] = ordered_json::array();
    for (const auto& b : trap.beams) {
        ordered_json jb;
        jb["wavelength_m"] = b.wavelength;
        jb["power_w"] = b.power;
        jb["direction"] =
            (b.direction == waveguide::Direction::forward) ? "forward" : "backward";
        jb["polarization_rad"] = b.polarization_angle;
        jb["coherence_group"] = b.coherence_group;
        if (b.detuning_offset != 0.0) jb["detuning_offset_hz"] = b.detuning_offset;
        root["beams"].push_back(jb);
    }

    root["surface"] = {{"c3_over_h_khz_um3", trap.surface.c3_over_h_khz_um3},
                       {"excited_scale", trap.surface.excited_scale}};
    if (trap.delta_fb_hz != 0.0) root["delta_fb_hz"] = trap.delta_fb_hz;

    root["manifolds"] = ordered_json::array();
    for (const auto& [level, F] : trap.manifolds)
        root["manifolds"].push_back({{"level", level}, {"F", F}});

    if (atom_data) root["atom_data"] = *atom_data;
    if (scan) {
        ordered_json js;
        js["axis"] = (scan->axis == trap_analysis::ScanAxis::radial)      ? "radial"
                     : (scan->axis == trap_analysis::ScanAxis::azimuthal) ? "azimuthal"
                                                                          : "axial";
        js["r_m"] = scan->r_m;
        js["phi_rad"] = scan->phi_rad;
        js["z_m"] = scan->z_m;
        js["lo"] = scan->lo;
        js["hi"] = scan->hi;
        js["n_points"] = scan->n_points;
        root["scan"] = js;
    }
    if (output) root["output"] = *output;
    return root.dump(1) + "\n";
}

}  // namespace nanotrap::run_config
