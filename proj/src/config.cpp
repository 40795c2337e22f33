#include "slrt/config.hpp"

#include <algorithm>
#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace slrt {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ',')) {
        item = trim(item);
        if (!item.empty()) out.push_back(item);
    }
    return out;
}

double to_double(const std::string& s) {
    errno = 0;
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (s.empty() || end != s.c_str() + s.size() || errno == ERANGE || !std::isfinite(v)) {
        throw std::invalid_argument("expected a finite number, got '" + s + "'");
    }
    return v;
}

std::uint64_t to_uint(const std::string& s) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos) {
        throw std::invalid_argument("expected a non-negative integer, got '" + s + "'");
    }
    errno = 0;
    const auto v = std::strtoull(s.c_str(), nullptr, 10);
    if (errno == ERANGE) throw std::invalid_argument("integer out of range: '" + s + "'");
    return v;
}

bool to_bool(const std::string& s) {
    if (s == "true" || s == "1" || s == "yes") return true;
    if (s == "false" || s == "0" || s == "no") return false;
    throw std::invalid_argument("expected true/false, got '" + s + "'");
}

std::string join_numbers(const std::vector<double>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? "," : "") + format_number(v[i]);
    return out;
}

struct Key {
    std::function<void(RunConfig&, const std::string&)> set;
    std::function<std::string(const RunConfig&)> get;
    bool physics = true;
};

Key number(double RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v) { c.*field = to_double(v); },
            [field](const RunConfig& c) { return format_number(c.*field); }};
}

Key optional_number(std::optional<double> RunConfig::*field) {
    return {[field](RunConfig& c, const std::string& v) {
                if (v == "auto") {
                    (c.*field).reset();
                } else {
                    c.*field = to_double(v);
                }
            },
            [field](const RunConfig& c) {
                return (c.*field) ? format_number(*(c.*field)) : std::string("auto");
            }};
}

const std::map<std::string, Key>& keys() {
    static const std::map<std::string, Key> table = [] {
        std::map<std::string, Key> k;
        k["box.length_x"] = {[](RunConfig& c, const std::string& v) { c.box.length_x = to_double(v); },
                             [](const RunConfig& c) { return format_number(c.box.length_x); }};
        k["box.length_y"] = {[](RunConfig& c, const std::string& v) { c.box.length_y = to_double(v); },
                             [](const RunConfig& c) { return format_number(c.box.length_y); }};
        k["box.mass"] = {[](RunConfig& c, const std::string& v) { c.box.mass = to_double(v); },
                         [](const RunConfig& c) { return format_number(c.box.mass); }};
        k["bump.center_x"] = optional_number(&RunConfig::center_x);
        k["bump.center_y"] = optional_number(&RunConfig::center_y);
        k["basis.converged_energy"] = number(&RunConfig::converged_energy);
        k["basis.buffer_factor"] = number(&RunConfig::buffer_factor);
        k["window.fraction_lo"] = number(&RunConfig::fraction_lo);
        k["window.fraction_hi"] = number(&RunConfig::fraction_hi);
        k["window.e_lo"] = optional_number(&RunConfig::window_e_lo);
        k["window.e_hi"] = optional_number(&RunConfig::window_e_hi);
        k["window.require_percolation"] = {
            [](RunConfig& c, const std::string& v) { c.require_percolation = to_bool(v); },
            [](const RunConfig& c) { return std::string(c.require_percolation ? "true" : "false"); }};
        k["drive.shape"] = {
            [](RunConfig& c, const std::string& v) { c.drive_shape = parse_drive_shape(v); },
            [](const RunConfig& c) { return std::string(to_string(c.drive_shape)); }};
        k["drive.cutoff_spacings"] = number(&RunConfig::cutoff_spacings);
        k["drive.rms_velocity"] = number(&RunConfig::rms_velocity);
        k["drive.temperature"] = number(&RunConfig::temperature);
        k["sweep.u_values"] = {
            [](RunConfig& c, const std::string& v) {
                c.u_values.clear();
                for (const auto& s : split_list(v)) c.u_values.push_back(to_double(s));
            },
            [](const RunConfig& c) { return join_numbers(c.u_values); }};
        k["sweep.sigma_values"] = {
            [](RunConfig& c, const std::string& v) {
                c.sigma_values.clear();
                for (const auto& s : split_list(v)) c.sigma_values.push_back(to_double(s));
            },
            [](const RunConfig& c) { return join_numbers(c.sigma_values); }};
        k["sweep.seeds"] = {
            [](RunConfig& c, const std::string& v) {
                c.seeds.clear();
                for (const auto& s : split_list(v)) c.seeds.push_back(to_uint(s));
            },
            [](const RunConfig& c) {
                std::string out;
                for (std::size_t i = 0; i < c.seeds.size(); ++i) {
                    out += (i ? "," : "") + std::to_string(c.seeds[i]);
                }
                return out;
            }};
        k["histogram.bins"] = {
            [](RunConfig& c, const std::string& v) {
                c.histogram_bins = static_cast<int>(to_uint(v));
            },
            [](const RunConfig& c) { return std::to_string(c.histogram_bins); }};
        k["output.emit"] = {
            [](RunConfig& c, const std::string& v) {
                c.emit.clear();
                for (const auto& s : split_list(v)) c.emit.insert(s);
            },
            [](const RunConfig& c) {
                std::string out;
                for (const auto& s : c.emit) out += (out.empty() ? "" : ",") + s;
                return out;
            },
            false};
        k["output.dir"] = {[](RunConfig& c, const std::string& v) { c.output_dir = v; },
                           [](const RunConfig& c) { return c.output_dir; }, false};
        k["experiment.mass"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.mass = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.mass); }};
        k["experiment.length_x"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.length_x = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.length_x); }};
        k["experiment.length_y"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.length_y = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.length_y); }};
        k["experiment.temperature"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.temperature = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.temperature); }};
        k["experiment.velocity"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.velocity = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.velocity); }};
        k["experiment.rms_velocity"] = {
            [](RunConfig& c, const std::string& v) { c.experiment.rms_velocity = to_double(v); },
            [](const RunConfig& c) { return format_number(c.experiment.rms_velocity); }};
        k["experiment.cutoff_spacings"] = {
            [](RunConfig& c, const std::string& v) {
                c.experiment.cutoff_spacings = to_double(v);
            },
            [](const RunConfig& c) { return format_number(c.experiment.cutoff_spacings); }};
        return k;
    }();
    return table;
}

std::string canonical(const RunConfig& c, bool physics_only) {
    std::string out = "preset = " + c.preset + "\n";
    for (const auto& [name, key] : keys()) {
        if (physics_only && !key.physics) continue;
        out += name + " = " + key.get(c) + "\n";
    }
    return out;
}

}  // namespace

std::string format_number(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16e", v);
    return buf;
}

void RunConfig::validate() const {
    auto fail = [](const std::string& field, const std::string& what) {
        throw ConfigError(field + ": " + what, 0, field);
    };
    try {
        box.validate();
    } catch (const std::invalid_argument& e) {
        fail("box", e.what());
    }
    auto check_center = [&](const std::optional<double>& c, double length, const char* name) {
        if (c && !(*c > 0.0 && *c < length)) fail(name, "must lie strictly inside the box");
    };
    check_center(center_x, box.length_x, "bump.center_x");
    check_center(center_y, box.length_y, "bump.center_y");
    if (!(converged_energy > 0.0)) fail("basis.converged_energy", "must be positive");
    if (!(buffer_factor > 1.0)) fail("basis.buffer_factor", "must exceed 1");
    if (!(fraction_lo >= 0.0 && fraction_lo < fraction_hi && fraction_hi <= 1.0)) {
        fail("window.fraction_lo", "need 0 <= fraction_lo < fraction_hi <= 1");
    }
    if (window_e_lo.has_value() != window_e_hi.has_value()) {
        fail("window.e_lo", "window.e_lo and window.e_hi must be given together");
    }
    if (window_e_lo && !(*window_e_lo < *window_e_hi && *window_e_hi <= converged_energy)) {
        fail("window.e_hi", "need e_lo < e_hi <= basis.converged_energy");
    }
    if (!(cutoff_spacings > 0.0)) fail("drive.cutoff_spacings", "must be positive");
    if (!(rms_velocity >= 0.0)) fail("drive.rms_velocity", "must be >= 0");
    if (!(temperature > 0.0)) fail("drive.temperature", "must be positive");
    for (const double u : u_values) {
        if (!(u >= 0.0)) fail("sweep.u_values", "deformation strengths must be >= 0");
    }
    for (const double s : sigma_values) {
        if (!(s >= 0.0)) fail("sweep.sigma_values", "widths must be >= 0");
    }
    if (seeds.empty()) fail("sweep.seeds", "at least one seed is required");
    if (histogram_bins < 1) fail("histogram.bins", "must be >= 1");
    static const std::set<std::string> known{"histogram", "averages", "sweep",
                                             "network_dump", "rmt_twin", "vrh"};
    for (const auto& e : emit) {
        if (!known.count(e)) fail("output.emit", "unknown output '" + e + "'");
    }
}

std::string RunConfig::canonical_text() const { return canonical(*this, false); }

std::string RunConfig::hash() const {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (const unsigned char ch : canonical(*this, true)) {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

DriveSpec RunConfig::drive() const {
    DriveSpec d;
    d.shape = drive_shape;
    d.cutoff = cutoff_spacings / dos(box);
    d.rms_velocity = rms_velocity;
    return d;
}

RunConfig preset_config(const std::string& name) {
    RunConfig c;
    c.preset = name;
    if (name == "as1") {
        c.box = {40.0, 40.0, 1.0};
        c.converged_energy = 8.0;
    } else if (name == "as20") {
        c.box = {200.0, 10.0, 1.0};
        c.converged_energy = 6.5;
    } else {
        throw ConfigError("unknown preset '" + name + "' (expected as1 or as20)", 0, "preset");
    }
    return c;
}

RunConfig parse_config(const std::string& text, const RunConfig& base) {
    RunConfig c = base;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    bool seen_key = false;
    while (std::getline(in, raw)) {
        ++line_no;
        const auto hash_pos = raw.find('#');
        const std::string line = trim(raw.substr(0, hash_pos));
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigError("line " + std::to_string(line_no) + ": expected 'key = value'",
                              line_no, "");
        }
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key == "preset") {
            if (seen_key) {
                throw ConfigError("line " + std::to_string(line_no) +
                                      ": 'preset' must precede every other key",
                                  line_no, key);
            }
            try {
                c = preset_config(value);
            } catch (const ConfigError& e) {
                throw ConfigError("line " + std::to_string(line_no) + ": " + e.what(), line_no,
                                  key);
            }
            seen_key = true;
            continue;
        }
        seen_key = true;
        const auto it = keys().find(key);
        if (it == keys().end()) {
            throw ConfigError("line " + std::to_string(line_no) + ": unknown key '" + key + "'",
                              line_no, key);
        }
        try {
            it->second.set(c, value);
        } catch (const std::invalid_argument& e) {
            throw ConfigError("line " + std::to_string(line_no) + ": " + key + ": " + e.what(),
                              line_no, key);
        }
    }
    try {
        c.validate();
    } catch (const ConfigError& e) {
        throw ConfigError(e.what(), 0, e.field());
    }
    return c;
}

RunConfig load_config(const std::string& path, const RunConfig& base) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file '" + path + "'", 0, "");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), base);
}

}  // namespace slrt
