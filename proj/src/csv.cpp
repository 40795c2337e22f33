#include "slrt/csv.hpp"

#include "slrt/config.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace slrt {

const char* const kSpectrumHeader = "index,energy,dominant_nx,dominant_ny,dominant_weight";
const char* const kSweepHeader =
    "u,sigma,seed,alg,geo,harm,slrt,slrt_untextured,slrt_rmt_twin,q,vrh_ratio,g_lrt,g_slrt,"
    "alg_estimate,geo_estimate,q_estimate,g_lrt_wall,center_x,center_y,levels,elements,zeros,"
    "status";
const char* const kHistogramHeader = "bin_left,bin_right,count";
const char* const kMarkersHeader = "marker,value";
const char* const kBondsHeader = "n,m,omega,g";

namespace {

// Status strings may carry commas from exception text.
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (const char c : s) {
        if (c == '"') out += '"';
        out += c == '\n' ? ' ' : c;
    }
    return out + "\"";
}

}  // namespace

void write_spectrum(std::ostream& out, const std::vector<SystemBuilder::Level>& levels) {
    out << kSpectrumHeader << '\n';
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const auto& l = levels[i];
        out << i << ',' << format_number(l.energy) << ',' << l.dominant.nx << ','
            << l.dominant.ny << ',' << format_number(l.weight) << '\n';
    }
}

void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows) {
    out << kSweepHeader << '\n';
    for (const auto& r : rows) {
        const auto& a = r.averages;
        out << format_number(r.u) << ',' << format_number(r.sigma) << ',' << r.seed << ','
            << format_number(a.algebraic) << ',' << format_number(a.geometric) << ','
            << format_number(a.harmonic) << ',' << format_number(a.network) << ','
            << format_number(r.slrt_untextured) << ',' << format_number(r.slrt_rmt_twin) << ','
            << format_number(a.sparsity_q) << ',' << format_number(r.vrh_ratio) << ','
            << format_number(r.g_lrt) << ',' << format_number(r.g_slrt) << ','
            << format_number(r.estimates.alg_estimate) << ','
            << format_number(r.estimates.geo_estimate) << ','
            << format_number(r.estimates.q_estimate) << ',' << format_number(r.estimates.g_lrt)
            << ',' << format_number(r.center_x) << ',' << format_number(r.center_y) << ','
            << r.levels << ',' << a.element_count << ',' << a.zero_count << ','
            << csv_field(r.status) << '\n';
    }
}

void write_histogram(std::ostream& out, const LogHistogram& histogram) {
    out << kHistogramHeader << '\n';
    for (std::size_t i = 0; i < histogram.counts.size(); ++i) {
        out << format_number(histogram.bin_left(i)) << ',' << format_number(histogram.bin_right(i))
            << ',' << histogram.counts[i] << '\n';
    }
}

void write_markers(std::ostream& out, const std::vector<std::pair<std::string, double>>& markers) {
    out << kMarkersHeader << '\n';
    for (const auto& [name, value] : markers) out << name << ',' << format_number(value) << '\n';
}

void write_bonds(std::ostream& out, const BondNetwork& net) {
    out << kBondsHeader << '\n';
    for (const auto& b : net.bonds) {
        out << b.n << ',' << b.m << ',' << format_number(b.omega) << ',' << format_number(b.g)
            << '\n';
    }
}

void write_file(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw std::runtime_error("cannot write '" + tmp + "'");
        f << content;
        if (!f.flush()) throw std::runtime_error("write failed for '" + tmp + "'");
    }
    if (std::rename(tmp.c_str(), path.c_str()) != 0) {
        throw std::runtime_error("cannot rename '" + tmp + "' to '" + path + "'");
    }
}

}  // namespace slrt
