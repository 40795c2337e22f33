// Batch front end: spectrum, sweep, histogram, report.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical failure outside
// a sweep (sweeps record failures per row and still succeed).

#include "slrt/billiard.hpp"
#include "slrt/config.hpp"
#include "slrt/csv.hpp"
#include "slrt/matrixstats.hpp"
#include "slrt/pipeline.hpp"
#include "slrt/vrh.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <Eigen/Core>
#include <boost/version.hpp>

#include <cstdio>
#include <filesystem>
#include <iostream>
#include <sstream>

#ifndef SLRT_VERSION
#define SLRT_VERSION "0.0.0"
#endif

namespace fs = std::filesystem;
using slrt::RunConfig;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitNumerical = 3;

struct Options {
    std::string config_path;
    std::string out_dir;
    std::string preset = "as1";
    long long seed = -1;
    int jobs = 1;
    double u = 0.0;
};

RunConfig resolve(const Options& opt) {
    RunConfig base = slrt::preset_config(opt.preset);
    RunConfig cfg = opt.config_path.empty() ? base : slrt::load_config(opt.config_path, base);
    if (!opt.out_dir.empty()) cfg.output_dir = opt.out_dir;
    if (opt.seed >= 0) cfg.seeds = {static_cast<std::uint64_t>(opt.seed)};
    cfg.validate();
    fs::create_directories(cfg.output_dir);
    return cfg;
}

std::string tag(const char* name, double v) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%s%.3g", name, v);
    return buf;
}

std::string out_path(const RunConfig& cfg, const std::string& file) {
    return (fs::path(cfg.output_dir) / file).string();
}

int cmd_spectrum(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto window = slrt::statistics_window(cfg);
    const auto bump = slrt::place_bump(cfg, cfg.sigma_values.front(), cfg.seeds.front(), opt.u);
    const slrt::SystemBuilder builder(cfg.box, bump, slrt::basis_for(cfg, window));
    std::ostringstream csv;
    slrt::write_spectrum(csv, builder.full_spectrum(opt.u));
    const auto path = out_path(cfg, "spectrum.csv");
    slrt::write_file(path, csv.str());
    std::cout << path << " (" << builder.modes().size() << " levels)\n";
    return 0;
}

int cmd_sweep(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto rows = slrt::run_sweep(cfg, opt.jobs, [](const slrt::SweepRow& r) {
        std::cerr << "u=" << r.u << " sigma=" << r.sigma << " seed=" << r.seed
                  << " q=" << r.averages.sparsity_q << " slrt/alg="
                  << r.averages.network / r.averages.algebraic << " [" << r.status << "]\n";
    });
    std::ostringstream csv;
    slrt::write_sweep(csv, rows);
    const auto path = out_path(cfg, "sweep.csv");
    slrt::write_file(path, csv.str());
    std::cout << path << " (" << rows.size() << " rows)\n";
    return 0;
}

int cmd_histogram(const Options& opt) {
    const auto cfg = resolve(opt);
    const auto window = slrt::statistics_window(cfg);
    const auto basis = slrt::basis_for(cfg, window);
    const auto seed = cfg.seeds.front();
    for (const double sigma : cfg.sigma_values) {
        const slrt::SystemBuilder builder(cfg.box, slrt::place_bump(cfg, sigma, seed), basis);
        for (const double u : cfg.u_values) {
            slrt::PointDetail detail;
            const auto row = slrt::measure_point(builder, cfg, window, u, sigma, seed, &detail);
            if (row.status.rfind("error", 0) == 0 || row.status.rfind("numerical", 0) == 0) {
                throw slrt::NumericalError(row.status, 0.0);
            }
            const std::string stem = tag("u", u) + "_" + tag("sigma", sigma);
            const auto hist = slrt::log_histogram(detail.band, cfg.histogram_bins);
            std::ostringstream h;
            slrt::write_histogram(h, hist);
            slrt::write_file(out_path(cfg, "histogram_" + stem + ".csv"), h.str());

            std::ostringstream m;
            slrt::write_markers(m, {{"alg", row.averages.algebraic},
                                    {"geo", row.averages.geometric},
                                    {"harm", row.averages.harmonic},
                                    {"slrt", row.averages.network},
                                    {"slrt_untextured", row.slrt_untextured}});
            slrt::write_file(out_path(cfg, "markers_" + stem + ".csv"), m.str());

            if (cfg.emit.count("network_dump")) {
                std::ostringstream b;
                slrt::write_bonds(b, detail.network);
                slrt::write_file(out_path(cfg, "bonds_" + stem + ".csv"), b.str());
            }
            std::cout << "histogram " << stem << ": " << hist.total() << " elements ["
                      << row.status << "]\n";
        }
    }
    return 0;
}

int cmd_report(const Options& opt) {
    const auto cfg = resolve(opt);
    nlohmann::ordered_json report;
    report["config_hash"] = cfg.hash();
    report["preset"] = cfg.preset;
    report["config"] = cfg.canonical_text();
    report["seeds"] = cfg.seeds;
    report["versions"] = {
        {"slrt", SLRT_VERSION},
        {"eigen", std::to_string(EIGEN_WORLD_VERSION) + "." + std::to_string(EIGEN_MAJOR_VERSION) +
                      "." + std::to_string(EIGEN_MINOR_VERSION)},
        {"boost", BOOST_LIB_VERSION},
        {"compiler", __VERSION__}};

    const auto window = slrt::statistics_window(cfg);
    report["window"] = {{"e_lo", window.e_lo},
                        {"e_hi", window.e_hi},
                        {"level_lo", window.level_lo},
                        {"level_hi", window.level_hi},
                        {"shrunk_to_conducting_stretch", window.shrunk}};

    const auto ex = slrt::experiment_estimate(cfg.experiment);
    report["experiment"] = {{"velocity_m_per_s", ex.velocity},
                            {"thermal_energy_J", ex.thermal_energy},
                            {"mean_spacing_J", ex.mean_spacing},
                            {"mean_spacing_Hz", ex.mean_spacing_hz},
                            {"g_lrt_J2s_per_m2", ex.g_lrt},
                            {"diffusion_J2_per_s", ex.diffusion},
                            {"heating_rate_J_per_s", ex.heating_rate},
                            {"heating_rate_K_per_s", ex.heating_rate_kelvin},
                            {"internal",
                             {{"units", "hbar = m = 1, length 1 um"},
                              {"velocity", ex.velocity_internal},
                              {"g_lrt", ex.g_lrt_internal},
                              {"dos", ex.dos_internal}}}};

    std::vector<std::string> files;
    if (fs::exists(cfg.output_dir)) {
        for (const auto& entry : fs::directory_iterator(cfg.output_dir)) {
            const auto name = entry.path().filename().string();
            if (entry.is_regular_file() && entry.path().extension() == ".csv") files.push_back(name);
        }
    }
    std::sort(files.begin(), files.end());
    report["files"] = files;

    const auto path = out_path(cfg, "report.json");
    slrt::write_file(path, report.dump(2) + "\n");
    std::cout << path << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Semi-linear response of driven billiards"};
    app.require_subcommand(1);
    Options opt;
    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", opt.config_path, "key = value config file");
        sub->add_option("--out", opt.out_dir, "output directory");
        sub->add_option("--seed", opt.seed, "replace the seed list by one seed")
            ->check(CLI::NonNegativeNumber);
        sub->add_option("--preset", opt.preset, "base preset")
            ->check(CLI::IsMember({"as1", "as20"}));
        sub->add_option("--jobs", opt.jobs, "worker threads")->check(CLI::PositiveNumber);
    };
    auto* spectrum = app.add_subcommand("spectrum", "level list of the retained basis");
    add_common(spectrum);
    spectrum->add_option("--u", opt.u, "deformation strength")->check(CLI::NonNegativeNumber);
    auto* sweep = app.add_subcommand("sweep", "averages for every (u, sigma, seed)");
    add_common(sweep);
    auto* histogram = app.add_subcommand("histogram", "log-histograms and markers per (u, sigma)");
    add_common(histogram);
    auto* report = app.add_subcommand("report", "JSON summary with provenance");
    add_common(report);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    try {
        if (*spectrum) return cmd_spectrum(opt);
        if (*sweep) return cmd_sweep(opt);
        if (*histogram) return cmd_histogram(opt);
        if (*report) return cmd_report(opt);
    } catch (const slrt::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kExitConfig;
    } catch (const slrt::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
