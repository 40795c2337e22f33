#pragma once

// CSV emitters. Comma separated, '.' decimal, "%.16e" numbers, header first.
//
//   spectrum:  index,energy,dominant_nx,dominant_ny,dominant_weight
//   sweep:     u,sigma,seed,alg,geo,harm,slrt,slrt_untextured,slrt_rmt_twin,q,
//              vrh_ratio,g_lrt,g_slrt,alg_estimate,geo_estimate,q_estimate,
//              g_lrt_wall,center_x,center_y,levels,elements,zeros,status
//   histogram: bin_left,bin_right,count          (bin edges in ln x)
//   markers:   marker,value                      (alg, geo, harm, slrt, slrt_untextured)
//   bonds:     n,m,omega,g

#include "slrt/billiard.hpp"
#include "slrt/matrixstats.hpp"
#include "slrt/network.hpp"
#include "slrt/pipeline.hpp"

#include <ostream>
#include <string>
#include <utility>
#include <vector>

namespace slrt {

extern const char* const kSpectrumHeader;
extern const char* const kSweepHeader;
extern const char* const kHistogramHeader;
extern const char* const kMarkersHeader;
extern const char* const kBondsHeader;

void write_spectrum(std::ostream& out, const std::vector<SystemBuilder::Level>& levels);
void write_sweep(std::ostream& out, const std::vector<SweepRow>& rows);
void write_histogram(std::ostream& out, const LogHistogram& histogram);
void write_markers(std::ostream& out, const std::vector<std::pair<std::string, double>>& markers);
void write_bonds(std::ostream& out, const BondNetwork& net);

/// Write through a temporary file and rename, so readers never see a partial
/// file. Throws std::runtime_error on I/O failure.
void write_file(const std::string& path, const std::string& content);

}  // namespace slrt
