#include "slrt/network.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <utility>

namespace slrt {
namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kExponentialReach = 40.0;
constexpr double kOmegaFloor = 1e-9;  // in units of Delta
constexpr double kBackwardErrorLimit = 1e-10;

using Edge = std::pair<std::size_t, double>;  // neighbour, conductance
using Adjacency = std::vector<std::vector<Edge>>;

struct DisjointSets {
    std::vector<std::size_t> parent;
    explicit DisjointSets(std::size_t n) : parent(n) {
        std::iota(parent.begin(), parent.end(), std::size_t{0});
    }
    std::size_t find(std::size_t v) {
        while (parent[v] != v) v = parent[v] = parent[parent[v]];
        return v;
    }
    void unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
    }
};

/// Electrodes are groups 0 (source) and 1 (sink); interior nodes follow in
/// index order.
std::vector<std::size_t> group_nodes(const BondNetwork& net) {
    const std::size_t n = net.size();
    std::vector<std::size_t> group(n);
    if (net.buffer > 0) {
        if (n < 2 * net.buffer + 1) {
            throw std::invalid_argument("network: fewer nodes than the two contact buffers");
        }
        for (std::size_t i = 0; i < n; ++i) {
            if (i < net.buffer) {
                group[i] = 0;
            } else if (i >= n - net.buffer) {
                group[i] = 1;
            } else {
                group[i] = 2 + (i - net.buffer);
            }
        }
        return group;
    }
    if (net.source_node >= n || net.sink_node >= n || net.source_node == net.sink_node) {
        throw std::invalid_argument("network: source and sink must be distinct nodes");
    }
    std::size_t next = 2;
    for (std::size_t i = 0; i < n; ++i) {
        if (i == net.source_node) {
            group[i] = 0;
        } else if (i == net.sink_node) {
            group[i] = 1;
        } else {
            group[i] = next++;
        }
    }
    return group;
}

double edge_weight(const std::vector<Edge>& row, std::size_t j) {
    const auto it = std::lower_bound(row.begin(), row.end(), j,
                                     [](const Edge& e, std::size_t v) { return e.first < v; });
    return (it != row.end() && it->first == j) ? it->second : 0.0;
}

/// row := (row without `drop`) + extra, both sorted by neighbour.
void merge_row(std::vector<Edge>& row, std::size_t drop, const std::vector<Edge>& extra,
               std::vector<Edge>& scratch) {
    scratch.clear();
    auto a = row.begin();
    auto b = extra.begin();
    while (a != row.end() || b != extra.end()) {
        if (a != row.end() && a->first == drop) {
            ++a;
            continue;
        }
        if (b == extra.end() || (a != row.end() && a->first < b->first)) {
            scratch.push_back(*a++);
        } else if (a == row.end() || b->first < a->first) {
            scratch.push_back(*b++);
        } else {
            scratch.emplace_back(a->first, a->second + b->second);
            ++a;
            ++b;
        }
    }
    row.swap(scratch);
}

std::size_t contact_buffer(const PerturbedSystem& system, const DriveSpec& drive) {
    return static_cast<std::size_t>(std::ceil(drive.cutoff * system.dos - 1e-9));
}

BondNetwork assemble(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                     double e_hi, bool reference) {
    drive.validate();
    const auto& e = system.energies;
    const auto first = std::lower_bound(e.begin(), e.end(), e_lo);
    const auto last = std::upper_bound(e.begin(), e.end(), e_hi);
    const auto offset = static_cast<std::size_t>(first - e.begin());

    BondNetwork net;
    net.node_energies.assign(first, last);
    const std::size_t n = net.size();
    if (n < 2) throw std::invalid_argument("assemble_bonds: empty network");
    net.buffer = contact_buffer(system, drive);
    net.source_node = 0;
    net.sink_node = n - 1;
    if (n < 2 * net.buffer + 1) {
        throw std::invalid_argument("assemble_bonds: window narrower than the contact buffers");
    }

    const double reach = drive.reach();
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = i + 1; j < n; ++j) {
            const double omega = net.node_energies[i] - net.node_energies[j];
            if (-omega > reach) break;
            const double x =
                reference ? 1.0
                          : system.v_squared(static_cast<Eigen::Index>(offset + i),
                                             static_cast<Eigen::Index>(offset + j));
            const double g = bond_conductance(x, omega, system.dos, drive);
            if (g > 0.0) net.bonds.push_back({i, j, omega, g});
        }
    }
    return net;
}

}  // namespace

void DriveSpec::validate() const {
    if (!(cutoff > 0.0) || !std::isfinite(cutoff)) {
        throw std::invalid_argument("drive: cutoff must be positive");
    }
    if (!(rms_velocity >= 0.0)) throw std::invalid_argument("drive: rms velocity must be >= 0");
}

double DriveSpec::line_shape(double omega) const noexcept {
    const double w = std::abs(omega);
    switch (shape) {
        case DriveShape::rectangular:
            return w < cutoff ? 1.0 : 0.0;
        case DriveShape::exponential:
            return w <= reach() ? std::exp(-w / cutoff) : 0.0;
    }
    return 0.0;
}

double DriveSpec::reach() const noexcept {
    return shape == DriveShape::rectangular ? cutoff : kExponentialReach * cutoff;
}

const char* to_string(DriveShape shape) noexcept {
    return shape == DriveShape::rectangular ? "rectangular" : "exponential";
}

DriveShape parse_drive_shape(const std::string& text) {
    if (text == "rectangular") return DriveShape::rectangular;
    if (text == "exponential") return DriveShape::exponential;
    throw std::invalid_argument("unknown drive shape '" + text + "'");
}

double bond_conductance(double x, double omega, double dos, const DriveSpec& drive) noexcept {
    if (!(x > 0.0)) return 0.0;
    const double f = drive.line_shape(omega);
    if (f == 0.0) return 0.0;
    const double w = std::max(std::abs(omega), kOmegaFloor / dos);
    return 2.0 / (dos * dos * dos) * x / (w * w) * f;
}

BondNetwork assemble_bonds(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                           double e_hi) {
    return assemble(system, drive, e_lo, e_hi, false);
}

BondNetwork reference_network(const PerturbedSystem& system, const DriveSpec& drive,
                              double e_lo, double e_hi) {
    return assemble(system, drive, e_lo, e_hi, true);
}

ResistanceResult two_point_resistance(const BondNetwork& net) {
    const std::vector<std::size_t> group = group_nodes(net);
    const std::size_t groups = group.empty() ? 0 : *std::max_element(group.begin(), group.end()) + 1;

    Adjacency adj(groups);
    DisjointSets sets(groups);
    for (const auto& b : net.bonds) {
        if (b.n >= net.size() || b.m >= net.size()) {
            throw std::invalid_argument("network: bond refers to a missing node");
        }
        if (!(b.g >= 0.0) || !std::isfinite(b.g)) {
            throw std::invalid_argument("network: conductances must be finite and >= 0");
        }
        const std::size_t i = group[b.n];
        const std::size_t j = group[b.m];
        if (i == j || b.g == 0.0) continue;
        adj[i].emplace_back(j, b.g);
        adj[j].emplace_back(i, b.g);
        sets.unite(i, j);
    }
    for (auto& row : adj) {
        std::sort(row.begin(), row.end());
        std::vector<Edge> merged;
        for (const auto& e : row) {
            if (!merged.empty() && merged.back().first == e.first) {
                merged.back().second += e.second;
            } else {
                merged.push_back(e);
            }
        }
        row.swap(merged);
    }
    const Adjacency original = adj;

    ResistanceResult result;
    std::vector<std::size_t> node_count(groups, 0);
    for (const std::size_t g : group) node_count[sets.find(g)] += 1;
    for (std::size_t g = 0; g < groups; ++g) {
        if (sets.find(g) == g) ++result.components;
    }
    result.source_component = node_count[sets.find(0)];
    result.sink_component = node_count[sets.find(1)];
    result.connected = sets.find(0) == sets.find(1);
    if (!result.connected) {
        result.resistance = std::numeric_limits<double>::infinity();
        return result;
    }

    // Star-mesh elimination in index order; record each star for the
    // back-substitution of potentials.
    struct Star {
        std::size_t node;
        std::vector<Edge> edges;
        double total;
    };
    std::vector<Star> stars;
    stars.reserve(groups);
    std::vector<Edge> extra;
    std::vector<Edge> scratch;
    for (std::size_t k = 2; k < groups; ++k) {
        std::vector<Edge> star = std::move(adj[k]);
        adj[k].clear();
        if (star.empty()) continue;
        double total = 0.0;
        for (const auto& e : star) total += e.second;
        for (const auto& [i, gik] : star) {
            extra.clear();
            for (const auto& [j, gjk] : star) {
                if (j != i) extra.emplace_back(j, gik * gjk / total);
            }
            merge_row(adj[i], k, extra, scratch);
        }
        stars.push_back({k, std::move(star), total});
    }

    const double conductance = edge_weight(adj[0], 1);
    if (!(conductance > 0.0)) {
        throw NumericalError("network: elimination lost the source-sink conductance", 1.0);
    }
    result.resistance = 1.0 / conductance;

    std::vector<double> phi(groups, 0.0);
    phi[0] = 1.0;
    for (auto it = stars.rbegin(); it != stars.rend(); ++it) {
        double acc = 0.0;
        for (const auto& [j, g] : it->edges) acc += g * phi[j];
        phi[it->node] = acc / it->total;
    }

    double residual = 0.0;
    double norm = 0.0;
    for (std::size_t i = 0; i < groups; ++i) {
        double flow = 0.0;
        double row_norm = 0.0;
        for (const auto& [j, g] : original[i]) {
            flow += g * (phi[i] - phi[j]);
            row_norm += 2.0 * g;
        }
        if (i == 0) flow -= conductance;
        if (i == 1) flow += conductance;
        residual = std::max(residual, std::abs(flow));
        norm = std::max(norm, row_norm);
    }
    result.backward_error = residual / (norm + conductance);
    if (result.backward_error > kBackwardErrorLimit) {
        std::ostringstream msg;
        msg << "network: potentials miss the backward-error bound (" << result.backward_error
            << ")";
        throw NumericalError(msg.str(), result.backward_error);
    }
    return result;
}

SlrtResult slrt_average(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                        double e_hi) {
    SlrtResult out;
    const auto actual = two_point_resistance(assemble_bonds(system, drive, e_lo, e_hi));
    const auto ref = two_point_resistance(reference_network(system, drive, e_lo, e_hi));
    out.r_actual = actual.resistance;
    out.r_ref = ref.resistance;
    out.source_component = actual.source_component;
    out.sink_component = actual.sink_component;
    if (!ref.connected) {
        std::ostringstream msg;
        msg << "percolation failure: level spectrum has a gap wider than the drive reach"
            << " (source component " << ref.source_component << ", sink component "
            << ref.sink_component << ")";
        out.diagnostic = msg.str();
        return out;
    }
    if (!actual.connected) {
        std::ostringstream msg;
        msg << "percolation failure: source component " << actual.source_component
            << " nodes, sink component " << actual.sink_component << " nodes, "
            << actual.components << " components";
        out.diagnostic = msg.str();
        return out;
    }
    out.percolates = true;
    out.value = ref.resistance / actual.resistance;
    return out;
}

double g_slrt(const PerturbedSystem& system, const DriveSpec& drive, double e_lo, double e_hi) {
    return kPi * system.dos * slrt_average(system, drive, e_lo, e_hi).value;
}

double g_lrt_kubo(const PerturbedSystem& system, const DriveSpec& drive, double e_lo,
                  double e_hi) {
    const auto band = select_band(system, e_lo, e_hi, drive.cutoff);
    return kPi * system.dos * algebraic_average(band);
}

}  // namespace slrt
