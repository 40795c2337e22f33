#include "slrt/vrh.hpp"

#include <boost/math/tools/minima.hpp>

#include <cmath>
#include <limits>

namespace slrt {
namespace {

constexpr double kPi = 3.14159265358979323846;

void check_domain(double q, double alpha) {
    if (!(q > 0.0) || !(q <= 1.0)) throw std::domain_error("vrh: q must lie in (0, 1]");
    if (!(alpha >= 0.0)) throw std::domain_error("vrh: alpha must be >= 0");
}

}  // namespace

double wall_formula(double mass, double velocity, double length_x) noexcept {
    return 4.0 / (3.0 * kPi) * mass * mass * velocity * velocity * velocity / length_x;
}

AnalyticEstimates analytic_estimates(const BoxSpec& box, const BumpSpec& bump,
                                     double reference_energy) {
    box.validate();
    if (!(reference_energy > 0.0)) {
        throw std::invalid_argument("analytic_estimates: reference energy must be positive");
    }
    if (!(bump.strength >= 0.0)) throw std::invalid_argument("analytic_estimates: u must be >= 0");

    const double m = box.mass;
    const double lx = box.length_x;
    const double ly = box.length_y;
    AnalyticEstimates out;
    out.v_e = std::sqrt(2.0 * reference_energy / m);
    const double v = out.v_e;
    out.p0 = 1.0 / (2.0 * kPi * m * v * ly);
    out.p0_valid = out.p0 > 0.0 && out.p0 < 1.0;
    out.alg_estimate = m * v * v * v / (2.0 * kPi * ly * lx * lx);
    const double typical = m * m * v * v / (2.0 * kPi * lx);
    const double smooth = std::exp(-2.0 * m * m * v * v *
                                   (bump.sigma_x * bump.sigma_x + bump.sigma_y * bump.sigma_y));
    out.geo_estimate = typical * typical * smooth * bump.strength * bump.strength;
    out.q_estimate = out.geo_estimate / out.alg_estimate;
    out.g_lrt = wall_formula(m, v, lx);
    return out;
}

double vrh_alpha(double dos, double cutoff) {
    if (!(dos > 0.0) || !(cutoff > 0.0)) throw std::domain_error("vrh: need dos, cutoff > 0");
    return std::log(dos * cutoff);
}

double vrh_x_omega(double q, double alpha, double geometric) {
    check_domain(q, alpha);
    return geometric * std::exp(2.0 * std::sqrt(alpha * -std::log(q)));
}

double vrh_ratio(double q, double alpha) {
    check_domain(q, alpha);
    return q * std::exp(2.0 * std::sqrt(alpha * -std::log(q)));
}

VrhEstimate vrh_estimate(double q, double alpha, double geometric) {
    return {q, alpha, vrh_x_omega(q, alpha, geometric), vrh_ratio(q, alpha)};
}

double vrh_exponential(double q, double alpha, const DriveSpec& drive) {
    check_domain(q, alpha);
    if (drive.shape != DriveShape::exponential) {
        throw std::domain_error("vrh_exponential: drive must have the exponential shape");
    }
    const double l = -std::log(q);
    if (l == 0.0) return 1.0;
    const double range = std::exp(alpha);
    // t = ln s; the exponent is concave in t, so Brent finds the unique peak.
    auto neg_exponent = [&](double t) {
        return -(2.0 * std::sqrt(t * l) - std::expm1(t) / range);
    };
    const double t_hi = alpha + 0.5 * std::log1p(l) + 5.0;
    const auto best =
        boost::math::tools::brent_find_minima(neg_exponent, 0.0, t_hi,
                                              std::numeric_limits<double>::digits / 2);
    return q * std::exp(-best.second);
}

HeatingPrediction predict_heating(double g, const DriveSpec& drive, double temperature) {
    if (!(temperature > 0.0)) throw std::invalid_argument("predict_heating: temperature must be > 0");
    HeatingPrediction out;
    out.g_coefficient = g;
    out.drive = drive;
    out.temperature = temperature;
    out.diffusion = g * drive.rms_velocity * drive.rms_velocity;
    out.heating_rate = out.diffusion / temperature;
    return out;
}

ExperimentReport experiment_estimate(const ExperimentSpec& spec) {
    if (!(spec.mass > 0.0) || !(spec.length_x > 0.0) || !(spec.length_y > 0.0) ||
        !(spec.temperature > 0.0) || !(spec.velocity >= 0.0) || !(spec.rms_velocity >= 0.0)) {
        throw std::invalid_argument("experiment: SI inputs must be positive");
    }
    ExperimentReport out;
    out.thermal_energy = kBoltzmann * spec.temperature;
    out.velocity =
        spec.velocity > 0.0 ? spec.velocity : std::sqrt(out.thermal_energy / spec.mass);
    const double dos = spec.mass * spec.length_x * spec.length_y / (2.0 * kPi * kHbar * kHbar);
    out.mean_spacing = 1.0 / dos;
    out.mean_spacing_hz = out.mean_spacing / kPlanck;
    out.g_lrt = wall_formula(spec.mass, out.velocity, spec.length_x);

    DriveSpec drive;
    drive.cutoff = spec.cutoff_spacings * out.mean_spacing;
    drive.rms_velocity = spec.rms_velocity;
    const auto heating = predict_heating(out.g_lrt, drive, out.thermal_energy);
    out.diffusion = heating.diffusion;
    out.heating_rate = heating.heating_rate;
    out.heating_rate_kelvin = heating.heating_rate / kBoltzmann;

    const double unit_length = 1e-6;
    const double unit_velocity = kHbar / (spec.mass * unit_length);
    out.velocity_internal = out.velocity / unit_velocity;
    out.g_lrt_internal = wall_formula(1.0, out.velocity_internal, spec.length_x / unit_length);
    out.dos_internal =
        spec.length_x * spec.length_y / (unit_length * unit_length) / (2.0 * kPi);
    return out;
}

}  // namespace slrt
