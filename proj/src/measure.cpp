#include "duality/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

#include "duality/errors.hpp"
#include "duality/rng.hpp"

namespace duality {

namespace {

// Sub-stream tags for seeds derived inside one measurement.
constexpr std::uint64_t kScanStream = 1;
constexpr std::uint64_t kBlockedArmStream = 2;

// Smallest alpha*gamma a calibration may report.
constexpr double kMinAlphaGamma = 1e-9;

double sample_count(Engine& engine, double mean, CountMode mode) {
    if (mode == CountMode::Noiseless) return mean;
    if (!(mean > 0.0)) return 0.0;
    std::poisson_distribution<long long> poisson(mean);
    return static_cast<double>(poisson(engine));
}

double wrap_phase(double phi) {
    constexpr double two_pi = 2.0 * std::numbers::pi;
    phi = std::fmod(phi, two_pi);
    return phi < 0.0 ? phi + two_pi : phi;
}

void require_non_singular(double d_hat) {
    if (d_hat > 1.0 - kPredictabilityEpsilon) throw SingularPredictability(d_hat);
}

} // namespace

SingularPredictability::SingularPredictability(double d_hat)
    : DomainError("singular predictability D = " + std::to_string(d_hat) +
                  ": one arm is empty, V = 0 for every T and the transmittance is "
                  "unidentifiable"),
      d_hat_(d_hat) {}

std::vector<double> uniform_phase_grid(int size) {
    std::vector<double> grid(static_cast<std::size_t>(std::max(size, 0)));
    for (int k = 0; k < size; ++k) {
        grid[static_cast<std::size_t>(k)] = 2.0 * std::numbers::pi * k / size;
    }
    return grid;
}

FringeScan simulate_fringe_scan(const std::function<double(double)>& prob_fn, int grid_size,
                                std::uint64_t photons_per_point, std::uint64_t seed,
                                CountMode mode) {
    if (grid_size < kMinGridSize) {
        throw std::invalid_argument("simulate_fringe_scan: grid needs at least " +
                                    std::to_string(kMinGridSize) + " points, got " +
                                    std::to_string(grid_size));
    }
    if (photons_per_point < 1) {
        throw std::invalid_argument("simulate_fringe_scan: photons_per_point must be >= 1");
    }

    FringeScan scan;
    scan.phase_grid = uniform_phase_grid(grid_size);
    scan.photons_per_point = photons_per_point;
    scan.seed = seed;
    scan.mode = mode;
    scan.expected.reserve(scan.phase_grid.size());
    scan.counts.reserve(scan.phase_grid.size());

    Engine engine = make_engine(seed);
    const auto n = static_cast<double>(photons_per_point);
    for (double phi : scan.phase_grid) {
        const double p = prob_fn(phi);
        if (!(p >= 0.0 && p <= 1.0)) {
            throw std::invalid_argument("simulate_fringe_scan: probability " + std::to_string(p) +
                                        " outside [0, 1]");
        }
        scan.expected.push_back(n * p);
        scan.counts.push_back(sample_count(engine, n * p, mode));
    }
    return scan;
}

void write_scan_csv(const FringeScan& scan, std::ostream& out) {
    out << "phase_rad,expected,count\n";
    char line[128];
    for (std::size_t k = 0; k < scan.phase_grid.size(); ++k) {
        std::snprintf(line, sizeof line, "%.17g,%.17g,%.17g\n", scan.phase_grid[k],
                      scan.expected[k], scan.counts[k]);
        out << line;
    }
}

VisibilityEstimate estimate_visibility(const FringeScan& scan) {
    const auto n = static_cast<Eigen::Index>(scan.counts.size());
    if (n < 3 || scan.phase_grid.size() != scan.counts.size()) {
        throw std::invalid_argument("estimate_visibility: malformed scan");
    }
    if (std::all_of(scan.counts.begin(), scan.counts.end(), [](double c) { return c == 0.0; })) {
        throw DomainError("estimate_visibility: no photons recorded");
    }

    Eigen::MatrixXd design(n, 3);
    Eigen::VectorXd y(n);
    for (Eigen::Index k = 0; k < n; ++k) {
        const double phi = scan.phase_grid[static_cast<std::size_t>(k)];
        design(k, 0) = 1.0;
        design(k, 1) = std::cos(phi);
        design(k, 2) = std::sin(phi);
        y(k) = scan.counts[static_cast<std::size_t>(k)];
    }
    const Eigen::Matrix3d normal = design.transpose() * design;
    const Eigen::Matrix3d normal_inv = normal.inverse();
    const Eigen::Vector3d beta = normal_inv * (design.transpose() * y);

    const double a0 = beta(0);
    const double a1 = beta(1);
    const double a2 = beta(2);
    if (!(a0 > 0.0)) throw DomainError("estimate_visibility: non-positive mean count");
    const double r = std::hypot(a1, a2);

    const double rss = (y - design * beta).squaredNorm();
    const double dof = static_cast<double>(n - 3);
    const Eigen::Matrix3d cov = (dof > 0.0 ? rss / dof : 0.0) * normal_inv;

    double var_v = 0.0;
    if (r > 0.0) {
        const Eigen::Vector3d grad(-r / (a0 * a0), a1 / (r * a0), a2 / (r * a0));
        var_v = grad.dot(cov * grad);
    } else {
        var_v = std::max(cov(1, 1), cov(2, 2)) / (a0 * a0);
    }

    VisibilityEstimate est;
    est.v_hat = std::clamp(r / a0, 0.0, 1.0);
    est.fitted_phase = wrap_phase(std::atan2(a2, a1));
    est.sigma_v = std::sqrt(std::max(var_v, 0.0));
    est.amplitude = a0;
    return est;
}

VisibilityEstimate estimate_visibility_minmax(const FringeScan& scan) {
    if (scan.counts.empty()) throw std::invalid_argument("estimate_visibility_minmax: empty scan");
    const auto [lo, hi] = std::minmax_element(scan.counts.begin(), scan.counts.end());
    const double cmin = *lo;
    const double cmax = *hi;
    const double sum = cmin + cmax;
    if (!(sum > 0.0)) throw DomainError("estimate_visibility_minmax: no photons recorded");

    VisibilityEstimate est;
    est.v_hat = std::clamp((cmax - cmin) / sum, 0.0, 1.0);
    est.fitted_phase = scan.phase_grid[static_cast<std::size_t>(hi - scan.counts.begin())];
    est.amplitude = 0.5 * sum;
    if (scan.mode == CountMode::Poisson) {
        // dV/dmax = 2 min / sum^2, dV/dmin = -2 max / sum^2, Var = count.
        est.sigma_v = 2.0 * std::sqrt(cmin * cmin * cmax + cmax * cmax * cmin) / (sum * sum);
    }
    return est;
}

PredictabilityEstimate estimate_predictability(double p_arm1, double p_arm2,
                                               std::uint64_t photons, std::uint64_t seed,
                                               CountMode mode) {
    if (!(p_arm1 >= 0.0 && p_arm2 >= 0.0) || !(p_arm1 + p_arm2 > 0.0) ||
        p_arm1 + p_arm2 > 1.0 + 1e-12) {
        throw std::invalid_argument("estimate_predictability: arm probabilities must be "
                                    "nonnegative with a sum in (0, 1]");
    }
    if (photons < 1) throw std::invalid_argument("estimate_predictability: photons must be >= 1");

    Engine engine = make_engine(seed);
    const auto n = static_cast<double>(photons);
    PredictabilityEstimate est;
    est.counts_arm1 = sample_count(engine, n * p_arm1, mode);
    est.counts_arm2 = sample_count(engine, n * p_arm2, mode);
    const double total = est.counts_arm1 + est.counts_arm2;
    if (!(total > 0.0)) throw DomainError("estimate_predictability: no photons in either arm");

    est.d_hat = std::clamp(std::abs(est.counts_arm1 - est.counts_arm2) / total, 0.0, 1.0);
    if (mode == CountMode::Poisson) {
        est.sigma_d = 2.0 * std::sqrt(est.counts_arm1 * est.counts_arm2 / (total * total * total));
    }
    return est;
}

double ellipticity(double v_hat, double d_hat) {
    require_non_singular(d_hat);
    const double semi_minor = v_hat / std::sqrt(1.0 - d_hat * d_hat);
    return std::clamp(1.0 - std::min(1.0, semi_minor), 0.0, 1.0);
}

DualityEstimate measure_duality(const QiupState& s, const MeasurementPlan& plan,
                                std::uint64_t seed) {
    const FringeScan scan =
        simulate_fringe_scan([&s](double phi) { return signal_probability(s, phi); },
                             plan.grid_size, plan.photons_per_point,
                             derive_seed(seed, kScanStream), plan.mode);
    const VisibilityEstimate v = estimate_visibility(scan);
    const PredictabilityEstimate d =
        estimate_predictability(s.p1(), 1.0 - s.p1(), plan.photons_per_point,
                                derive_seed(seed, kBlockedArmStream), plan.mode);

    DualityEstimate est;
    est.v_hat = v.v_hat;
    est.sigma_v = v.sigma_v;
    est.fitted_phase = v.fitted_phase;
    est.d_hat = d.d_hat;
    est.sigma_d = d.sigma_d;
    est.ellipticity_hat = ellipticity(v.v_hat, d.d_hat);
    return est;
}

Calibration uncalibrated() { return Calibration{}; }

Calibration calibrate_no_object(const QiupConfig& cfg, const MeasurementPlan& plan,
                                std::uint64_t seed) {
    const QiupState chain = run_chain(cfg, ObjectPixel(1.0));
    const DualityEstimate est = measure_duality(chain, plan, seed);

    Calibration cal;
    cal.alpha_gamma_hat =
        std::clamp(est.v_hat / std::sqrt(1.0 - est.d_hat * est.d_hat), kMinAlphaGamma, 1.0);
    cal.photons_used = plan.photons_per_point * static_cast<std::uint64_t>(plan.grid_size + 2);
    cal.seed = seed;
    return cal;
}

double extract_transmittance(double v_hat, double d_hat, const Calibration& cal) {
    require_non_singular(d_hat);
    if (!(cal.alpha_gamma_hat > 0.0)) {
        throw std::invalid_argument("extract_transmittance: calibration must be positive");
    }
    const double t = v_hat / (cal.alpha_gamma_hat * std::sqrt(1.0 - d_hat * d_hat));
    return std::clamp(t, 0.0, 1.0);
}

} // namespace duality
