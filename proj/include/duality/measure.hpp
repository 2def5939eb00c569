#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <vector>

#include "duality/qiup.hpp"

namespace duality {

enum class CountMode {
    Poisson,    // counts ~ Poisson(N P)
    Noiseless,  // counts = N P exactly
};

inline constexpr int kDefaultGridSize = 24;
inline constexpr int kMinGridSize = 8;
/// Largest predictability for which the transmittance is still identifiable.
inline constexpr double kPredictabilityEpsilon = 1e-6;

/// Photon counts recorded while sweeping the interferometer phase.
struct FringeScan {
    std::vector<double> phase_grid;  // uniform over [0, 2 pi)
    std::vector<double> expected;    // N P(phi_k)
    std::vector<double> counts;      // integer valued unless noiseless
    std::uint64_t photons_per_point = 0;
    std::uint64_t seed = 0;
    CountMode mode = CountMode::Poisson;
};

std::vector<double> uniform_phase_grid(int size);

/// Deterministic in (prob_fn, grid_size, photons_per_point, seed, mode).
/// Throws std::invalid_argument for grid_size < 8, photons_per_point < 1, or
/// a probability outside [0, 1].
FringeScan simulate_fringe_scan(const std::function<double(double)>& prob_fn, int grid_size,
                                std::uint64_t photons_per_point, std::uint64_t seed,
                                CountMode mode = CountMode::Poisson);

/// CSV with header `phase_rad,expected,count`, values printed with %.17g.
void write_scan_csv(const FringeScan& scan, std::ostream& out);

struct VisibilityEstimate {
    double v_hat = 0.0;         // clamped to [0, 1]
    double fitted_phase = 0.0;  // phi0 of A (1 + V cos(phi - phi0))
    double sigma_v = 0.0;
    double amplitude = 0.0;     // A
};

/// Linear least squares of counts on {1, cos phi, sin phi}; sigma_v from the
/// residual-scaled covariance. Throws DomainError on an all-zero scan.
VisibilityEstimate estimate_visibility(const FringeScan& scan);

/// (max - min) / (max + min) over the grid, sigma_v from Poisson errors on
/// the two extreme counts.
VisibilityEstimate estimate_visibility_minmax(const FringeScan& scan);

struct PredictabilityEstimate {
    double d_hat = 0.0;
    double sigma_d = 0.0;
    double counts_arm1 = 0.0;
    double counts_arm2 = 0.0;
};

/// Two blocked-arm runs: N1 ~ Poisson(photons p_arm1), N2 ~ Poisson(photons p_arm2),
/// d_hat = |N1 - N2| / (N1 + N2). Throws DomainError when N1 + N2 = 0.
PredictabilityEstimate estimate_predictability(double p_arm1, double p_arm2,
                                               std::uint64_t photons, std::uint64_t seed,
                                               CountMode mode = CountMode::Poisson);

/// eta = 1 - min(1, v / sqrt(1 - d^2)). Throws SingularPredictability when
/// d > 1 - kPredictabilityEpsilon.
double ellipticity(double v_hat, double d_hat);

struct DualityEstimate {
    double v_hat = 0.0;
    double sigma_v = 0.0;
    double d_hat = 0.0;
    double sigma_d = 0.0;
    double ellipticity_hat = 0.0;
    double fitted_phase = 0.0;
};

struct MeasurementPlan {
    int grid_size = kDefaultGridSize;
    std::uint64_t photons_per_point = 100000;
    CountMode mode = CountMode::Poisson;
};

/// Fringe scan plus blocked-arm predictability run on a prepared chain.
/// Arms are blocked on the pump side, so the arm probabilities are p1, 1 - p1.
DualityEstimate measure_duality(const QiupState& s, const MeasurementPlan& plan,
                                std::uint64_t seed);

struct Calibration {
    double alpha_gamma_hat = 1.0;
    std::uint64_t photons_used = 0;
    std::uint64_t seed = 0;
};

/// Identity calibration (no correction for alpha gamma).
Calibration uncalibrated();

/// Measures the chain with the object removed (T = 1); alpha gamma is then
/// v / sqrt(1 - d^2), clamped into (0, 1].
Calibration calibrate_no_object(const QiupConfig& cfg, const MeasurementPlan& plan,
                                std::uint64_t seed);

/// T = clamp(v / (alpha gamma sqrt(1 - d^2)), 0, 1).
double extract_transmittance(double v_hat, double d_hat, const Calibration& cal);

} // namespace duality
