#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <ostream>
#include <thread>

#include "duality/errors.hpp"
#include "duality/imaging.hpp"
#include "duality/rng.hpp"

namespace duality {

namespace {

// Calibration stream sits outside any realistic (x, y) pixel key.
constexpr std::uint64_t kCalibrationKey = ~std::uint64_t{0};

struct PixelResult {
    double t_hat;
    double v_hat;
    double d_hat;
    double ellipticity;
};

PixelResult measure_pixel(double t, int x, int y, const ReconstructOptions& opts,
                          const Calibration& cal) {
    const QiupState chain = run_chain(opts.config, ObjectPixel(t));
    const DualityEstimate est =
        measure_duality(chain, opts.plan,
                        derive_seed(opts.master_seed, static_cast<std::uint64_t>(x),
                                    static_cast<std::uint64_t>(y)));
    return {extract_transmittance(est.v_hat, est.d_hat, cal), est.v_hat, est.d_hat,
            est.ellipticity_hat};
}

const char* mode_name(CountMode mode) {
    return mode == CountMode::Noiseless ? "noiseless" : "poisson";
}

void put(std::ostream& out, const char* key, double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", value);
    out << key << '=' << buf << '\n';
}

void write_grid_csv(const std::vector<double>& values, int width, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out) throw ParseError("cannot write '" + path.string() + "'");
    char buf[32];
    for (std::size_t i = 0; i < values.size(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", values[i]);
        out << buf << ((i + 1) % static_cast<std::size_t>(width) == 0 ? '\n' : ',');
    }
}

} // namespace

ReconstructionReport reconstruct(const TransmittanceMap& truth, const ReconstructOptions& opts) {
    opts.config.validate();
    const double d_expected = std::abs(2.0 * opts.config.p1 - 1.0);
    if (d_expected > 1.0 - kPredictabilityEpsilon) throw SingularPredictability(d_expected);

    const Calibration cal =
        opts.calibrate
            ? calibrate_no_object(opts.config, opts.plan,
                                  derive_seed(opts.master_seed, kCalibrationKey, kCalibrationKey))
            : uncalibrated();

    const std::size_t n = truth.size();
    std::vector<PixelResult> results(n);
    const int width = truth.width();

    unsigned threads = opts.threads == 0 ? std::thread::hardware_concurrency() : opts.threads;
    threads = std::clamp<unsigned>(threads, 1u, static_cast<unsigned>(truth.height()));

    std::atomic<int> next_row{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto worker = [&] {
        try {
            for (int y = next_row++; y < truth.height(); y = next_row++) {
                for (int x = 0; x < width; ++x) {
                    results[truth.index(x, y)] = measure_pixel(truth.at(x, y), x, y, opts, cal);
                }
            }
        } catch (...) {
            std::lock_guard lock(failure_mutex);
            if (!failure) failure = std::current_exception();
            next_row = truth.height();
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        pool.reserve(threads);
        for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    }
    if (failure) std::rethrow_exception(failure);

    std::vector<double> t_hat(n);
    std::vector<double> v_hat(n);
    std::vector<double> d_hat(n);
    std::vector<double> eta_hat(n);
    for (std::size_t i = 0; i < n; ++i) {
        t_hat[i] = results[i].t_hat;
        v_hat[i] = results[i].v_hat;
        d_hat[i] = results[i].d_hat;
        eta_hat[i] = results[i].ellipticity;
    }
    TransmittanceMap reconstructed(truth.width(), truth.height(), std::move(t_hat));
    const double error = rmse(truth, reconstructed);
    return ReconstructionReport{.reconstructed = std::move(reconstructed),
                                .v_hat = std::move(v_hat),
                                .d_hat = std::move(d_hat),
                                .ellipticity = std::move(eta_hat),
                                .rmse = error,
                                .photons_per_point = opts.plan.photons_per_point,
                                .grid_size = opts.plan.grid_size,
                                .master_seed = opts.master_seed,
                                .mode = opts.plan.mode,
                                .config = opts.config,
                                .calibration = cal};
}

void write_report_summary(const ReconstructionReport& report, std::ostream& out) {
    const auto& m = report.reconstructed;
    out << "width=" << m.width() << '\n' << "height=" << m.height() << '\n';
    out << "mode=" << mode_name(report.mode) << '\n';
    out << "grid_size=" << report.grid_size << '\n';
    out << "photons_per_point=" << report.photons_per_point << '\n';
    out << "master_seed=" << report.master_seed << '\n';
    put(out, "p1", report.config.p1);
    put(out, "pump_coherence", report.config.pump_coherence);
    put(out, "alignment_overlap", report.config.alignment_overlap);
    put(out, "fringe_phase", report.config.fringe_phase);
    put(out, "alpha_gamma_hat", report.calibration.alpha_gamma_hat);
    out << "calibration_photons=" << report.calibration.photons_used << '\n';
    out << "calibration_seed=" << report.calibration.seed << '\n';
    put(out, "rmse", report.rmse);
}

void write_report(const ReconstructionReport& report, const std::filesystem::path& dir) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw ParseError("cannot create '" + dir.string() + "': " + ec.message());

    {
        std::ofstream summary(dir / "summary.txt");
        if (!summary) throw ParseError("cannot write '" + (dir / "summary.txt").string() + "'");
        write_report_summary(report, summary);
    }
    save_map(report.reconstructed, dir / "reconstructed.pgm");
    save_map(report.reconstructed, dir / "reconstructed.csv");
    const int w = report.reconstructed.width();
    write_grid_csv(report.v_hat, w, dir / "visibility.csv");
    write_grid_csv(report.d_hat, w, dir / "predictability.csv");
    write_grid_csv(report.ellipticity, w, dir / "ellipticity.csv");
}

} // namespace duality
