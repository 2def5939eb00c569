#include "duality/cli.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"

#include "duality/errors.hpp"
#include "duality/imaging.hpp"
#include "duality/measure.hpp"
#include "duality/mzi.hpp"

namespace duality {

namespace {

std::string fmt17(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

// Usage-level failure detected after CLI11 parsing (exit code 1).
class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Writes to `path`, or to `fallback` when path is "-".
template <typename Fn>
void emit(const std::string& path, std::ostream& fallback, Fn&& fn) {
    if (path == "-") {
        fn(fallback);
        return;
    }
    std::ofstream file(path, std::ios::binary);
    if (!file) throw ParseError("cannot write '" + path + "'");
    fn(file);
    if (!file) throw ParseError("write failed for '" + path + "'");
}

struct ChainFlags {
    double p1 = 0.5;
    double gamma = 1.0;
    double alpha = 1.0;
    double phase = 0.0;

    QiupConfig config() const { return QiupConfig{p1, gamma, alpha, phase}; }
};

struct MeasureFlags {
    int grid = kDefaultGridSize;
    std::uint64_t photons = 100000;
    std::optional<std::uint64_t> seed;
    bool noiseless = false;

    MeasurementPlan plan() const {
        return MeasurementPlan{grid, photons, noiseless ? CountMode::Noiseless : CountMode::Poisson};
    }

    std::uint64_t require_seed(const char* command) const {
        if (seed) return *seed;
        if (noiseless) return 0;
        throw UsageError(std::string(command) + ": --seed is required for stochastic runs");
    }
};

void add_chain_flags(CLI::App* cmd, ChainFlags& f, bool with_alpha) {
    cmd->add_option("--p1", f.p1, "Pump probability into arm/crystal 1")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    cmd->add_option("--gamma", f.gamma, "Degree of coherence between the two paths")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    if (with_alpha) {
        cmd->add_option("--alpha", f.alpha, "Idler alignment overlap")
            ->check(CLI::Range(0.0, 1.0))
            ->capture_default_str();
    }
    cmd->add_option("--phase", f.phase, "Fringe phase offset (rad)")->capture_default_str();
}

void add_measure_flags(CLI::App* cmd, MeasureFlags& f) {
    cmd->add_option("--grid", f.grid, "Phase points per fringe scan")
        ->check(CLI::Range(kMinGridSize, 1 << 20))
        ->capture_default_str();
    cmd->add_option("--photons", f.photons, "Mean photons per phase point")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    cmd->add_option("--seed", f.seed, "Master seed (required unless --noiseless)");
    cmd->add_flag("--noiseless", f.noiseless, "Use expected counts instead of Poisson samples");
}

void write_loci_csv(const std::vector<LocusPoint>& loci, std::ostream& out) {
    out << "eta,gamma,p1,d,v\n";
    for (const auto& p : loci) {
        out << fmt17(p.eta) << ',' << fmt17(1.0 - p.eta) << ',' << fmt17(p.p1) << ','
            << fmt17(p.d) << ',' << fmt17(p.v) << '\n';
    }
}

void write_calibration(const Calibration& cal, const QiupConfig& cfg, const MeasurementPlan& plan,
                       std::ostream& out) {
    out << "alpha_gamma_hat=" << fmt17(cal.alpha_gamma_hat) << '\n';
    out << "ellipticity_hat=" << fmt17(1.0 - cal.alpha_gamma_hat) << '\n';
    out << "p1=" << fmt17(cfg.p1) << '\n';
    out << "mode=" << (plan.mode == CountMode::Noiseless ? "noiseless" : "poisson") << '\n';
    out << "grid_size=" << plan.grid_size << '\n';
    out << "photons_per_point=" << plan.photons_per_point << '\n';
    out << "photons_used=" << cal.photons_used << '\n';
    out << "seed=" << cal.seed << '\n';
}

void write_comparison(const TransmittanceMap& truth, const TransmittanceMap& recon,
                      std::ostream& out) {
    double max_err = 0.0;
    double mean_truth = 0.0;
    double mean_recon = 0.0;
    for (std::size_t i = 0; i < truth.size(); ++i) {
        max_err = std::max(max_err, std::abs(truth.values()[i] - recon.values()[i]));
        mean_truth += truth.values()[i];
        mean_recon += recon.values()[i];
    }
    const auto n = static_cast<double>(truth.size());
    out << "width=" << truth.width() << '\n' << "height=" << truth.height() << '\n';
    out << "rmse=" << fmt17(rmse(truth, recon)) << '\n';
    out << "max_abs_error=" << fmt17(max_err) << '\n';
    out << "mean_truth=" << fmt17(mean_truth / n) << '\n';
    out << "mean_reconstructed=" << fmt17(mean_recon / n) << '\n';
}

} // namespace

std::vector<LocusPoint> ellipse_loci(const std::vector<double>& etas, int samples) {
    if (samples < 2) throw std::invalid_argument("ellipse_loci: need at least 2 samples");
    std::vector<LocusPoint> loci;
    loci.reserve(etas.size() * static_cast<std::size_t>(samples));
    for (double eta : etas) {
        if (!(eta >= 0.0 && eta < 1.0)) {
            throw std::invalid_argument("ellipse_loci: ellipticity must lie in [0, 1), got " +
                                        fmt17(eta));
        }
        for (int k = 0; k < samples; ++k) {
            const double p1 = static_cast<double>(k) / (samples - 1);
            const TwoPathState s = make_two_path_state(p1, 1.0 - eta, 0.0, 0.0);
            loci.push_back({eta, p1, predictability(s), visibility(s)});
        }
    }
    return loci;
}

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Wave-particle duality ellipse simulator and undetected-photon imaging toolkit",
                 "duality"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value configuration file; flags override it");

    // demo-ellipse
    std::vector<double> etas{0.0, 0.2, 0.5};
    int samples = 101;
    std::string loci_out = "-";
    auto* demo = app.add_subcommand("demo-ellipse", "Emit (D, V) duality-ellipse loci as CSV");
    demo->add_option("--eta", etas, "Ellipticities 1 - gamma, each in [0, 1)")
        ->check(CLI::Range(0.0, 1.0))
        ->capture_default_str();
    demo->add_option("--samples", samples, "Points per locus")
        ->check(CLI::Range(2, 1 << 24))
        ->capture_default_str();
    demo->add_option("--out", loci_out, "Output CSV ('-' for stdout)")->capture_default_str();

    // scan
    ChainFlags scan_state;
    MeasureFlags scan_measure;
    std::string scan_out = "-";
    auto* scan = app.add_subcommand("scan", "Simulate a photon-counting fringe scan of a two-path state");
    add_chain_flags(scan, scan_state, false);
    add_measure_flags(scan, scan_measure);
    scan->add_option("--out", scan_out, "Output CSV ('-' for stdout)")->capture_default_str();

    // calibrate
    ChainFlags cal_chain;
    MeasureFlags cal_measure;
    std::string cal_out = "-";
    auto* calibrate = app.add_subcommand("calibrate", "Estimate alpha*gamma with the object removed");
    add_chain_flags(calibrate, cal_chain, true);
    add_measure_flags(calibrate, cal_measure);
    calibrate->add_option("--out", cal_out, "Output key=value file ('-' for stdout)")
        ->capture_default_str();

    // synth
    std::string glyph = "S";
    int width = 64;
    int height = 64;
    double softness = 3.0;
    bool ascii = false;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "Write a synthetic cut-out letter object");
    synth->add_option("--glyph", glyph, "Letter: S, O or I")
        ->check(CLI::IsMember({"S", "O", "I"}))
        ->capture_default_str();
    synth->add_option("--width", width, "Width in pixels")->check(CLI::Range(16, 1 << 14))->capture_default_str();
    synth->add_option("--height", height, "Height in pixels")->check(CLI::Range(16, 1 << 14))->capture_default_str();
    synth->add_option("--softness", softness, "Edge ramp width in pixels")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
    synth->add_flag("--ascii", ascii, "Write PGM as P2 instead of P5");
    synth->add_option("--out", synth_out, "Output .pgm or .csv")->required();

    // reconstruct
    std::string object_path;
    ChainFlags rec_chain;
    MeasureFlags rec_measure;
    bool no_calibrate = false;
    unsigned threads = 0;
    std::string rec_dir;
    auto* recon = app.add_subcommand("reconstruct", "Image an object from simulated (V, D) measurements");
    recon->add_option("--object", object_path, "Object transmittance map (.pgm or .csv)")->required();
    add_chain_flags(recon, rec_chain, true);
    add_measure_flags(recon, rec_measure);
    recon->add_flag("--no-calibrate", no_calibrate, "Skip the no-object alpha*gamma calibration");
    recon->add_option("--threads", threads, "Worker threads (0 = all cores)")->capture_default_str();
    recon->add_option("--out-dir", rec_dir, "Directory for the report and maps")->required();

    // report
    std::string truth_path;
    std::string recon_path;
    std::string report_out = "-";
    auto* report = app.add_subcommand("report", "Compare a reconstructed map against the truth");
    report->add_option("--truth", truth_path, "Ground-truth map")->required();
    report->add_option("--reconstructed", recon_path, "Reconstructed map")->required();
    report->add_option("--out", report_out, "Output key=value file ('-' for stdout)")
        ->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e, out, err);
    } catch (const CLI::ParseError& e) {
        err << "duality: " << e.what() << '\n';
        return exit_code::kUsage;
    }

    try {
        if (*demo) {
            const auto loci = ellipse_loci(etas, samples);
            emit(loci_out, out, [&](std::ostream& o) { write_loci_csv(loci, o); });
        } else if (*scan) {
            const std::uint64_t seed = scan_measure.require_seed("scan");
            const TwoPathState s = make_two_path_state(scan_state.p1, scan_state.gamma, 0.0,
                                                       scan_state.phase);
            const MeasurementPlan plan = scan_measure.plan();
            const FringeScan fs = simulate_fringe_scan(
                [&s](double phi) { return detection_probability(s, phi); }, plan.grid_size,
                plan.photons_per_point, seed, plan.mode);
            emit(scan_out, out, [&](std::ostream& o) { write_scan_csv(fs, o); });
        } else if (*calibrate) {
            const std::uint64_t seed = cal_measure.require_seed("calibrate");
            const QiupConfig cfg = cal_chain.config();
            const MeasurementPlan plan = cal_measure.plan();
            const Calibration cal = calibrate_no_object(cfg, plan, seed);
            emit(cal_out, out, [&](std::ostream& o) { write_calibration(cal, cfg, plan, o); });
            if (cal_out != "-") out << fmt17(cal.alpha_gamma_hat) << '\n';
        } else if (*synth) {
            save_map(synth_letter_object(width, height, glyph.front(), softness), synth_out,
                     ascii ? PgmEncoding::Ascii : PgmEncoding::Binary);
        } else if (*recon) {
            ReconstructOptions opts;
            opts.config = rec_chain.config();
            opts.plan = rec_measure.plan();
            opts.master_seed = rec_measure.require_seed("reconstruct");
            opts.calibrate = !no_calibrate;
            opts.threads = threads;
            const ReconstructionReport rep = reconstruct(load_map(object_path), opts);
            write_report(rep, rec_dir);
            write_report_summary(rep, out);
        } else if (*report) {
            const TransmittanceMap truth = load_map(truth_path);
            const TransmittanceMap recon_map = load_map(recon_path);
            if (truth.width() != recon_map.width() || truth.height() != recon_map.height()) {
                throw ParseError("report: maps have different dimensions");
            }
            emit(report_out, out, [&](std::ostream& o) { write_comparison(truth, recon_map, o); });
        }
    } catch (const UsageError& e) {
        err << "duality: " << e.what() << '\n';
        return exit_code::kUsage;
    } catch (const std::invalid_argument& e) {
        err << "duality: " << e.what() << '\n';
        return exit_code::kUsage;
    } catch (const DomainError& e) {
        err << "duality: " << e.what() << '\n';
        return exit_code::kPhysics;
    } catch (const std::exception& e) {
        err << "duality: " << e.what() << '\n';
        return exit_code::kData;
    }
    return exit_code::kOk;
}

} // namespace duality
