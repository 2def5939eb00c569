#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "duality/measure.hpp"
#include "duality/qiup.hpp"

namespace duality {

/// Row-major W x H grid of amplitude transmittances in [0, 1].
class TransmittanceMap {
public:
    /// Throws std::invalid_argument for zero dimensions, a size mismatch, or
    /// a value outside [0, 1].
    TransmittanceMap(int width, int height, std::vector<double> values);
    TransmittanceMap(int width, int height, double fill);

    int width() const { return width_; }
    int height() const { return height_; }
    std::size_t size() const { return values_.size(); }

    double at(int x, int y) const { return values_[index(x, y)]; }
    void set(int x, int y, double t);
    const std::vector<double>& values() const { return values_; }

    std::size_t index(int x, int y) const {
        return static_cast<std::size_t>(y) * static_cast<std::size_t>(width_) +
               static_cast<std::size_t>(x);
    }

    bool operator==(const TransmittanceMap&) const = default;

private:
    int width_;
    int height_;
    std::vector<double> values_;
};

enum class PgmEncoding { Ascii /* P2 */, Binary /* P5 */ };

/// PGM P2/P5 with maxval <= 255 (T = pixel / maxval). Throws ParseError.
TransmittanceMap read_pgm(std::istream& in);
/// Writes maxval 255, T quantized to round(255 T).
void write_pgm(const TransmittanceMap& map, std::ostream& out, PgmEncoding enc);

/// Headerless comma-separated rows of decimals, one line per image row.
TransmittanceMap read_csv_map(std::istream& in);
void write_csv_map(const TransmittanceMap& map, std::ostream& out);

/// Dispatches on extension: .pgm (P5 when saving) or .csv. Throws ParseError.
TransmittanceMap load_map(const std::filesystem::path& path);
void save_map(const TransmittanceMap& map, const std::filesystem::path& path,
              PgmEncoding enc = PgmEncoding::Binary);

/// Synthetic cut-out object: opaque background (T = 0) with glyph strokes
/// whose transmittance ramps linearly from 0 on the stroke boundary up to 1
/// once `edge_softness` pixels inside it.
///
/// Supported glyphs: 'S', 'O', 'I'. Throws std::invalid_argument for an
/// unknown glyph, dimensions below 16 or edge_softness <= 0.
TransmittanceMap synth_letter_object(int width, int height, char glyph, double edge_softness);

double rmse(const TransmittanceMap& a, const TransmittanceMap& b);

struct ReconstructOptions {
    QiupConfig config;
    MeasurementPlan plan;
    std::uint64_t master_seed = 0;
    bool calibrate = true;
    /// 0 picks std::thread::hardware_concurrency().
    unsigned threads = 0;
};

struct ReconstructionReport {
    TransmittanceMap reconstructed;
    std::vector<double> v_hat;
    std::vector<double> d_hat;
    std::vector<double> ellipticity;
    double rmse = 0.0;
    std::uint64_t photons_per_point = 0;
    int grid_size = 0;
    std::uint64_t master_seed = 0;
    CountMode mode = CountMode::Poisson;
    QiupConfig config;
    Calibration calibration;
};

/// Simulates an undetected-photon measurement of every pixel of `truth` and
/// inverts the measured (V, D) back into transmittance. One no-object
/// calibration is shared by the whole image; pixel (x, y) draws from
/// derive_seed(master_seed, x, y), so the report is independent of `threads`.
///
/// Throws SingularPredictability when the pump split leaves one arm empty.
ReconstructionReport reconstruct(const TransmittanceMap& truth, const ReconstructOptions& opts);

/// Writes summary.txt (key=value) plus reconstructed.{pgm,csv},
/// visibility.csv, predictability.csv and ellipticity.csv into `dir`.
void write_report(const ReconstructionReport& report, const std::filesystem::path& dir);
void write_report_summary(const ReconstructionReport& report, std::ostream& out);

} // namespace duality
