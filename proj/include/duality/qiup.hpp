#pragma once

#include "duality/core_states.hpp"

namespace duality {

/// Pump split, source coherence and idler alignment of an undetected-photon
/// imaging setup. All three imperfections are uniform over the image plane.
struct QiupConfig {
    double p1 = 0.5;                 // pump probability into crystal 1
    double pump_coherence = 1.0;     // gamma = |<m1|m2>|
    double alignment_overlap = 1.0;  // alpha = |<i0|i0'>|
    double fringe_phase = 0.0;

    /// Throws std::invalid_argument on out-of-range fields.
    void validate() const;
};

/// Real amplitude transmittance of one transverse point of the object.
class ObjectPixel {
public:
    /// Throws std::invalid_argument unless T is in [0, 1].
    explicit ObjectPixel(double transmittance);

    double transmittance() const { return t_; }
    /// R = sqrt(1 - T^2).
    double reflectance() const;

private:
    double t_;
};

enum class QiupStage { PumpSplit, PostSpdc, PostObject, PostAlignment };

const char* to_string(QiupStage stage);

/// Probability mass carried by each branch of the chain.
struct BranchProbabilities {
    double arm1_surviving = 0.0;   // |c1 T|^2 (|c1|^2 before the object)
    double arm1_sink = 0.0;        // |c1 R|^2, idler reflected or absorbed
    double arm2_aligned = 0.0;     // |c2|^2 alpha^2
    double arm2_misaligned = 0.0;  // |c2|^2 (1 - alpha^2), idler orthogonal to i0

    double total() const { return arm1_surviving + arm1_sink + arm2_aligned + arm2_misaligned; }
};

/// State of the undetected-photon chain. Observables depend on the branch
/// amplitudes only through p1 and the accumulated overlap kappa = gamma T alpha;
/// the explicit amplitudes are kept for conservation bookkeeping.
class QiupState {
public:
    QiupStage stage() const { return stage_; }
    double p1() const { return p1_; }
    double kappa() const { return kappa_; }
    double fringe_phase() const { return fringe_phase_; }

    /// Branch amplitudes, both real and nonnegative (phases live in fringe_phase).
    double arm1_amplitude() const { return arm1_; }
    double arm2_amplitude() const { return arm2_; }
    double transmittance() const { return transmittance_; }
    double alignment() const { return alignment_; }

    BranchProbabilities branch_probabilities() const;

private:
    friend QiupState pump_split(const QiupConfig& cfg);
    friend QiupState spdc(const QiupState& s);
    friend QiupState object_interaction(const QiupState& s, const ObjectPixel& px);
    friend QiupState align_idlers(const QiupState& s, double alpha);

    QiupStage stage_ = QiupStage::PumpSplit;
    double p1_ = 0.5;
    double arm1_ = 0.0;
    double arm2_ = 0.0;
    double transmittance_ = 1.0;
    double alignment_ = 1.0;
    double kappa_ = 1.0;
    double fringe_phase_ = 0.0;
};

// Each stage throws std::logic_error when applied out of order.
QiupState pump_split(const QiupConfig& cfg);
QiupState spdc(const QiupState& s);
QiupState object_interaction(const QiupState& s, const ObjectPixel& px);
QiupState align_idlers(const QiupState& s, double alpha);

/// pump_split -> spdc -> object_interaction -> align_idlers.
QiupState run_chain(const QiupConfig& cfg, const ObjectPixel& px);

/// (1/2)[1 + 2 sqrt(p1 (1 - p1)) kappa cos(phi + fringe_phase)].
double signal_probability(const QiupState& s, double phi);
double qiup_visibility(const QiupState& s);
double qiup_predictability(const QiupState& s);
/// V^2 / kappa^2 + D^2 - 1, with the kappa -> 0 limit taken analytically.
double ide_residual(const QiupState& s);

/// The same interference seen as a generic two-path state with gamma = kappa.
TwoPathState equivalent_two_path_state(const QiupState& s);

} // namespace duality
