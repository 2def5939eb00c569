#include "duality/qiup.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "duality/mzi.hpp"

namespace duality {

namespace {

void require_unit_interval(double value, const char* name) {
    if (!(value >= 0.0 && value <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1], got " +
                                    std::to_string(value));
    }
}

void require_stage(const QiupState& s, QiupStage expected, const char* op) {
    if (s.stage() != expected) {
        throw std::logic_error(std::string(op) + ": expected stage " + to_string(expected) +
                               ", got " + to_string(s.stage()));
    }
}

double pair_amplitude(double p1) { return 2.0 * std::sqrt(p1 * (1.0 - p1)); }

} // namespace

void QiupConfig::validate() const {
    require_unit_interval(p1, "p1");
    require_unit_interval(pump_coherence, "pump coherence gamma");
    require_unit_interval(alignment_overlap, "alignment overlap alpha");
    if (!std::isfinite(fringe_phase)) {
        throw std::invalid_argument("fringe phase must be finite");
    }
}

ObjectPixel::ObjectPixel(double transmittance) : t_(transmittance) {
    require_unit_interval(transmittance, "transmittance T");
}

double ObjectPixel::reflectance() const { return std::sqrt(std::max(0.0, 1.0 - t_ * t_)); }

const char* to_string(QiupStage stage) {
    switch (stage) {
    case QiupStage::PumpSplit:
        return "PumpSplit";
    case QiupStage::PostSpdc:
        return "PostSpdc";
    case QiupStage::PostObject:
        return "PostObject";
    case QiupStage::PostAlignment:
        return "PostAlignment";
    }
    return "?";
}

BranchProbabilities QiupState::branch_probabilities() const {
    const double a1 = arm1_ * arm1_;
    const double a2 = arm2_ * arm2_;
    const double t2 = transmittance_ * transmittance_;
    const double al2 = alignment_ * alignment_;
    BranchProbabilities b;
    b.arm1_surviving = a1 * t2;
    b.arm1_sink = a1 * (1.0 - t2);
    b.arm2_aligned = a2 * al2;
    b.arm2_misaligned = a2 * (1.0 - al2);
    return b;
}

QiupState pump_split(const QiupConfig& cfg) {
    cfg.validate();
    QiupState s;
    s.stage_ = QiupStage::PumpSplit;
    s.p1_ = cfg.p1;
    s.arm1_ = std::sqrt(cfg.p1);
    s.arm2_ = std::sqrt(1.0 - cfg.p1);
    s.kappa_ = cfg.pump_coherence;
    s.fringe_phase_ = cfg.fringe_phase;
    return s;
}

QiupState spdc(const QiupState& s) {
    require_stage(s, QiupStage::PumpSplit, "spdc");
    // |1> -> |s1>|i1>, |2> -> |s2>|i2>: a relabeling of the single-pair term.
    QiupState out = s;
    out.stage_ = QiupStage::PostSpdc;
    return out;
}

QiupState object_interaction(const QiupState& s, const ObjectPixel& px) {
    require_stage(s, QiupStage::PostSpdc, "object_interaction");
    QiupState out = s;
    out.stage_ = QiupStage::PostObject;
    out.transmittance_ = px.transmittance();
    out.kappa_ = s.kappa_ * px.transmittance();
    return out;
}

QiupState align_idlers(const QiupState& s, double alpha) {
    require_stage(s, QiupStage::PostObject, "align_idlers");
    require_unit_interval(alpha, "alignment overlap alpha");
    QiupState out = s;
    out.stage_ = QiupStage::PostAlignment;
    out.alignment_ = alpha;
    out.kappa_ = s.kappa_ * alpha;
    return out;
}

QiupState run_chain(const QiupConfig& cfg, const ObjectPixel& px) {
    return align_idlers(object_interaction(spdc(pump_split(cfg)), px), cfg.alignment_overlap);
}

double signal_probability(const QiupState& s, double phi) {
    require_stage(s, QiupStage::PostAlignment, "signal_probability");
    const double p =
        0.5 * (1.0 + pair_amplitude(s.p1()) * s.kappa() * std::cos(phi + s.fringe_phase()));
    return std::clamp(p, 0.0, 1.0);
}

double qiup_visibility(const QiupState& s) {
    require_stage(s, QiupStage::PostAlignment, "qiup_visibility");
    return pair_amplitude(s.p1()) * s.kappa();
}

double qiup_predictability(const QiupState& s) {
    require_stage(s, QiupStage::PostAlignment, "qiup_predictability");
    return std::abs(2.0 * s.p1() - 1.0);
}

double ide_residual(const QiupState& s) {
    const double d = qiup_predictability(s);
    const double scaled_v = s.kappa() < kCoherenceEpsilon ? pair_amplitude(s.p1())
                                                          : qiup_visibility(s) / s.kappa();
    return scaled_v * scaled_v + d * d - 1.0;
}

TwoPathState equivalent_two_path_state(const QiupState& s) {
    require_stage(s, QiupStage::PostAlignment, "equivalent_two_path_state");
    return make_two_path_state(s.p1(), s.kappa(), 0.0, s.fringe_phase());
}

} // namespace duality
